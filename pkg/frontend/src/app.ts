// Dashboard controller: wires the API client, view state and render
// functions to the DOM. Views render service payloads verbatim; the client
// re-renders but never re-ranks, and the footer always shows which snapshot
// produced the numbers on screen.

import { ApiClient, ParameterDraft, RecommendationsPayload, ServiceError, SnapshotInfo } from "./api.js";
import { initialState, validateDraft, ViewState } from "./state.js";
import { callView, distributionPanel, footer, overlapGrid, researcherView, summaryTable } from "./views.js";

const POLL_INTERVAL_MS = 500;

export class Dashboard {
  readonly state: ViewState = initialState();
  private lastRecommendations: RecommendationsPayload | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly root: {
      main: HTMLElement;
      status: HTMLElement;
      footer: HTMLElement;
    },
  ) {}

  async start(): Promise<void> {
    const snap = await this.api.snapshot();
    this.adoptSnapshot(snap);
    const calls = await this.api.calls();
    if (calls.calls.length > 0 && calls.calls[0]) {
      await this.showCall(calls.calls[0].call_id);
    }
  }

  private adoptSnapshot(snap: SnapshotInfo): void {
    this.state.snapshotId = snap.snapshot_id;
    this.root.footer.innerHTML = footer(snap.snapshot_id, snap.config_digest, snap.corpus_digest);
  }

  async showCall(callId: string): Promise<void> {
    this.state.selectedCall = callId;
    this.state.selectedResearcher = null;
    const payload = await this.api.candidates(
      callId,
      this.state.selectedIndicator,
      this.state.minPercentile,
    );
    this.root.main.innerHTML = callView(payload);
  }

  async showResearcher(researcherId: string): Promise<void> {
    this.state.selectedResearcher = researcherId;
    this.state.selectedCall = null;
    this.lastRecommendations = await this.api.recommendations(researcherId);
    this.root.main.innerHTML = researcherView(this.lastRecommendations);
  }

  // The recommendations payload carries all indicator panels, so toggling
  // the active indicator is a pure re-render with no further requests.
  toggleIndicator(indicator: string): void {
    this.state.selectedIndicator = indicator;
    if (this.state.selectedResearcher && this.lastRecommendations) {
      const only = {
        ...this.lastRecommendations,
        indicators: this.lastRecommendations.indicators.filter((b) => b.indicator === indicator),
      };
      this.root.main.innerHTML = researcherView(only);
    }
  }

  async setMinPercentile(value: number): Promise<void> {
    this.state.minPercentile = value;
    if (this.state.selectedCall) {
      await this.showCall(this.state.selectedCall);
    }
  }

  async showAnalytics(): Promise<void> {
    const [summary, overlap, indicators] = await Promise.all([
      this.api.analyticsSummary(),
      this.api.analyticsOverlap(),
      this.api.indicators(),
    ]);
    const names = indicators.indicators.map((i) => i.name);
    const distributions = await Promise.all(names.map((n) => this.api.analyticsDistribution(n)));
    this.root.main.innerHTML =
      summaryTable(summary.summary, summary.snapshot_id) +
      overlapGrid(overlap.overlap, names, overlap.snapshot_id) +
      distributions.map((d) => distributionPanel(d.distribution, d.snapshot_id)).join("");
  }

  /** Validate the draft client-side, recompute, poll the snapshot, swap views. */
  async whatIfRecompute(draft: ParameterDraft): Promise<{ before: number; after: number } | null> {
    const problems = validateDraft(draft);
    if (problems.length > 0) {
      this.root.status.textContent = `invalid parameters: ${problems.join("; ")}`;
      return null; // no request leaves the browser
    }
    const beforeSummary = await this.api.analyticsSummary();
    const beforeCombined = beforeSummary.summary[beforeSummary.summary.length - 1];
    this.state.recomputePending = true;
    this.root.status.textContent = "recomputing...";
    try {
      const target = await this.api.recompute(draft);
      await this.pollUntilPublished(target.snapshot_id);
      this.adoptSnapshot(target);
    } catch (error) {
      if (error instanceof ServiceError && error.status === 409) {
        this.root.status.textContent = "recompute in progress, try again shortly";
        return null;
      }
      throw error;
    } finally {
      this.state.recomputePending = false;
    }
    await this.refreshActiveView();
    const afterSummary = await this.api.analyticsSummary();
    const afterCombined = afterSummary.summary[afterSummary.summary.length - 1];
    const before = beforeCombined ? beforeCombined.researchers_assigned : 0;
    const after = afterCombined ? afterCombined.researchers_assigned : 0;
    this.root.status.textContent = `done: assigned researchers ${before} -> ${after}`;
    return { before, after };
  }

  private async pollUntilPublished(snapshotId: string): Promise<void> {
    for (let attempt = 0; attempt < 60; attempt++) {
      const snap = await this.api.snapshot();
      if (snap.snapshot_id === snapshotId) return;
      await new Promise((resolve) => setTimeout(resolve, POLL_INTERVAL_MS));
    }
    throw new Error(`snapshot ${snapshotId} never became current`);
  }

  private async refreshActiveView(): Promise<void> {
    if (this.state.selectedCall) {
      await this.showCall(this.state.selectedCall);
    } else if (this.state.selectedResearcher) {
      await this.showResearcher(this.state.selectedResearcher);
    }
  }
}

export function mount(baseUrl: string, doc: Document): Dashboard {
  const main = doc.getElementById("main");
  const status = doc.getElementById("status");
  const footerEl = doc.getElementById("footer");
  if (!main || !status || !footerEl) {
    throw new Error("dashboard container elements missing");
  }
  const dashboard = new Dashboard(new ApiClient(baseUrl), { main, status, footer: footerEl });
  void dashboard.start();
  return dashboard;
}
