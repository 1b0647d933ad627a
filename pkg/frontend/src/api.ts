// Typed client for the matching service. Every payload carries the
// snapshot_id it was served from, so views can prove their numbers are
// traceable to one consistent snapshot.

export interface SnapshotInfo {
  snapshot_id: string;
  config_digest: string;
  corpus_digest: string;
  created_at: string;
}

export interface IndicatorSpec {
  name: string;
  author_filter: "all" | "leading";
  window_years: number;
  min_pubs: number;
}

export interface CallListing {
  call_id: string;
  title: string;
}

export interface Candidate {
  researcher_id: string;
  rank: number;
  percentile: number;
  z: number;
}

export interface CandidatesPayload {
  snapshot_id: string;
  call_id: string;
  indicator: string;
  min_percentile: number;
  candidates: Candidate[];
}

export interface RecommendationItem {
  call_id: string;
  rank: number;
  percentile: number;
}

export interface RecommendationsPayload {
  snapshot_id: string;
  researcher_id: string;
  indicators: { indicator: string; items: RecommendationItem[] }[];
}

export interface SummaryRow {
  indicator_name: string;
  researchers_assigned: number;
  unique_researchers: number | null;
  avg_calls_per_researcher: number;
  avg_researchers_per_call: number;
}

export interface OverlapCell {
  row_indicator: string;
  col_indicator: string;
  overlap_pct: number;
  spearman_rho: number | null;
}

export interface DistributionPayload {
  indicator_name: string;
  median: number | null;
  q1: number | null;
  q3: number | null;
  histogram: [number, number][];
}

// The subset of the pipeline configuration /recompute accepts.
export interface ParameterDraft {
  percentile_cutoff?: number;
  top_fraction_denominator?: number;
  normalization_scope?: string;
  population_min_pubs?: number;
  reference_year?: number;
  indicators?: IndicatorSpec[];
}

export class ServiceError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

async function asJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = (await response.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      // keep statusText
    }
    throw new ServiceError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private get(path: string): Promise<Response> {
    return this.fetchFn(`${this.baseUrl}${path}`);
  }

  health(): Promise<{ status: string }> {
    return this.get("/health").then((r) => asJson(r));
  }

  snapshot(): Promise<SnapshotInfo> {
    return this.get("/snapshot").then((r) => asJson(r));
  }

  indicators(): Promise<{ snapshot_id: string; indicators: IndicatorSpec[] }> {
    return this.get("/indicators").then((r) => asJson(r));
  }

  calls(): Promise<{ snapshot_id: string; calls: CallListing[] }> {
    return this.get("/calls").then((r) => asJson(r));
  }

  candidates(callId: string, indicator: string, minPercentile: number): Promise<CandidatesPayload> {
    const query = new URLSearchParams({
      indicator,
      min_percentile: String(minPercentile),
    });
    return this.get(`/calls/${encodeURIComponent(callId)}/candidates?${query}`).then((r) => asJson(r));
  }

  recommendations(researcherId: string): Promise<RecommendationsPayload> {
    return this.get(`/researchers/${encodeURIComponent(researcherId)}/recommendations`).then((r) =>
      asJson(r),
    );
  }

  analyticsSummary(): Promise<{ snapshot_id: string; summary: SummaryRow[] }> {
    return this.get("/analytics/summary").then((r) => asJson(r));
  }

  analyticsOverlap(): Promise<{ snapshot_id: string; overlap: OverlapCell[] }> {
    return this.get("/analytics/overlap").then((r) => asJson(r));
  }

  analyticsDistribution(indicator: string): Promise<{ snapshot_id: string; distribution: DistributionPayload }> {
    const query = new URLSearchParams({ indicator });
    return this.get(`/analytics/distribution?${query}`).then((r) => asJson(r));
  }

  recompute(draft: ParameterDraft): Promise<SnapshotInfo> {
    return this.fetchFn(`${this.baseUrl}/recompute`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(draft),
    }).then((r) => asJson(r));
  }
}
