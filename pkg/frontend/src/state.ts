// View state and client-side draft validation. The bounds mirror the
// service's configuration contract so an invalid draft never leaves the
// browser.

import type { IndicatorSpec, ParameterDraft } from "./api.js";

export const NORMALIZATION_SCOPES = [
  "per_indicator_across_calls",
  "across_indicators",
  "pre_aggregation",
] as const;

export interface ViewState {
  snapshotId: string | null;
  selectedCall: string | null;
  selectedResearcher: string | null;
  selectedIndicator: string;
  minPercentile: number;
  draft: ParameterDraft;
  recomputePending: boolean;
}

export function initialState(): ViewState {
  return {
    snapshotId: null,
    selectedCall: null,
    selectedResearcher: null,
    selectedIndicator: "Research background",
    minPercentile: 95,
    draft: {},
    recomputePending: false,
  };
}

export function validateDraft(draft: ParameterDraft): string[] {
  const problems: string[] = [];
  if (draft.percentile_cutoff !== undefined) {
    const c = draft.percentile_cutoff;
    if (!Number.isFinite(c) || c <= 0 || c > 100) {
      problems.push(`percentile_cutoff must be in (0, 100], got ${c}`);
    }
  }
  if (draft.top_fraction_denominator !== undefined) {
    const d = draft.top_fraction_denominator;
    if (!Number.isInteger(d) || d < 2) {
      problems.push(`top_fraction_denominator must be an integer >= 2, got ${d}`);
    }
  }
  if (draft.normalization_scope !== undefined) {
    if (!NORMALIZATION_SCOPES.includes(draft.normalization_scope as never)) {
      problems.push(`unknown normalization_scope ${draft.normalization_scope}`);
    }
  }
  if (draft.population_min_pubs !== undefined) {
    const m = draft.population_min_pubs;
    if (!Number.isInteger(m) || m < 0) {
      problems.push(`population_min_pubs must be an integer >= 0, got ${m}`);
    }
  }
  if (draft.reference_year !== undefined) {
    const y = draft.reference_year;
    if (!Number.isInteger(y) || y < 1900) {
      problems.push(`reference_year must be an integer >= 1900, got ${y}`);
    }
  }
  for (const spec of draft.indicators ?? []) {
    problems.push(...validateIndicator(spec));
  }
  return problems;
}

function validateIndicator(spec: IndicatorSpec): string[] {
  const problems: string[] = [];
  if (!spec.name) problems.push("indicator name must not be empty");
  if (spec.author_filter !== "all" && spec.author_filter !== "leading") {
    problems.push(`indicator ${spec.name}: author_filter must be all|leading`);
  }
  if (!Number.isInteger(spec.window_years) || spec.window_years < 1) {
    problems.push(`indicator ${spec.name}: window_years must be >= 1`);
  }
  if (!Number.isInteger(spec.min_pubs) || spec.min_pubs < 1) {
    problems.push(`indicator ${spec.name}: min_pubs must be >= 1`);
  }
  return problems;
}
