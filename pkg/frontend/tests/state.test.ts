import { describe, expect, it } from "vitest";

import { initialState, validateDraft } from "../src/state.js";

describe("draft validation", () => {
  it("accepts an empty draft", () => {
    expect(validateDraft({})).toEqual([]);
  });

  it("rejects cutoff 0 and cutoff above 100", () => {
    expect(validateDraft({ percentile_cutoff: 0 })).toHaveLength(1);
    expect(validateDraft({ percentile_cutoff: 100.5 })).toHaveLength(1);
    expect(validateDraft({ percentile_cutoff: 100 })).toEqual([]);
    expect(validateDraft({ percentile_cutoff: 95 })).toEqual([]);
  });

  it("rejects non-integer or small denominators", () => {
    expect(validateDraft({ top_fraction_denominator: 1 })).toHaveLength(1);
    expect(validateDraft({ top_fraction_denominator: 2.5 })).toHaveLength(1);
    expect(validateDraft({ top_fraction_denominator: 3 })).toEqual([]);
  });

  it("rejects unknown normalization scopes", () => {
    expect(validateDraft({ normalization_scope: "bogus" })).toHaveLength(1);
    expect(validateDraft({ normalization_scope: "pre_aggregation" })).toEqual([]);
  });

  it("validates indicator rows", () => {
    const problems = validateDraft({
      indicators: [{ name: "X", author_filter: "leading", window_years: 0, min_pubs: 1 }],
    });
    expect(problems.some((p) => p.includes("window_years"))).toBe(true);
  });

  it("collects multiple problems at once", () => {
    const problems = validateDraft({ percentile_cutoff: -1, top_fraction_denominator: 0 });
    expect(problems).toHaveLength(2);
  });
});

describe("initial state", () => {
  it("starts at the default cutoff view", () => {
    const state = initialState();
    expect(state.minPercentile).toBe(95);
    expect(state.recomputePending).toBe(false);
    expect(state.snapshotId).toBeNull();
  });
});
