"""Independent brute-force reference for the scoring and ranking pipeline.

Pure-Python loops over plain lists and dicts, written against the documented
math only: cosine of each (publication, call) pair, mean or top-third mean,
within-researcher z-scores, weak-inequality percentiles. Deliberately reuses
nothing from the engine's scoring, ranking or analytics internals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass


def oracle_cosine(u: list[float], v: list[float]) -> float:
    assert len(u) == len(v)
    dot = math.fsum(a * b for a, b in zip(u, v))
    nu = math.sqrt(math.fsum(a * a for a in u))
    nv = math.sqrt(math.fsum(b * b for b in v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return dot / (nu * nv)


def oracle_rule(n: int, denominator: int = 3) -> tuple[str, int]:
    k = math.ceil(n / denominator)
    if k <= 2:
        return "full_mean", n
    return "top_third_mean", k


def oracle_aggregate(sims: list[float], rule: str, k: int) -> float:
    if rule == "full_mean":
        return math.fsum(sims) / len(sims)
    top = sorted(sims, reverse=True)[:k]
    return math.fsum(top) / k


def oracle_mean_std(values: list[float]) -> tuple[float, float]:
    mu = math.fsum(values) / len(values)
    var = math.fsum((v - mu) ** 2 for v in values) / len(values)
    return mu, math.sqrt(var)


def oracle_z(values: dict[str, float]) -> dict[str, float]:
    mu, sigma = oracle_mean_std(list(values.values()))
    if sigma < 1e-12:
        return {key: 0.0 for key in values}
    return {key: (v - mu) / sigma for key, v in values.items()}


def oracle_percentiles(zmap: dict[str, float]) -> dict[str, tuple[float, int]]:
    """researcher -> (percentile, rank) by weak inequality / strict count."""
    n = len(zmap)
    out = {}
    for rid, z in zmap.items():
        count_le = sum(1 for other in zmap.values() if other <= z)
        count_gt = sum(1 for other in zmap.values() if other > z)
        out[rid] = (100.0 * count_le / n, 1 + count_gt)
    return out


@dataclass
class OracleRow:
    researcher_id: str
    indicator: str
    call_id: str
    a: float
    z: float
    n_set: int
    k_used: int
    rule: str


@dataclass
class OracleOutput:
    rows: list[OracleRow]
    # (indicator, call_id, researcher_id) -> (percentile, rank)
    percentiles: dict[tuple[str, str, str], tuple[float, int]]
    assignments: list[tuple[str, str, str, float]]  # (indicator, call, researcher, pct)


def oracle_pipeline(
    sets: list[tuple[str, str, list[str]]],  # (researcher_id, indicator, pub_ids), eligible only
    vectors: dict[str, list[float]],
    call_ids: list[str],
    scope: str = "per_indicator_across_calls",
    denominator: int = 3,
    cutoff: float = 95.0,
) -> OracleOutput:
    calls = sorted(call_ids)
    rows: list[OracleRow] = []

    raw: dict[tuple[str, str], dict[str, float]] = {}  # (researcher, indicator) -> call -> a
    meta: dict[tuple[str, str], tuple[int, int, str]] = {}
    prenormed: dict[tuple[str, str], dict[str, float]] = {}

    for researcher, indicator, pub_ids in sets:
        n = len(pub_ids)
        rule, k = oracle_rule(n, denominator)
        sims_per_call: dict[str, list[float]] = {}
        for call in calls:
            sims_per_call[call] = [
                oracle_cosine(vectors[p], vectors[call]) for p in sorted(pub_ids)
            ]
        agg = {call: oracle_aggregate(s, rule, k) for call, s in sims_per_call.items()}
        raw[(researcher, indicator)] = agg
        meta[(researcher, indicator)] = (n, k, rule)
        if scope == "pre_aggregation":
            flat = [s for call in calls for s in sims_per_call[call]]
            mu, sigma = oracle_mean_std(flat)
            normed = {}
            for call in calls:
                if sigma < 1e-12:
                    values = [0.0] * len(sims_per_call[call])
                else:
                    values = [(s - mu) / sigma for s in sims_per_call[call]]
                normed[call] = oracle_aggregate(values, rule, k)
            prenormed[(researcher, indicator)] = normed

    z_values: dict[tuple[str, str], dict[str, float]] = {}
    if scope == "per_indicator_across_calls":
        for key, agg in raw.items():
            z_values[key] = oracle_z(agg)
    elif scope == "across_indicators":
        by_researcher: dict[str, list[float]] = {}
        for (researcher, _ind), agg in raw.items():
            by_researcher.setdefault(researcher, []).extend(agg.values())
        stats = {r: oracle_mean_std(vals) for r, vals in by_researcher.items()}
        for (researcher, indicator), agg in raw.items():
            mu, sigma = stats[researcher]
            if sigma < 1e-12:
                z_values[(researcher, indicator)] = {c: 0.0 for c in agg}
            else:
                z_values[(researcher, indicator)] = {c: (v - mu) / sigma for c, v in agg.items()}
    elif scope == "pre_aggregation":
        z_values = prenormed
    else:
        raise ValueError(scope)

    for (researcher, indicator), agg in raw.items():
        n, k, rule = meta[(researcher, indicator)]
        for call in calls:
            rows.append(
                OracleRow(
                    researcher_id=researcher,
                    indicator=indicator,
                    call_id=call,
                    a=agg[call],
                    z=z_values[(researcher, indicator)][call],
                    n_set=n,
                    k_used=k,
                    rule=rule,
                )
            )

    rows.sort(key=lambda r: (r.indicator, r.call_id, -r.z, r.researcher_id))

    percentiles: dict[tuple[str, str, str], tuple[float, int]] = {}
    assignments: list[tuple[str, str, str, float]] = []
    group: dict[tuple[str, str], dict[str, float]] = {}
    for row in rows:
        group.setdefault((row.indicator, row.call_id), {})[row.researcher_id] = row.z
    for (indicator, call), zmap in sorted(group.items()):
        table = oracle_percentiles(zmap)
        for rid, (pct, rank) in table.items():
            percentiles[(indicator, call, rid)] = (pct, rank)
        ranked = sorted(zmap, key=lambda r: (-zmap[r], r))
        for rid in ranked:
            pct, _rank = table[rid]
            if pct >= cutoff:
                assignments.append((indicator, call, rid, pct))
    return OracleOutput(rows=rows, percentiles=percentiles, assignments=assignments)


def oracle_spearman(x: list[float], y: list[float]) -> float | None:
    def ranks(vals: list[float]) -> list[float]:
        order = sorted(range(len(vals)), key=lambda i: vals[i])
        out = [0.0] * len(vals)
        i = 0
        while i < len(vals):
            j = i
            while j + 1 < len(vals) and vals[order[j + 1]] == vals[order[i]]:
                j += 1
            avg = (i + j) / 2 + 1
            for k in range(i, j + 1):
                out[order[k]] = avg
            i = j + 1
        return out

    rx, ry = ranks(x), ranks(y)
    mx = sum(rx) / len(rx)
    my = sum(ry) / len(ry)
    sx = math.sqrt(sum((v - mx) ** 2 for v in rx) / len(rx))
    sy = math.sqrt(sum((v - my) ** 2 for v in ry) / len(ry))
    if sx == 0 or sy == 0:
        return None
    cov = sum((a - mx) * (b - my) for a, b in zip(rx, ry)) / len(rx)
    return cov / (sx * sy)
