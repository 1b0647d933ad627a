// Pure render functions: service payloads in, HTML strings out. No score
// arithmetic happens here; every number displayed is copied verbatim from a
// payload field, and each view stamps the snapshot_id it rendered from.

import type {
  CandidatesPayload,
  DistributionPayload,
  OverlapCell,
  RecommendationsPayload,
  SummaryRow,
} from "./api.js";

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function formatPercentile(value: number): string {
  // Display convention: two decimals, full precision stays in the payload.
  return value.toFixed(2);
}

export function callView(payload: CandidatesPayload): string {
  const rows = payload.candidates
    .map(
      (c) =>
        `<tr><td>${c.rank}</td><td>${esc(c.researcher_id)}</td>` +
        `<td>${formatPercentile(c.percentile)}</td></tr>`,
    )
    .join("");
  const body =
    payload.candidates.length === 0
      ? `<p class="empty">No candidates at or above percentile ${payload.min_percentile}.</p>`
      : `<table class="candidates"><thead><tr><th>rank</th><th>researcher</th>` +
        `<th>percentile</th></tr></thead><tbody>${rows}</tbody></table>`;
  return (
    `<section class="call-view" data-snapshot="${esc(payload.snapshot_id)}">` +
    `<h2>${esc(payload.call_id)} &middot; ${esc(payload.indicator)}</h2>${body}</section>`
  );
}

export function researcherView(payload: RecommendationsPayload): string {
  const panels = payload.indicators
    .map((block) => {
      const items = block.items
        .map(
          (item) =>
            `<li><span class="call">${esc(item.call_id)}</span> ` +
            `<span class="rank">${ordinal(item.rank)}</span> ` +
            `<span class="pct">${formatPercentile(item.percentile)}</span></li>`,
        )
        .join("");
      const content = block.items.length === 0 ? `<p class="empty">No assigned calls.</p>` : `<ol>${items}</ol>`;
      return `<article class="indicator-panel"><h3>${esc(block.indicator)}</h3>${content}</article>`;
    })
    .join("");
  return (
    `<section class="researcher-view" data-snapshot="${esc(payload.snapshot_id)}">` +
    `<h2>${esc(payload.researcher_id)}</h2>${panels}</section>`
  );
}

export function ordinal(rank: number): string {
  const mod100 = rank % 100;
  if (mod100 >= 11 && mod100 <= 13) return `${rank}th`;
  switch (rank % 10) {
    case 1:
      return `${rank}st`;
    case 2:
      return `${rank}nd`;
    case 3:
      return `${rank}rd`;
    default:
      return `${rank}th`;
  }
}

export function summaryTable(rows: SummaryRow[], snapshotId: string): string {
  const body = rows
    .map(
      (r) =>
        `<tr><td>${esc(r.indicator_name)}</td><td>${r.researchers_assigned}</td>` +
        `<td>${r.unique_researchers === null ? "&mdash;" : r.unique_researchers}</td>` +
        `<td>${r.avg_calls_per_researcher.toFixed(1)}</td>` +
        `<td>${r.avg_researchers_per_call.toFixed(1)}</td></tr>`,
    )
    .join("");
  return (
    `<table class="summary" data-snapshot="${esc(snapshotId)}"><thead><tr>` +
    `<th>indicator</th><th>researchers</th><th>unique</th>` +
    `<th>avg calls/researcher</th><th>avg researchers/call</th></tr></thead>` +
    `<tbody>${body}</tbody></table>`
  );
}

export function overlapGrid(cells: OverlapCell[], indicators: string[], snapshotId: string): string {
  const byKey = new Map(cells.map((c) => [`${c.row_indicator}|${c.col_indicator}`, c]));
  const header = indicators.map((name) => `<th>${esc(name)}</th>`).join("");
  const rows = indicators
    .map((row) => {
      const tds = indicators
        .map((col) => {
          if (row === col) return `<td class="diag"></td>`;
          const cell = byKey.get(`${row}|${col}`);
          if (!cell) return `<td></td>`;
          const rho = cell.spearman_rho === null ? "" : ` &rho;=${cell.spearman_rho.toFixed(2)}`;
          return `<td>${cell.overlap_pct.toFixed(0)}%${rho}</td>`;
        })
        .join("");
      return `<tr><th>${esc(row)}</th>${tds}</tr>`;
    })
    .join("");
  return (
    `<table class="overlap" data-snapshot="${esc(snapshotId)}">` +
    `<thead><tr><th></th>${header}</tr></thead><tbody>${rows}</tbody></table>`
  );
}

export function distributionPanel(dist: DistributionPayload, snapshotId: string): string {
  if (dist.median === null) {
    return `<section class="distribution" data-snapshot="${esc(snapshotId)}"><p class="empty">No assignments.</p></section>`;
  }
  const maxCount = Math.max(...dist.histogram.map(([, count]) => count), 1);
  const bars = dist.histogram
    .map(
      ([bucket, count]) =>
        `<div class="bar" style="height:${Math.round((100 * count) / maxCount)}%" ` +
        `title="${bucket} calls: ${count} researchers"></div>`,
    )
    .join("");
  return (
    `<section class="distribution" data-snapshot="${esc(snapshotId)}">` +
    `<h3>${esc(dist.indicator_name)}</h3>` +
    `<p>q1 ${dist.q1} &middot; median ${dist.median} &middot; q3 ${dist.q3}</p>` +
    `<div class="histogram">${bars}</div></section>`
  );
}

export function footer(snapshotId: string, configDigest: string, corpusDigest: string): string {
  return (
    `<footer class="snapshot-footer">snapshot <code>${esc(snapshotId)}</code> ` +
    `&middot; config <code>${esc(configDigest.slice(0, 12))}</code> ` +
    `&middot; corpus <code>${esc(corpusDigest.slice(0, 12))}</code></footer>`
  );
}
