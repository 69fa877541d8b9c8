import { filterByConfidence } from "./state.js";
import type { PanelState } from "./state.js";
import type { DesignResponse, GradeResponse, Recommendation } from "./types.js";

/** Renderers are pure string builders so they can be contract-tested
 * against recorded API responses without a DOM. */

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** One decimal place, from the API's confidence value, no rounding games
 * beyond toFixed. */
export function formatConfidence(confidence: number): string {
  return `${(confidence * 100).toFixed(1)}%`;
}

export function renderRecommendation(rec: Recommendation): string {
  const percent = formatConfidence(rec.confidence);
  const width = Math.max(0, Math.min(100, rec.confidence * 100));
  const fallback =
    rec.origin === "frequency-fallback"
      ? '<span class="origin-tag">corpus frequency</span>'
      : "";
  const provenance = rec.provenance.map(escapeHtml).join(", ");
  return (
    `<li class="rec" data-rec-id="${escapeHtml(rec.id)}" data-kind="${rec.kind}">` +
    `<button class="accept" data-action="accept" data-rec-id="${escapeHtml(rec.id)}" ` +
    `data-kind="${rec.kind}">+</button>` +
    `<span class="rec-label">${escapeHtml(rec.label)}</span>` +
    `<span class="confidence">${percent}</span>${fallback}` +
    `<div class="bar"><div class="bar-fill" style="width: ${width}%"></div></div>` +
    `<div class="provenance">seen in: ${provenance}</div>` +
    `</li>`
  );
}

/** Items arrive already sorted by the API; render them in that exact
 * order, optionally view-filtered by the explorer threshold. */
export function renderRecommendationList(
  recs: Recommendation[],
  threshold: number,
): string {
  const visible = filterByConfidence(recs, threshold);
  if (visible.length === 0) {
    const hint =
      recs.length === 0
        ? "No suggestions for this design."
        : "No suggestions at or below this confidence; raise the slider.";
    return `<p class="hint">${hint}</p>`;
  }
  return `<ul class="rec-list">${visible.map(renderRecommendation).join("")}</ul>`;
}

export function renderDesign(design: DesignResponse): string {
  const elements = design.elements
    .map(
      (element) =>
        `<li data-identifier="${escapeHtml(element.identifier)}">` +
        `<button class="remove" data-action="remove-element" ` +
        `data-identifier="${escapeHtml(element.identifier)}">x</button>` +
        `<code>${escapeHtml(element.identifier)}</code> ` +
        `${escapeHtml(element.behavior)}` +
        `${renderParams(element.params)}</li>`,
    )
    .join("");
  const interactions = design.interactions
    .map(
      (inter) =>
        `<li data-index="${inter.index}">` +
        `<button class="remove" data-action="remove-interaction" ` +
        `data-index="${inter.index}">x</button>` +
        `<code>${escapeHtml(inter.first)} ${escapeHtml(inter.second)}</code> &gt; ` +
        `${escapeHtml(inter.effect)}${renderParams(inter.params)}</li>`,
    )
    .join("");
  return (
    `<h3>Elements (${design.elements.length})</h3>` +
    `<ul class="design-list" id="element-list">${elements}</ul>` +
    `<h3>Interactions (${design.interactions.length})</h3>` +
    `<ul class="design-list" id="interaction-list">${interactions}</ul>`
  );
}

function renderParams(params: Record<string, number | string>): string {
  const entries = Object.entries(params);
  if (entries.length === 0) {
    return "";
  }
  const text = entries.map(([key, value]) => `${key}=${value}`).join(" ");
  return ` <span class="params">${escapeHtml(text)}</span>`;
}

/** The score exactly as the API reported it. */
export function renderGrade(grade: GradeResponse): string {
  const headline = `<div class="grade-total">${grade.total} / ${grade.max_score}</div>`;
  if (!grade.runnable) {
    return (
      headline +
      `<p class="grade-note">Submission could not run` +
      (grade.failure ? `: ${escapeHtml(grade.failure)}` : "") +
      `</p>`
    );
  }
  const rows = grade.per_rule
    .map(
      (outcome) =>
        `<li class="${outcome.matched ? "matched" : "unmatched"}">` +
        `${outcome.matched ? "+" : "-"} ${escapeHtml(outcome.rule)}` +
        (outcome.matched_by ? ` <em>(${escapeHtml(outcome.matched_by)})</em>` : "") +
        `</li>`,
    )
    .join("");
  return headline + `<ul class="grade-rules">${rows}</ul>`;
}

export function renderNotice(state: PanelState): string {
  if (!state.notice) {
    return "";
  }
  return `<div class="notice">${escapeHtml(state.notice)}</div>`;
}

export function renderThresholdLabel(threshold: number): string {
  return `show confidence ≤ ${(threshold * 100).toFixed(0)}%`;
}
