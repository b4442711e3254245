import type { AskResponse, OntologyStats } from "./types.js";
import type { HistoryEntry } from "./session.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** One question/answer card: the precise answer up front, then the
 * ranked supporting sentences in exactly the response order. */
export function renderCard(entry: HistoryEntry): string {
  const { question, response } = entry;
  const top = response.answers[0];
  const headline = top?.precise_answer ?? (top ? "(sentence answer)" : "no answer found");
  const frames = response.frame_predicates
    .map((p) => `<li class="frame-predicate"><code>${escapeHtml(p)}</code></li>`)
    .join("");
  const answers = response.answers
    .map((a) => {
      const precise = a.precise_answer === null ? "" :
        `<strong class="precise">${escapeHtml(a.precise_answer)}</strong> `;
      const source = a.ontology_derived
        ? '<em class="derived">derived from the ontology</em>'
        : `doc <span class="doc">${escapeHtml(a.doc_id)}</span>`;
      return (
        `<li class="answer">${precise}` +
        `<span class="sentence">${escapeHtml(a.sentence)}</span> ` +
        `<span class="meta">score ${a.score.toFixed(3)}, ${source}</span></li>`
      );
    })
    .join("");
  return (
    `<article class="card">` +
    `<p class="question">${escapeHtml(question)}</p>` +
    `<p class="headline">${escapeHtml(headline)}</p>` +
    `<span class="focus-badge">${escapeHtml(response.focus)}</span>` +
    (frames ? `<ul class="frames">${frames}</ul>` : "") +
    `<ol class="answers">${answers}</ol>` +
    `</article>`
  );
}

/** The whole history column, oldest first (rendering order = ask order). */
export function renderHistory(entries: readonly HistoryEntry[]): string {
  return entries.map(renderCard).join("");
}

export function renderError(message: string): string {
  return `<div class="error-banner" role="alert">${escapeHtml(message)}</div>`;
}

export function renderStats(stats: OntologyStats): string {
  return (
    `<dl class="stats">` +
    `<dt>classes</dt><dd>${stats.classes}</dd>` +
    `<dt>properties</dt><dd>${stats.properties}</dd>` +
    `<dt>triples</dt><dd>${stats.triples}</dd>` +
    `</dl>`
  );
}

export function renderPending(question: string): string {
  return `<div class="pending">asking: ${escapeHtml(question)}</div>`;
}

export type { AskResponse };
