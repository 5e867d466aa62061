// Maps service diagnostics to editor decorations (squiggles).
//
// Severity -> style mapping:
//   violation  -> "squiggle-error"   (red wavy underline)
//   minor      -> "squiggle-warning" (amber wavy underline)
//   conformant -> no decoration

import type { Analysis, Diagnostic, Severity } from "./types";

export const SEVERITY_CLASSES: Record<Exclude<Severity, "conformant">, string> = {
  violation: "squiggle-error",
  minor: "squiggle-warning",
};

export interface Decoration {
  start: number;
  end: number;
  className: string;
  message: string;
  fixHint: string | null;
  rule: Diagnostic["rule"];
}

/** Non-conformant diagnostics as decorations, clamped and ordered. */
export function decorationsFrom(analysis: Analysis, textLength: number): Decoration[] {
  const decorations: Decoration[] = [];
  for (const diagnostics of Object.values(analysis.per_rule)) {
    for (const diag of diagnostics) {
      if (diag.severity === "conformant") continue;
      const start = Math.max(0, Math.min(diag.span[0], textLength));
      const end = Math.max(start, Math.min(diag.span[1], textLength));
      decorations.push({
        start,
        end,
        className: SEVERITY_CLASSES[diag.severity],
        message: diag.message,
        fixHint: diag.fix_hint,
        rule: diag.rule,
      });
    }
  }
  decorations.sort((a, b) => a.start - b.start || a.end - b.end);
  return decorations;
}

function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

/**
 * Renders the draft as HTML with <mark> elements over decorated spans.
 * Overlapping decorations keep the earlier (already sorted) one; zero-width
 * spans are skipped so the markup stays well-formed.
 */
export function renderHighlighted(text: string, decorations: Decoration[]): string {
  let html = "";
  let cursor = 0;
  for (const deco of decorations) {
    if (deco.start < cursor || deco.end <= deco.start) continue;
    html += escapeHtml(text.slice(cursor, deco.start));
    html += `<mark class="${deco.className}" title="${escapeHtml(deco.message)}">`;
    html += escapeHtml(text.slice(deco.start, deco.end));
    html += "</mark>";
    cursor = deco.end;
  }
  html += escapeHtml(text.slice(cursor));
  return html;
}
