// View model for the consistency panel: findings against the loaded corpus
// with click-to-navigate targets. Contradictions are errors; unit mismatches
// render as warnings, never as contradictions; links are informational.

import type { Finding, FindingKind } from "./types";

export interface PanelEntry {
  kind: FindingKind;
  styleClass: "finding-error" | "finding-warning" | "finding-info";
  variable: string;
  explanation: string;
  requirementIds: string[];
  bounds: string[];
}

const STYLE_BY_KIND: Record<FindingKind, PanelEntry["styleClass"]> = {
  contradiction: "finding-error",
  unit_mismatch: "finding-warning",
  link: "finding-info",
};

export function panelEntries(findings: Finding[]): PanelEntry[] {
  return findings.map((finding) => ({
    kind: finding.kind,
    styleClass: STYLE_BY_KIND[finding.kind],
    variable: finding.variable,
    explanation: finding.explanation,
    requirementIds: Array.from(
      new Set(
        finding.constraints
          .map((c) => c.source_requirement)
          .filter((id): id is string => id !== null),
      ),
    ),
    bounds: finding.constraints.map((c) => c.rendered),
  }));
}
