// Wire types for the /v1 service endpoints. The editor renders these
// verbatim; it performs no grammar logic of its own.

export type RuleKind = "if_then" | "modal_verb" | "expression";
export type Severity = "conformant" | "minor" | "violation";

export interface Diagnostic {
  rule: RuleKind;
  severity: Severity;
  span: [number, number];
  message: string;
  fix_hint: string | null;
}

export interface IfThenView {
  trigger: string;
  action: string;
}

export interface ConstraintView {
  variable: string;
  op: string;
  op_keyword: string;
  value: number | string;
  value_text: string;
  unit: string | null;
  source_requirement: string | null;
  span: [number, number];
  rendered: string;
}

export interface Analysis {
  requirement_id: string;
  per_rule: Record<RuleKind, Diagnostic[]>;
  if_then: IfThenView | null;
  constraints: ConstraintView[];
  classification: RuleKind[];
  notes: string[];
}

export interface TranslationStage {
  rule: RuleKind;
  output: string;
  support_set_id: string;
  prompt_hash: string;
  auto_grade: number;
}

export type FindingKind = "contradiction" | "link" | "unit_mismatch";

export interface Finding {
  kind: FindingKind;
  variable: string;
  explanation: string;
  constraints: ConstraintView[];
}

export interface RequirementRecord {
  id: string;
  text: string;
  source: string;
  tags: string[];
  set?: string;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  detail?: unknown;
}
