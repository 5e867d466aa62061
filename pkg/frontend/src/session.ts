// Editor session state: draft revisions, debounced validation with a
// single-flight guard, and revision-scoped translation suggestions.
//
// Invariants the tests pin down:
//   - at most one in-flight validation request per session;
//   - a suggestion computed for revision r is never applied to revision r' != r;
//   - on connection loss the last good analysis persists and a banner shows.

import type { ServiceClient } from "./api";
import { Debouncer, type Scheduler } from "./debounce";
import type { Analysis, RuleKind, TranslationStage } from "./types";

export const DEFAULT_DEBOUNCE_MS = 250;

export interface AnalysisView {
  revision: number;
  text: string;
  analysis: Analysis;
}

export type SuggestionState = "pending" | "ready" | "error" | "empty";

export interface Suggestion {
  rule: RuleKind;
  revision: number;
  sourceText: string;
  stages: TranslationStage[];
  state: SuggestionState;
  error?: string;
}

export interface SessionEvents {
  onAnalysis?: (view: AnalysisView) => void;
  onSuggestion?: (suggestion: Suggestion) => void;
  onConnectionChange?: (lost: boolean) => void;
}

export class EditorSession {
  private revisionCounter = 0;
  private draftText = "";
  private inFlight = false;
  private rerunWanted = false;
  private lastGoodView: AnalysisView | null = null;
  private connectionLostFlag = false;
  private readonly debouncer: Debouncer;
  private readonly suggestionByRule = new Map<RuleKind, Suggestion>();
  private readonly acceptedHistory: string[] = [];

  constructor(
    private readonly client: ServiceClient,
    private readonly events: SessionEvents = {},
    debounceMs: number = DEFAULT_DEBOUNCE_MS,
    scheduler?: Scheduler,
  ) {
    this.debouncer = new Debouncer(debounceMs, scheduler);
  }

  get revision(): number {
    return this.revisionCounter;
  }

  get draft(): string {
    return this.draftText;
  }

  get lastGood(): AnalysisView | null {
    return this.lastGoodView;
  }

  get connectionLost(): boolean {
    return this.connectionLostFlag;
  }

  get history(): readonly string[] {
    return this.acceptedHistory;
  }

  suggestion(rule: RuleKind): Suggestion | undefined {
    return this.suggestionByRule.get(rule);
  }

  /** A keystroke: bump the revision, drop stale suggestions, debounce validation. */
  setDraft(text: string): void {
    this.draftText = text;
    this.revisionCounter++;
    this.suggestionByRule.clear();
    this.debouncer.schedule(() => {
      void this.validateNow();
    });
  }

  /** Validate the current draft immediately (single-flight). */
  async validateNow(): Promise<AnalysisView | null> {
    if (this.inFlight) {
      this.rerunWanted = true;
      return this.lastGoodView;
    }
    this.inFlight = true;
    const revision = this.revisionCounter;
    const text = this.draftText;
    try {
      const analysis = await this.client.validate(text);
      this.setConnectionLost(false);
      if (revision === this.revisionCounter) {
        this.lastGoodView = { revision, text, analysis };
        this.events.onAnalysis?.(this.lastGoodView);
      } else {
        this.rerunWanted = true; // response is stale; the draft moved on
      }
    } catch {
      // keep the last good analysis; just flag the connection
      this.setConnectionLost(true);
    } finally {
      this.inFlight = false;
    }
    if (this.rerunWanted) {
      this.rerunWanted = false;
      return this.validateNow();
    }
    return this.lastGoodView;
  }

  /** Ask the service to translate the draft under one rule. */
  async requestSuggestion(rule: RuleKind, backend?: string): Promise<Suggestion> {
    const revision = this.revisionCounter;
    const pending: Suggestion = {
      rule,
      revision,
      sourceText: this.draftText,
      stages: [],
      state: "pending",
    };
    this.suggestionByRule.set(rule, pending);
    this.events.onSuggestion?.(pending);

    let next: Suggestion;
    try {
      const stages = await this.client.translate(this.draftText, [rule], backend);
      next = {
        ...pending,
        stages,
        state: stages.length > 0 ? "ready" : "empty",
      };
      this.setConnectionLost(false);
    } catch (error) {
      next = { ...pending, state: "error", error: String(error) };
    }
    // only publish if the draft has not moved since the request
    if (revision === this.revisionCounter) {
      this.suggestionByRule.set(rule, next);
      this.events.onSuggestion?.(next);
    }
    return next;
  }

  /**
   * Accept a suggestion: replaces the draft (new revision) and re-validates
   * immediately. Refuses stale suggestions from an older revision.
   */
  async acceptSuggestion(rule: RuleKind): Promise<boolean> {
    const suggestion = this.suggestionByRule.get(rule);
    if (!suggestion || suggestion.state !== "ready") return false;
    if (suggestion.revision !== this.revisionCounter) return false;
    const accepted = suggestion.stages[suggestion.stages.length - 1].output;
    this.acceptedHistory.push(accepted);
    this.draftText = accepted;
    this.revisionCounter++;
    this.suggestionByRule.clear();
    this.debouncer.cancel();
    await this.validateNow();
    return true;
  }

  rejectSuggestion(rule: RuleKind): void {
    this.suggestionByRule.delete(rule);
  }

  private setConnectionLost(lost: boolean): void {
    if (lost !== this.connectionLostFlag) {
      this.connectionLostFlag = lost;
      this.events.onConnectionChange?.(lost);
    }
  }
}
