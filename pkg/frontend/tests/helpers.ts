// Fixture-backed service client: replays recorded /v1 responses so the
// tests exercise the real wire format without a live server.

import type { ServiceClient } from "../src/api";
import type {
  Analysis,
  Finding,
  RequirementRecord,
  RuleKind,
  TranslationStage,
} from "../src/types";
import contract from "./fixtures/editor_contract.json";

interface Contract {
  validate: Record<string, Analysis>;
  translate: Record<string, { stages: TranslationStage[] }>;
  consistency: { findings: Finding[] };
}

export const CONTRACT = contract as unknown as Contract;

export class FixtureClient implements ServiceClient {
  calls = { validate: 0, translate: 0 };

  async validate(text: string): Promise<Analysis> {
    this.calls.validate++;
    const response = CONTRACT.validate[text];
    if (!response) throw new Error(`no recorded validate response for ${JSON.stringify(text)}`);
    return structuredClone(response);
  }

  async translate(text: string, _rules?: RuleKind[]): Promise<TranslationStage[]> {
    this.calls.translate++;
    const response = CONTRACT.translate[text];
    if (!response) throw new Error(`no recorded translate response for ${JSON.stringify(text)}`);
    return structuredClone(response.stages);
  }

  async extract(): Promise<Analysis["constraints"]> {
    return [];
  }

  async consistency(): Promise<Finding[]> {
    return structuredClone(CONTRACT.consistency.findings);
  }

  async requirements(): Promise<RequirementRecord[]> {
    return [];
  }
}

/** A client that can be switched off to simulate connection loss. */
export class FlakyClient extends FixtureClient {
  down = false;

  override async validate(text: string): Promise<Analysis> {
    if (this.down) throw new Error("connection refused");
    return super.validate(text);
  }
}

/** Deterministic manual scheduler for debounce tests. */
export class ManualScheduler {
  private counter = 0;
  private tasks = new Map<number, { fn: () => void; at: number }>();
  now = 0;

  set(fn: () => void, ms: number): number {
    this.counter++;
    this.tasks.set(this.counter, { fn, at: this.now + ms });
    return this.counter as unknown as number;
  }

  clear(handle: number): void {
    this.tasks.delete(handle);
  }

  advance(ms: number): void {
    this.now += ms;
    for (const [handle, task] of [...this.tasks]) {
      if (task.at <= this.now) {
        this.tasks.delete(handle);
        task.fn();
      }
    }
  }
}

export function flushMicrotasks(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}
