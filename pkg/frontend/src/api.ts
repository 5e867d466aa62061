// Thin typed client for the validation service. Every editor verdict comes
// from these endpoints; the UI never re-implements the rules locally.

import type {
  Analysis,
  ApiErrorBody,
  Finding,
  RequirementRecord,
  RuleKind,
  TranslationStage,
} from "./types";

export class ServiceError extends Error {
  readonly code: string;
  readonly status: number;
  readonly detail: unknown;

  constructor(status: number, body: ApiErrorBody) {
    super(body.message);
    this.code = body.code;
    this.status = status;
    this.detail = body.detail;
  }
}

/** Anything that can answer the editor's questions. Tests inject fakes. */
export interface ServiceClient {
  validate(text: string): Promise<Analysis>;
  translate(
    text: string,
    rules?: RuleKind[],
    backend?: string,
  ): Promise<TranslationStage[]>;
  extract(text: string): Promise<Analysis["constraints"]>;
  consistency(requirementIds?: string[]): Promise<Finding[]>;
  requirements(): Promise<RequirementRecord[]>;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class HttpServiceClient implements ServiceClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
    private readonly token?: string,
  ) {}

  private async post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: this.headers({ "Content-Type": "application/json" }),
      body: JSON.stringify(body),
    });
  }

  private async get<T>(path: string): Promise<T> {
    return this.request<T>(path, { method: "GET", headers: this.headers({}) });
  }

  private headers(base: Record<string, string>): Record<string, string> {
    if (this.token) {
      base["Authorization"] = `Bearer ${this.token}`;
    }
    return base;
  }

  private async request<T>(path: string, init: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    const payload = await response.json();
    if (!response.ok) {
      throw new ServiceError(response.status, payload as ApiErrorBody);
    }
    return payload as T;
  }

  async validate(text: string): Promise<Analysis> {
    return this.post<Analysis>("/v1/validate", { text });
  }

  async translate(
    text: string,
    rules?: RuleKind[],
    backend?: string,
  ): Promise<TranslationStage[]> {
    const body: Record<string, unknown> = { text };
    if (rules) body["rules"] = rules;
    if (backend) body["backend"] = backend;
    const result = await this.post<{ stages: TranslationStage[] }>(
      "/v1/translate",
      body,
    );
    return result.stages;
  }

  async extract(text: string): Promise<Analysis["constraints"]> {
    const result = await this.post<{ constraints: Analysis["constraints"] }>(
      "/v1/extract",
      { text },
    );
    return result.constraints;
  }

  async consistency(requirementIds?: string[]): Promise<Finding[]> {
    const body = requirementIds ? { requirement_ids: requirementIds } : {};
    const result = await this.post<{ findings: Finding[] }>("/v1/consistency", body);
    return result.findings;
  }

  async requirements(): Promise<RequirementRecord[]> {
    const result = await this.get<{ requirements: RequirementRecord[] }>(
      "/v1/requirements",
    );
    return result.requirements;
  }
}
