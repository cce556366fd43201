// Typed client for the annotation service. Every mutating call carries the
// last-seen state version; a 409 surfaces as StaleStateError so the caller
// can refresh the prompt instead of silently retrying.

export interface GuidelinesPrompt {
  kind: "guidelines";
  version: number;
  cluster: number;
  pivot_ids: string[];
  pivots: string[];
  auto_label: string;
}

export interface AnnotationPrompt {
  kind: "annotation";
  version: number;
  label: string;
  proposed_ids: string[];
  proposed: string[];
  at_threshold: boolean;
}

export interface BaselinePrompt {
  kind: "baseline";
  version: number;
  id: string;
  text: string;
  precomputed_label: string;
}

export interface DonePrompt {
  kind: "done";
  version: number;
}

export type Prompt = GuidelinesPrompt | AnnotationPrompt | BaselinePrompt | DonePrompt;

export interface Summary {
  session_id: string;
  mode: "aa" | "baseline";
  status: string;
  phase: string;
  version: number;
  labelled: number;
  unlabelled: number;
  label_histogram: Record<string, number>;
}

export interface MutationResponse {
  prompt: Prompt;
  summary: Summary;
  [extra: string]: unknown;
}

export class StaleStateError extends Error {
  constructor(detail: string) {
    super(detail);
    this.name = "StaleStateError";
  }
}

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
    this.name = "ApiError";
  }
}

async function parseError(response: Response): Promise<string> {
  try {
    const body = await response.json();
    return body.error ?? body.detail ?? response.statusText;
  } catch {
    return response.statusText;
  }
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.base + path, init);
    if (response.status === 409) {
      throw new StaleStateError(await parseError(response));
    }
    if (!response.ok) {
      throw new ApiError(response.status, await parseError(response));
    }
    return (await response.json()) as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  uploadDataset(content: Blob, name = "dataset.jsonl"): Promise<{ dataset_id: string; size: number }> {
    const form = new FormData();
    form.append("file", content, name);
    return this.request("/api/datasets", { method: "POST", body: form });
  }

  createSession(
    mode: "aa" | "baseline",
    datasetId: string,
    config?: Record<string, unknown>,
  ): Promise<{ session_id: string; status: string }> {
    return this.post("/api/sessions", { mode, dataset_id: datasetId, config });
  }

  summary(sessionId: string): Promise<Summary> {
    return this.request(`/api/sessions/${sessionId}`);
  }

  prompt(sessionId: string): Promise<Prompt> {
    return this.request(`/api/sessions/${sessionId}/prompt`);
  }

  guidelines(
    sessionId: string,
    version: number,
    action: "skip" | "label",
    label?: string,
  ): Promise<MutationResponse> {
    return this.post(`/api/sessions/${sessionId}/guidelines`, { action, label, version });
  }

  commit(sessionId: string, version: number, checked: string[]): Promise<MutationResponse> {
    return this.post(`/api/sessions/${sessionId}/annotations`, { checked, version });
  }

  expand(sessionId: string, version: number): Promise<MutationResponse> {
    return this.post(`/api/sessions/${sessionId}/expand`, { version });
  }

  baseline(
    sessionId: string,
    version: number,
    action: "confirm" | "skip" | "relabel",
    label?: string,
  ): Promise<MutationResponse> {
    return this.post(`/api/sessions/${sessionId}/baseline`, { action, label, version });
  }

  exportUrl(sessionId: string): string {
    return `${this.base}/api/sessions/${sessionId}/export`;
  }
}
