import type {
  Observation,
  SelectionDoc,
  SessionOptions,
  SessionResponse,
  StepResponse,
  TaskSummary,
} from "./types.js";

export class ServiceError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(url, init);
  const body = await resp.json().catch(() => ({}));
  if (!resp.ok) {
    const detail = (body as { detail?: unknown }).detail;
    throw new ServiceError(resp.status, typeof detail === "string" ? detail : resp.statusText);
  }
  return body as T;
}

function post<T>(url: string, body: unknown): Promise<T> {
  return request<T>(url, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  });
}

/** Typed client for the session service; one instance per base URL. */
export class ApiClient {
  constructor(public baseUrl: string) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
  }

  createSession(options: SessionOptions): Promise<SessionResponse> {
    return post(`${this.baseUrl}/v1/sessions`, options);
  }

  step(sessionId: string, operation: number, selection: SelectionDoc | null): Promise<StepResponse> {
    return post(`${this.baseUrl}/v1/sessions/${sessionId}/step`, { operation, selection });
  }

  resetSession(sessionId: string): Promise<SessionResponse> {
    return post(`${this.baseUrl}/v1/sessions/${sessionId}/reset`, {});
  }

  state(sessionId: string): Promise<Observation> {
    return request(`${this.baseUrl}/v1/sessions/${sessionId}/state`);
  }

  trace(sessionId: string): Promise<unknown[]> {
    return request(`${this.baseUrl}/v1/sessions/${sessionId}/trace`);
  }

  listTasks(dataset: string, split: string): Promise<TaskSummary[]> {
    const params = new URLSearchParams({ dataset, split });
    return request(`${this.baseUrl}/v1/tasks?${params}`);
  }

  listDatasets(): Promise<string[]> {
    return request(`${this.baseUrl}/v1/datasets`);
  }

  listPresets(): Promise<Record<string, { allowed_ops: number[] }>> {
    return request(`${this.baseUrl}/v1/presets`);
  }
}
