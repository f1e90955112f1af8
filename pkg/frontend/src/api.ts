/**
 * Typed client for the chatfsm service.
 *
 * The UI never computes diffs or parses FSM documents itself; every
 * piece of derived data (diff items, messages, DOT text) comes from the
 * service responses passing through this module.
 */

export interface DiffItem {
  kind: string;
  fsm: string;
  state?: string;
  from?: string;
  to?: string;
  outcome?: string;
  oldOutcome?: string;
  newOutcome?: string;
}

export interface DiffReport {
  category: string;
  items: DiffItem[];
  messages: string[];
  renaming?: Record<string, unknown>;
  warnings?: string[];
}

export interface SessionInfo {
  sessionId: string;
  createdAt: number;
}

export interface ChangeResponse {
  replyCode: string;
  fsm: unknown[];
  diff: DiffReport;
  dot: string;
}

export interface ServiceErrorBody {
  code: string;
  message: string;
  detail: string;
}

export class ServiceApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: ServiceErrorBody,
  ) {
    super(`${body.code}: ${body.message}`);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ServiceClient {
  private readonly fetchImpl: FetchLike;

  constructor(
    readonly baseUrl: string,
    fetchImpl?: FetchLike,
  ) {
    this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
  }

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      let body: ServiceErrorBody;
      try {
        body = (await response.json()) as ServiceErrorBody;
      } catch {
        body = { code: "unknown_error", message: response.statusText, detail: "" };
      }
      throw new ServiceApiError(response.status, body);
    }
    return response;
  }

  private post(path: string, payload: unknown): Promise<Response> {
    return this.request(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  async createSession(code: string): Promise<SessionInfo> {
    const response = await this.post("/sessions", { code });
    return (await response.json()) as SessionInfo;
  }

  async postChange(
    sessionId: string,
    request: string,
    withContext: boolean,
  ): Promise<ChangeResponse> {
    const response = await this.post(`/sessions/${sessionId}/changes`, {
      request,
      withContext,
    });
    return (await response.json()) as ChangeResponse;
  }

  async getDot(sessionId: string): Promise<string> {
    const response = await this.request(`/sessions/${sessionId}/dot`);
    return response.text();
  }

  async getFsm(sessionId: string): Promise<unknown[]> {
    const response = await this.request(`/sessions/${sessionId}/fsm`);
    return (await response.json()) as unknown[];
  }
}
