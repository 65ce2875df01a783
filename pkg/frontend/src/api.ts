import type { ScenarioEnvelope, SessionView } from "./types.js";

/** Error carrying the service's problem document (code + message + HTTP status). */
export class ApiError extends Error {
  readonly status: number;
  readonly code: string;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.name = "ApiError";
    this.status = status;
    this.code = code;
  }
}

async function toApiError(res: Response): Promise<ApiError> {
  let code = "http_error";
  let message = `request failed with status ${res.status}`;
  try {
    const body = await res.json();
    if (body && typeof body.code === "string" && typeof body.message === "string") {
      code = body.code;
      message = body.message;
    }
  } catch {
    // non-JSON body, keep the generic message
  }
  return new ApiError(res.status, code, message);
}

export class SurveyApi {
  constructor(private readonly baseUrl: string) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await fetch(this.baseUrl + path, init);
    if (!res.ok) {
      throw await toApiError(res);
    }
    return (await res.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  getScenario(): Promise<ScenarioEnvelope> {
    return this.request<ScenarioEnvelope>("/scenario");
  }

  createSession(expertId: string): Promise<SessionView> {
    return this.post<SessionView>("/sessions", { expert_id: expertId });
  }

  getSession(sessionId: string): Promise<SessionView> {
    return this.request<SessionView>(`/sessions/${encodeURIComponent(sessionId)}`);
  }

  submitRanking(sessionId: string, ranks: Record<string, number>): Promise<SessionView> {
    return this.post<SessionView>(`/sessions/${encodeURIComponent(sessionId)}/ranking`, { ranks });
  }

  submitInterval(
    sessionId: string,
    hopId: string,
    questionId: string,
    lo: number,
    hi: number,
  ): Promise<SessionView> {
    return this.post<SessionView>(`/sessions/${encodeURIComponent(sessionId)}/responses`, {
      hop_id: hopId,
      question_id: questionId,
      lo,
      hi,
    });
  }

  async exportDataset(adminToken?: string, includePartial = false): Promise<unknown> {
    const headers: Record<string, string> = {};
    if (adminToken !== undefined) {
      headers["X-Admin-Token"] = adminToken;
    }
    const query = includePartial ? "?include_partial=true" : "";
    return this.request<unknown>(`/export${query}`, { headers });
  }
}
