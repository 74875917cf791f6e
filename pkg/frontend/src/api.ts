import type {
  AlternativesResponse,
  AnalyzeResponse,
  FeedbackResponse,
  QueryResponse,
  SessionInfo,
} from "./types.js";

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
  }
}

/** Thin typed client for the /v1 session API. */
export class ApiClient {
  constructor(
    readonly baseUrl: string = "",
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}/v1${path}`, {
      method,
      headers: body === undefined ? {} : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json().catch(() => ({}));
    if (!response.ok) {
      const detail =
        typeof payload === "object" && payload !== null && "detail" in payload
          ? String((payload as { detail: unknown }).detail)
          : response.statusText;
      throw new ApiError(response.status, detail);
    }
    return payload as T;
  }

  createSession(seedEasy: string[], seedHard: string[], threshold?: number) {
    return this.request<SessionInfo>("POST", "/sessions", {
      seed_easy: seedEasy,
      seed_hard: seedHard,
      ...(threshold === undefined ? {} : { threshold }),
    });
  }

  getSession(sessionId: string) {
    return this.request<SessionInfo>("GET", `/sessions/${sessionId}`);
  }

  analyze(sessionId: string, text: string) {
    return this.request<AnalyzeResponse>("POST", `/sessions/${sessionId}/analyze`, {
      text,
    });
  }

  alternatives(sessionId: string, word: string) {
    return this.request<AlternativesResponse>(
      "GET",
      `/sessions/${sessionId}/alternatives?word=${encodeURIComponent(word)}`,
    );
  }

  postImplicit(sessionId: string, word: string, action: "ignore" | "substitute", chosenWord?: string) {
    return this.request<FeedbackResponse>(
      "POST",
      `/sessions/${sessionId}/feedback/implicit`,
      { word, action, ...(chosenWord === undefined ? {} : { chosen_word: chosenWord }) },
    );
  }

  postExplicit(sessionId: string, word: string, isHard: boolean) {
    return this.request<FeedbackResponse>(
      "POST",
      `/sessions/${sessionId}/feedback/explicit`,
      { word, is_hard: isHard },
    );
  }

  nextQuery(sessionId: string) {
    return this.request<QueryResponse>("GET", `/sessions/${sessionId}/query`);
  }

  updatePreferences(
    sessionId: string,
    update: { threshold?: number; add_easy?: string[]; add_hard?: string[] },
  ) {
    return this.request<FeedbackResponse & { threshold: number }>(
      "PATCH",
      `/sessions/${sessionId}/preferences`,
      update,
    );
  }
}
