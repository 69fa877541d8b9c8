import type {
  DesignResponse,
  ErrorBody,
  GradeResponse,
  HealthResponse,
  MutationResponse,
  RecommendationsResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public line?: number,
  ) {
    super(message);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** Thin typed client for /api/v1. Every mutation carries the caller's
 * revision; a 409 surfaces as ApiError with the server's conflict code. */
export class ApiClient {
  constructor(
    private baseUrl: string = "/api/v1",
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (!response.ok) {
      let error: ErrorBody = { code: "unknown", message: response.statusText };
      try {
        error = (await response.json()) as ErrorBody;
      } catch {
        // non-JSON error body; keep the fallback
      }
      throw new ApiError(response.status, error.code, error.message, error.line);
    }
    return (await response.json()) as T;
  }

  health(): Promise<HealthResponse> {
    return this.request("GET", "/health");
  }

  createSession(design?: string): Promise<DesignResponse> {
    return this.request("POST", "/sessions", design === undefined ? {} : { design });
  }

  getDesign(sessionId: string): Promise<DesignResponse> {
    return this.request("GET", `/sessions/${sessionId}/design`);
  }

  getRecommendations(
    sessionId: string,
    kind: "element" | "interaction",
    limit: number,
  ): Promise<RecommendationsResponse> {
    return this.request(
      "GET",
      `/sessions/${sessionId}/recommendations?kind=${kind}&limit=${limit}`,
    );
  }

  applyRecommendation(
    sessionId: string,
    kind: "element" | "interaction",
    recommendationId: string,
    revision: number,
  ): Promise<MutationResponse> {
    const endpoint = kind === "element" ? "elements" : "interactions";
    return this.request("POST", `/sessions/${sessionId}/${endpoint}`, {
      revision,
      recommendation_id: recommendationId,
    });
  }

  removeElement(sessionId: string, name: string, revision: number): Promise<MutationResponse> {
    return this.request(
      "DELETE",
      `/sessions/${sessionId}/elements/${encodeURIComponent(name)}?revision=${revision}`,
    );
  }

  removeInteraction(
    sessionId: string,
    index: number,
    revision: number,
  ): Promise<MutationResponse> {
    return this.request(
      "DELETE",
      `/sessions/${sessionId}/interactions/${index}?revision=${revision}`,
    );
  }

  grade(source: string, rubric: string): Promise<GradeResponse> {
    return this.request("POST", "/grade", { source, rubric });
  }
}
