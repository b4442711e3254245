import type { AskResponse, OntologyStats } from "./types.js";

export class ApiError extends Error {
  status: number | null;

  constructor(message: string, status: number | null = null) {
    super(message);
    this.status = status;
  }
}

/** Base URL from the ?api= query parameter, with a local default. */
export function resolveBaseUrl(search: string, fallback = "http://127.0.0.1:8000"): string {
  const params = new URLSearchParams(search.startsWith("?") ? search.slice(1) : search);
  const url = params.get("api") ?? fallback;
  return url.replace(/\/+$/, "");
}

/** Read-only client: the console only ever issues GETs and the
 * side-effect-free /api/ask POST. */
export class ApiClient {
  constructor(readonly baseUrl: string) {}

  async ask(question: string, k?: number): Promise<AskResponse> {
    const body: Record<string, unknown> = { question };
    if (k !== undefined) {
      body.k = k;
    }
    const res = await this.request("POST", "/api/ask", JSON.stringify(body));
    return res as AskResponse;
  }

  async ontologyStats(): Promise<OntologyStats> {
    const res = await this.request("GET", "/api/ontology/stats");
    return res as OntologyStats;
  }

  async health(): Promise<boolean> {
    try {
      const res = await this.request("GET", "/api/health");
      return (res as { status?: string }).status === "ok";
    } catch {
      return false;
    }
  }

  private async request(method: "GET" | "POST", path: string, body?: string): Promise<unknown> {
    let response: Response;
    try {
      response = await fetch(this.baseUrl + path, {
        method,
        headers: body === undefined ? undefined : { "Content-Type": "application/json" },
        body,
      });
    } catch (err) {
      throw new ApiError(`service unreachable at ${this.baseUrl} (${String(err)})`);
    }
    let payload: unknown = null;
    try {
      payload = await response.json();
    } catch {
      // non-JSON body; fall through to the status check
    }
    if (!response.ok) {
      const message =
        payload && typeof payload === "object" && "error" in payload
          ? String((payload as { error: unknown }).error)
          : `HTTP ${response.status}`;
      throw new ApiError(message, response.status);
    }
    return payload;
  }
}
