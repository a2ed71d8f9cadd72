/**
 * Thin typed client for the question-answering HTTP API.
 *
 * The only backend contact in the whole front end goes through this
 * module: POST /api/v1/question and POST /api/v1/calculate. The fetch
 * implementation is injectable so tests never touch the network.
 */

export type Lang = "en" | "hi" | "formula";

export interface IdentifierInfo {
  symbol: string;
  label: string;
  known_value: number | null;
  unit: string | null;
}

export type AnswerStatus = "ok" | "needs-values" | "not-found" | "unparseable";

export interface AnswerPayload {
  status: AnswerStatus;
  formula_latex: string | null;
  identifiers: IdentifierInfo[];
  qid: string | null;
  message: string | null;
}

export interface CalculateRequest {
  qid?: string;
  formula?: string;
  bindings: Record<string, number>;
}

export interface CalculateOk {
  status: "ok";
  value: number;
  solved_for: string | null;
  effective_bindings: Record<string, number>;
  constant_sources: Record<string, string>;
}

export interface CalculateNeedsValues {
  status: "needs-values";
  missing: string[];
  message: string;
}

export interface CalculateError {
  status: "error";
  message: string;
}

export type CalculateResponse = CalculateOk | CalculateNeedsValues | CalculateError;

// Structural subset of the fetch Response we actually use; lets tests
// hand back plain objects.
export interface HttpResponse {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}

export type FetchLike = (url: string, init: {
  method: string;
  headers: Record<string, string>;
  body: string;
}) => Promise<HttpResponse>;

export class ApiError extends Error {
  status: number;

  constructor(status: number, message: string) {
    super(message);
    this.name = "ApiError";
    this.status = status;
  }
}

export class ApiClient {
  private baseUrl: string;
  private fetchFn: FetchLike;

  constructor(baseUrl: string, fetchFn?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    const fallback = (typeof fetch === "function" ? fetch : undefined) as FetchLike | undefined;
    const chosen = fetchFn ?? fallback;
    if (!chosen) throw new Error("no fetch implementation available");
    this.fetchFn = chosen;
  }

  private async post(path: string, body: unknown): Promise<HttpResponse> {
    return this.fetchFn(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  async question(text: string, lang: Lang): Promise<AnswerPayload> {
    const resp = await this.post("/api/v1/question", { text, lang });
    if (!resp.ok) {
      throw new ApiError(resp.status, `question request failed (${resp.status})`);
    }
    return (await resp.json()) as AnswerPayload;
  }

  /**
   * Run a calculation. Domain misses (unknown qid, bad formula) come
   * back from the service as HTTP 400 with {"status": "error"}; those
   * are part of the response union, not exceptions. Anything else
   * non-2xx throws.
   */
  async calculate(req: CalculateRequest): Promise<CalculateResponse> {
    const body: Record<string, unknown> = { bindings: req.bindings };
    if (req.qid !== undefined) body.qid = req.qid;
    if (req.formula !== undefined) body.formula = req.formula;
    const resp = await this.post("/api/v1/calculate", body);
    if (resp.ok) {
      return (await resp.json()) as CalculateResponse;
    }
    if (resp.status === 400) {
      const payload = (await resp.json()) as { status?: string; message?: string };
      if (payload.status === "error") {
        return { status: "error", message: payload.message ?? "bad request" };
      }
    }
    throw new ApiError(resp.status, `calculate request failed (${resp.status})`);
  }
}
