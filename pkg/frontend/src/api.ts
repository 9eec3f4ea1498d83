/** HTTP client for the loop service.
 *
 * The service is the single source of truth: this client never caches
 * session state, it only de-duplicates rating submissions so that a
 * double-click (or a click racing a slow response) produces exactly one
 * server-side rating record per iteration index.
 */

import {
  ApiError,
  CreateOptions,
  IterationPayload,
  SCHEMA_VERSION,
  SessionPayload,
  StateResponse,
  TerminateReason,
} from "./types";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;
export type SleepLike = (seconds: number) => Promise<void>;

const defaultSleep: SleepLike = (seconds) =>
  new Promise((resolve) => setTimeout(resolve, seconds * 1000));

export interface PollOptions {
  /** Give up after this many 202 responses (default 600). */
  maxAttempts?: number;
}

async function errorDetail(response: Response): Promise<string> {
  try {
    const body = await response.json();
    if (typeof body?.detail === "string") return body.detail;
    return JSON.stringify(body);
  } catch {
    return response.statusText || "request failed";
  }
}

export class LoopClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;
  private readonly sleep: SleepLike;
  /** One submission promise per "sessionId:index"; successes are kept. */
  private readonly submissions = new Map<string, Promise<StateResponse>>();

  constructor(baseUrl = "", fetchImpl?: FetchLike, sleep?: SleepLike) {
    this.base = baseUrl.replace(/\/$/, "");
    this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
    this.sleep = sleep ?? defaultSleep;
  }

  async createSession(
    mesh: Blob | string,
    filename: string,
    options: CreateOptions = {},
  ): Promise<SessionPayload> {
    const form = new FormData();
    const blob = typeof mesh === "string" ? new Blob([mesh]) : mesh;
    form.append("mesh", blob, filename);
    if (options.seed !== undefined) form.append("seed", String(options.seed));
    if (options.maxIterations !== undefined) {
      form.append("max_iterations", String(options.maxIterations));
    }
    if (options.meshLabel) form.append("mesh_label", options.meshLabel);
    const response = await this.fetchImpl(`${this.base}/sessions`, {
      method: "POST",
      body: form,
    });
    if (response.status !== 201) {
      throw new ApiError(response.status, await errorDetail(response));
    }
    return (await response.json()) as SessionPayload;
  }

  async getSession(sessionId: string): Promise<SessionPayload> {
    const response = await this.fetchImpl(`${this.base}/sessions/${sessionId}`);
    if (!response.ok) {
      throw new ApiError(response.status, await errorDetail(response));
    }
    return (await response.json()) as SessionPayload;
  }

  /** Single probe; resolves to null while the iteration is still computing. */
  async fetchIteration(
    sessionId: string,
    index: number,
  ): Promise<IterationPayload | null> {
    const response = await this.fetchImpl(
      `${this.base}/sessions/${sessionId}/iterations/${index}`,
    );
    if (response.status === 202) return null;
    if (!response.ok) {
      throw new ApiError(response.status, await errorDetail(response));
    }
    return (await response.json()) as IterationPayload;
  }

  /** Poll until the iteration is ready, honouring Retry-After. */
  async waitForIteration(
    sessionId: string,
    index: number,
    options: PollOptions = {},
  ): Promise<IterationPayload> {
    const maxAttempts = options.maxAttempts ?? 600;
    for (let attempt = 0; attempt < maxAttempts; attempt++) {
      const response = await this.fetchImpl(
        `${this.base}/sessions/${sessionId}/iterations/${index}`,
      );
      // 202 counts as "ok" to fetch, so the pending check must come first
      if (response.status === 202) {
        const retryAfter = Number(response.headers.get("retry-after") ?? "1");
        await this.sleep(Number.isFinite(retryAfter) ? retryAfter : 1);
        continue;
      }
      if (!response.ok) {
        throw new ApiError(response.status, await errorDetail(response));
      }
      return (await response.json()) as IterationPayload;
    }
    throw new ApiError(202, `iteration ${index} still pending after ${maxAttempts} polls`);
  }

  /**
   * Submit the four ratings for one iteration.
   *
   * De-duplicated by iteration index: concurrent calls share one request,
   * and calls after a success return the recorded result without a new
   * request. A failed submission clears the slot so it can be retried.
   */
  submitRatings(
    sessionId: string,
    iterationIndex: number,
    ratings: number[],
  ): Promise<StateResponse> {
    const key = `${sessionId}:${iterationIndex}`;
    const pending = this.submissions.get(key);
    if (pending) return pending;
    const request = this.postRatings(sessionId, ratings).catch((error) => {
      this.submissions.delete(key);
      throw error;
    });
    this.submissions.set(key, request);
    return request;
  }

  private async postRatings(
    sessionId: string,
    ratings: number[],
  ): Promise<StateResponse> {
    const response = await this.fetchImpl(
      `${this.base}/sessions/${sessionId}/ratings`,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ schema_version: SCHEMA_VERSION, ratings }),
      },
    );
    if (!response.ok) {
      throw new ApiError(response.status, await errorDetail(response));
    }
    return (await response.json()) as StateResponse;
  }

  async terminate(
    sessionId: string,
    reason: TerminateReason,
  ): Promise<StateResponse> {
    const response = await this.fetchImpl(
      `${this.base}/sessions/${sessionId}/terminate`,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ schema_version: SCHEMA_VERSION, reason }),
      },
    );
    if (!response.ok) {
      throw new ApiError(response.status, await errorDetail(response));
    }
    return (await response.json()) as StateResponse;
  }
}
