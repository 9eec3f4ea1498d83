import { describe, expect, it } from "vitest";

import { FetchLike, LoopClient } from "../src/api";
import { ApiError } from "../src/types";
import { MockLoopService } from "./mockService";

const TRIANGLE = "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n";

function jsonResponse(status: number, body: unknown, headers: Record<string, string> = {}) {
  const bag = new Map(Object.entries(headers).map(([k, v]) => [k.toLowerCase(), v]));
  return {
    ok: status >= 200 && status < 300,
    status,
    statusText: String(status),
    headers: { get: (name: string) => bag.get(name.toLowerCase()) ?? null },
    json: async () => body,
  } as unknown as Response;
}

describe("LoopClient", () => {
  it("creates a session via multipart upload", async () => {
    const service = new MockLoopService();
    const client = new LoopClient("", service.fetch, service.sleep);
    const session = await client.createSession(TRIANGLE, "tri.obj", {
      seed: 7,
      meshLabel: "tri",
    });
    expect(session.session_id).toMatch(/^mock-/);
    expect(session.state).toBe("computing");
    expect(service.session(session.session_id).seed).toBe(7);
    expect(service.session(session.session_id).meshLabel).toBe("tri");
  });

  it("surfaces error details from failed requests", async () => {
    const client = new LoopClient("", async () =>
      jsonResponse(404, { detail: "unknown session nope" }),
    );
    await expect(client.getSession("nope")).rejects.toThrowError(ApiError);
    await expect(client.getSession("nope")).rejects.toThrowError(/unknown session/);
  });

  it("polls pending iterations and honours retry-after", async () => {
    const responses = [
      jsonResponse(202, { detail: "computing" }, { "retry-after": "2" }),
      jsonResponse(202, { detail: "computing" }, { "retry-after": "1" }),
      jsonResponse(200, { index: 1, variants: [] }),
    ];
    const sleeps: number[] = [];
    const fetchImpl: FetchLike = async () => responses.shift()!;
    const client = new LoopClient("", fetchImpl, async (s) => {
      sleeps.push(s);
    });
    const payload = await client.waitForIteration("sid", 1);
    expect(payload.index).toBe(1);
    expect(sleeps).toEqual([2, 1]);
  });

  it("gives up after maxAttempts polls", async () => {
    const client = new LoopClient(
      "",
      async () => jsonResponse(202, { detail: "computing" }, { "retry-after": "1" }),
      async () => {},
    );
    await expect(
      client.waitForIteration("sid", 1, { maxAttempts: 3 }),
    ).rejects.toThrowError(/still pending/);
  });

  it("fetchIteration returns null while computing", async () => {
    const client = new LoopClient("", async () =>
      jsonResponse(202, { detail: "computing" }, { "retry-after": "1" }),
    );
    expect(await client.fetchIteration("sid", 1)).toBeNull();
  });

  it("de-duplicates concurrent rating submissions by iteration index", async () => {
    let posts = 0;
    let release!: () => void;
    const gate = new Promise<void>((resolve) => {
      release = resolve;
    });
    const fetchImpl: FetchLike = async () => {
      posts++;
      await gate;
      return jsonResponse(200, { session_id: "sid", state: "computing" });
    };
    const client = new LoopClient("", fetchImpl);
    const first = client.submitRatings("sid", 1, [3, 4, 5, 1]);
    const second = client.submitRatings("sid", 1, [3, 4, 5, 1]);
    expect(second).toBe(first);
    release();
    await first;
    expect(posts).toBe(1);
  });

  it("returns the recorded result for repeat submissions after success", async () => {
    let posts = 0;
    const fetchImpl: FetchLike = async () => {
      posts++;
      return jsonResponse(200, { session_id: "sid", state: "computing" });
    };
    const client = new LoopClient("", fetchImpl);
    await client.submitRatings("sid", 1, [3, 4, 5, 1]);
    const repeat = await client.submitRatings("sid", 1, [3, 4, 5, 1]);
    expect(repeat.state).toBe("computing");
    expect(posts).toBe(1);
    await client.submitRatings("sid", 2, [2, 2, 2, 2]);
    expect(posts).toBe(2);
  });

  it("allows retry after a failed submission", async () => {
    let posts = 0;
    const fetchImpl: FetchLike = async () => {
      posts++;
      if (posts === 1) return jsonResponse(500, { detail: "boom" });
      return jsonResponse(200, { session_id: "sid", state: "computing" });
    };
    const client = new LoopClient("", fetchImpl);
    await expect(client.submitRatings("sid", 1, [1, 1, 1, 1])).rejects.toThrowError(
      ApiError,
    );
    const retried = await client.submitRatings("sid", 1, [1, 1, 1, 1]);
    expect(retried.state).toBe("computing");
    expect(posts).toBe(2);
  });

  it("terminates with a reason", async () => {
    const service = new MockLoopService(0);
    const client = new LoopClient("", service.fetch, service.sleep);
    const session = await client.createSession(TRIANGLE, "tri.obj");
    await client.waitForIteration(session.session_id, 1);
    const ended = await client.terminate(session.session_id, "satisfied");
    expect(ended.state).toBe("terminated_satisfied");
    await expect(
      client.terminate(session.session_id, "reset"),
    ).rejects.toThrowError(/already terminal/);
  });
});
