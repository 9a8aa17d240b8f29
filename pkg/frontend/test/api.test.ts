import { describe, expect, it, vi } from "vitest";

import { ApiError, Client } from "../src/api.js";

function fakeFetch(handler: (url: string, init?: RequestInit) => unknown) {
  return vi.fn(async (url: string, init?: RequestInit) => {
    const body = handler(url, init);
    return {
      ok: true,
      status: 200,
      json: async () => body,
      text: async () => JSON.stringify(body),
    } as Response;
  }) as unknown as typeof fetch;
}

describe("client", () => {
  it("posts selection documents to the session endpoints", async () => {
    const calls: { url: string; body: unknown }[] = [];
    const client = new Client("", fakeFetch((url, init) => {
      calls.push({ url, body: JSON.parse(String(init?.body ?? "null")) });
      return { env: {}, env_doc: { paths: [] }, ambient: false,
               highlights: [], marked_source: "" };
    }));
    await client.bwd("abc", { paths: [{ path: [{ cell: [2, 2] }] }] });
    expect(calls[0].url).toBe("/session/abc/bwd");
    expect(calls[0].body).toEqual({
      selection: { paths: [{ path: [{ cell: [2, 2] }] }] },
      view: undefined,
    });
  });

  it("unwraps the leq flag", async () => {
    const client = new Client("", fakeFetch(() => ({ leq: true })));
    await expect(client.leq("s", { paths: [] }, { paths: [] })).resolves.toBe(true);
  });

  it("raises ApiError with the response body on failure", async () => {
    const failing = vi.fn(async () => ({
      ok: false, status: 422,
      json: async () => ({}),
      text: async () => "parse error",
    } as Response)) as unknown as typeof fetch;
    const client = new Client("", failing);
    await expect(client.openExample("x")).rejects.toThrowError(ApiError);
  });

  it("aborts the previous request on the same channel (latest wins)", async () => {
    const signals: (AbortSignal | undefined)[] = [];
    const never = new Promise<Response>(() => undefined);
    const fetcher = vi.fn((url: string, init?: RequestInit) => {
      signals.push(init?.signal ?? undefined);
      if (signals.length === 1) return never;  // first request hangs
      return Promise.resolve({
        ok: true, status: 200,
        json: async () => ({ output: { k: "nil" }, output_doc: { paths: [] } }),
        text: async () => "",
      } as Response);
    }) as unknown as typeof fetch;
    const client = new Client("", fetcher);
    void client.fwd("s", { paths: [] }).catch(() => undefined);
    await client.fwd("s", { paths: [] });
    expect(signals).toHaveLength(2);
    expect(signals[0]?.aborted).toBe(true);
    expect(signals[1]?.aborted).toBe(false);
  });

  it("uses separate channels per operation", async () => {
    const signals: (AbortSignal | undefined)[] = [];
    const client = new Client("", fakeFetch((url, init) => {
      signals.push((init as RequestInit | undefined)?.signal ?? undefined);
      return { output: { k: "nil" }, output_doc: { paths: [] },
               env: {}, env_doc: { paths: [] }, ambient: false,
               highlights: [], marked_source: "" };
    }));
    await client.fwd("s", { paths: [] });
    await client.bwd("s", { paths: [] });
    expect(signals[0]?.aborted).toBe(false);
    expect(signals[1]?.aborted).toBe(false);
  });
});
