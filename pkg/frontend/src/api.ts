/** Typed client for the analysis service.
 *
 * Every analysis request goes through a per-channel latest-wins gate: a
 * new request for the same channel aborts the one in flight, so stale
 * responses never overwrite fresh highlights.
 */

import type {
  BwdResponse, FwdResponse, HighlightSpan, LinkResponse, SelectionDoc,
  SessionInfo,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export class Client {
  private inflight = new Map<string, AbortController>();

  constructor(private base: string = "", private fetcher: typeof fetch = fetch) {}

  private async post<T>(path: string, body: unknown, channel?: string): Promise<T> {
    let signal: AbortSignal | undefined;
    if (channel !== undefined) {
      this.inflight.get(channel)?.abort();
      const controller = new AbortController();
      this.inflight.set(channel, controller);
      signal = controller.signal;
    }
    const response = await this.fetcher(this.base + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
      signal,
    });
    if (!response.ok) {
      const detail = await response.text();
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  async examples(): Promise<{ name: string; kind: string }[]> {
    const response = await this.fetcher(this.base + "/examples");
    if (!response.ok) throw new ApiError(response.status, await response.text());
    return (await response.json()).examples;
  }

  openExample(name: string, colors?: number): Promise<SessionInfo> {
    return this.post("/session", { example: name, colors });
  }

  bwd(sid: string, selection: SelectionDoc, view?: string): Promise<BwdResponse> {
    return this.post(`/session/${sid}/bwd`, { selection, view }, `bwd:${view ?? ""}`);
  }

  fwd(sid: string, selection: SelectionDoc, highlights?: HighlightSpan[],
      view?: string): Promise<FwdResponse> {
    return this.post(`/session/${sid}/fwd`, { selection, highlights, view },
                     `fwd:${view ?? ""}`);
  }

  fwdDual(sid: string, selection: SelectionDoc, view?: string): Promise<FwdResponse> {
    return this.post(`/session/${sid}/fwd-dual`, { selection, view },
                     `fwd-dual:${view ?? ""}`);
  }

  bwdDual(sid: string, selection: SelectionDoc, view?: string): Promise<BwdResponse> {
    return this.post(`/session/${sid}/bwd-dual`, { selection, view },
                     `bwd-dual:${view ?? ""}`);
  }

  link(sid: string, selection: SelectionDoc, view: string, to?: string): Promise<LinkResponse> {
    return this.post(`/session/${sid}/link`, { selection, view, to }, "link");
  }

  leq(sid: string, a: SelectionDoc, b: SelectionDoc, view?: string): Promise<boolean> {
    return this.post<{ leq: boolean }>(`/session/${sid}/leq`, { a, b, view })
      .then((r) => r.leq);
  }
}
