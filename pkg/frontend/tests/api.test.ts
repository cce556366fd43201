import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient, ApiError, StaleStateError } from "../src/api.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("ApiClient", () => {
  it("sends the version with guidelines actions", async () => {
    const fetchMock = vi.fn(async () => jsonResponse({ prompt: {}, summary: {} }));
    vi.stubGlobal("fetch", fetchMock);
    const client = new ApiClient("http://x");
    await client.guidelines("s1", 7, "label", "add_item");
    expect(fetchMock).toHaveBeenCalledTimes(1);
    const [url, init] = fetchMock.mock.calls[0] as unknown as [string, RequestInit];
    expect(url).toBe("http://x/api/sessions/s1/guidelines");
    expect(JSON.parse(init.body as string)).toEqual({
      action: "label",
      label: "add_item",
      version: 7,
    });
  });

  it("sends checked ids on commit", async () => {
    const fetchMock = vi.fn(async () => jsonResponse({ prompt: {}, summary: {} }));
    vi.stubGlobal("fetch", fetchMock);
    await new ApiClient().commit("s1", 3, ["a", "b"]);
    const [, init] = fetchMock.mock.calls[0] as unknown as [string, RequestInit];
    expect(JSON.parse(init.body as string)).toEqual({ checked: ["a", "b"], version: 3 });
  });

  it("raises StaleStateError on 409", async () => {
    vi.stubGlobal("fetch", vi.fn(async () => jsonResponse({ error: "stale" }, 409)));
    await expect(new ApiClient().expand("s1", 1)).rejects.toBeInstanceOf(StaleStateError);
  });

  it("raises ApiError with the server detail on 400", async () => {
    vi.stubGlobal("fetch", vi.fn(async () => jsonResponse({ error: "label must be non-empty" }, 400)));
    const failure = new ApiClient().guidelines("s1", 1, "label", " ");
    await expect(failure).rejects.toMatchObject({ status: 400, message: "label must be non-empty" });
  });

  it("builds the export url from the session id", () => {
    expect(new ApiClient("http://h:9").exportUrl("abc")).toBe(
      "http://h:9/api/sessions/abc/export",
    );
  });
});
