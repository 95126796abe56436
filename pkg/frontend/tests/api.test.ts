import { beforeEach, describe, expect, it } from "vitest";

import {
  ApiError,
  StaleGenerationError,
  applyFix,
  calculateFixes,
  fetchConfig,
  fetchDesired,
  fetchTree,
  putConfig,
  removeDesired,
  replaceDesired,
  stageDesired,
} from "../src/api.js";
import type { FixesResponse, TreeResponse } from "../src/types.js";
import { FakeServer, fixture, fixtureText } from "./helpers.js";

let server: FakeServer;

function script(...exchanges: ConstructorParameters<typeof FakeServer>[0]): void {
  server = new FakeServer(exchanges);
  server.install();
}

beforeEach(() => {
  server = new FakeServer([]);
  server.install();
});

describe("request shapes", () => {
  it("GETs the tree", async () => {
    const payload = fixture<TreeResponse>("listing_tree_initial.json");
    script({ method: "GET", path: "/tree", response: payload });
    const tree = await fetchTree();
    expect(tree).toEqual(payload);
    server.assertDone();
  });

  it("stages a desired change with a set body", async () => {
    const payload = fixture("listing_desired_staged.json");
    script({
      method: "POST",
      path: "/desired",
      body: { set: { symbol: "64BIT", target: "y" } },
      response: payload,
    });
    expect(await stageDesired("64BIT", "y")).toEqual(payload);
    server.assertDone();
  });

  it("removes and replaces staged entries", async () => {
    const drained = fixture("listing_desired_removed.json");
    script(
      { method: "POST", path: "/desired", body: { remove: "X86" }, response: drained },
      { method: "POST", path: "/desired", body: { replace: [] }, response: drained },
    );
    await removeDesired("X86");
    await replaceDesired([]);
    server.assertDone();
  });

  it("fetches the staged list", async () => {
    const payload = fixture("listing_desired_initial.json");
    script({ method: "GET", path: "/desired", response: payload });
    expect(await fetchDesired()).toEqual(payload);
  });

  it("applies a fix by index and generation", async () => {
    const payload = fixture("listing_apply.json");
    script({
      method: "POST",
      path: "/apply",
      body: { fix: 0, generation: 1 },
      response: payload,
    });
    expect(await applyFix(0, 1)).toEqual(payload);
  });

  it("reads config text together with its generation header", async () => {
    const text = fixtureText("listing_config_before_direct.txt");
    script({
      method: "GET",
      path: "/config",
      response: text,
      headers: { "X-Generation": "1" },
    });
    expect(await fetchConfig()).toEqual({ generation: 1, text });
  });

  it("PUTs config text as plain text", async () => {
    script({
      method: "PUT",
      path: "/config",
      body: "CONFIG_X86=y\n",
      response: fixture("listing_put_config.json"),
    });
    const out = await putConfig("CONFIG_X86=y\n");
    expect(out.valid).toBe(true);
  });
});

describe("error mapping", () => {
  it("unwraps the error field with the HTTP status", async () => {
    script({
      method: "POST",
      path: "/fixes",
      status: 422,
      response: { error: "no desired changes staged" },
    });
    const err = await calculateFixes().catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(422);
    expect((err as ApiError).message).toBe("no desired changes staged");
  });

  it("maps a 409 apply onto StaleGenerationError", async () => {
    script({
      method: "POST",
      path: "/apply",
      status: 409,
      response: fixture("apply_stale_409.json"),
    });
    const err = await applyFix(0, 1).catch((e: unknown) => e);
    expect(err).toBeInstanceOf(StaleGenerationError);
    expect((err as ApiError).message).toBe("stale generation 1; session is at 2");
  });

  it("returns the partial payload on a 504 timeout instead of throwing", async () => {
    const payload = fixture<FixesResponse>("fixes_timeout_504.json");
    script({ method: "POST", path: "/fixes", status: 504, response: payload });
    const out = await calculateFixes();
    expect(out.timedOut).toBe(true);
    expect(out.fixes).toEqual([]);
  });
});
