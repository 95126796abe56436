/**
 * Full workflow tests driven through the DOM against pinned server
 * responses. The FakeServer asserts the exact request protocol; the
 * final assertions compare every rendered value against the captured
 * tree payloads, so a client that computed anything on its own would
 * diverge from the fixtures and fail.
 */

import { beforeEach, describe, expect, it } from "vitest";

import { Controller } from "../src/main.js";
import type { SymbolNode, TreeNode, TreeResponse } from "../src/types.js";
import { FakeServer, fixture, fixtureText, flush, mount } from "./helpers.js";
import type { Exchange } from "./helpers.js";

let root: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = "";
  root = mount();
});

function* symbols(nodes: TreeNode[]): Generator<SymbolNode> {
  for (const node of nodes) {
    if (node.kind === "symbol") {
      yield node;
      if (node.children) yield* symbols(node.children);
    } else {
      yield* symbols(node.children);
    }
  }
}

function click(selector: string): void {
  const el = root.querySelector(selector);
  expect(el, selector).not.toBeNull();
  (el as HTMLElement).click();
}

async function boot(server: FakeServer): Promise<Controller> {
  server.install();
  const controller = new Controller(root);
  await controller.start();
  await flush();
  return controller;
}

function bootExchanges(): Exchange[] {
  return [
    { method: "GET", path: "/tree", response: fixture("listing_tree_initial.json") },
    { method: "GET", path: "/desired", response: fixture("listing_desired_initial.json") },
  ];
}

/** Rendered rows must be exactly the payload's symbols with its values. */
function expectTreeMatches(payload: TreeResponse): void {
  const expected = [...symbols(payload.tree)];
  expect(root.querySelectorAll(".row.symbol")).toHaveLength(expected.length);
  for (const node of expected) {
    const row = root.querySelector(`.row[data-symbol="${node.symbol}"]`);
    expect(row, node.symbol).not.toBeNull();
    expect(row!.querySelector(".value")!.textContent).toBe(node.value);
  }
}

function showAll(): void {
  const toggle = root.querySelector(".show-all") as HTMLInputElement;
  toggle.checked = true;
  toggle.dispatchEvent(new Event("change"));
}

describe("staged conflict round trip", () => {
  it("stages 64BIT=y under X86=n, calculates and applies the first fix", async () => {
    const server = new FakeServer([
      ...bootExchanges(),
      {
        method: "POST",
        path: "/desired",
        body: { set: { symbol: "64BIT", target: "y" } },
        response: fixture("listing_desired_staged.json"),
      },
      { method: "POST", path: "/fixes", response: fixture("listing_fixes.json") },
      {
        method: "POST",
        path: "/apply",
        body: { fix: 0, generation: 1 },
        response: fixture("listing_apply.json"),
      },
      { method: "GET", path: "/tree", response: fixture("listing_tree_after.json") },
      { method: "GET", path: "/desired", response: fixture("listing_desired_after.json") },
    ]);
    await boot(server);

    // 64BIT is invisible while X86=n; surface it first
    showAll();
    expect(root.querySelector('[data-symbol="64BIT"] .value')!.textContent).toBe("n");

    click('[data-symbol="64BIT"] .stage-btn');
    await flush();
    expect(root.querySelector('.staged[data-symbol="64BIT"]')).not.toBeNull();

    click(".calc-btn");
    await flush();
    expect(root.querySelector(".fix-card")!.textContent).toContain("X86");
    expect(root.querySelector(".fix-card")!.textContent).toContain("64BIT");

    click(".apply-btn");
    await flush();

    // the tree now shows the fix landed, value for value from the fresh payload
    const after = fixture<TreeResponse>("listing_tree_after.json");
    expectTreeMatches(after);
    expect(root.querySelector('[data-symbol="X86"] .value')!.textContent).toBe("y");
    expect(root.querySelector('[data-symbol="64BIT"] .value')!.textContent).toBe("y");

    // staged pane drained, success banner, deltas listed
    expect(root.querySelector(".desired-pane .hint")).not.toBeNull();
    expect(root.querySelector(".banner.ok")).not.toBeNull();
    expect(root.querySelectorAll(".delta")).toHaveLength(2);
    expect(root.querySelector(".gen")!.textContent).toBe("generation 2");

    server.assertDone();
  });
});

describe("directly applicable round trip", () => {
  it("lands consistent staged values through a config PUT", async () => {
    const before = fixtureText("listing_config_before_direct.txt");
    const server = new FakeServer([
      ...bootExchanges(),
      {
        method: "POST",
        path: "/desired",
        body: { set: { symbol: "X86", target: "y" } },
        response: fixture("listing_desired_staged_x86.json"),
      },
      { method: "POST", path: "/fixes", response: fixture("listing_fixes_direct.json") },
      {
        method: "GET",
        path: "/config",
        response: before,
        headers: { "X-Generation": "1" },
      },
      {
        method: "PUT",
        path: "/config",
        body: before.replace("# CONFIG_X86 is not set", "CONFIG_X86=y"),
        response: fixture("listing_put_config.json"),
      },
      { method: "GET", path: "/tree", response: fixture("listing_tree_after_direct.json") },
      {
        method: "POST",
        path: "/desired",
        body: { remove: "X86" },
        response: fixture("listing_desired_removed.json"),
      },
      { method: "GET", path: "/desired", response: fixture("listing_desired_removed.json") },
    ]);
    await boot(server);

    click('[data-symbol="X86"] .stage-btn');
    await flush();
    click(".calc-btn");
    await flush();
    expect(root.querySelector(".banner.direct")).not.toBeNull();

    click(".direct-apply-btn");
    await flush();

    expectTreeMatches(fixture<TreeResponse>("listing_tree_after_direct.json"));
    expect(root.querySelector('[data-symbol="X86"] .value')!.textContent).toBe("y");
    expect(root.querySelector(".desired-pane .hint")).not.toBeNull();

    server.assertDone();
  });
});

describe("stale fixes", () => {
  it("prompts for recalculation after a 409 and recovers", async () => {
    const server = new FakeServer([
      ...bootExchanges(),
      {
        method: "POST",
        path: "/desired",
        body: { set: { symbol: "64BIT", target: "y" } },
        response: fixture("listing_desired_staged.json"),
      },
      { method: "POST", path: "/fixes", response: fixture("listing_fixes.json") },
      // another client advanced the session; this apply is stale
      {
        method: "POST",
        path: "/apply",
        body: { fix: 0, generation: 1 },
        status: 409,
        response: fixture("apply_stale_409.json"),
      },
      { method: "POST", path: "/fixes", response: fixture("listing_fixes_recalculated.json") },
    ]);
    await boot(server);

    showAll();
    click('[data-symbol="64BIT"] .stage-btn');
    await flush();
    click(".calc-btn");
    await flush();
    click(".apply-btn");
    await flush();

    expect(root.querySelector(".banner.stale")).not.toBeNull();
    expect(root.querySelector(".fix-card")).toBeNull();

    click(".recalc-btn");
    await flush();
    expect(root.querySelector(".banner.stale")).toBeNull();
    const select = root.querySelector(".fix-select") as HTMLSelectElement;
    expect([...select.options].map((o) => o.textContent)).toEqual(["Fix 1 (3 symbols)"]);
    expect(root.querySelector(".fix-card")!.textContent).toContain("ARM");

    server.assertDone();
  });
});

describe("timed-out calculation", () => {
  it("shows the partial state distinctly and retries", async () => {
    const server = new FakeServer([
      ...bootExchanges(),
      {
        method: "POST",
        path: "/desired",
        body: { set: { symbol: "64BIT", target: "y" } },
        response: fixture("listing_desired_staged.json"),
      },
      {
        method: "POST",
        path: "/fixes",
        status: 504,
        response: fixture("fixes_timeout_504.json"),
      },
      { method: "POST", path: "/fixes", response: fixture("listing_fixes.json") },
    ]);
    await boot(server);

    showAll();
    click('[data-symbol="64BIT"] .stage-btn');
    await flush();
    click(".calc-btn");
    await flush();

    expect(root.querySelector(".banner.timeout")).not.toBeNull();
    expect(root.querySelector(".fix-card")).toBeNull();

    click(".retry-btn");
    await flush();
    expect(root.querySelector(".banner.timeout")).toBeNull();
    expect(root.querySelector(".fix-card")!.textContent).toContain("64BIT");

    server.assertDone();
  });
});
