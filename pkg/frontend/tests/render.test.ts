import { beforeEach, describe, expect, it, vi } from "vitest";

import { renderApp } from "../src/render.js";
import type { Handlers } from "../src/render.js";
import { initialState, withDesired, withFixes, withTree } from "../src/state.js";
import type { AppState } from "../src/state.js";
import type {
  ApplyResponse,
  FixesResponse,
  SymbolNode,
  TreeNode,
  TreeResponse,
} from "../src/types.js";
import { fixture, mount } from "./helpers.js";

let root: HTMLElement;
let handlers: Handlers;

beforeEach(() => {
  document.body.innerHTML = "";
  root = mount();
  handlers = {
    onToggleShowAll: vi.fn(),
    onStage: vi.fn(),
    onRetarget: vi.fn(),
    onRemove: vi.fn(),
    onClearStaged: vi.fn(),
    onCalculate: vi.fn(),
    onSelectFix: vi.fn(),
    onApply: vi.fn(),
    onDirectApply: vi.fn(),
    onRecalculate: vi.fn(),
  };
});

function baseState(): AppState {
  return withTree(initialState(), fixture<TreeResponse>("listing_tree_initial.json"));
}

function rowValue(symbol: string): string | null {
  const row = root.querySelector(`.row[data-symbol="${symbol}"]`);
  return row ? row.querySelector(".value")!.textContent : null;
}

function* fixtureSymbols(nodes: TreeNode[]): Generator<SymbolNode> {
  for (const node of nodes) {
    if (node.kind === "symbol") {
      yield node;
      if (node.children) yield* fixtureSymbols(node.children);
    } else {
      yield* fixtureSymbols(node.children);
    }
  }
}

describe("tree pane", () => {
  it("hides low-visibility symbols until show all options is on", () => {
    renderApp(root, baseState(), handlers);
    expect(root.querySelector('[data-symbol="64BIT"]')).toBeNull();
    expect(root.querySelector('[data-symbol="X86"]')).not.toBeNull();

    renderApp(root, { ...baseState(), showAll: true }, handlers);
    const hidden = root.querySelector('[data-symbol="64BIT"]');
    expect(hidden).not.toBeNull();
    expect(hidden!.querySelector(".badge.hidden")).not.toBeNull();
  });

  it("renders every value verbatim from the tree payload", () => {
    const payload = fixture<TreeResponse>("listing_tree_initial.json");
    renderApp(root, { ...baseState(), showAll: true }, handlers);
    const expected = [...fixtureSymbols(payload.tree)];
    for (const node of expected) {
      expect(rowValue(node.symbol)).toBe(node.value);
    }
    expect(root.querySelectorAll(".row.symbol")).toHaveLength(expected.length);
  });

  it("nests menus as collapsible sections", () => {
    renderApp(root, baseState(), handlers);
    const summaries = [...root.querySelectorAll("details.menu > summary")].map(
      (s) => s.textContent,
    );
    expect(summaries).toEqual(["Architectures", "Misc"]);
    const misc = [...root.querySelectorAll("details.menu")].find(
      (d) => d.querySelector("summary")!.textContent === "Misc",
    )!;
    expect(misc.querySelector('[data-symbol="EX"]')).not.toBeNull();
  });

  it("stages with the type-derived default target", () => {
    renderApp(root, baseState(), handlers);
    (root.querySelector('[data-symbol="X86"] .stage-btn') as HTMLButtonElement).click();
    expect(handlers.onStage).toHaveBeenCalledWith("X86", "y");
  });

  it("marks already staged symbols and disables their stage button", () => {
    const state = withDesired(baseState(), {
      generation: 1,
      desired: [{ symbol: "X86", target: "y" }],
    });
    renderApp(root, state, handlers);
    const btn = root.querySelector('[data-symbol="X86"] .stage-btn') as HTMLButtonElement;
    expect(btn.textContent).toBe("staged");
    expect(btn.disabled).toBe(true);
  });
});

describe("staged-changes pane", () => {
  it("disables calculate while nothing is staged", () => {
    renderApp(root, baseState(), handlers);
    expect((root.querySelector(".calc-btn") as HTMLButtonElement).disabled).toBe(true);
    expect(root.querySelector(".desired-pane .hint")).not.toBeNull();
  });

  it("gives bool entries a y/n selector only", () => {
    const state = withDesired(baseState(), {
      generation: 1,
      desired: [{ symbol: "64BIT", target: "y" }],
    });
    renderApp(root, state, handlers);
    const select = root.querySelector(".staged select") as HTMLSelectElement;
    expect([...select.options].map((o) => o.value)).toEqual(["y", "n"]);
    expect(select.value).toBe("y");
    expect((root.querySelector(".calc-btn") as HTMLButtonElement).disabled).toBe(false);
  });

  it("gives tristate entries all three levels and nonbool a text input", () => {
    const tree: TreeNode[] = [
      {
        kind: "symbol",
        symbol: "MODE",
        type: "tristate",
        prompt: "mode",
        visibility: "y",
        value: "n",
        choiceMember: false,
      },
      {
        kind: "symbol",
        symbol: "RING",
        type: "int",
        prompt: "ring",
        visibility: "y",
        value: "256",
        choiceMember: false,
      },
    ];
    const state: AppState = {
      ...initialState(),
      tree,
      desired: [
        { symbol: "MODE", target: "m" },
        { symbol: "RING", target: "2048" },
      ],
    };
    renderApp(root, state, handlers);
    const select = root.querySelector('.staged[data-symbol="MODE"] select') as HTMLSelectElement;
    expect([...select.options].map((o) => o.value)).toEqual(["y", "m", "n"]);
    const input = root.querySelector('.staged[data-symbol="RING"] input') as HTMLInputElement;
    expect(input.value).toBe("2048");
  });

  it("re-stages through the selector and removes through the button", () => {
    const state = withDesired(baseState(), {
      generation: 1,
      desired: [{ symbol: "64BIT", target: "y" }],
    });
    renderApp(root, state, handlers);
    const select = root.querySelector(".staged select") as HTMLSelectElement;
    select.value = "n";
    select.dispatchEvent(new Event("change"));
    expect(handlers.onRetarget).toHaveBeenCalledWith("64BIT", "n");
    (root.querySelector(".rm-btn") as HTMLButtonElement).click();
    expect(handlers.onRemove).toHaveBeenCalledWith("64BIT");
  });
});

describe("solutions pane", () => {
  it("renders at most one visible card with a selector over all fixes", () => {
    const state = withFixes(baseState(), fixture<FixesResponse>("media_fixes.json"));
    renderApp(root, state, handlers);
    const select = root.querySelector(".fix-select") as HTMLSelectElement;
    expect([...select.options].map((o) => o.textContent)).toEqual([
      "Fix 1 (4 symbols)",
      "Fix 2 (4 symbols)",
    ]);
    expect(root.querySelectorAll(".fix-card")).toHaveLength(1);
    const entries = [...root.querySelectorAll(".fix-entry")].map((e) => e.textContent);
    expect(entries[0]).toContain("MEDIA_SUPPORT");
    const desired = root.querySelector(".fix-entry .badge.desired")!.parentElement!;
    expect(desired.textContent).toContain("MEDIA_TUNER_SIMPLE");
  });

  it("switches cards through the selector", () => {
    const state = withFixes(baseState(), fixture<FixesResponse>("media_fixes.json"));
    renderApp(root, state, handlers);
    const select = root.querySelector(".fix-select") as HTMLSelectElement;
    select.value = "1";
    select.dispatchEvent(new Event("change"));
    expect(handlers.onSelectFix).toHaveBeenCalledWith(1);

    renderApp(root, { ...state, selectedFix: 1 }, handlers);
    expect(root.querySelector(".fix-card")!.textContent).toContain("MEDIA_SUBDRV_AUTOSELECT");
  });

  it("renders range entries as the constraint plus a witness", () => {
    const state = withFixes(baseState(), fixture<FixesResponse>("range_fixes.json"));
    renderApp(root, state, handlers);
    expect(root.querySelector(".fix-entry .constraint")!.textContent).toBe(
      "RING >= 1024 && RING <= 65536",
    );
    expect(root.querySelector(".fix-entry .witness")!.textContent).toBe(" e.g. 1025");
  });

  it("offers a one-click apply when the staging is directly applicable", () => {
    const state = withFixes(baseState(), fixture<FixesResponse>("listing_fixes_direct.json"));
    renderApp(root, state, handlers);
    expect(root.querySelector(".banner.direct")).not.toBeNull();
    (root.querySelector(".direct-apply-btn") as HTMLButtonElement).click();
    expect(handlers.onDirectApply).toHaveBeenCalled();
    expect(root.querySelector(".apply-btn")).toBeNull();
  });

  it("shows the timeout distinctly with a retry affordance", () => {
    const state = withFixes(baseState(), fixture<FixesResponse>("fixes_timeout_504.json"));
    renderApp(root, state, handlers);
    expect(root.querySelector(".banner.timeout")).not.toBeNull();
    expect(root.querySelector(".fix-card")).toBeNull();
    (root.querySelector(".retry-btn") as HTMLButtonElement).click();
    expect(handlers.onRecalculate).toHaveBeenCalled();
  });

  it("prompts for recalculation once the fixes go stale", () => {
    const state = {
      ...withFixes(baseState(), fixture<FixesResponse>("media_fixes.json")),
      staleFixes: true,
    };
    renderApp(root, state, handlers);
    expect(root.querySelector(".banner.stale")).not.toBeNull();
    expect(root.querySelector(".fix-card")).toBeNull();
    (root.querySelector(".recalc-btn") as HTMLButtonElement).click();
    expect(handlers.onRecalculate).toHaveBeenCalled();
  });

  it("badges forced entries and warns when a resolved fix was not fully applicable", () => {
    const report = fixture<ApplyResponse>("media_apply.json");
    const state: AppState = { ...baseState(), lastApply: report };
    renderApp(root, state, handlers);
    expect(root.querySelector(".banner.warn")).not.toBeNull();
    const rows = [...root.querySelectorAll(".report-entry")];
    const tuner = rows.find((r) => r.textContent!.includes("MEDIA_TUNER :="))!;
    expect(tuner.querySelector(".badge.forced")).not.toBeNull();
    const support = rows.find((r) => r.textContent!.includes("MEDIA_SUPPORT"))!;
    expect(support.querySelector(".badge.ok")).not.toBeNull();
    expect(root.querySelectorAll(".delta").length).toBe(report.deltas.length);
  });
});

describe("busy state", () => {
  it("disables every action while a request is in flight", () => {
    const state = {
      ...withFixes(baseState(), fixture<FixesResponse>("media_fixes.json")),
      desired: [{ symbol: "MEDIA_TUNER_SIMPLE", target: "y" }],
      busy: true,
    };
    renderApp(root, state, handlers);
    expect(root.querySelector("header .busy")).not.toBeNull();
    for (const btn of root.querySelectorAll("button")) {
      expect((btn as HTMLButtonElement).disabled).toBe(true);
    }
  });
});
