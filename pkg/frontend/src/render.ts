/**
 * DOM rendering for the configurator.
 *
 * renderApp projects the current AppState into the page; it owns no
 * state of its own and derives every displayed value from server
 * payloads held in the state. Each call rebuilds the three panes:
 * feature tree on top, staged changes bottom left, solutions bottom
 * right (Calculate Fixes lives with the staged pane).
 */

import type { AppState } from "./state.js";
import {
  defaultTarget,
  isHidden,
  selectedCard,
  targetOptions,
  symbolIndex,
} from "./state.js";
import type {
  ApplyEntry,
  ApplyResponse,
  FixCard,
  FixEntry,
  SymbolNode,
  TreeNode,
} from "./types.js";

export interface Handlers {
  onToggleShowAll(show: boolean): void;
  onStage(symbol: string, target: string): void;
  onRetarget(symbol: string, target: string): void;
  onRemove(symbol: string): void;
  onClearStaged(): void;
  onCalculate(): void;
  onSelectFix(index: number): void;
  onApply(): void;
  onDirectApply(): void;
  onRecalculate(): void;
}

type Child = Node | string;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: Child[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

function button(label: string, cls: string, disabled: boolean, onClick: () => void): HTMLButtonElement {
  const b = el("button", { class: cls }, label);
  b.disabled = disabled;
  b.addEventListener("click", onClick);
  return b;
}

// ---------------------------------------------------------------------------
// tree pane

function valueBadge(value: string): HTMLElement {
  const cls = value === "y" ? "v-y" : value === "m" ? "v-m" : value === "n" ? "v-n" : "v-other";
  return el("span", { class: `value ${cls}` }, value);
}

function symbolRow(node: SymbolNode, state: AppState, h: Handlers): HTMLElement {
  const row = el(
    "div",
    { class: "row symbol", "data-symbol": node.symbol },
    el("span", { class: "prompt" }, node.prompt || node.symbol),
    el("code", { class: "name" }, node.symbol),
    el("span", { class: "badge type" }, node.type),
    valueBadge(node.value),
  );
  if (isHidden(node)) {
    row.append(el("span", { class: "badge hidden" }, "hidden"));
  }
  const staged = state.desired.some((d) => d.symbol === node.symbol);
  row.append(
    button(staged ? "staged" : "stage", "stage-btn", staged || state.busy, () =>
      h.onStage(node.symbol, defaultTarget(node)),
    ),
  );
  return row;
}

function renderNodes(nodes: TreeNode[], state: AppState, h: Handlers): HTMLElement[] {
  const out: HTMLElement[] = [];
  for (const node of nodes) {
    if (node.kind === "symbol") {
      if (isHidden(node) && !state.showAll) {
        continue;
      }
      out.push(symbolRow(node, state, h));
      if (node.children) {
        out.push(el("div", { class: "indent" }, ...renderNodes(node.children, state, h)));
      }
    } else if (node.kind === "menu") {
      const details = el("details", { class: "menu", open: "" });
      details.append(el("summary", {}, node.prompt));
      details.append(el("div", { class: "indent" }, ...renderNodes(node.children, state, h)));
      out.push(details);
    } else {
      const details = el("details", { class: "choice", open: "" });
      details.append(
        el("summary", {}, node.prompt || "choice", el("span", { class: "badge type" }, `choice ${node.type}`)),
      );
      details.append(el("div", { class: "indent" }, ...renderNodes(node.children, state, h)));
      out.push(details);
    }
  }
  return out;
}

function treePane(state: AppState, h: Handlers): HTMLElement {
  const toggle = el("input", { type: "checkbox", class: "show-all" }) as HTMLInputElement;
  toggle.checked = state.showAll;
  toggle.addEventListener("change", () => h.onToggleShowAll(toggle.checked));
  const header = el(
    "div",
    { class: "pane-header" },
    el("h2", {}, "Features"),
    el("label", { class: "show-all-label" }, toggle, " show all options"),
  );
  return el("section", { class: "pane tree-pane" }, header, ...renderNodes(state.tree, state, h));
}

// ---------------------------------------------------------------------------
// staged-changes pane

function stagedRow(symbol: string, target: string, state: AppState, h: Handlers): HTMLElement {
  const index = symbolIndex(state.tree);
  const node = index.get(symbol);
  const options = node ? targetOptions(node.type) : null;
  let editor: HTMLElement;
  if (options) {
    const select = el("select", { class: "target" }) as HTMLSelectElement;
    for (const opt of options) {
      select.append(el("option", { value: opt }, opt));
    }
    select.value = target;
    select.disabled = state.busy;
    select.addEventListener("change", () => h.onRetarget(symbol, select.value));
    editor = select;
  } else {
    const input = el("input", { class: "target", type: "text" }) as HTMLInputElement;
    input.value = target;
    input.disabled = state.busy;
    input.addEventListener("change", () => h.onRetarget(symbol, input.value));
    editor = input;
  }
  return el(
    "div",
    { class: "staged", "data-symbol": symbol },
    el("code", { class: "name" }, symbol),
    el("span", { class: "arrow" }, "→"),
    editor,
    button("×", "rm-btn", state.busy, () => h.onRemove(symbol)),
  );
}

function desiredPane(state: AppState, h: Handlers): HTMLElement {
  const pane = el(
    "section",
    { class: "pane desired-pane" },
    el("div", { class: "pane-header" }, el("h2", {}, "Staged changes")),
  );
  if (state.desired.length === 0) {
    pane.append(el("p", { class: "hint" }, "Nothing staged. Pick a feature above and hit stage."));
  } else {
    for (const entry of state.desired) {
      pane.append(stagedRow(entry.symbol, entry.target, state, h));
    }
  }
  const actions = el(
    "div",
    { class: "actions" },
    button(
      state.busy ? "calculating…" : "Calculate fixes",
      "calc-btn",
      state.desired.length === 0 || state.busy,
      () => h.onCalculate(),
    ),
  );
  if (state.desired.length > 0) {
    actions.append(button("Clear", "clear-btn", state.busy, () => h.onClearStaged()));
  }
  pane.append(actions);
  return pane;
}

// ---------------------------------------------------------------------------
// solutions pane

function entryRow(entry: FixEntry): HTMLElement {
  const row = el("div", { class: "fix-entry" });
  if (entry.value !== undefined) {
    row.append(
      el("code", { class: "name" }, entry.symbols.join(", ")),
      el("span", { class: "assign" }, " := "),
      valueBadge(entry.value),
    );
  } else {
    row.append(
      el("code", { class: "name" }, entry.symbols.join(", ")),
      el("span", { class: "assign" }, ": "),
      el("code", { class: "constraint" }, entry.constraint ?? ""),
    );
    if (entry.witness !== undefined) {
      row.append(el("span", { class: "witness" }, ` e.g. ${entry.witness}`));
    }
  }
  if (entry.desired) {
    row.append(el("span", { class: "badge desired" }, "desired"));
  }
  return row;
}

function applyBadge(entry: ApplyEntry): HTMLElement {
  if (entry.applicable && entry.achieved) {
    return el("span", { class: "badge ok" }, "applied");
  }
  if (entry.achieved) {
    // value landed through a select or default, not a direct user set
    return el("span", { class: "badge forced" }, "forced");
  }
  return el("span", { class: "badge missed" }, "missed");
}

function applyReport(report: ApplyResponse): HTMLElement {
  const block = el("div", { class: "apply-report" });
  if (report.resolved && report.fullyApplicable) {
    block.append(el("div", { class: "banner ok" }, "Conflict resolved; every entry applied directly."));
  } else if (report.resolved) {
    block.append(
      el(
        "div",
        { class: "banner warn" },
        "Conflict resolved, but some values were forced by the model instead of set directly.",
      ),
    );
  } else {
    block.append(el("div", { class: "banner err" }, "The fix did not resolve the conflict."));
  }
  for (const entry of report.entries) {
    block.append(
      el("div", { class: "report-entry" }, el("code", { class: "name" }, entry.stated), applyBadge(entry)),
    );
  }
  if (report.deltas.length > 0) {
    const deltas = el("div", { class: "deltas" }, el("h3", {}, "Changed values"));
    for (const d of report.deltas) {
      deltas.append(
        el(
          "div",
          { class: "delta" },
          el("code", { class: "name" }, d.symbol),
          el("span", {}, ` ${d.from} → ${d.to}`),
        ),
      );
    }
    block.append(deltas);
  }
  return block;
}

function fixCardView(card: FixCard, state: AppState, h: Handlers): HTMLElement {
  const view = el(
    "div",
    { class: "fix-card", "data-fix": String(card.index) },
    el("div", { class: "fix-title" }, `Changes ${card.size} symbol${card.size === 1 ? "" : "s"}`),
    ...card.entries.map(entryRow),
  );
  view.append(button("Apply this fix", "apply-btn", state.busy, () => h.onApply()));
  return view;
}

function solutionsPane(state: AppState, h: Handlers): HTMLElement {
  const pane = el(
    "section",
    { class: "pane solutions-pane" },
    el("div", { class: "pane-header" }, el("h2", {}, "Solutions")),
  );

  if (state.staleFixes) {
    pane.append(
      el(
        "div",
        { class: "banner warn stale" },
        "The configuration changed since these fixes were computed.",
      ),
      button("Recalculate", "recalc-btn", state.busy, () => h.onRecalculate()),
    );
    return pane;
  }

  if (state.lastApply) {
    pane.append(applyReport(state.lastApply));
    return pane;
  }

  if (!state.fixes) {
    pane.append(el("p", { class: "hint" }, "Calculated fixes show up here."));
    return pane;
  }

  if (state.fixes.directlyApplicable) {
    pane.append(
      el("div", { class: "banner ok direct" }, "No conflict: the staged values are consistent as-is."),
      button("Apply desired values", "direct-apply-btn", state.busy, () => h.onDirectApply()),
    );
    return pane;
  }

  if (state.fixes.timedOut) {
    pane.append(
      el(
        "div",
        { class: "banner err timeout" },
        "The resolution budget ran out; results below may be partial.",
      ),
      button("Retry", "retry-btn", state.busy, () => h.onRecalculate()),
    );
  }

  if (state.fixes.fixes.length === 0) {
    if (!state.fixes.timedOut) {
      pane.append(el("p", { class: "hint" }, "No fix found for the staged changes."));
    }
    return pane;
  }

  const select = el("select", { class: "fix-select" }) as HTMLSelectElement;
  state.fixes.fixes.forEach((card, i) => {
    select.append(el("option", { value: String(i) }, `Fix ${i + 1} (${card.size} symbols)`));
  });
  select.value = String(state.selectedFix);
  select.disabled = state.busy;
  select.addEventListener("change", () => h.onSelectFix(Number(select.value)));
  pane.append(el("div", { class: "fix-picker" }, el("label", {}, "Solution: ", select)));

  const card = selectedCard(state);
  if (card) {
    pane.append(fixCardView(card, state, h));
  }
  return pane;
}

// ---------------------------------------------------------------------------
// top level

export function renderApp(root: HTMLElement, state: AppState, h: Handlers): void {
  const header = el(
    "header",
    {},
    el("h1", {}, state.mainmenu || "Configuration"),
    el("span", { class: "gen" }, `generation ${state.generation}`),
  );
  if (state.busy) {
    header.append(el("span", { class: "busy" }, "working…"));
  }
  const parts: HTMLElement[] = [header];
  if (state.error) {
    parts.push(el("div", { class: "error-bar" }, state.error));
  }
  parts.push(
    treePane(state, h),
    el("div", { class: "bottom" }, desiredPane(state, h), solutionsPane(state, h)),
  );
  root.replaceChildren(...parts);
}
