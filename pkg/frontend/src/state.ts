/**
 * Client state and its pure transitions.
 *
 * The state is a direct mirror of the last server responses plus the
 * user's pane selections; nothing in here evaluates configuration
 * semantics. Transitions return fresh objects so rendering can treat
 * the state as immutable.
 */

import type {
  ApplyResponse,
  DesiredEntry,
  DesiredResponse,
  FixCard,
  FixesResponse,
  SymbolKind,
  SymbolNode,
  TreeNode,
  TreeResponse,
} from "./types.js";

export interface AppState {
  generation: number;
  mainmenu: string;
  tree: TreeNode[];
  desired: DesiredEntry[];
  fixes: FixesResponse | null;
  selectedFix: number;
  lastApply: ApplyResponse | null;
  busy: boolean;
  showAll: boolean;
  staleFixes: boolean;
  error: string | null;
}

export function initialState(): AppState {
  return {
    generation: 0,
    mainmenu: "",
    tree: [],
    desired: [],
    fixes: null,
    selectedFix: 0,
    lastApply: null,
    busy: false,
    showAll: false,
    staleFixes: false,
    error: null,
  };
}

export function withTree(state: AppState, r: TreeResponse): AppState {
  return {
    ...state,
    generation: r.generation,
    mainmenu: r.mainmenu,
    tree: r.tree,
    error: null,
  };
}

/** Any staging change bumps the generation server-side, so cached fixes die here. */
export function withDesired(state: AppState, r: DesiredResponse): AppState {
  return {
    ...state,
    generation: r.generation,
    desired: r.desired,
    fixes: null,
    selectedFix: 0,
    lastApply: null,
    staleFixes: false,
    error: null,
  };
}

export function withFixes(state: AppState, r: FixesResponse): AppState {
  // cards arrive resolver-ordered; the pane wants them smallest first
  const ordered = [...r.fixes].sort((a, b) => a.size - b.size);
  return {
    ...state,
    generation: r.generation,
    fixes: { ...r, fixes: ordered },
    selectedFix: 0,
    lastApply: null,
    staleFixes: false,
    error: null,
  };
}

export function withApply(state: AppState, r: ApplyResponse): AppState {
  return { ...state, generation: r.generation, lastApply: r, error: null };
}

export function withSelectedFix(state: AppState, index: number): AppState {
  return { ...state, selectedFix: index };
}

export function withBusy(state: AppState, busy: boolean): AppState {
  return { ...state, busy };
}

export function withShowAll(state: AppState, showAll: boolean): AppState {
  return { ...state, showAll };
}

export function withError(state: AppState, message: string): AppState {
  return { ...state, busy: false, error: message };
}

/** A 409 from apply: keep the cards visible but flag them for recalculation. */
export function markStale(state: AppState): AppState {
  return { ...state, staleFixes: true, error: null };
}

export function selectedCard(state: AppState): FixCard | null {
  if (!state.fixes || state.fixes.fixes.length === 0) {
    return null;
  }
  return state.fixes.fixes[Math.min(state.selectedFix, state.fixes.fixes.length - 1)];
}

/** Walk the tree depth first and index every symbol node by name. */
export function symbolIndex(tree: TreeNode[]): Map<string, SymbolNode> {
  const index = new Map<string, SymbolNode>();
  const walk = (nodes: TreeNode[]) => {
    for (const node of nodes) {
      if (node.kind === "symbol") {
        index.set(node.symbol, node);
        if (node.children) walk(node.children);
      } else {
        walk(node.children);
      }
    }
  };
  walk(tree);
  return index;
}

/**
 * Value choices offered when staging a symbol. Bool offers y/n, tristate
 * y/m/n; number and string symbols take free text, signalled by null.
 */
export function targetOptions(type: SymbolKind): string[] | null {
  if (type === "bool") return ["y", "n"];
  if (type === "tristate") return ["y", "m", "n"];
  return null;
}

export function defaultTarget(node: SymbolNode): string {
  if (node.type === "bool" || node.type === "tristate") {
    return node.value === "y" ? "n" : "y";
  }
  return node.value;
}

/** Symbols the tree pane hides unless "show all options" is on. */
export function isHidden(node: SymbolNode): boolean {
  return node.visibility === "n";
}

function escapeString(value: string): string {
  return value.replace(/\\/g, "\\\\").replace(/"/g, '\\"');
}

function configLine(symbol: string, target: string, type: SymbolKind): string {
  if ((type === "bool" || type === "tristate") && target === "n") {
    return `# CONFIG_${symbol} is not set`;
  }
  if (type === "string") {
    return `CONFIG_${symbol}="${escapeString(target)}"`;
  }
  return `CONFIG_${symbol}=${target}`;
}

/**
 * Rewrite .config text with new values for the given symbols: replace the
 * symbol's existing line (set or not-set form) or append a missing one.
 * Pure text surgery; the server re-evaluates the result on PUT.
 */
export function configTextWithValues(
  text: string,
  changes: DesiredEntry[],
  types: Map<string, SymbolKind>,
): string {
  const lines = text.length > 0 ? text.split("\n") : [];
  const pending = new Map<string, string>();
  for (const { symbol, target } of changes) {
    pending.set(symbol, configLine(symbol, target, types.get(symbol) ?? "string"));
  }
  const out = lines.map((line) => {
    const m = /^(?:CONFIG_([A-Za-z0-9_]+)=|# CONFIG_([A-Za-z0-9_]+) is not set)/.exec(line);
    const name = m ? (m[1] ?? m[2]) : null;
    if (name !== null && pending.has(name)) {
      const replacement = pending.get(name)!;
      pending.delete(name);
      return replacement;
    }
    return line;
  });
  while (out.length > 0 && out[out.length - 1] === "") {
    out.pop();
  }
  for (const line of pending.values()) {
    out.push(line);
  }
  return out.join("\n") + "\n";
}
