/**
 * Payload types for the configurator API under /api/v1.
 *
 * These mirror the server JSON one to one. The client never computes
 * configuration values itself; everything rendered comes from one of
 * these payloads.
 */

export type Tri = "n" | "m" | "y";

export type SymbolKind = "bool" | "tristate" | "int" | "hex" | "string";

export interface SymbolNode {
  kind: "symbol";
  symbol: string;
  type: SymbolKind;
  prompt: string;
  visibility: Tri;
  value: string;
  choiceMember: boolean;
  children?: TreeNode[];
}

export interface MenuNode {
  kind: "menu";
  prompt: string;
  children: TreeNode[];
}

export interface ChoiceNode {
  kind: "choice";
  prompt: string;
  type: string;
  children: SymbolNode[];
}

export type TreeNode = SymbolNode | MenuNode | ChoiceNode;

export interface TreeResponse {
  generation: number;
  mainmenu: string;
  tree: TreeNode[];
}

export interface DesiredEntry {
  symbol: string;
  target: string;
}

export interface DesiredResponse {
  generation: number;
  desired: DesiredEntry[];
}

/** One symbol assignment inside a fix; range entries carry a constraint instead of a value. */
export interface FixEntry {
  symbols: string[];
  desired: boolean;
  text: string;
  value?: string;
  constraint?: string;
  witness?: string;
}

export interface FixCard {
  index: number;
  size: number;
  entries: FixEntry[];
  text: string;
}

export interface FixesResponse {
  generation: number;
  directlyApplicable: boolean;
  timedOut: boolean;
  fixes: FixCard[];
}

export interface ApplyEntry {
  symbol: string;
  stated: string;
  applicable: boolean;
  achieved: boolean;
}

export interface ApplyTarget {
  symbol: string;
  target: string;
  achieved: boolean;
}

export interface ApplyDelta {
  symbol: string;
  from: string;
  to: string;
}

export interface ApplyResponse {
  generation: number;
  applied: number;
  resolved: boolean;
  fullyApplicable: boolean;
  entries: ApplyEntry[];
  targets: ApplyTarget[];
  deltas: ApplyDelta[];
  valid: boolean;
}

export interface ConfigPutResponse {
  generation: number;
  warnings: string[];
  valid: boolean;
}

export interface ConfigText {
  generation: number;
  text: string;
}
