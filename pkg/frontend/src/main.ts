/**
 * Controller: owns the state, talks to the API, re-renders on change.
 *
 * Every mutation round-trips through the server and the panes are
 * rebuilt from the response, so what is on screen is always the
 * server's view. At most one request runs at a time; the buttons are
 * disabled while one is in flight.
 */

import * as api from "./api.js";
import { renderApp } from "./render.js";
import type { Handlers } from "./render.js";
import type { AppState } from "./state.js";
import {
  configTextWithValues,
  initialState,
  markStale,
  selectedCard,
  symbolIndex,
  withApply,
  withBusy,
  withDesired,
  withError,
  withFixes,
  withSelectedFix,
  withShowAll,
  withTree,
} from "./state.js";
import type { SymbolKind } from "./types.js";

export class Controller {
  private state: AppState = initialState();

  constructor(private readonly root: HTMLElement) {}

  async start(): Promise<void> {
    await this.run(async () => {
      this.state = withTree(this.state, await api.fetchTree());
      this.state = withDesired(this.state, await api.fetchDesired());
    });
  }

  private render(): void {
    renderApp(this.root, this.state, this.handlers());
  }

  /** Busy-wrap a server interaction and map its failures onto the state. */
  private async run(task: () => Promise<void>): Promise<void> {
    this.state = withBusy(this.state, true);
    this.render();
    try {
      await task();
      this.state = withBusy(this.state, false);
    } catch (err) {
      if (err instanceof api.StaleGenerationError) {
        this.state = withBusy(markStale(this.state), false);
      } else if (err instanceof api.ApiError) {
        this.state = withError(this.state, err.message);
      } else {
        this.state = withError(this.state, String(err));
      }
    }
    this.render();
  }

  private async refreshAfterApply(): Promise<void> {
    this.state = withTree(this.state, await api.fetchTree());
  }

  private handlers(): Handlers {
    return {
      onToggleShowAll: (show) => {
        this.state = withShowAll(this.state, show);
        this.render();
      },
      onStage: (symbol, target) => {
        void this.run(async () => {
          this.state = withDesired(this.state, await api.stageDesired(symbol, target));
        });
      },
      onRetarget: (symbol, target) => {
        void this.run(async () => {
          this.state = withDesired(this.state, await api.stageDesired(symbol, target));
        });
      },
      onRemove: (symbol) => {
        void this.run(async () => {
          this.state = withDesired(this.state, await api.removeDesired(symbol));
        });
      },
      onClearStaged: () => {
        void this.run(async () => {
          this.state = withDesired(this.state, await api.replaceDesired([]));
        });
      },
      onCalculate: () => {
        void this.run(async () => {
          this.state = withFixes(this.state, await api.calculateFixes());
        });
      },
      onSelectFix: (index) => {
        this.state = withSelectedFix(this.state, index);
        this.render();
      },
      onApply: () => {
        const card = selectedCard(this.state);
        if (!card) {
          return;
        }
        void this.run(async () => {
          const report = await api.applyFix(card.index, this.state.generation);
          await this.refreshAfterApply();
          this.state = withDesired(this.state, await api.fetchDesired());
          this.state = withApply(this.state, report);
        });
      },
      onDirectApply: () => {
        void this.run(() => this.directApply());
      },
      onRecalculate: () => {
        void this.run(async () => {
          this.state = withFixes(this.state, await api.calculateFixes());
        });
      },
    };
  }

  /**
   * No conflict: land the staged values through PUT /config. The new
   * text is the old one with the staged symbols' lines rewritten; the
   * server re-evaluates it. Staged entries whose target shows up in the
   * fresh tree afterwards are unstaged.
   */
  private async directApply(): Promise<void> {
    const staged = this.state.desired;
    const types = new Map<string, SymbolKind>();
    for (const [name, node] of symbolIndex(this.state.tree)) {
      types.set(name, node.type);
    }
    const cfg = await api.fetchConfig();
    await api.putConfig(configTextWithValues(cfg.text, staged, types));
    this.state = withTree(this.state, await api.fetchTree());
    const values = symbolIndex(this.state.tree);
    for (const entry of staged) {
      if (values.get(entry.symbol)?.value === entry.target) {
        await api.removeDesired(entry.symbol);
      }
    }
    this.state = withDesired(this.state, await api.fetchDesired());
  }
}

function boot(): void {
  const root = document.getElementById("app");
  if (root) {
    void new Controller(root).start();
  }
}

if (document.readyState === "loading") {
  document.addEventListener("DOMContentLoaded", boot);
} else {
  boot();
}
