// Page wiring: one state object per tab, string-rendered views, and a single
// delegated event layer. The API base comes from ?api=... (falling back to
// the conventional serve address) so the static page can point at any host.

import { ApiClient } from "./api.js";
import {
  editBuffer,
  initialCandidatesState,
  refreshCandidates,
  renderCandidates,
  submitDecision,
  type CandidatesState,
} from "./candidates.js";
import {
  initialContextsState,
  inspectContext,
  refreshContexts,
  renderContexts,
  runIteration,
  type ContextsState,
} from "./contexts.js";
import {
  addLabel,
  initialRankingsState,
  refreshRankings,
  renderRankings,
  type RankingsState,
} from "./rankings.js";
import type { CandidateBuffers } from "./validate.js";
import type { LabelType } from "./types.js";

type Tab = "rankings" | "candidates" | "contexts";

interface AppState {
  tab: Tab;
  rankings: RankingsState;
  candidates: CandidatesState;
  contexts: ContextsState;
}

function apiBase(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("api");
  return fromQuery ?? "http://127.0.0.1:8000";
}

const client = new ApiClient(apiBase());
const state: AppState = {
  tab: "rankings",
  rankings: initialRankingsState(),
  candidates: initialCandidatesState(),
  contexts: initialContextsState(),
};

const root = document.getElementById("app") as HTMLElement;
const tabBar = document.getElementById("tabs") as HTMLElement;

function render(): void {
  for (const btn of tabBar.querySelectorAll<HTMLButtonElement>("button[data-tab]")) {
    btn.classList.toggle("tab-on", btn.dataset["tab"] === state.tab);
  }
  if (state.tab === "rankings") root.innerHTML = renderRankings(state.rankings);
  else if (state.tab === "candidates") root.innerHTML = renderCandidates(state.candidates);
  else root.innerHTML = renderContexts(state.contexts);
}

async function switchTab(tab: Tab): Promise<void> {
  state.tab = tab;
  render();
  if (tab === "rankings" && state.rankings.resp === null) {
    await refreshRankings(client, state.rankings);
  } else if (tab === "candidates" && state.candidates.rows.length === 0) {
    await refreshCandidates(client, state.candidates);
  } else if (tab === "contexts" && state.contexts.records.length === 0) {
    await refreshContexts(client, state.contexts);
  }
  render();
}

function readControls(): void {
  const fn = document.getElementById("rk-fn") as HTMLSelectElement | null;
  if (fn) state.rankings.fnChoice = fn.value;
  const expr = document.getElementById("rk-expr") as HTMLInputElement | null;
  if (expr) state.rankings.customExpr = expr.value;
  const top = document.getElementById("rk-top") as HTMLInputElement | null;
  if (top) state.rankings.top = Math.max(1, Number.parseInt(top.value, 10) || 1);
}

tabBar.addEventListener("click", (ev) => {
  const btn = (ev.target as HTMLElement).closest<HTMLButtonElement>("button[data-tab]");
  if (btn) void switchTab(btn.dataset["tab"] as Tab);
});

root.addEventListener("change", (ev) => {
  const el = ev.target as HTMLElement;
  if (el.id === "rk-fn") {
    readControls();
    render(); // show or hide the expression box
  }
});

root.addEventListener("input", (ev) => {
  const el = ev.target as HTMLInputElement;
  const tag = el.dataset["tag"];
  const field = el.dataset["edit"] as keyof CandidateBuffers | undefined;
  if (tag !== undefined && field !== undefined) {
    editBuffer(state.candidates, tag, field, el.value);
    // re-render only the affected card's validity without nuking focus:
    // update message + button state in place
    const card = root.querySelector(`[data-cand="${CSS.escape(tag)}"]`);
    if (card) {
      const row = state.candidates.rows.find((r) => r.record.hashtag === tag);
      if (row) {
        const approveBtn = card.querySelector<HTMLButtonElement>('[data-action="cand-approve"]');
        if (approveBtn) approveBtn.disabled = row.message !== null || row.busy;
        let msgEl = card.querySelector<HTMLElement>("p.error");
        if (row.message === null) {
          msgEl?.remove();
        } else {
          if (!msgEl) {
            msgEl = document.createElement("p");
            msgEl.className = "error";
            card.querySelector(".actions")?.before(msgEl);
          }
          msgEl.textContent = row.message;
        }
      }
    }
  }
});

root.addEventListener("click", (ev) => {
  const btn = (ev.target as HTMLElement).closest<HTMLButtonElement>("button[data-action]");
  if (!btn) return;
  const action = btn.dataset["action"];
  void (async () => {
    switch (action) {
      case "rk-refresh":
        readControls();
        await refreshRankings(client, state.rankings);
        break;
      case "label":
        await addLabel(
          client,
          state.rankings,
          btn.dataset["user"] ?? "",
          btn.dataset["label"] as LabelType,
        );
        break;
      case "cand-refresh":
        await refreshCandidates(client, state.candidates);
        break;
      case "cand-approve":
      case "cand-reject":
        await submitDecision(
          client,
          state.candidates,
          btn.dataset["tag"] ?? "",
          action === "cand-approve" ? "approve" : "reject",
        );
        break;
      case "ctx-refresh":
        await refreshContexts(client, state.contexts);
        break;
      case "ctx-inspect":
        await inspectContext(client, state.contexts, btn.dataset["id"] ?? "");
        break;
      case "ctx-run":
        await runIteration(client, state.contexts, btn.dataset["id"] ?? "");
        break;
      default:
        return;
    }
    render();
  })();
});

document.getElementById("api-base")!.textContent = client.base;
void switchTab("rankings");
