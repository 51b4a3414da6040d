// Ranking explorer: pick a scoring function (built-in or custom expression),
// fetch the ranked list, attach type labels, and watch the label distribution
// across rank bins. Scores, ranks, and fingerprints are displayed verbatim
// from the API — the console never computes any of them itself.

import { ApiError, type ApiClient } from "./api.js";
import { esc, fmtScore } from "./html.js";
import { LABEL_TYPES, type LabelType, type RankingResponse } from "./types.js";
import { binLabelCounts, binsTotal, type LabelBin } from "./validate.js";

export const BUILTIN_FNS = ["rank1", "rank2", "rank3"] as const;

export interface RankingsState {
  fnChoice: string; // one of BUILTIN_FNS or "custom"
  customExpr: string;
  top: number;
  resp: RankingResponse | null;
  error: string | null;
  busyUser: string | null;
  notice: string | null;
}

export function initialRankingsState(): RankingsState {
  return {
    fnChoice: "rank3",
    customExpr: "",
    top: 10,
    resp: null,
    error: null,
    busyUser: null,
    notice: null,
  };
}

/** The `fn` query value the current controls describe. */
export function fnSpec(state: Pick<RankingsState, "fnChoice" | "customExpr">): string {
  if (state.fnChoice === "custom") return `expr:${state.customExpr}`;
  return state.fnChoice;
}

/**
 * Fetch the list the table will render. Kept as the single data path for the
 * view so tests can compare exactly what the page shows.
 */
export async function refreshRankings(client: ApiClient, state: RankingsState): Promise<void> {
  try {
    state.resp = await client.rankings(fnSpec(state), state.top);
    state.error = null;
  } catch (err) {
    state.resp = null;
    // expression errors come back verbatim, position markers included
    state.error = err instanceof ApiError ? err.message : String(err);
  }
}

/**
 * Add one taxonomy label to a user. The store treats labels as append-only,
 * so there is no un-click; the row updates only from the confirmed response.
 */
export async function addLabel(
  client: ApiClient,
  state: RankingsState,
  userId: string,
  label: LabelType,
): Promise<void> {
  const entry = state.resp?.entries.find((e) => e.user_id === userId);
  if (!entry || entry.labels.includes(label)) return;
  state.busyUser = userId;
  try {
    const profile = await client.setLabels(userId, [...entry.labels, label]);
    entry.labels = profile.labels;
    state.notice = null;
  } catch (err) {
    state.notice = err instanceof ApiError ? err.message : String(err);
  } finally {
    state.busyUser = null;
  }
}

function labelButtons(userId: string, labels: string[], busy: boolean): string {
  return LABEL_TYPES.map((t) => {
    const active = labels.includes(t);
    const attrs = active || busy ? "disabled" : "";
    return (
      `<button class="chip ${active ? "chip-on" : ""}" ${attrs} ` +
      `data-action="label" data-user="${esc(userId)}" data-label="${t}" ` +
      `title="${active ? "already labeled (labels are append-only)" : `label as ${t}`}">` +
      `${t.slice(0, 4)}</button>`
    );
  }).join("");
}

export function renderRankingsTable(resp: RankingResponse, busyUser: string | null): string {
  const rows = resp.entries
    .map((e) => {
      const cls = e.inactive ? ' class="inactive-row"' : "";
      return (
        `<tr${cls} data-user-row="${esc(e.user_id)}">` +
        `<td class="num">${e.rank}</td>` +
        `<td><code>${esc(e.user_id)}</code></td>` +
        `<td>@${esc(e.handle)}</td>` +
        `<td class="num">${esc(fmtScore(e.score))}</td>` +
        `<td class="num">${esc(e.fr.toFixed(3))}</td>` +
        `<td class="num">${e.participations}</td>` +
        `<td>${labelButtons(e.user_id, e.labels, busyUser === e.user_id)}</td>` +
        `<td>${e.inactive ? '<span class="badge">inactive</span>' : ""}</td>` +
        `</tr>`
      );
    })
    .join("");
  return (
    `<table class="grid"><thead><tr>` +
    `<th>rank</th><th>user</th><th>handle</th><th>score</th><th>FR</th>` +
    `<th>part.</th><th>labels</th><th></th>` +
    `</tr></thead><tbody>${rows}</tbody></table>`
  );
}

export function renderBinChart(bins: LabelBin[]): string {
  if (bins.length === 0) return `<p class="muted">no rows</p>`;
  const peak = Math.max(1, ...bins.map((b) => Math.max(...Object.values(b.counts))));
  const groups = bins
    .map((b) => {
      const bars = LABEL_TYPES.map((t) => {
        const n = b.counts[t];
        const h = Math.round((n / peak) * 60);
        return (
          `<div class="bar bar-${t}" style="height:${h}px" ` +
          `title="${t}: ${n}"><span>${n || ""}</span></div>`
        );
      }).join("");
      return (
        `<div class="bin"><div class="bars">${bars}</div>` +
        `<div class="bin-label">${b.start}&ndash;${b.end}</div></div>`
      );
    })
    .join("");
  const legend = LABEL_TYPES.map((t) => `<span class="key key-${t}">${t}</span>`).join(" ");
  return (
    `<div class="chart">${groups}</div>` +
    `<p class="muted">${legend} &middot; ${binsTotal(bins)} labeled row(s)</p>`
  );
}

export function renderRankings(state: RankingsState): string {
  const options = [...BUILTIN_FNS, "custom"]
    .map((fn) => `<option value="${fn}"${fn === state.fnChoice ? " selected" : ""}>${fn}</option>`)
    .join("");
  const exprBox =
    state.fnChoice === "custom"
      ? `<input id="rk-expr" type="text" value="${esc(state.customExpr)}" ` +
        `placeholder="e.g. sum_TF / (participations + 1)" size="40">`
      : "";
  const controls =
    `<div class="controls">` +
    `<label>function <select id="rk-fn">${options}</select></label> ${exprBox} ` +
    `<label>top <input id="rk-top" type="number" min="1" value="${state.top}" size="5"></label> ` +
    `<button data-action="rk-refresh">refresh</button>` +
    `</div>`;
  let body: string;
  if (state.error !== null) {
    body = `<pre class="error" id="rk-error">${esc(state.error)}</pre>`;
  } else if (state.resp === null) {
    body = `<p class="muted">loading&hellip;</p>`;
  } else {
    const bins = binLabelCounts(state.resp.entries, 10);
    body =
      `<p class="muted">function <code>${esc(state.resp.function)}</code> &middot; ` +
      `fingerprint <code>${esc(state.resp.fingerprint)}</code></p>` +
      renderRankingsTable(state.resp, state.busyUser) +
      `<h3>labels by rank bin</h3>` +
      renderBinChart(bins);
  }
  const notice = state.notice ? `<p class="error">${esc(state.notice)}</p>` : "";
  return `${controls}${notice}${body}`;
}
