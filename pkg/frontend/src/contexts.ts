// Context registry view: every known context with its window and status,
// plus on-demand inspection (iteration report, network stats, communities)
// and a button to run an iteration on approved contexts.

import { ApiError, type ApiClient } from "./api.js";
import { esc } from "./html.js";
import type {
  CommunitiesRecord,
  ContextRecord,
  IterationReport,
  NetworkRecord,
} from "./types.js";

export interface ContextDetail {
  id: string;
  report: IterationReport | null;
  network: NetworkRecord | null;
  communities: CommunitiesRecord | null;
  notes: string[];
}

export interface ContextsState {
  records: ContextRecord[];
  error: string | null;
  busyId: string | null;
  detail: ContextDetail | null;
  lastRun: IterationReport | null;
}

export function initialContextsState(): ContextsState {
  return { records: [], error: null, busyId: null, detail: null, lastRun: null };
}

export async function refreshContexts(client: ApiClient, state: ContextsState): Promise<void> {
  try {
    state.records = await client.contexts();
    state.error = null;
  } catch (err) {
    state.error = err instanceof ApiError ? err.message : String(err);
  }
}

async function tryFetch<T>(notes: string[], what: string, p: Promise<T>): Promise<T | null> {
  try {
    return await p;
  } catch (err) {
    notes.push(`${what}: ${err instanceof ApiError ? err.message : String(err)}`);
    return null;
  }
}

export async function inspectContext(
  client: ApiClient,
  state: ContextsState,
  contextId: string,
): Promise<void> {
  if (state.detail?.id === contextId) {
    state.detail = null; // second click folds the panel
    return;
  }
  const notes: string[] = [];
  const [report, network, communities] = await Promise.all([
    tryFetch(notes, "report", client.report(contextId)),
    tryFetch(notes, "network", client.network(contextId)),
    tryFetch(notes, "communities", client.communities(contextId)),
  ]);
  state.detail = { id: contextId, report, network, communities, notes };
}

export async function runIteration(
  client: ApiClient,
  state: ContextsState,
  contextId: string,
): Promise<void> {
  state.busyId = contextId;
  try {
    state.lastRun = await client.runIteration(contextId);
    state.error = null;
    await refreshContexts(client, state);
  } catch (err) {
    state.error = err instanceof ApiError ? err.message : String(err);
  } finally {
    state.busyId = null;
  }
}

function detailPanel(d: ContextDetail): string {
  const parts: string[] = [`<div class="card" id="ctx-detail">`];
  if (d.report) {
    const warn = d.report.warnings.length
      ? `<p class="error">${d.report.warnings.map(esc).join("<br>")}</p>`
      : "";
    parts.push(
      `<p><strong>last run</strong>: ${esc(d.report.status)} &middot; ` +
        `+${d.report.users_added} added, ${d.report.users_updated} updated</p>${warn}`,
    );
  }
  if (d.network) {
    const s = d.network.stats;
    parts.push(
      `<p><strong>network</strong>: ${s.nodes} nodes, ${s.edges} edges &middot; ` +
        `density ${esc(s.density.toFixed(4))} &middot; avg degree ${esc(s.avg_degree.toFixed(2))} &middot; ` +
        `assortativity ${s.assortativity_defined ? esc(s.assortativity.toFixed(3)) : "n/a"}</p>`,
    );
  }
  if (d.communities) {
    const sizes = d.communities.communities.map((c) => c.length).join(", ");
    const cl =
      d.communities.codelength === null ? "" : ` &middot; codelength ${esc(d.communities.codelength.toFixed(4))}`;
    parts.push(
      d.communities.null_communities
        ? `<p><strong>communities</strong>: none found (whole network used)</p>`
        : `<p><strong>communities</strong>: ${d.communities.communities.length} ` +
          `(sizes ${esc(sizes)}) &middot; ${d.communities.residual.length} residual${cl}</p>`,
    );
  }
  if (d.notes.length) {
    parts.push(`<p class="muted">${d.notes.map(esc).join("<br>")}</p>`);
  }
  parts.push(`</div>`);
  return parts.join("");
}

export function renderContexts(state: ContextsState): string {
  const refresh = `<div class="controls"><button data-action="ctx-refresh">refresh</button></div>`;
  if (state.error !== null) {
    return `${refresh}<pre class="error">${esc(state.error)}</pre>`;
  }
  const lastRun = state.lastRun
    ? `<p class="ok">iteration on <code>${esc(state.lastRun.context_id)}</code> finished: ` +
      `${esc(state.lastRun.status)}</p>`
    : "";
  const rows = state.records
    .map((c) => {
      const runnable = c.status === "approved" || c.status === "processed";
      const busy = state.busyId !== null;
      const open = state.detail?.id === c.context_id;
      return (
        `<tr data-context-row="${esc(c.context_id)}">` +
        `<td><code>${esc(c.context_id)}</code></td>` +
        `<td>${c.terms.map((t) => `#${esc(t)}`).join(" ")}</td>` +
        `<td class="muted">${esc(c.t1)} &rarr; ${esc(c.t2)}</td>` +
        `<td><span class="badge badge-${esc(c.status)}">${esc(c.status)}</span></td>` +
        `<td>${esc(c.origin)}</td>` +
        `<td><button data-action="ctx-inspect" data-id="${esc(c.context_id)}">${open ? "close" : "inspect"}</button> ` +
        (runnable
          ? `<button data-action="ctx-run" data-id="${esc(c.context_id)}" ${busy ? "disabled" : ""}>run</button>`
          : "") +
        `</td></tr>` +
        (open && state.detail ? `<tr><td colspan="6">${detailPanel(state.detail)}</td></tr>` : "")
      );
    })
    .join("");
  const table = state.records.length
    ? `<table class="grid"><thead><tr>` +
      `<th>context</th><th>terms</th><th>window</th><th>status</th><th>origin</th><th></th>` +
      `</tr></thead><tbody>${rows}</tbody></table>`
    : `<p class="muted">no contexts registered</p>`;
  return `${refresh}${lastRun}${table}`;
}
