// Candidate review queue: inspect pending hashtags, adjust interval/bbox,
// then approve (minting a context server-side) or reject. Every status shown
// comes from the API's response to the decision, never from optimism.

import { ApiError, type ApiClient } from "./api.js";
import { esc } from "./html.js";
import type { CandidateRecord } from "./types.js";
import {
  buffersFromCandidate,
  decisionPayload,
  type CandidateBuffers,
} from "./validate.js";

export interface CandidateRow {
  record: CandidateRecord;
  buffers: CandidateBuffers;
  message: string | null;
  busy: boolean;
}

export interface CandidatesState {
  rows: CandidateRow[];
  error: string | null;
  lastMinted: string | null;
}

export function initialCandidatesState(): CandidatesState {
  return { rows: [], error: null, lastMinted: null };
}

export async function refreshCandidates(client: ApiClient, state: CandidatesState): Promise<void> {
  try {
    const records = await client.candidates();
    const old = new Map(state.rows.map((r) => [r.record.hashtag, r]));
    state.rows = records.map((record) => {
      const prev = old.get(record.hashtag);
      // keep in-progress edits across refreshes while the row is still open
      if (prev && prev.record.status === record.status && record.status === "pending") {
        return { record, buffers: prev.buffers, message: prev.message, busy: false };
      }
      return { record, buffers: buffersFromCandidate(record), message: null, busy: false };
    });
    state.error = null;
  } catch (err) {
    state.error = err instanceof ApiError ? err.message : String(err);
  }
}

export function rowFor(state: CandidatesState, hashtag: string): CandidateRow | undefined {
  return state.rows.find((r) => r.record.hashtag === hashtag);
}

export function editBuffer(
  state: CandidatesState,
  hashtag: string,
  field: keyof CandidateBuffers,
  value: string,
): void {
  const row = rowFor(state, hashtag);
  if (!row) return;
  row.buffers[field] = value;
  const check = decisionPayload("approve", row.record, row.buffers);
  row.message = check.ok ? null : check.message;
}

export function canSubmit(row: CandidateRow): boolean {
  return !row.busy && decisionPayload("approve", row.record, row.buffers).ok;
}

export async function submitDecision(
  client: ApiClient,
  state: CandidatesState,
  hashtag: string,
  decision: "approve" | "reject",
): Promise<void> {
  const row = rowFor(state, hashtag);
  if (!row) return;
  const check = decisionPayload(decision, row.record, row.buffers);
  if (!check.ok) {
    row.message = check.message;
    return;
  }
  row.busy = true;
  try {
    const result = await client.decide(hashtag, check.value);
    row.record = result.candidate;
    row.message = null;
    state.lastMinted = result.context ? result.context.context_id : null;
  } catch (err) {
    if (err instanceof ApiError && err.status === 409) {
      // someone else decided this one first — show the conflict and pull
      // the authoritative record
      row.message = err.message;
      await refreshCandidates(client, state);
      const fresh = rowFor(state, hashtag);
      if (fresh) fresh.message = err.message;
      return;
    }
    row.message = err instanceof ApiError ? err.message : String(err);
  } finally {
    const after = rowFor(state, hashtag);
    if (after) after.busy = false;
  }
}

function coTagsText(co: Record<string, number>): string {
  const parts = Object.entries(co).map(([t, n]) => `${t} (${n})`);
  return parts.length ? parts.join(", ") : "none";
}

function pendingCard(row: CandidateRow): string {
  const c = row.record;
  const disabled = canSubmit(row) ? "" : "disabled";
  const message = row.message ? `<p class="error">${esc(row.message)}</p>` : "";
  return (
    `<div class="card" data-cand="${esc(c.hashtag)}">` +
    `<div class="card-head"><strong>#${esc(c.hashtag)}</strong>` +
    (c.recurring ? ` <span class="badge">recurring</span>` : "") +
    ` <span class="muted">support ${c.support} &middot; from ${esc(c.source_context || "?")}</span></div>` +
    `<p class="muted">co-tags: ${esc(coTagsText(c.co_tags))}</p>` +
    `<div class="fields">` +
    `<label>start <input data-edit="start" data-tag="${esc(c.hashtag)}" value="${esc(row.buffers.start)}" size="21"></label>` +
    `<label>end <input data-edit="end" data-tag="${esc(c.hashtag)}" value="${esc(row.buffers.end)}" size="21"></label>` +
    `<label>bbox <input data-edit="bbox" data-tag="${esc(c.hashtag)}" value="${esc(row.buffers.bbox)}" placeholder="lat_min,lon_min,lat_max,lon_max" size="26"></label>` +
    `<label>note <input data-edit="note" data-tag="${esc(c.hashtag)}" value="${esc(row.buffers.note)}" size="26"></label>` +
    `</div>` +
    message +
    `<div class="actions">` +
    `<button data-action="cand-approve" data-tag="${esc(c.hashtag)}" ${disabled}>approve</button> ` +
    `<button class="danger" data-action="cand-reject" data-tag="${esc(c.hashtag)}" ${row.busy ? "disabled" : ""}>reject</button>` +
    `</div></div>`
  );
}

export function renderCandidates(state: CandidatesState): string {
  const refresh = `<div class="controls"><button data-action="cand-refresh">refresh</button></div>`;
  if (state.error !== null) {
    return `${refresh}<pre class="error">${esc(state.error)}</pre>`;
  }
  const pending = state.rows.filter((r) => r.record.status === "pending");
  const decided = state.rows.filter((r) => r.record.status !== "pending");
  const minted = state.lastMinted
    ? `<p class="ok">minted context <code>${esc(state.lastMinted)}</code> &mdash; see the contexts tab</p>`
    : "";
  const pendingHtml = pending.length
    ? pending.map(pendingCard).join("")
    : `<p class="muted" id="cand-empty">review queue is empty</p>`;
  const decidedHtml = decided.length
    ? `<h3>decided</h3><table class="grid"><thead><tr><th>hashtag</th><th>status</th><th>note</th></tr></thead><tbody>` +
      decided
        .map(
          (r) =>
            `<tr><td>#${esc(r.record.hashtag)}</td><td>${esc(r.record.status)}</td>` +
            `<td>${esc(r.record.note)}</td></tr>`,
        )
        .join("") +
      `</tbody></table>`
    : "";
  return `${refresh}${minted}<h3>pending</h3>${pendingHtml}${decidedHtml}`;
}
