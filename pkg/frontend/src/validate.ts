// Pure input-validation and data-shaping helpers for the console. Everything
// here is DOM-free so the unit tests and the e2e harness can run the exact
// code the page uses.

import { LABEL_TYPES, type BBox, type DecisionBody, type LabelType } from "./types.js";

export type Checked<T> = { ok: true; value: T } | { ok: false; message: string };

const INSTANT_RE =
  /^\d{4}-\d{2}-\d{2}([T ]\d{2}:\d{2}(:\d{2}(\.\d+)?)?)?(Z|[+-]\d{2}:?\d{2})?$/;

/** Epoch millis for an ISO-8601 instant; naive strings count as UTC. */
export function parseInstant(raw: string): number | null {
  const s = raw.trim();
  if (!INSTANT_RE.test(s)) return null;
  let norm = s.replace(" ", "T");
  if (!norm.includes("T")) norm += "T00:00:00";
  if (!/(Z|[+-]\d{2}:?\d{2})$/.test(norm)) norm += "Z";
  const ms = Date.parse(norm);
  return Number.isNaN(ms) ? null : ms;
}

function canonInstant(ms: number): string {
  return new Date(ms).toISOString().replace(/\.\d{3}Z$/, "Z");
}

/**
 * Check an interval edit buffer. Success carries the pair in canonical
 * second-precision UTC form, ready for a decision payload.
 */
export function validateInterval(start: string, end: string): Checked<[string, string]> {
  if (start.trim() === "" || end.trim() === "") {
    return { ok: false, message: "interval start and end are required" };
  }
  const t1 = parseInstant(start);
  if (t1 === null) return { ok: false, message: `bad timestamp: ${start.trim()}` };
  const t2 = parseInstant(end);
  if (t2 === null) return { ok: false, message: `bad timestamp: ${end.trim()}` };
  if (t2 < t1) return { ok: false, message: "interval end precedes start" };
  return { ok: true, value: [canonInstant(t1), canonInstant(t2)] };
}

/**
 * Check a bbox edit buffer: either blank (no box) or four comma-separated
 * numbers lat_min,lon_min,lat_max,lon_max.
 */
export function validateBBox(raw: string): Checked<BBox | null> {
  const s = raw.trim();
  if (s === "") return { ok: true, value: null };
  const parts = s.split(",").map((p) => p.trim());
  if (parts.length !== 4) {
    return { ok: false, message: "bbox needs 4 numbers: lat_min,lon_min,lat_max,lon_max" };
  }
  const nums = parts.map(Number);
  if (nums.some((n) => !Number.isFinite(n))) {
    return { ok: false, message: "bbox values must be numbers" };
  }
  const [latMin, lonMin, latMax, lonMax] = nums as [number, number, number, number];
  if (Math.abs(latMin) > 90 || Math.abs(latMax) > 90) {
    return { ok: false, message: "latitudes must be within [-90, 90]" };
  }
  if (Math.abs(lonMin) > 180 || Math.abs(lonMax) > 180) {
    return { ok: false, message: "longitudes must be within [-180, 180]" };
  }
  if (latMin > latMax) return { ok: false, message: "lat_min exceeds lat_max" };
  if (lonMin > lonMax) return { ok: false, message: "lon_min exceeds lon_max" };
  return { ok: true, value: [latMin, lonMin, latMax, lonMax] };
}

export interface CsvRankRow {
  rank: number;
  user_id: string;
  handle: string;
  score: number;
  fr: number;
  participations: number;
  labels: string[];
}

export const RANKED_CSV_HEADER = "rank,user_id,handle,score,FR,participations,labels";

/** Parse the CSV the ranking endpoint (and the CLI `rank` command) emits. */
export function parseRankedCsv(text: string): CsvRankRow[] {
  const lines = text.split(/\r?\n/).filter((l) => l !== "");
  if (lines.length === 0 || lines[0] !== RANKED_CSV_HEADER) {
    throw new Error(`unexpected CSV header: ${lines[0] ?? "(empty)"}`);
  }
  return lines.slice(1).map((line, i) => {
    const parts = line.split(",");
    if (parts.length !== 7) {
      throw new Error(`row ${i + 1}: expected 7 fields, got ${parts.length}`);
    }
    const [rank, userId, handle, score, fr, participations, labels] = parts as [
      string, string, string, string, string, string, string,
    ];
    return {
      rank: Number.parseInt(rank, 10),
      user_id: userId,
      handle,
      score: Number(score),
      fr: Number(fr),
      participations: Number.parseInt(participations, 10),
      labels: labels === "" ? [] : labels.split(";"),
    };
  });
}

export interface LabelBin {
  /** 1-based positions of the first and last row covered by this bin. */
  start: number;
  end: number;
  counts: Record<LabelType, number>;
  labeled: number;
}

function emptyCounts(): Record<LabelType, number> {
  return { association: 0, individual: 0, professional: 0 };
}

/**
 * Label-type distribution over consecutive bins of the ranked list. Each row
 * is counted at most once, under its alphabetically first taxonomy label, so
 * the bins always sum to the number of labeled rows.
 */
export function binLabelCounts(rows: { labels: string[] }[], size = 10): LabelBin[] {
  if (size < 1) throw new Error("bin size must be >= 1");
  const bins: LabelBin[] = [];
  rows.forEach((row, i) => {
    const b = Math.floor(i / size);
    let bin = bins[b];
    if (bin === undefined) {
      bin = { start: b * size + 1, end: b * size + 1, counts: emptyCounts(), labeled: 0 };
      bins[b] = bin;
    }
    bin.end = i + 1;
    const typed = row.labels
      .filter((l): l is LabelType => (LABEL_TYPES as readonly string[]).includes(l))
      .sort();
    const first = typed[0];
    if (first !== undefined) {
      bin.counts[first] += 1;
      bin.labeled += 1;
    }
  });
  return bins;
}

export function binsTotal(bins: LabelBin[]): number {
  return bins.reduce((acc, b) => acc + b.labeled, 0);
}

export interface CandidateBuffers {
  start: string;
  end: string;
  bbox: string;
  note: string;
}

/** Edit buffers prefilled from a candidate's current values. */
export function buffersFromCandidate(c: {
  interval: [string, string];
  bbox: BBox | null;
  note: string;
}): CandidateBuffers {
  return {
    start: c.interval[0],
    end: c.interval[1],
    bbox: c.bbox === null ? "" : c.bbox.join(","),
    note: c.note,
  };
}

function sameBBox(a: BBox | null, b: BBox | null): boolean {
  if (a === null || b === null) return a === b;
  return a.every((v, i) => v === b[i]);
}

/**
 * Build the POST body for a candidate decision. Interval/bbox ride along only
 * when the operator actually changed them, so untouched approvals don't show
 * up as overrides in the queue's audit trail. A failed check explains itself
 * so the view can disable the submit buttons.
 */
export function decisionPayload(
  decision: "approve" | "reject",
  candidate: { interval: [string, string]; bbox: BBox | null },
  buffers: CandidateBuffers,
): Checked<DecisionBody> {
  const body: DecisionBody = { decision, note: buffers.note.trim() };
  if (decision === "approve") {
    const interval = validateInterval(buffers.start, buffers.end);
    if (!interval.ok) return interval;
    const bbox = validateBBox(buffers.bbox);
    if (!bbox.ok) return bbox;
    const orig = validateInterval(candidate.interval[0], candidate.interval[1]);
    if (!orig.ok || interval.value.join("/") !== orig.value.join("/")) {
      body.interval = interval.value;
    }
    if (!sameBBox(bbox.value, candidate.bbox)) {
      if (bbox.value === null) {
        // the API reads a null bbox as "no override", so a cleared box
        // would silently keep the old one — surface that instead
        return { ok: false, message: "clearing the bbox is not supported; restore or edit it" };
      }
      body.bbox = bbox.value;
    }
  }
  return { ok: true, value: body };
}
