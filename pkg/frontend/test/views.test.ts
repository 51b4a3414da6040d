import { describe, expect, it } from "vitest";

import {
  fnSpec,
  initialRankingsState,
  renderBinChart,
  renderRankingsTable,
} from "../dist/rankings.js";
import { renderCandidates, initialCandidatesState, canSubmit } from "../dist/candidates.js";
import { buffersFromCandidate, binLabelCounts } from "../dist/validate.js";
import { esc } from "../dist/html.js";

const entry = (rank: number, uid: string, score: number, labels: string[] = []) => ({
  rank,
  user_id: uid,
  handle: `h_${uid}`,
  score,
  fr: 0.5,
  participations: 2,
  labels,
  inactive: false,
});

describe("fnSpec", () => {
  it("passes built-ins through and prefixes custom expressions", () => {
    expect(fnSpec({ fnChoice: "rank2", customExpr: "" })).toBe("rank2");
    expect(fnSpec({ fnChoice: "custom", customExpr: "sum_TF + FR" })).toBe("expr:sum_TF + FR");
  });
});

describe("renderRankingsTable", () => {
  it("renders rows in API order with API values verbatim", () => {
    const resp = {
      function: "rank3",
      fingerprint: "f".repeat(16),
      entries: [entry(1, "u2", 10.5), entry(2, "u1", 2.25, ["individual"])],
    };
    const html = renderRankingsTable(resp, null);
    const order = [...html.matchAll(/data-user-row="([^"]+)"/g)].map((m) => m[1]);
    expect(order).toEqual(["u2", "u1"]);
    expect(html).toContain("10.5");
    expect(html).toContain("@h_u1");
    // the already-set label renders active and non-clickable
    expect(html).toMatch(/chip chip-on" disabled[^>]*data-user="u1" data-label="individual"/);
  });

  it("escapes hostile handles", () => {
    const resp = {
      function: "rank1",
      fingerprint: "0".repeat(16),
      entries: [entry(1, "u9<img>", 1, [])],
    };
    const html = renderRankingsTable(resp, null);
    expect(html).not.toContain("<img>");
    expect(html).toContain("u9&lt;img&gt;");
  });
});

describe("renderBinChart", () => {
  it("shows one group per bin with the counts it was given", () => {
    const rows = [
      ...Array.from({ length: 10 }, (_, i) => ({ labels: [i < 4 ? "individual" : "professional"] })),
      ...Array.from({ length: 5 }, () => ({ labels: ["association"] })),
    ];
    const html = renderBinChart(binLabelCounts(rows, 10));
    expect(html).toContain("1&ndash;10");
    expect(html).toContain("11&ndash;15");
    expect(html).toContain('title="individual: 4"');
    expect(html).toContain('title="professional: 6"');
    expect(html).toContain('title="association: 5"');
    expect(html).toContain("15 labeled row(s)");
  });
});

describe("renderCandidates", () => {
  const candidate = {
    hashtag: "coatswap",
    support: 3,
    co_tags: { coats: 2 },
    interval: ["2018-05-31T10:00:00Z", "2018-06-04T09:00:00Z"] as [string, string],
    bbox: null,
    source_context: "gamma_drive",
    status: "pending",
    note: "",
    recurring: false,
  };

  it("shows an empty-queue message when nothing is pending", () => {
    const state = initialCandidatesState();
    expect(renderCandidates(state)).toContain("review queue is empty");
  });

  it("disables approve while an edit is invalid and shows the reason", () => {
    const state = initialCandidatesState();
    const row = {
      record: candidate,
      buffers: { ...buffersFromCandidate(candidate), end: "whenever" },
      message: "bad timestamp: whenever",
      busy: false,
    };
    state.rows = [row];
    expect(canSubmit(row)).toBe(false);
    const html = renderCandidates(state);
    expect(html).toMatch(/data-action="cand-approve"[^>]*disabled/);
    expect(html).toContain("bad timestamp: whenever");
  });

  it("renders pending details and keeps decided rows in their own table", () => {
    const state = initialCandidatesState();
    state.rows = [
      { record: candidate, buffers: buffersFromCandidate(candidate), message: null, busy: false },
      {
        record: { ...candidate, hashtag: "oldnews", status: "rejected", note: "stale" },
        buffers: buffersFromCandidate(candidate),
        message: null,
        busy: false,
      },
    ];
    const html = renderCandidates(state);
    expect(html).toContain("#coatswap");
    expect(html).toContain("support 3");
    expect(html).toContain("coats (2)");
    expect(html).toMatch(/data-action="cand-approve"[^>]*(?<!disabled )>/);
    expect(html).toContain("<h3>decided</h3>");
    expect(html).toContain("stale");
  });
});

describe("esc", () => {
  it("neutralizes markup metacharacters", () => {
    expect(esc(`<a href="x">&'</a>`)).toBe("&lt;a href=&quot;x&quot;&gt;&amp;&#39;&lt;/a&gt;");
  });
});
