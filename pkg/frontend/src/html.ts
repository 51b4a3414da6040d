// String-template rendering helpers. Views build plain HTML strings so the
// same code paths run in the browser, in vitest, and in the e2e harness.

export function esc(value: unknown): string {
  return String(value)
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;")
    .replaceAll("'", "&#39;");
}

/** Fixed-precision score rendering; the value itself always comes from the API. */
export function fmtScore(score: number): string {
  return score.toPrecision(10).replace(/\.?0+$/, "").replace(/\.?0+e/, "e");
}
