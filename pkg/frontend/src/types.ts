// Payload shapes for the contextminer HTTP API, as served by `contextminer serve`.

export type BBox = [number, number, number, number];

export interface ContextRecord {
  context_id: string;
  terms: string[];
  t1: string;
  t2: string;
  bbox: BBox | null;
  status: string;
  origin: string;
}

export interface CandidateRecord {
  hashtag: string;
  support: number;
  co_tags: Record<string, number>;
  interval: [string, string];
  bbox: BBox | null;
  source_context: string;
  status: string;
  note: string;
  recurring: boolean;
}

export interface RankingEntry {
  rank: number;
  user_id: string;
  handle: string;
  score: number;
  fr: number;
  participations: number;
  labels: string[];
  inactive: boolean;
}

export interface RankingResponse {
  function: string;
  fingerprint: string;
  entries: RankingEntry[];
}

export interface NetworkStatsRecord {
  nodes: number;
  edges: number;
  density: number;
  avg_degree: number;
  assortativity: number;
  assortativity_defined: boolean;
  scc_ratio: number;
}

export interface NetworkRecord {
  context_id: string;
  stats: NetworkStatsRecord;
  edges: { src: string; dst: string; weight: number }[];
}

export interface CommunitiesRecord {
  context_id: string;
  algorithm: string;
  null_communities: boolean;
  communities: string[][];
  residual: string[];
  codelength: number | null;
}

export interface ProfileRecord {
  user_id: string;
  handle: string;
  snapshot: Record<string, unknown>;
  labels: string[];
  contexts: Record<string, unknown>[];
  participations: number;
  first_seen: string | null;
  last_seen: string | null;
}

export interface IterationReport {
  context_id: string;
  status: string;
  warnings: string[];
  users_added: number;
  users_updated: number;
  [key: string]: unknown;
}

export interface DecisionBody {
  decision: "approve" | "reject";
  note: string;
  interval?: [string, string];
  bbox?: BBox | null;
}

export interface DecisionResult {
  candidate: CandidateRecord;
  context: ContextRecord | null;
}

export const LABEL_TYPES = ["association", "individual", "professional"] as const;
export type LabelType = (typeof LABEL_TYPES)[number];
