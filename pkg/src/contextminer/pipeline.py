"""One-iteration-per-context orchestration.

An iteration runs retrieve → network → communities → features →
persist, staging every store mutation until the whole context has
succeeded: a failure in any step leaves both the in-memory store and
the snapshot file exactly as they were.  All randomness derives from
the single configured seed, so a batch re-run reproduces its store
snapshot byte for byte.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import communities as comm
from . import network as netmod
from .contexts import (
    Context,
    context_from_record,
    context_to_record,
    evaluate,
    evaluate_complement,
)
from .corpus import Archive, dump_record, load_archive
from .discovery import CandidateQueue, discover, monitor_recurring
from .metrics import core_features, metric_vector, scoped_centrality
from .ranking import (
    RankedList,
    apply_inactive_rule,
    custom_rank,
    rank1,
    rank2,
    rank3,
)
from .store import MERGE_POLICIES, ProfileStore

logger = logging.getLogger(__name__)

STORE_ENV_VAR = "CONTEXTMINER_STORE"
RANK_FUNCTIONS = {"rank1": rank1, "rank2": rank2, "rank3": rank3}


@dataclass(frozen=True)
class PipelineConfig:
    """Validated run parameters; the hash pins them in every report."""

    posts_path: str
    users_path: str | None = None
    store_path: str = "state/profiles.db"
    algorithm: str = "demon"
    epsilon: float = 0.25
    min_size: int = 4
    post_cap: int | None = 200
    reverse_edges: bool = False
    directed_rates: bool = False
    strict_geo: bool = False
    merge_policy: str = "append"
    default_ranking: str = "rank3"
    top_k: int = 10
    inactive_threshold: float = 0.005
    pad_days: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        if self.algorithm not in ("demon", "infomap"):
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon out of range: {self.epsilon}")
        if self.min_size < 1:
            raise ValueError(f"min_size must be >= 1, got {self.min_size}")
        if self.post_cap is not None and self.post_cap < 1:
            raise ValueError(f"post_cap must be >= 1, got {self.post_cap}")
        if self.merge_policy not in MERGE_POLICIES:
            raise ValueError(f"unknown merge policy {self.merge_policy!r}")
        if self.default_ranking not in RANK_FUNCTIONS:
            raise ValueError(f"unknown ranking {self.default_ranking!r}")
        if self.top_k < 1:
            raise ValueError(f"top_k must be >= 1, got {self.top_k}")

    def to_record(self) -> dict:
        return {
            "posts_path": self.posts_path,
            "users_path": self.users_path,
            "store_path": self.store_path,
            "algorithm": self.algorithm,
            "epsilon": self.epsilon,
            "min_size": self.min_size,
            "post_cap": self.post_cap,
            "reverse_edges": self.reverse_edges,
            "directed_rates": self.directed_rates,
            "strict_geo": self.strict_geo,
            "merge_policy": self.merge_policy,
            "default_ranking": self.default_ranking,
            "top_k": self.top_k,
            "inactive_threshold": self.inactive_threshold,
            "pad_days": self.pad_days,
            "seed": self.seed,
        }

    def config_hash(self) -> str:
        return hashlib.sha256(
            dump_record(self.to_record()).encode("utf-8")
        ).hexdigest()[:16]

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        if not isinstance(raw, dict):
            raise ValueError(f"config must be a JSON object: {path}")
        known = set(cls.__dataclass_fields__)
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        env_store = os.environ.get(STORE_ENV_VAR)
        if env_store:
            raw["store_path"] = env_store
        return cls(**raw)


@dataclass
class IterationReport:
    context_id: str
    status: str  # ok | empty | failed
    config_hash: str
    on_count: int = 0
    off_count: int = 0
    network_stats: dict | None = None
    detection: dict | None = None
    users_added: int = 0
    users_updated: int = 0
    warnings: list[str] = field(default_factory=list)
    duration_s: float = 0.0

    def to_record(self) -> dict:
        # duration is wall-clock telemetry and stays out of the
        # canonical record so identical runs serialize identically.
        return {
            "context_id": self.context_id,
            "status": self.status,
            "config_hash": self.config_hash,
            "on_count": self.on_count,
            "off_count": self.off_count,
            "network_stats": self.network_stats,
            "detection": self.detection,
            "users_added": self.users_added,
            "users_updated": self.users_updated,
            "warnings": self.warnings,
        }


def _detection_record(report: comm.DetectionReport) -> dict:
    return {
        "algorithm": report.algorithm,
        "null_communities": report.null_communities,
        "community_count": report.community_count,
        "fraction_users_retained": report.fraction_users_retained,
        "community_sizes": list(report.community_sizes),
        "community_assortativity": list(report.community_assortativity),
    }


def derive_seed(root_seed: int, context_id: str) -> int:
    """Per-context detector seed, stable across platforms and runs."""
    digest = hashlib.sha256(f"{root_seed}:{context_id}".encode("utf-8")).digest()
    return int.from_bytes(digest[:4], "big")


class Pipeline:
    """Owns the archive, the store, the queue, and the context registry.

    State lives next to the store file: `<store dir>/queue.json`,
    `<store dir>/contexts.jsonl`, and `<store dir>/reports/`.  The
    store snapshot is rewritten atomically after each successful
    iteration, never during one.
    """

    def __init__(self, config: PipelineConfig, archive: Archive | None = None):
        self.config = config
        if archive is None:
            archive = load_archive(config.posts_path, config.users_path)
            if archive.report.errors:
                logger.warning(
                    "archive loaded with %d bad lines", len(archive.report.errors)
                )
        self.archive = archive
        self.state_dir = Path(config.store_path).parent
        self.state_dir.mkdir(parents=True, exist_ok=True)
        self.store = (
            ProfileStore.restore(config.store_path)
            if Path(config.store_path).exists()
            else ProfileStore()
        )
        queue_path = self.state_dir / "queue.json"
        self.queue = (
            CandidateQueue.load(queue_path) if queue_path.exists() else CandidateQueue()
        )
        self.contexts: dict[str, Context] = {}
        self.assignments: dict[str, comm.CommunityAssignment | None] = {}
        self._load_contexts()

    # ------------------------------------------------------------------
    # context registry

    @property
    def _contexts_path(self) -> Path:
        return self.state_dir / "contexts.jsonl"

    @property
    def _queue_path(self) -> Path:
        return self.state_dir / "queue.json"

    def _load_contexts(self) -> None:
        if not self._contexts_path.exists():
            return
        for line in self._contexts_path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                ctx = context_from_record(json.loads(line))
                self.contexts[ctx.context_id] = ctx

    def _save_contexts(self) -> None:
        lines = [
            dump_record(context_to_record(self.contexts[cid]))
            for cid in sorted(self.contexts)
        ]
        tmp = self._contexts_path.with_name(self._contexts_path.name + ".tmp")
        tmp.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
        os.replace(tmp, self._contexts_path)

    def register(self, context: Context) -> None:
        self.contexts[context.context_id] = context
        self._save_contexts()

    def term_history(self) -> set[str]:
        """Every hashtag already spent on a context or a queue decision."""
        used = {term for ctx in self.contexts.values() for term in ctx.terms}
        return used | self.queue.history()

    # ------------------------------------------------------------------
    # iteration

    def run_iteration(self, context: Context) -> IterationReport:
        started = time.monotonic()
        report = IterationReport(
            context_id=context.context_id,
            status="ok",
            config_hash=self.config.config_hash(),
        )
        cfg = self.config
        if context.status not in ("approved", "processed"):
            raise ValueError(
                f"context {context.context_id!r} is {context.status}, not approved"
            )
        on = evaluate(context, self.archive, cap=cfg.post_cap, strict_geo=cfg.strict_geo)
        off = evaluate_complement(context, self.archive, strict_geo=cfg.strict_geo)
        report.on_count, report.off_count = len(on), len(off)
        if not on.posts:
            report.status = "empty"
            report.warnings.append("no on-context posts; store untouched")
            report.duration_s = time.monotonic() - started
            self._finish(context, report, processed=False)
            return report

        net = netmod.build(on, reverse_edges=cfg.reverse_edges)
        report.network_stats = netmod.stats(net).to_record()

        assignment: comm.CommunityAssignment | None
        try:
            if cfg.algorithm == "demon":
                assignment = comm.demon(net, epsilon=cfg.epsilon, min_size=cfg.min_size)
            else:
                assignment = comm.infomap(
                    net,
                    seed=derive_seed(cfg.seed, context.context_id),
                    min_size=cfg.min_size,
                    directed_rates=cfg.directed_rates,
                )
            report.detection = _detection_record(comm.detection_report(net, assignment))
        except Exception as exc:  # detector failure degrades, never aborts
            assignment = None
            report.warnings.append(f"detector failed ({exc}); whole-network fallback")

        if assignment is not None and not assignment.null_communities:
            selected = sorted(assignment.retained_users)
        else:
            # Mirror the null-communities behaviour: everyone in the
            # network is kept and measured against the whole of it.
            selected = sorted(net.nodes)
            if assignment is not None:
                report.warnings.append("null communities; whole-network centrality")

        staged = []
        for user in selected:
            snapshot = self.archive.users.get(user)
            features = core_features(user, on, off, snapshot)
            metrics = metric_vector(features, net, assignment)
            _, _, community_idx = scoped_centrality(net, assignment, user)
            staged.append((user, features, metrics, community_idx, snapshot))

        # Commit barrier: nothing above touched the store.
        for user, features, metrics, community_idx, snapshot in staged:
            existed = user in self.store.users
            self.store.upsert(
                user,
                context.context_id,
                features,
                metrics,
                community=community_idx,
                snapshot=snapshot,
            )
            if existed:
                report.users_updated += 1
            else:
                report.users_added += 1

        self.assignments[context.context_id] = assignment
        report.duration_s = time.monotonic() - started
        self._finish(context, report, processed=True)
        return report

    def _finish(self, context: Context, report: IterationReport, processed: bool) -> None:
        if processed:
            self.contexts[context.context_id] = context.with_status("processed")
            self.store.snapshot(self.config.store_path)
        else:
            self.contexts.setdefault(context.context_id, context)
        self._save_contexts()
        reports_dir = self.state_dir / "reports"
        reports_dir.mkdir(exist_ok=True)
        path = reports_dir / f"{context.context_id}.json"
        path.write_text(dump_record(report.to_record()) + "\n", encoding="utf-8")

    def run_batch(self, contexts: list[Context]) -> list[IterationReport]:
        """Process contexts in declared order; one failure never stops the rest."""
        reports = []
        for context in contexts:
            try:
                reports.append(self.run_iteration(context))
            except Exception as exc:
                logger.warning("context %s failed: %s", context.context_id, exc)
                failed = IterationReport(
                    context_id=context.context_id,
                    status="failed",
                    config_hash=self.config.config_hash(),
                    warnings=[str(exc)],
                )
                self._finish(context, failed, processed=False)
                reports.append(failed)
        return reports

    def batch_summary(self) -> dict:
        """Per-context network rows plus the detector comparison aggregate."""
        rows = []
        for cid in sorted(self.assignments):
            ctx = self.contexts.get(cid)
            if ctx is None or ctx.status != "processed":
                continue
            on = evaluate(
                ctx, self.archive, cap=self.config.post_cap,
                strict_geo=self.config.strict_geo,
            )
            net = netmod.build(on, reverse_edges=self.config.reverse_edges)
            rows.append({"context_id": cid, **netmod.stats(net).to_record()})
        assignments = [a for a in self.assignments.values() if a is not None]
        summary = None
        if assignments:
            agg = comm.compare(assignments)
            summary = {
                "algorithm": agg.algorithm,
                "contexts": agg.contexts,
                "null_fraction": agg.null_fraction,
                "mean_communities": agg.mean_communities,
                "mean_fraction_retained": agg.mean_fraction_retained,
                "repeat_user_fraction": agg.repeat_user_fraction,
            }
        return {"networks": rows, "detection": summary}

    # ------------------------------------------------------------------
    # ranking + discovery

    def ranking(self, fn: str | None = None, adjusted: bool = True) -> RankedList:
        name = fn or self.config.default_ranking
        if name.startswith("expr:"):
            ranked = custom_rank(self.store, name[5:], self.config.merge_policy)
        elif name in RANK_FUNCTIONS:
            ranked = RANK_FUNCTIONS[name](self.store, self.config.merge_policy)
        else:
            raise ValueError(f"unknown ranking function {name!r}")
        if adjusted:
            ranked = apply_inactive_rule(
                ranked, self.store, self.config.inactive_threshold
            )
        return ranked

    def discover_candidates(
        self, source_context_id: str | None = None, k: int | None = None
    ) -> int:
        """Mine candidates from the current ranking; returns how many queued."""
        source = self.contexts.get(source_context_id) if source_context_id else None
        if source_context_id and source is None:
            raise KeyError(f"unknown context {source_context_id!r}")
        history = self.term_history()
        found = discover(
            self.ranking(),
            self.archive,
            history,
            k=k or self.config.top_k,
            source_context=source,
            pad_days=self.config.pad_days,
        )
        found.extend(monitor_recurring(history, self.archive, self.config.pad_days))
        added = self.queue.add(found, history)
        self.queue.save(self._queue_path)
        return added

    def review_candidate(
        self,
        candidate_id: str,
        decision: str,
        note: str = "",
        interval=None,
        bbox=None,
    ) -> Context | None:
        """Apply a reviewer decision; approvals register the new context."""
        minted = self.queue.review(
            candidate_id, decision, note=note, interval=interval, bbox=bbox
        )
        self.queue.save(self._queue_path)
        if minted is not None:
            self.register(minted)
        return minted
