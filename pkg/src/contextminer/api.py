"""HTTP surface for the pipeline: read endpoints over the store and
registry, write endpoints for reviewer decisions, labels, and iteration
triggers.

All mutations funnel through one lock — the store is single-writer by
contract — while reads serve whatever consistent state the last write
left behind.  Responses use the same record shapes as the files on
disk, so a client never sees a second serialization dialect.
"""

from __future__ import annotations

import threading

from fastapi import FastAPI, HTTPException, Response
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from . import communities as comm
from . import network as netmod
from .contexts import context_to_record, evaluate
from .corpus import parse_ts
from .discovery import ReviewConflictError
from .pipeline import Pipeline, derive_seed
from .ranking import ranked_csv
from .store import VALID_LABELS


class DecisionBody(BaseModel):
    decision: str
    note: str = ""
    interval: list[str] | None = None
    bbox: list[float] | None = None


class IterationBody(BaseModel):
    context_id: str


class LabelsBody(BaseModel):
    labels: list[str]


def _error(status: int, message: str) -> HTTPException:
    return HTTPException(status_code=status, detail={"message": message})


def _assignment_record(assignment: comm.CommunityAssignment | None) -> dict:
    if assignment is None:
        return {"null_communities": True, "communities": [], "residual": []}
    return {
        "context_id": assignment.context_id,
        "algorithm": assignment.algorithm,
        "null_communities": assignment.null_communities,
        "communities": [sorted(c) for c in assignment.communities],
        "residual": sorted(assignment.residual),
        "codelength": assignment.codelength,
    }


def _profile_record(entry) -> dict:
    record = entry.to_record()
    record["participations"] = entry.participations
    record["first_seen"] = entry.first_seen
    record["last_seen"] = entry.last_seen
    return record


def create_app(pipeline: Pipeline) -> FastAPI:
    app = FastAPI(title="contextminer")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    write_lock = threading.Lock()

    def context_or_404(context_id: str):
        ctx = pipeline.contexts.get(context_id)
        if ctx is None:
            raise _error(404, f"unknown context {context_id!r}")
        return ctx

    def network_for(context_id: str) -> netmod.ContextNetwork:
        ctx = context_or_404(context_id)
        on = evaluate(
            ctx,
            pipeline.archive,
            cap=pipeline.config.post_cap,
            strict_geo=pipeline.config.strict_geo,
        )
        if not on.posts:
            raise _error(404, f"context {context_id!r} matches no posts")
        return netmod.build(on, reverse_edges=pipeline.config.reverse_edges)

    @app.get("/contexts")
    def list_contexts():
        return [
            context_to_record(pipeline.contexts[cid])
            for cid in sorted(pipeline.contexts)
        ]

    @app.get("/contexts/{context_id}/report")
    def context_report(context_id: str):
        context_or_404(context_id)
        path = pipeline.state_dir / "reports" / f"{context_id}.json"
        if not path.exists():
            raise _error(404, f"context {context_id!r} has not been run")
        return Response(path.read_text(encoding="utf-8"), media_type="application/json")

    @app.get("/contexts/{context_id}/network")
    def context_network(context_id: str):
        net = network_for(context_id)
        return {
            "context_id": context_id,
            "stats": netmod.stats(net).to_record(),
            "edges": [
                {"src": src, "dst": dst, "weight": weight}
                for (src, dst), weight in sorted(net.edges.items())
            ],
        }

    @app.get("/communities/{context_id}")
    def context_communities(context_id: str):
        if context_id in pipeline.assignments:
            return _assignment_record(pipeline.assignments[context_id])
        # Not run this session: recompute deterministically.
        net = network_for(context_id)
        cfg = pipeline.config
        if cfg.algorithm == "demon":
            assignment = comm.demon(net, epsilon=cfg.epsilon, min_size=cfg.min_size)
        else:
            assignment = comm.infomap(
                net,
                seed=derive_seed(cfg.seed, context_id),
                min_size=cfg.min_size,
                directed_rates=cfg.directed_rates,
            )
        return _assignment_record(assignment)

    @app.get("/profiles/{user_id}")
    def profile(user_id: str):
        entry = pipeline.store.get(user_id)
        if entry is None:
            raise _error(404, f"unknown user {user_id!r}")
        return _profile_record(entry)

    @app.get("/rankings")
    def rankings(fn: str | None = None, top: int = 10, format: str = "json"):
        if top < 1:
            raise _error(400, f"top must be >= 1, got {top}")
        try:
            ranked = pipeline.ranking(fn)
        except ValueError as exc:
            raise _error(400, str(exc))
        if format == "csv":
            return Response(
                ranked_csv(ranked, pipeline.store, top=top), media_type="text/csv"
            )
        entries = []
        for position, e in enumerate(ranked.entries[:top], start=1):
            stored = pipeline.store.get(e.user_id)
            entries.append(
                {
                    "rank": position,
                    "user_id": e.user_id,
                    "handle": e.handle,
                    "score": e.score,
                    "fr": e.terms.fr,
                    "participations": e.terms.participations,
                    "labels": sorted(stored.labels) if stored else [],
                    "inactive": e.inactive,
                }
            )
        return {
            "function": ranked.function,
            "fingerprint": ranked.fingerprint,
            "entries": entries,
        }

    @app.get("/candidates")
    def candidates():
        return [
            pipeline.queue.candidates[tag].to_record()
            for tag in sorted(pipeline.queue.candidates)
        ]

    @app.post("/candidates/{candidate_id}/decision")
    def decide(candidate_id: str, body: DecisionBody):
        if body.decision not in ("approve", "reject"):
            raise _error(400, f"decision must be approve or reject, got {body.decision!r}")
        interval = None
        if body.interval is not None:
            if len(body.interval) != 2:
                raise _error(400, "interval must be [start, end]")
            try:
                interval = (parse_ts(body.interval[0]), parse_ts(body.interval[1]))
            except ValueError as exc:
                raise _error(400, f"bad interval: {exc}")
            if interval[1] < interval[0]:
                raise _error(400, "interval end precedes start")
        bbox = tuple(body.bbox) if body.bbox is not None else None
        with write_lock:
            try:
                minted = pipeline.review_candidate(
                    candidate_id,
                    body.decision,
                    note=body.note,
                    interval=interval,
                    bbox=bbox,
                )
            except KeyError:
                raise _error(404, f"no candidate {candidate_id!r}")
            except ReviewConflictError as exc:
                raise _error(409, str(exc))
            except ValueError as exc:
                raise _error(400, str(exc))
        return {
            "candidate": pipeline.queue.candidates[candidate_id].to_record(),
            "context": context_to_record(minted) if minted else None,
        }

    @app.post("/iterations")
    def trigger_iteration(body: IterationBody):
        ctx = context_or_404(body.context_id)
        with write_lock:
            try:
                report = pipeline.run_iteration(ctx)
            except ValueError as exc:
                raise _error(400, str(exc))
        return report.to_record()

    @app.post("/profiles/{user_id}/labels")
    def set_labels(user_id: str, body: LabelsBody):
        bad = set(body.labels) - set(VALID_LABELS)
        if bad:
            raise _error(400, f"unknown labels: {sorted(bad)}")
        with write_lock:
            try:
                entry = pipeline.store.attach_labels(user_id, set(body.labels))
            except KeyError:
                raise _error(404, f"unknown user {user_id!r}")
            pipeline.store.snapshot(pipeline.config.store_path)
        return _profile_record(entry)

    return app
