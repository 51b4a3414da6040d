"""Command-line entry points.

Every subcommand that touches pipeline state takes --config; the
config file pins archive paths, detector settings, and the root seed,
so a command line alone reproduces a run.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import communities as comm
from . import network as netmod
from .contexts import context_from_record, evaluate
from .corpus import export_posts, export_users, load_archive
from .pipeline import Pipeline, PipelineConfig, derive_seed
from .ranking import ranked_csv
from .store import repeat_users_csv

logger = logging.getLogger(__name__)


def _pipeline(args) -> Pipeline:
    return Pipeline(PipelineConfig.from_file(args.config))


def _load_batch(path: str) -> list:
    contexts = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            contexts.append(context_from_record(json.loads(line)))
    return contexts


def cmd_ingest(args) -> int:
    archive = load_archive(args.posts, args.users)
    print(f"loaded {len(archive.posts)} posts, {len(archive.users)} users")
    for lineno, message in archive.report.errors:
        print(f"  line {lineno}: {message}", file=sys.stderr)
    if archive.unresolved_users:
        print(f"  {len(archive.unresolved_users)} unresolved user references")
    return 0


def cmd_run(args) -> int:
    pipeline = _pipeline(args)
    if args.context:
        ctx = pipeline.contexts.get(args.context)
        if ctx is None:
            print(f"unknown context {args.context!r}", file=sys.stderr)
            return 2
        contexts = [ctx]
    else:
        contexts = _load_batch(args.batch)
        for ctx in contexts:
            pipeline.register(ctx)
    reports = pipeline.run_batch(contexts)
    for report in reports:
        print(
            f"{report.context_id}: {report.status}"
            f" on={report.on_count} off={report.off_count}"
            f" added={report.users_added} updated={report.users_updated}"
        )
        for warning in report.warnings:
            print(f"  warning: {warning}")
    summary = pipeline.batch_summary()
    if summary["detection"] is not None:
        det = summary["detection"]
        print(
            f"batch: {det['contexts']} contexts,"
            f" null fraction {det['null_fraction']:.2f},"
            f" mean communities {det['mean_communities']:.2f},"
            f" repeat users {det['repeat_user_fraction']:.2f}"
        )
    return 0


def cmd_rank(args) -> int:
    pipeline = _pipeline(args)
    ranked = pipeline.ranking(args.fn)
    csv_text = ranked_csv(ranked, pipeline.store, top=args.top)
    if args.out:
        Path(args.out).write_text(csv_text, encoding="utf-8")
        print(f"wrote {args.out}")
    else:
        print(csv_text, end="")
    return 0


def cmd_discover(args) -> int:
    pipeline = _pipeline(args)
    added = pipeline.discover_candidates(args.context, k=args.top_k)
    print(f"queued {added} new candidate(s)")
    for cand in pipeline.queue.pending():
        print(
            f"  {cand.hashtag}: support={cand.support}"
            f" interval={cand.interval[0]:%Y-%m-%d}..{cand.interval[1]:%Y-%m-%d}"
            + (" recurring" if cand.recurring else "")
        )
    return 0


def cmd_review(args) -> int:
    pipeline = _pipeline(args)
    decision = "approve" if args.approve else "reject"
    minted = pipeline.review_candidate(args.candidate, decision, note=args.note)
    if minted is not None:
        print(f"approved: new context {minted.context_id}")
    else:
        print(f"rejected: {args.candidate}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .api import create_app

    app = create_app(_pipeline(args))
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except OSError as exc:
        print(f"cannot bind {args.host}:{args.port}: {exc}", file=sys.stderr)
        return 2
    return 0


def cmd_export(args) -> int:
    pipeline = _pipeline(args)
    kind = args.kind
    out = Path(args.out)
    if kind == "posts":
        export_posts(pipeline.archive, out)
    elif kind == "users":
        export_users(pipeline.archive, out)
    elif kind == "store-csv":
        out.write_text(repeat_users_csv(pipeline.store, args.min_participations),
                       encoding="utf-8")
    elif kind in ("edges", "communities"):
        ctx = pipeline.contexts.get(args.context or "")
        if ctx is None:
            print("--context is required for this export", file=sys.stderr)
            return 2
        on = evaluate(ctx, pipeline.archive, cap=pipeline.config.post_cap,
                      strict_geo=pipeline.config.strict_geo)
        net = netmod.build(on, reverse_edges=pipeline.config.reverse_edges)
        if kind == "edges":
            out.write_text(netmod.export_edge_list(net), encoding="utf-8")
        else:
            cfg = pipeline.config
            if cfg.algorithm == "demon":
                assignment = comm.demon(net, epsilon=cfg.epsilon, min_size=cfg.min_size)
            else:
                assignment = comm.infomap(
                    net, seed=derive_seed(cfg.seed, ctx.context_id),
                    min_size=cfg.min_size, directed_rates=cfg.directed_rates,
                )
            out.write_text(comm.export_communities(assignment), encoding="utf-8")
    print(f"wrote {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contextminer",
        description="Iterative discovery of topical user profiles from a post archive.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate and summarize an archive file")
    p.add_argument("--posts", required=True)
    p.add_argument("--users")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("run", help="run iterations for one context or a batch file")
    p.add_argument("--config", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--context", help="id of an already-registered context")
    group.add_argument("--batch", help="context records file, one per line")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("rank", help="print or save a ranking as CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--fn", default=None,
                   help="rank1 | rank2 | rank3 | expr:<expression>")
    p.add_argument("--top", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("discover", help="mine candidate contexts from top-k timelines")
    p.add_argument("--config", required=True)
    p.add_argument("--context", help="source context the candidates inherit from")
    p.add_argument("--top-k", type=int, default=None)
    p.set_defaults(func=cmd_discover)

    p = sub.add_parser("review", help="decide a pending candidate")
    p.add_argument("--config", required=True)
    p.add_argument("--candidate", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--approve", action="store_true")
    group.add_argument("--reject", action="store_true")
    p.add_argument("--note", default="")
    p.set_defaults(func=cmd_review)

    p = sub.add_parser("serve", help="serve the HTTP API")
    p.add_argument("--config", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("export", help="write artifacts to files")
    p.add_argument("--config", required=True)
    p.add_argument("--kind", required=True,
                   choices=["posts", "users", "store-csv", "edges", "communities"])
    p.add_argument("--context", help="context id for edges/communities")
    p.add_argument("--min-participations", type=int, default=2)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
