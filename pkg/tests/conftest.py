import json
import random
from datetime import datetime, timezone
from pathlib import Path

import pytest

from contextminer import (
    Context,
    CoreFeatures,
    MetricVector,
    Pipeline,
    PipelineConfig,
    ProfileStore,
    UserSnapshot,
    evaluate,
    evaluate_complement,
    load_archive,
)
from contextminer.contexts import context_from_record

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"


def utc(*args) -> datetime:
    return datetime(*args, tzinfo=timezone.utc)


@pytest.fixture(scope="session")
def audit_archive():
    return load_archive(FIXTURES / "audit.jsonl", FIXTURES / "audit_users.jsonl")


@pytest.fixture(scope="session")
def audit_context():
    return Context(
        context_id="coat_drive",
        terms=frozenset({"warmcoats"}),
        interval=(utc(2018, 2, 1), utc(2018, 2, 14, 23, 59, 59)),
        status="approved",
    )


@pytest.fixture(scope="session")
def audit_sides(audit_archive, audit_context):
    on = evaluate(audit_context, audit_archive)
    off = evaluate_complement(audit_context, audit_archive)
    return on, off


@pytest.fixture(scope="session")
def smoke_archive():
    return load_archive(FIXTURES / "smoke.jsonl", FIXTURES / "smoke_users.jsonl")


def batch_contexts() -> list[Context]:
    lines = (FIXTURES / "batch_contexts.jsonl").read_text(encoding="utf-8")
    return [context_from_record(json.loads(l)) for l in lines.splitlines() if l.strip()]


def batch_config(tmp_path: Path, **overrides) -> Path:
    """Write a config file wired to the batch fixtures, store under tmp_path."""
    cfg = {
        "posts_path": str(FIXTURES / "batch_posts.jsonl"),
        "users_path": str(FIXTURES / "batch_users.jsonl"),
        "store_path": str(tmp_path / "state" / "profiles.db"),
        "min_size": 3,
        "seed": 7,
    }
    cfg.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg), encoding="utf-8")
    return path


@pytest.fixture()
def batch_pipeline(tmp_path):
    return Pipeline(PipelineConfig.from_file(batch_config(tmp_path)))


def synthetic_store(n: int = 30, seed: int = 42, scale: int = 1) -> ProfileStore:
    """Deterministic many-user store for ranking tests.

    s00/s01 are zero-follower users with the corpus-minimum activity,
    s02 is the degenerate unknown account (0/0) at minimum activity,
    s03 has zero followers but plenty of volume; everyone else draws
    random stats with at least one follower.  ``scale`` multiplies both
    follower counts jointly, leaving every follower ratio unchanged.
    """
    rng = random.Random(seed)
    store = ProfileStore()
    waves = [f"wave{i}" for i in range(1, 6)]
    for i in range(n):
        uid = f"s{i:02d}"
        if i in (0, 1):
            f1, f2 = 0, rng.randint(5, 50)
        elif i == 2:
            f1, f2 = 0, 0
        elif i == 3:
            f1, f2 = 0, 25
        else:
            f1, f2 = rng.randint(1, 5000), rng.randint(1, 800)
        f1, f2 = f1 * scale, f2 * scale
        fr = f1 / (f1 + f2) if (f1 + f2) else 0.0
        if i <= 2:
            chosen = waves[:1]
        elif i == 3:
            chosen = waves[:2]
        else:
            chosen = sorted(rng.sample(waves, rng.randint(1, len(waves))))
        snap = UserSnapshot(
            user_id=uid, handle=f"h_{uid}", follower_count=f1, followee_count=f2
        )
        for cid in chosen:
            if i <= 2:
                p1_on, p1_off, r1_on, r1_off = 1, 0, 0, 0
            elif i == 3:
                p1_on, p1_off, r1_on, r1_off = 40, 40, 10, 10
            else:
                p1_on, p1_off, r1_on, r1_off = (
                    rng.randint(1, 30), rng.randint(0, 30),
                    rng.randint(0, 10), rng.randint(0, 10),
                )
            feats = CoreFeatures(
                user_id=uid, context_id=cid,
                r1_on=r1_on, r2_on=0, r3_on=0, r4_on=0,
                p1_on=p1_on, p2_on=rng.randint(0, 8),
                r1_off=r1_off, r2_off=0, r3_off=0, r4_off=0,
                p1_off=p1_off, p2_off=rng.randint(0, 8),
                f1=f1, f2=f2,
            )
            metrics = MetricVector(
                tf=round(rng.uniform(0, 4), 6),
                ts=round(rng.uniform(0, 3), 6),
                ta=round(rng.uniform(0, 5), 6),
                fr=fr,
                ic=round(rng.uniform(0, 1), 6),
                community_scope=rng.random() < 0.5,
            )
            store.upsert(uid, cid, feats, metrics, snapshot=snap)
    return store
