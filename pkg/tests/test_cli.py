"""Command-line interface, driven in-process through main(argv)."""

import json

import pytest

from contextminer import Pipeline, PipelineConfig, ProfileStore, ranked_csv
from contextminer.cli import main
from contextminer.store import repeat_users_csv
from conftest import FIXTURES, batch_config

BATCH = str(FIXTURES / "batch_contexts.jsonl")


@pytest.fixture(scope="module")
def ran_cfg(tmp_path_factory):
    """A config whose pipeline state already holds the processed batch."""
    cfg = batch_config(tmp_path_factory.mktemp("cli"))
    assert main(["run", "--config", str(cfg), "--batch", BATCH]) == 0
    return str(cfg)


def test_ingest_summary(capsys):
    rc = main([
        "ingest",
        "--posts", str(FIXTURES / "smoke.jsonl"),
        "--users", str(FIXTURES / "smoke_users.jsonl"),
    ])
    out = capsys.readouterr().out
    assert rc == 0
    assert "loaded 6 posts, 4 users" in out


def test_ingest_reports_problems(tmp_path, capsys):
    path = tmp_path / "dirty.jsonl"
    good = {"id": "g1", "user_id": "u1", "ts": "2018-01-01T00:00:00Z",
            "text": "hello @u9", "mentions": ["u9"]}
    path.write_text(json.dumps(good) + "\nnot json\n", encoding="utf-8")
    rc = main(["ingest", "--posts", str(path)])
    captured = capsys.readouterr()
    assert rc == 0
    assert "loaded 1 posts" in captured.out
    assert "line 2" in captured.err
    assert "unresolved user references" in captured.out


def test_run_batch_prints_per_context_lines(tmp_path, capsys):
    cfg = batch_config(tmp_path)
    rc = main(["run", "--config", str(cfg), "--batch", BATCH])
    out = capsys.readouterr().out
    assert rc == 0
    assert "alpha_drive: ok" in out
    assert "added=6 updated=0" in out
    assert "beta_drive: ok" in out
    assert "gamma_drive: ok" in out
    assert "batch: 3 contexts" in out
    assert (tmp_path / "state" / "profiles.db").exists()


def test_run_single_registered_context(ran_cfg, capsys):
    rc = main(["run", "--config", ran_cfg, "--context", "alpha_drive"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "alpha_drive: ok" in out
    assert "added=0 updated=6" in out


def test_run_unknown_context_exits_2(ran_cfg, capsys):
    rc = main(["run", "--config", ran_cfg, "--context", "nope"])
    captured = capsys.readouterr()
    assert rc == 2
    assert "unknown context" in captured.err
    assert captured.out == ""


def test_rank_to_stdout_matches_library(ran_cfg, capsys):
    rc = main(["rank", "--config", ran_cfg, "--fn", "rank1", "--top", "3"])
    out = capsys.readouterr().out
    assert rc == 0
    pipe = Pipeline(PipelineConfig.from_file(ran_cfg))
    assert out == ranked_csv(pipe.ranking("rank1"), pipe.store, top=3)
    assert len(out.splitlines()) == 4


def test_rank_to_file(ran_cfg, tmp_path, capsys):
    dest = tmp_path / "ranking.csv"
    rc = main(["rank", "--config", ran_cfg, "--out", str(dest)])
    assert rc == 0
    assert f"wrote {dest}" in capsys.readouterr().out
    lines = dest.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "rank,user_id,handle,score,FR,participations,labels"
    assert len(lines) == 17  # header + every stored user


def test_rank_custom_expression(ran_cfg, capsys):
    rc = main(["rank", "--config", ran_cfg, "--fn", "expr:participations"])
    out = capsys.readouterr().out
    assert rc == 0
    # rep1 is the only two-context user, so it tops this expression
    assert out.splitlines()[1].split(",")[1] == "rep1"


def test_discover_review_reject_cycle(tmp_path, capsys):
    cfg = str(batch_config(tmp_path))
    main(["run", "--config", cfg, "--batch", BATCH])
    capsys.readouterr()

    assert main(["discover", "--config", cfg]) == 0
    out = capsys.readouterr().out
    assert "queued 1 new candidate(s)" in out
    assert "coatswap: support=3 interval=2018-05-31..2018-06-04" in out

    # proposing again finds nothing new
    assert main(["discover", "--config", cfg]) == 0
    assert "queued 0 new candidate(s)" in capsys.readouterr().out

    assert main(["review", "--config", cfg, "--candidate", "coatswap",
                 "--reject", "--note", "not ours"]) == 0
    assert "rejected: coatswap" in capsys.readouterr().out

    # the rejected tag stays buried on every later pass
    for _ in range(3):
        assert main(["discover", "--config", cfg]) == 0
        out = capsys.readouterr().out
        assert "queued 0 new candidate(s)" in out
        assert "coatswap:" not in out


def test_review_approve_registers_context(tmp_path, capsys):
    cfg = str(batch_config(tmp_path))
    main(["run", "--config", cfg, "--batch", BATCH])
    main(["discover", "--config", cfg])
    capsys.readouterr()
    rc = main(["review", "--config", cfg, "--candidate", "coatswap", "--approve"])
    assert rc == 0
    assert "approved: new context coatswap_20180531" in capsys.readouterr().out
    registry = (tmp_path / "state" / "contexts.jsonl").read_text(encoding="utf-8")
    assert "coatswap_20180531" in registry


def test_export_posts_round_trip(ran_cfg, tmp_path, capsys):
    dest = tmp_path / "posts.jsonl"
    rc = main(["export", "--config", ran_cfg, "--kind", "posts",
               "--out", str(dest)])
    assert rc == 0
    assert f"wrote {dest}" in capsys.readouterr().out
    original = (FIXTURES / "batch_posts.jsonl").read_text(encoding="utf-8")
    assert dest.read_text(encoding="utf-8") == original


def test_export_users_round_trip(ran_cfg, tmp_path):
    dest = tmp_path / "users.jsonl"
    assert main(["export", "--config", ran_cfg, "--kind", "users",
                 "--out", str(dest)]) == 0
    original = (FIXTURES / "batch_users.jsonl").read_text(encoding="utf-8")
    assert dest.read_text(encoding="utf-8") == original


def test_export_store_csv(ran_cfg, tmp_path):
    dest = tmp_path / "repeat.csv"
    assert main(["export", "--config", ran_cfg, "--kind", "store-csv",
                 "--out", str(dest)]) == 0
    store_path = PipelineConfig.from_file(ran_cfg).store_path
    store = ProfileStore.restore(store_path)
    assert dest.read_text(encoding="utf-8") == repeat_users_csv(store, 2)
    rows = dest.read_text(encoding="utf-8").splitlines()
    assert rows[1].startswith("rep1,")
    assert len(rows) == 2  # only rep1 appears in two contexts


def test_export_edges_and_communities(ran_cfg, tmp_path):
    edges = tmp_path / "alpha.tsv"
    assert main(["export", "--config", ran_cfg, "--kind", "edges",
                 "--context", "alpha_drive", "--out", str(edges)]) == 0
    for line in edges.read_text(encoding="utf-8").splitlines():
        src, dst, weight = line.split("\t")
        assert src and dst and int(weight) >= 1

    comms = tmp_path / "alpha_comms.tsv"
    assert main(["export", "--config", ran_cfg, "--kind", "communities",
                 "--context", "alpha_drive", "--out", str(comms)]) == 0
    text = comms.read_text(encoding="utf-8")
    assert "alpha_drive\tdemon\t" in text


def test_export_edges_requires_context(ran_cfg, tmp_path, capsys):
    rc = main(["export", "--config", ran_cfg, "--kind", "edges",
               "--out", str(tmp_path / "x.tsv")])
    assert rc == 2
    assert "--context is required" in capsys.readouterr().err


def test_unknown_subcommand_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
