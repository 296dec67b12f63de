import json

from invdiam.cli import main
from invdiam.corpus import CorpusSpec, run_corpus
from invdiam.report import CSV_COLUMNS, write_report

SMALL = dict(trees=10, connected=8, triangulations=4)


def small_spec(seed=5, **kw):
    return CorpusSpec(seed=seed, tree_n=(2, 24), **SMALL, **kw)


def test_corpus_small_run_passes():
    report = run_corpus(small_spec())
    assert len(report.rows) == 22
    assert report.passed, report.failures
    oracle_rows = [r for r in report.rows if r.oracle_status == "ok"]
    assert oracle_rows, "expected some instances inside the oracle budget"
    for r in oracle_rows:
        assert r.lower_bound <= r.oracle_conv <= r.oracle_id
        assert all(r.oracle_distance <= L for L in r.planner_lengths.values())


def test_corpus_budget_skips_are_recorded():
    report = run_corpus(CorpusSpec(seed=1, trees=6, connected=0, triangulations=0,
                                   tree_n=(40, 60), oracle_max_edges=18))
    assert all(r.oracle_status.startswith("skipped") for r in report.rows)
    assert report.passed


def test_empty_spec_empty_report():
    report = run_corpus(CorpusSpec(seed=0, trees=0, connected=0, triangulations=0))
    assert report.rows == [] and report.passed


def test_small_trees_at_p3_meet_the_exact_value():
    spec = CorpusSpec(seed=11, trees=12, connected=0, triangulations=0,
                      tree_n=(2, 9), p_range=(3, 3))
    report = run_corpus(spec)
    assert report.passed
    for r in report.rows:
        want = (r.n - 1 + 1) // 2
        assert r.oracle_id == r.oracle_conv == want
        if r.pair_kind == "converse":
            assert r.planner_lengths["forest-lift"] == want


def test_corpus_deterministic_across_runs_and_workers(tmp_path):
    spec = small_spec(seed=9)
    a = run_corpus(spec, workers=1)
    b = run_corpus(spec, workers=2)
    write_report(a, tmp_path / "a", figures=False)
    write_report(b, tmp_path / "b", figures=False)
    assert (tmp_path / "a/corpus.csv").read_bytes() == (tmp_path / "b/corpus.csv").read_bytes()
    assert (tmp_path / "a/corpus.json").read_bytes() == (tmp_path / "b/corpus.json").read_bytes()


def test_csv_schema_fixed(tmp_path):
    report = run_corpus(CorpusSpec(seed=3, trees=2, connected=1, triangulations=1))
    write_report(report, tmp_path, figures=False)
    header = (tmp_path / "corpus.csv").read_text().splitlines()[0].split(",")
    assert header == CSV_COLUMNS


def test_cli_corpus_reads_worker_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("INVDIAM_WORKERS", "2")
    code = main([
        "corpus", "--seed", "7", "--trees", "4", "--connected", "2",
        "--triangulations", "0", "--out-dir", str(tmp_path / "env"),
        "--no-figures",
    ])
    assert code == 0
    assert json.loads(capsys.readouterr().out)["passed"]


def test_cli_corpus_emits_figures(tmp_path, capsys):
    code = main([
        "corpus", "--seed", "4", "--trees", "8", "--connected", "4",
        "--triangulations", "2", "--out-dir", str(tmp_path / "out"),
    ])
    out = json.loads(capsys.readouterr().out)
    assert code == 0 and out["passed"]
    for name in ("corpus.csv", "corpus.json", "tree_plans.png",
                 "oracle_vs_planner.png", "lower_vs_oracle.png"):
        assert (tmp_path / "out" / name).exists(), name
