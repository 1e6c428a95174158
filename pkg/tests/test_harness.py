from fractions import Fraction

import pytest

from chainsched.harness import (
    CSV_COLUMNS,
    ExperimentConfig,
    StatsReport,
    loglog_slope,
    run_slowdown_study,
    run_time_profile,
)
from chainsched.synth import corpus


@pytest.fixture(scope="module")
def small_study(tmp_path_factory):
    path = tmp_path_factory.mktemp("h") / "rows.csv"
    cfg = ExperimentConfig(
        corpus(8, 0.5, 12, base_seed=11),
        platforms=((3, 2), (1, 4)),
        strategies=("otac-l", "otac-b", "fertac", "twocatac", "herad"),
    )
    return cfg, run_slowdown_study(cfg, path), path


def test_reference_slowdown_is_one(small_study):
    _, rep, _ = small_study
    for r in rep.rows:
        if r["strategy"] == "herad":
            assert r["slowdown_exact"] == 1
        elif not r["flagged"]:
            assert r["slowdown_exact"] >= 1
    assert rep.cell(3, 2, 0.5, "herad").pct_optimal == 100


def test_aggregates_recomputable_from_csv(small_study):
    _, rep, path = small_study
    rows = StatsReport.read_csv(path)
    assert list(rows[0].keys()) == list(CSV_COLUMNS)
    again = StatsReport.from_rows(rows)
    assert again.cells == rep.cells


def test_deterministic_apart_from_timing(small_study):
    cfg, rep, _ = small_study
    other = run_slowdown_study(cfg)
    strip = lambda rows: [{k: v for k, v in r.items() if k != "wall_us"} for r in rows]
    assert strip(other.rows) == strip(rep.rows)


def test_flagged_rows_are_excluded():
    rows = [
        {"b": 1, "l": 1, "sr": 0.5, "strategy": "x", "flagged": False, "slowdown_exact": Fraction(3, 2), "big_used": 1, "little_used": 1},
        {"b": 1, "l": 1, "sr": 0.5, "strategy": "x", "flagged": True, "slowdown_exact": "", "big_used": "", "little_used": ""},
    ]
    cell = StatsReport.from_rows(rows).cell(1, 1, 0.5, "x")
    assert cell.runs == 1 and cell.excluded == 1 and cell.avg == Fraction(3, 2)


def test_config_must_be_non_empty():
    with pytest.raises(ValueError):
        ExperimentConfig((), platforms=((1, 1),))


def test_slowdown_grid_corpus_shape():
    cfg = ExperimentConfig.slowdown_grid(chains=4)
    assert len(cfg.corpus) == 12
    assert {s.stateless_ratio for s in cfg.corpus} == {0.2, 0.5, 0.8}


def test_time_profile_and_slope():
    pts = run_time_profile([(6, 2, 2, 0.5), (12, 2, 2, 0.5)], strategies=("fertac",), repetitions=3)
    assert [p.runs for p in pts] == [3, 3]
    assert loglog_slope([1, 2, 4], [3, 12, 48]) == pytest.approx(2.0)
