import csv
from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest

from mixcascade.generators import GeneratorSpec
from mixcascade.harness import (
    CSV_COLUMNS,
    AggregateRecord,
    ConfigError,
    SweepSpec,
    emit_plot_data,
    export_csv,
    load_sweep,
    read_csv,
    records_to_csv,
    run_sweep,
    substream,
    worker_count,
)


def small(family="ER", **kw):
    base = dict(
        generator=GeneratorSpec(family, node_count=100),
        theta_grid=[0.5],
        gamma_grid=[0.5],
        n_instances=3,
        n_replicates=10,
    )
    base.update(kw)
    return SweepSpec(**base)


def record(theta=0.5, gamma=Fraction(1, 2), n_seeds=1, x=0.25):
    return AggregateRecord("ER", None, "RANDOM", None, theta, gamma, n_seeds, x, 0.01, 0.0, 1234.5, 1000)


def test_minimal_config_defaults():
    spec = load_sweep('family = "ER"\ntheta_grid = [0.1, 0.2]\ngamma_grid = 0.25\n')
    assert spec.generator.node_count == 1000
    assert spec.generator.target_mean_degree == 4
    assert spec.theta_grid == (0.1, 0.2)
    assert spec.gamma_grid == (Fraction(1, 4),)
    assert (spec.n_instances, spec.n_replicates) == (20, 50)
    assert spec.resample == "replicate"


def test_desk_scale_config():
    spec = load_sweep('family = "SFBA"\nn_instances = 20\nn_replicates = 50\n')
    assert (spec.n_instances, spec.n_replicates) == (20, 50)
    assert load_sweep('scale = "paper"').n_replicates == 1000


def test_range_grid():
    spec = load_sweep("theta_grid = {start = 0.0, stop = 1.0, step = 0.05}\n")
    assert len(spec.theta_grid) == 21
    assert spec.theta_grid[-1] == 1.0


@pytest.mark.parametrize(
    "text, key",
    [
        ("theta_grid = [0.5, 1.2]", "theta_grid"),
        ("gamma_grid = -0.1", "gamma_grid"),
        ("bogus = 1", "bogus"),
        ('family = "XX"', "family"),
        ('strategy = "HUBS"', "strategy"),
        ("n_instances = 0", "n_instances"),
        ("node_count = true", "node_count"),
        ('family = "SF_ALPHA"\nalpha = 0.1', "alpha"),
        ('scale = "huge"', "scale"),
    ],
)
def test_config_errors_name_the_key(text, key):
    with pytest.raises(ConfigError, match=key):
        load_sweep(text)


def test_parse_error_reports_position():
    with pytest.raises(ConfigError, match=r"line 3, column 1"):
        load_sweep('family = "ER"\ntheta_grid = [0.1,\n')


def test_gamma_zero_gives_full_cascades():
    for rec in run_sweep(small(theta_grid=[0.0, 0.5, 1.0], gamma_grid=[0.0])):
        assert rec.mean_x == 1.0
        assert rec.frac_full == 1.0


def test_gamma_one_bound():
    (rec,) = run_sweep(small(gamma_grid=[1.0]))
    assert rec.mean_x <= 0.5 + 1 / 100


def test_record_invariants():
    spec = small(theta_grid=[0.2, 0.6], gamma_grid=[0.25, 0.75], n_seeds_list=[1, 5])
    recs = run_sweep(spec)
    assert len(recs) == 8
    for r in recs:
        assert 0.0 <= r.mean_x <= 1.0
        assert r.stderr_x >= 0.0
        assert r.n_runs == 30


def test_resample_per_instance_mode():
    recs = run_sweep(small(resample="instance", n_replicates=20))
    assert recs[0].n_runs == 60


def test_stderr_scales_with_replicates():
    # pooled over a few grid points, doubling replicates shrinks stderr by about 1/sqrt(2)
    base = small(family="SFBA", theta_grid=[0.3, 0.4, 0.5], gamma_grid=[0.25], n_instances=4, n_replicates=100)
    se1 = np.array([r.stderr_x for r in run_sweep(base)])
    se2 = np.array([r.stderr_x for r in run_sweep(replace(base, n_replicates=200, master_seed=1))])
    assert np.mean(se2 / se1) == pytest.approx(1 / np.sqrt(2), rel=0.25)


def test_substreams_are_independent_of_order():
    a = substream(5, 1, 2, 3).random()
    substream(5, 9, 9).random()
    assert substream(5, 1, 2, 3).random() == a
    assert substream(5, 1, 2, 4).random() != a


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("MIXCASCADE_WORKERS", "3")
    assert worker_count() == 3
    assert worker_count(2) == 2
    monkeypatch.delenv("MIXCASCADE_WORKERS")
    assert worker_count() == 1


def test_parallel_output_identical():
    spec = small(family="EXP", theta_grid=[0.3, 0.7], n_instances=4)
    assert records_to_csv(run_sweep(spec, workers=1)) == records_to_csv(run_sweep(spec, workers=2))


def test_csv_single_record(tmp_path):
    path = tmp_path / "out.csv"
    export_csv([record()], path)
    lines = path.read_text().splitlines()
    assert len(lines) == 2
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert lines[1] == "ER,,RANDOM,,0.5,0.5,1,0.25,0.01,0,1234.5,1000"


def test_csv_round_trip_is_byte_identical(tmp_path):
    recs = [record(theta=t, x=t / 3) for t in (0.1, 0.2, 0.3)]
    export_csv(recs, tmp_path / "a.csv")
    export_csv(read_csv(tmp_path / "a.csv"), tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_csv_rejects_empty_and_bad_path(tmp_path):
    with pytest.raises(ValueError):
        export_csv([], tmp_path / "x.csv")
    with pytest.raises(OSError, match="nope"):
        export_csv([record()], tmp_path / "nope" / "x.csv")


def test_heatmap_grid_rows(tmp_path):
    grid = [round(0.05 * i, 2) for i in range(21)]
    recs = [record(theta=t, gamma=Fraction(g).limit_denominator(100)) for t in grid for g in grid]
    export_csv(recs, tmp_path / "h.csv")
    assert len((tmp_path / "h.csv").read_text().splitlines()) == 1 + 21 * 21
    panels = emit_plot_data(recs, "heatmap", tmp_path / "h.dat")
    assert len(panels) == 1 and len(next(iter(panels.values()))) == 441


def test_single_record_heatmap(tmp_path):
    panels = emit_plot_data([record()], "heatmap", tmp_path / "h.dat")
    assert list(panels.values()) == [[(0.5, Fraction(1, 2), 0.25)]]
    rows = list(csv.reader(open(tmp_path / "h.dat")))
    assert rows[0][-1] == "identity" and len(rows) == 2


def test_curves_one_series_per_gamma(tmp_path):
    gammas = [Fraction(i, 4) for i in range(5)]
    recs = [record(theta=t, gamma=g) for t in (0.1, 0.5, 0.9) for g in gammas]
    series = emit_plot_data(recs, "curves", tmp_path / "c.dat")
    assert len(series) == 5
    for rows in series.values():
        assert [r[0] for r in rows] == [0.1, 0.5, 0.9]
        assert all(r[3] == r[0] for r in rows)


def test_curves_one_series_per_seed_count(tmp_path):
    recs = [record(theta=t, n_seeds=s) for t in (0.1, 0.5) for s in range(1, 51)]
    assert len(emit_plot_data(recs, "curves", tmp_path / "c.dat")) == 50


def test_plot_data_coverage_errors(tmp_path):
    with pytest.raises(ValueError):
        emit_plot_data([record(theta=0.1), record(theta=0.2), record(theta=0.1, gamma=Fraction(1, 4))], "curves", tmp_path / "c")
    with pytest.raises(ValueError):
        emit_plot_data([record(theta=0.1), record(theta=0.2), record(theta=0.1, gamma=Fraction(1, 4))], "heatmap", tmp_path / "h")
    with pytest.raises(ValueError):
        emit_plot_data([record()], "bars", tmp_path / "x")
