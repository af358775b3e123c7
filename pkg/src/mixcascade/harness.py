"""Parameter sweeps: config loading, parallel execution, aggregation and export.

Every random draw in a sweep comes from a substream keyed by
``(master_seed, purpose, instance, grid indices, replicate)`` through
:class:`numpy.random.SeedSequence`, so results do not depend on how work is
scheduled across processes.
"""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field, replace
from fractions import Fraction
from os import PathLike
from typing import Any, Sequence

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .cascade import CascadeConfig, as_fraction, run_cascade, select_seeds
from .generators import Family, GeneratorSpec, RewireMode, RewireSpec, generate, rewire_assortativity
from .placement import Strategy, assign

WORKERS_ENV = "MIXCASCADE_WORKERS"

SCALES = {"desk": (20, 50), "paper": (100, 1000)}

CSV_COLUMNS = (
    "family", "alpha", "strategy", "eta", "theta", "gamma", "n_seeds",
    "mean_x", "stderr_x", "frac_full", "mean_iters", "n_runs",
)

# substream purposes
_NET, _REWIRE, _PLACE, _SEEDS, _DYNAMICS = range(5)


class ConfigError(ValueError):
    """Invalid sweep configuration."""


class SweepError(RuntimeError):
    """A sweep failed while running."""


@dataclass(frozen=True)
class SweepSpec:
    generator: GeneratorSpec
    theta_grid: tuple[float, ...]
    gamma_grid: tuple[Fraction, ...]
    n_seeds_list: tuple[int, ...] = (1,)
    rewire: RewireSpec | None = None
    strategy: Strategy = Strategy.RANDOM
    eta: float = 1.0
    n_instances: int = 100
    n_replicates: int = 1000
    master_seed: int = 0
    output_path: str | None = None
    resample: str = "replicate"  # or "instance"
    max_iterations: int | None = None
    stagnation_window: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        object.__setattr__(self, "theta_grid", tuple(sorted(float(t) for t in self.theta_grid)))
        object.__setattr__(self, "gamma_grid", tuple(sorted(as_fraction(g) for g in self.gamma_grid)))
        object.__setattr__(self, "n_seeds_list", tuple(sorted(int(s) for s in self.n_seeds_list)))
        for name in ("theta_grid", "gamma_grid", "n_seeds_list"):
            if not getattr(self, name):
                raise ConfigError(f"{name}: must not be empty")
        if any(not 0.0 <= t <= 1.0 for t in self.theta_grid):
            raise ConfigError("theta_grid: values must lie in [0, 1]")
        if any(not 1 <= s <= self.generator.node_count for s in self.n_seeds_list):
            raise ConfigError(f"n_seeds: values must lie in [1, {self.generator.node_count}]")
        if self.n_instances < 1 or self.n_replicates < 1:
            raise ConfigError("n_instances and n_replicates must be >= 1")
        if self.resample not in ("replicate", "instance"):
            raise ConfigError(f"resample: expected 'replicate' or 'instance', got {self.resample!r}")
        if self.strategy is Strategy.POWER_LAW and self.eta < 0:
            raise ConfigError("eta: must be >= 0")

    @property
    def family_label(self) -> str:
        label = self.generator.family.value
        if self.rewire is not None:
            label += "_" + self.rewire.mode.value.upper()
        return label

    def grid(self) -> list[tuple[int, int, int]]:
        """Index triples (theta, gamma, n_seeds) in lexicographic order."""
        return [
            (a, b, c)
            for a in range(len(self.theta_grid))
            for b in range(len(self.gamma_grid))
            for c in range(len(self.n_seeds_list))
        ]


@dataclass(frozen=True)
class AggregateRecord:
    family: str
    alpha: float | None
    strategy: str
    eta: float | None
    theta: float
    gamma: Fraction
    n_seeds: int
    mean_x: float
    stderr_x: float
    frac_full: float
    mean_iters: float
    n_runs: int


# --- config loading ---------------------------------------------------------------

_KEYS = {
    "family", "node_count", "mean_degree", "alpha",
    "rewire", "rewire_max_attempts", "rewire_target",
    "strategy", "eta", "theta_grid", "gamma_grid", "n_seeds",
    "scale", "n_instances", "n_replicates", "master_seed", "output_path",
    "resample", "max_iterations", "stagnation_window",
}


def _grid(raw: Any, key: str) -> list[float]:
    if isinstance(raw, dict):
        extra = set(raw) - {"start", "stop", "step"}
        if extra or not {"start", "stop", "step"} <= set(raw):
            raise ConfigError(f"{key}: a range needs exactly start, stop and step")
        start, stop, step = (float(raw[k]) for k in ("start", "stop", "step"))
        if step <= 0:
            raise ConfigError(f"{key}: step must be positive")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 12) for i in range(count)]
    if isinstance(raw, (int, float)):
        return [float(raw)]
    if isinstance(raw, list) and all(isinstance(v, (int, float)) for v in raw):
        return [float(v) for v in raw]
    raise ConfigError(f"{key}: expected a number, a list of numbers or a start/stop/step table")


def _check_unit(values: Sequence[float], key: str) -> None:
    for v in values:
        if not 0.0 <= v <= 1.0:
            raise ConfigError(f"{key}: value {v} outside [0, 1]")


def load_sweep(config_text: str) -> SweepSpec:
    """Parse a flat TOML sweep config. The accepted keys are listed in the README."""
    try:
        raw = tomllib.loads(config_text)
    except tomllib.TOMLDecodeError as exc:
        line, col = getattr(exc, "lineno", None), getattr(exc, "colno", None)
        where = f" at line {line}, column {col}" if line is not None else ""
        raise ConfigError(f"parse error{where}: {getattr(exc, 'msg', exc)}") from None
    unknown = sorted(set(raw) - _KEYS)
    if unknown:
        raise ConfigError(f"unknown key(s): {', '.join(unknown)}")

    def get(key, typ, default=None):
        val = raw.get(key, default)
        if val is not None and (not isinstance(val, typ) or isinstance(val, bool)):
            raise ConfigError(f"{key}: expected {getattr(typ, '__name__', typ)}, got {val!r}")
        return val

    try:
        family = Family(get("family", str, "ER"))
    except ValueError:
        raise ConfigError(f"family: unknown family {raw.get('family')!r}") from None
    alpha = get("alpha", (int, float))
    try:
        generator = GeneratorSpec(
            family=family,
            node_count=get("node_count", int, 1000),
            target_mean_degree=get("mean_degree", int, 4),
            alpha=None if alpha is None else float(alpha),
        )
    except ValueError as exc:
        key = "alpha" if "alpha" in str(exc) else "node_count/mean_degree"
        raise ConfigError(f"{key}: {exc}") from None

    rewire = None
    mode = get("rewire", str, "none")
    if mode != "none":
        try:
            rewire = RewireSpec(
                mode=RewireMode(mode),
                max_attempts=get("rewire_max_attempts", int),
                target_assortativity=get("rewire_target", (int, float), 0.3),
            )
        except ValueError as exc:
            raise ConfigError(f"rewire: {exc}") from None

    theta_grid = _grid(raw.get("theta_grid", [0.5]), "theta_grid")
    _check_unit(theta_grid, "theta_grid")
    gamma_grid = _grid(raw.get("gamma_grid", [0.5]), "gamma_grid")
    _check_unit(gamma_grid, "gamma_grid")
    n_seeds = raw.get("n_seeds", [1])
    n_seeds = [n_seeds] if isinstance(n_seeds, int) else n_seeds
    if not isinstance(n_seeds, list) or not all(isinstance(s, int) for s in n_seeds):
        raise ConfigError("n_seeds: expected an integer or a list of integers")

    scale = get("scale", str, "desk")
    if scale not in SCALES:
        raise ConfigError(f"scale: expected one of {sorted(SCALES)}, got {scale!r}")
    n_inst, n_rep = SCALES[scale]
    try:
        strategy = Strategy(get("strategy", str, "RANDOM"))
    except ValueError:
        raise ConfigError(f"strategy: unknown strategy {raw.get('strategy')!r}") from None

    return SweepSpec(
        generator=generator,
        rewire=rewire,
        strategy=strategy,
        eta=float(get("eta", (int, float), 1.0)),
        theta_grid=theta_grid,
        gamma_grid=gamma_grid,
        n_seeds_list=n_seeds,
        n_instances=get("n_instances", int, n_inst),
        n_replicates=get("n_replicates", int, n_rep),
        master_seed=get("master_seed", int, 0),
        output_path=get("output_path", str),
        resample=get("resample", str, "replicate"),
        max_iterations=get("max_iterations", int),
        stagnation_window=get("stagnation_window", int),
    )


# --- execution ---------------------------------------------------------------------


def substream(master_seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=key))


def build_instance(spec: SweepSpec, instance: int):
    gen = replace(spec.generator, rng_seed=instance)
    net = generate(gen, substream(spec.master_seed, _NET, instance))
    if spec.rewire is not None:
        net = rewire_assortativity(net, spec.rewire, substream(spec.master_seed, _REWIRE, instance))
    return net


def _run_instance(spec: SweepSpec, instance: int) -> dict[tuple[int, int, int], np.ndarray]:
    """All runs on one network instance: grid point -> (n_replicates, 2) array of (x, iterations)."""
    try:
        net = build_instance(spec, instance)
    except Exception as exc:
        raise SweepError(f"instance {instance}: network generation failed: {exc}") from exc
    ms = spec.master_seed
    per_instance = spec.resample == "instance"
    out: dict[tuple[int, int, int], np.ndarray] = {}
    for it_, theta in enumerate(spec.theta_grid):
        placements = {}
        for rep in range(1 if per_instance else spec.n_replicates):
            key = (_PLACE, instance, it_) if per_instance else (_PLACE, instance, it_, rep)
            placements[rep] = assign(net, theta, spec.strategy, substream(ms, *key), spec.eta)
        for ig, gamma in enumerate(spec.gamma_grid):
            for isd, n_seeds in enumerate(spec.n_seeds_list):
                config = CascadeConfig(
                    gamma_threshold=gamma,
                    n_seeds=n_seeds,
                    max_iterations=spec.max_iterations,
                    stagnation_window=spec.stagnation_window,
                )
                res = np.empty((spec.n_replicates, 2))
                for rep in range(spec.n_replicates):
                    assignment = placements[0 if per_instance else rep]
                    skey = (_SEEDS, instance, isd) if per_instance else (_SEEDS, instance, isd, rep)
                    seeds = select_seeds(net, n_seeds, substream(ms, *skey))
                    rng = substream(ms, _DYNAMICS, instance, it_, ig, isd, rep)
                    r = run_cascade(net, assignment, config, seeds, rng)
                    res[rep] = (r.cascade_size, r.iterations_used)
                out[(it_, ig, isd)] = res
    return out


def worker_count(workers: int | None = None) -> int:
    if workers is not None:
        return max(int(workers), 1)
    env = os.environ.get(WORKERS_ENV)
    return max(int(env), 1) if env else 1


def collect_runs(spec: SweepSpec, workers: int | None = None) -> dict[tuple[int, int, int], np.ndarray]:
    """Raw per-run results: grid index -> (n_instances * n_replicates, 2) array of (x, iterations).

    Rows are ordered by instance, then replicate. ``workers`` defaults to the
    ``MIXCASCADE_WORKERS`` environment variable, then 1.
    """
    n_workers = worker_count(workers)
    instances = range(spec.n_instances)
    if n_workers == 1:
        results = [_run_instance(spec, i) for i in instances]
    else:
        from joblib import Parallel, delayed

        results = Parallel(n_jobs=n_workers, backend="loky")(
            delayed(_run_instance)(spec, i) for i in instances
        )
    return {idx: np.concatenate([r[idx] for r in results]) for idx in spec.grid()}


def run_sweep(spec: SweepSpec, workers: int | None = None) -> list[AggregateRecord]:
    """Run every (instance, grid point, replicate) cascade and average per grid point.

    The output is identical for any worker count.
    """
    runs = collect_runs(spec, workers)
    return [_aggregate(spec, idx, runs[idx]) for idx in spec.grid()]


def _aggregate(spec: SweepSpec, idx: tuple[int, int, int], runs: np.ndarray) -> AggregateRecord:
    x, iters = runs[:, 0], runs[:, 1]
    n = x.size
    stderr = float(x.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    it_, ig, isd = idx
    return AggregateRecord(
        family=spec.family_label,
        alpha=spec.generator.alpha,
        strategy=spec.strategy.value,
        eta=spec.eta if spec.strategy is Strategy.POWER_LAW else None,
        theta=spec.theta_grid[it_],
        gamma=spec.gamma_grid[ig],
        n_seeds=spec.n_seeds_list[isd],
        mean_x=float(x.mean()),
        stderr_x=stderr,
        frac_full=float(np.mean(x == 1.0)),
        mean_iters=float(iters.mean()),
        n_runs=n,
    )


# --- export ----------------------------------------------------------------------


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, Fraction):
        value = float(value)
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def _sort_key(rec: AggregateRecord):
    return (rec.family, rec.alpha or 0.0, rec.strategy, rec.eta or 0.0, rec.theta, rec.gamma, rec.n_seeds)


def records_to_csv(records: Sequence[AggregateRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in sorted(records, key=_sort_key):
        writer.writerow([_fmt(getattr(rec, col)) for col in CSV_COLUMNS])
    return buf.getvalue()


def export_csv(records: Sequence[AggregateRecord], path: str | PathLike) -> None:
    if not records:
        raise ValueError("no records to export")
    text = records_to_csv(records)
    try:
        with open(path, "w", encoding="ascii", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def read_csv(path: str | PathLike) -> list[AggregateRecord]:
    with open(path, encoding="ascii", newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = []
    for row in rows:
        out.append(AggregateRecord(
            family=row["family"],
            alpha=float(row["alpha"]) if row["alpha"] else None,
            strategy=row["strategy"],
            eta=float(row["eta"]) if row["eta"] else None,
            theta=float(row["theta"]),
            gamma=as_fraction(float(row["gamma"])),
            n_seeds=int(row["n_seeds"]),
            mean_x=float(row["mean_x"]),
            stderr_x=float(row["stderr_x"]),
            frac_full=float(row["frac_full"]),
            mean_iters=float(row["mean_iters"]),
            n_runs=int(row["n_runs"]),
        ))
    return out


def emit_plot_data(records: Sequence[AggregateRecord], mode: str, path: str | PathLike) -> dict:
    """Write plot-ready data and return it.

    ``curves``: one series per (family, strategy, Gamma, n_seeds) with rows
    (theta, mean_x, stderr_x, identity) where identity = theta is the
    reference diagonal. ``heatmap``: (theta, Gamma, mean_x) triples per
    (family, strategy, n_seeds), also with the identity column; the
    theta x Gamma grid must be complete.
    """
    if not records:
        raise ValueError("no records")
    recs = sorted(records, key=_sort_key)
    if mode == "curves":
        series: dict[tuple, list] = {}
        for r in recs:
            series.setdefault((r.family, r.strategy, r.gamma, r.n_seeds), []).append(
                (r.theta, r.mean_x, r.stderr_x, r.theta)
            )
        thetas = {key: [row[0] for row in rows] for key, rows in series.items()}
        reference = next(iter(thetas.values()))
        for key, ts in thetas.items():
            if ts != reference:
                raise ValueError(f"series {key} covers theta {ts}, expected {reference}")
        with open(path, "w", encoding="ascii", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("family", "strategy", "gamma", "n_seeds", "theta", "mean_x", "stderr_x", "identity"))
            for (fam, strat, gamma, ns), rows in series.items():
                for row in rows:
                    w.writerow([fam, strat, _fmt(gamma), ns] + [_fmt(v) for v in row])
        return series
    if mode == "heatmap":
        panels: dict[tuple, list] = {}
        for r in recs:
            panels.setdefault((r.family, r.strategy, r.n_seeds), []).append((r.theta, r.gamma, r.mean_x))
        for key, rows in panels.items():
            ts = {t for t, _, _ in rows}
            gs = {g for _, g, _ in rows}
            if len(rows) != len(ts) * len(gs) or len(set((t, g) for t, g, _ in rows)) != len(rows):
                raise ValueError(f"panel {key} does not cover a full theta x gamma grid")
        with open(path, "w", encoding="ascii", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("family", "strategy", "n_seeds", "theta", "gamma", "mean_x", "identity"))
            for (fam, strat, ns), rows in panels.items():
                for t, g, x in rows:
                    w.writerow([fam, strat, ns, _fmt(t), _fmt(g), _fmt(x), _fmt(t)])
        return panels
    raise ValueError(f"unknown mode {mode!r}; expected 'curves' or 'heatmap'")
