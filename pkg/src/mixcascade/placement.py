"""Placement of Simple Spreaders (SS) and Threshold-based Spreaders (TBS) on nodes."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from os import PathLike

import numpy as np
from scipy import stats

from .graph import Network

SS = "SS"
TBS = "TBS"


class Strategy(str, Enum):
    RANDOM = "RANDOM"
    TBS_BY_DEGREE = "TBS_BY_DEGREE"
    SS_BY_DEGREE = "SS_BY_DEGREE"
    POWER_LAW = "POWER_LAW"


@dataclass(frozen=True, eq=False)
class ProfileAssignment:
    """Per-node learner profile; ``is_ss[i]`` is True for a Simple Spreader.

    ``strategy`` and ``eta`` are bookkeeping only. The cascade engine reads
    ``is_ss`` and nothing else.
    """

    is_ss: np.ndarray
    theta: float
    strategy: Strategy = Strategy.RANDOM
    eta: float | None = None

    def __post_init__(self) -> None:
        arr = np.asarray(self.is_ss, dtype=bool)
        arr.setflags(write=False)
        object.__setattr__(self, "is_ss", arr)

    @property
    def ss_count(self) -> int:
        return int(self.is_ss.sum())

    def labels(self) -> list[str]:
        return [SS if s else TBS for s in self.is_ss]

    def __len__(self) -> int:
        return self.is_ss.size


def ss_count_for(theta: float, node_count: int) -> int:
    """round(theta * Z) with halves rounded up, computed exactly."""
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta must lie in [0, 1], got {theta}")
    exact = Fraction(repr(float(theta))) * node_count
    return int(exact + Fraction(1, 2))


def _mask(n: int, chosen: np.ndarray) -> np.ndarray:
    out = np.zeros(n, dtype=bool)
    out[chosen] = True
    return out


def weighted_sample_without_replacement(
    weights: np.ndarray, size: int, rng: np.random.Generator
) -> np.ndarray:
    """Indices of ``size`` items drawn one at a time with probability proportional to weight.

    Uses Efraimidis-Spirakis keys ``log(u) / w``, which reproduce the
    successive-draw distribution exactly. Zero-weight items are taken last,
    uniformly among themselves.
    """
    w = np.asarray(weights, dtype=float)
    u = rng.random(w.size)
    positive = w > 0
    keys = np.full(w.size, -np.inf)
    keys[positive] = np.log(u[positive]) / w[positive]
    # primary: positive weight first; secondary: key; tertiary breaks zero-weight ties
    order = np.lexsort((-u, -keys, ~positive))
    return order[:size]


def assign_random(net: Network, theta: float, rng: np.random.Generator) -> ProfileAssignment:
    n_ss = ss_count_for(theta, net.node_count)
    chosen = rng.choice(net.node_count, size=n_ss, replace=False)
    return ProfileAssignment(_mask(net.node_count, chosen), theta, Strategy.RANDOM)


def assign_tbs_by_degree(net: Network, theta: float, rng: np.random.Generator) -> ProfileAssignment:
    n_tbs = net.node_count - ss_count_for(theta, net.node_count)
    tbs = weighted_sample_without_replacement(net.degrees, n_tbs, rng)
    return ProfileAssignment(~_mask(net.node_count, tbs), theta, Strategy.TBS_BY_DEGREE)


def assign_ss_by_degree(net: Network, theta: float, rng: np.random.Generator) -> ProfileAssignment:
    n_ss = ss_count_for(theta, net.node_count)
    ss = weighted_sample_without_replacement(net.degrees, n_ss, rng)
    return ProfileAssignment(_mask(net.node_count, ss), theta, Strategy.SS_BY_DEGREE)


def power_law_class_probabilities(
    degrees: np.ndarray, counts: np.ndarray, n_ss: int, eta: float
) -> np.ndarray:
    """Per-class SS probabilities ``min(1, c * k**-eta)`` with the expected SS total equal to ``n_ss``.

    Degree-0 classes are weighted as k = 1. Classes that would exceed
    probability 1 are clipped and ``c`` is re-solved over the rest.
    """
    w = np.maximum(degrees, 1).astype(float) ** -eta
    counts = counts.astype(float)
    if n_ss > counts.sum():
        raise ValueError(f"cannot place {n_ss} SS among {int(counts.sum())} nodes")
    clipped = np.zeros(w.size, dtype=bool)
    while True:
        free = ~clipped
        budget = n_ss - counts[clipped].sum()
        denom = np.dot(counts[free], w[free])
        c = budget / denom if denom > 0 else 0.0
        p = np.where(clipped, 1.0, c * w)
        over = free & (p > 1.0)
        if not over.any():
            return p
        clipped |= over


def _conditional_binomial_counts(
    counts: np.ndarray, p: np.ndarray, total: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw class counts n_k ~ Binomial(N_k, p_k) conditioned on sum(n_k) == total."""
    n_classes = counts.size
    # tail[c][s] = P(classes c.. contribute exactly s)
    tail = np.zeros((n_classes + 1, total + 1))
    tail[n_classes, 0] = 1.0
    pmfs = []
    for c in range(n_classes - 1, -1, -1):
        pmf = stats.binom.pmf(np.arange(min(counts[c], total) + 1), counts[c], p[c])
        pmfs.append(pmf)
        tail[c] = np.convolve(tail[c + 1], pmf)[: total + 1]
    pmfs.reverse()
    if tail[0, total] <= 0.0:
        raise ValueError("SS total is unreachable under the class probabilities")
    out = np.zeros(n_classes, dtype=np.int64)
    remaining = total
    for c in range(n_classes):
        pmf = pmfs[c]
        j = np.arange(min(pmf.size, remaining + 1))
        weights = pmf[j] * tail[c + 1, remaining - j]
        pick = rng.choice(j, p=weights / weights.sum())
        out[c] = pick
        remaining -= pick
    return out


def assign_power_law(
    net: Network, theta: float, eta: float, rng: np.random.Generator
) -> ProfileAssignment:
    """SS fraction per degree class proportional to ``k**-eta``; exact SS total round(theta * Z)."""
    if eta < 0:
        raise ValueError(f"eta must be >= 0, got {eta}")
    n_ss = ss_count_for(theta, net.node_count)
    degrees, inverse, counts = np.unique(net.degrees, return_inverse=True, return_counts=True)
    p = power_law_class_probabilities(degrees, counts, n_ss, eta)
    per_class = _conditional_binomial_counts(counts, p, n_ss, rng)
    is_ss = np.zeros(net.node_count, dtype=bool)
    for c, take in enumerate(per_class):
        if take:
            members = np.flatnonzero(inverse == c)
            is_ss[rng.choice(members, size=take, replace=False)] = True
    return ProfileAssignment(is_ss, theta, Strategy.POWER_LAW, eta)


def assign(
    net: Network, theta: float, strategy: Strategy | str, rng: np.random.Generator, eta: float = 1.0
) -> ProfileAssignment:
    strategy = Strategy(strategy)
    if strategy is Strategy.RANDOM:
        return assign_random(net, theta, rng)
    if strategy is Strategy.TBS_BY_DEGREE:
        return assign_tbs_by_degree(net, theta, rng)
    if strategy is Strategy.SS_BY_DEGREE:
        return assign_ss_by_degree(net, theta, rng)
    return assign_power_law(net, theta, eta, rng)


def realized_theta_k(assignment: ProfileAssignment, net: Network) -> dict[int, float]:
    """Observed SS fraction within each degree class."""
    if len(assignment) != net.node_count:
        raise ValueError("assignment does not match the network size")
    degrees, inverse = np.unique(net.degrees, return_inverse=True)
    ss = np.bincount(inverse, weights=assignment.is_ss, minlength=degrees.size)
    tot = np.bincount(inverse, minlength=degrees.size)
    return {int(k): float(s / t) for k, s, t in zip(degrees, ss, tot)}


def write_assignment(assignment: ProfileAssignment, path: str | PathLike) -> None:
    with open(path, "w", encoding="ascii") as fh:
        for i, label in enumerate(assignment.labels()):
            fh.write(f"{i}\t{label}\n")


def read_assignment(path: str | PathLike, theta: float | None = None) -> ProfileAssignment:
    rows: dict[int, bool] = {}
    with open(path, encoding="ascii") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            idx, label = line.split("\t")
            if label not in (SS, TBS):
                raise ValueError(f"{path}:{lineno}: unknown profile {label!r}")
            rows[int(idx)] = label == SS
    n = len(rows)
    if sorted(rows) != list(range(n)):
        raise ValueError(f"{path}: node indices must cover 0..{n - 1} exactly once")
    is_ss = np.array([rows[i] for i in range(n)], dtype=bool)
    return ProfileAssignment(is_ss, float(is_ss.mean()) if theta is None else theta)
