"""Percolation predictors and the deterministic closure of an activation process."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np
from scipy import stats

from .cascade import as_fraction
from .graph import Network
from .placement import ProfileAssignment, realized_theta_k


@dataclass(frozen=True)
class DegreeClassProfile:
    """Degree classes ``k -> (D(k), theta_k)``."""

    classes: Mapping[int, tuple[float, float]]

    def __post_init__(self) -> None:
        total = sum(d for d, _ in self.classes.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"class frequencies sum to {total}, not 1")
        for k, (d, th) in self.classes.items():
            if k < 0 or d < 0 or not 0.0 <= th <= 1.0:
                raise ValueError(f"invalid class {k}: D={d}, theta_k={th}")

    @classmethod
    def uniform(cls, distribution: Mapping[int, float], theta: float) -> "DegreeClassProfile":
        return cls({int(k): (float(d), float(theta)) for k, d in distribution.items()})

    @classmethod
    def poisson(cls, mean_degree: float, theta: float, tol: float = 1e-17) -> "DegreeClassProfile":
        # isf is unreliable this deep in the tail; truncate wide and trim
        ks = np.arange(int(mean_degree + 40 * np.sqrt(mean_degree) + 40))
        pmf = stats.poisson.pmf(ks, mean_degree)
        keep = (pmf > tol) | (ks <= mean_degree)
        ks, pmf = ks[keep], pmf[keep] / pmf[keep].sum()
        return cls.uniform(dict(zip(ks.tolist(), pmf.tolist())), theta)

    @classmethod
    def from_assignment(cls, net: Network, assignment: ProfileAssignment) -> "DegreeClassProfile":
        theta_k = realized_theta_k(assignment, net)
        ks, counts = np.unique(net.degrees, return_counts=True)
        return cls({int(k): (c / net.node_count, theta_k[int(k)]) for k, c in zip(ks, counts)})

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        ks = np.array(sorted(self.classes), dtype=float)
        d = np.array([self.classes[int(k)][0] for k in ks])
        th = np.array([self.classes[int(k)][1] for k in ks])
        return ks, d, th


def molloy_reed_ratio(profile: DegreeClassProfile) -> float:
    """<k(k-1) theta_k> / <k>; SS percolation is predicted when this exceeds 1.

    The denominator is the plain mean degree. With uniform theta_k = theta
    on a Poisson graph this gives theta * <k>, so the criterion reduces to
    theta > 1/<k>.
    """
    k, d, th = profile.arrays()
    mean_k = float(np.dot(d, k))
    if mean_k <= 0:
        raise ValueError("mean degree is zero")
    return float(np.dot(d, k * (k - 1) * th) / mean_k)


def er_percolation_threshold(mean_degree: float) -> float:
    if mean_degree <= 0:
        raise ValueError("mean degree must be positive")
    return 1.0 / mean_degree


def mean_field_tbs_condition(theta: float, gamma_threshold) -> bool:
    """Homogeneous mean-field requirement theta > Gamma for TBS activation."""
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta must lie in [0, 1], got {theta}")
    return as_fraction(float(theta)) > as_fraction(gamma_threshold)


def eta_regularization_condition(eta: float, gamma_exponent: float) -> bool:
    """True when hub-biased placement theta_k ~ k**-eta keeps <k(k-1) theta_k> finite (eta > gamma - 3)."""
    if eta < 0 or gamma_exponent <= 1:
        raise ValueError("need eta >= 0 and gamma > 1")
    return eta > gamma_exponent - 3


def predicted_gamma(alpha: float) -> float:
    """Large-Z degree exponent of age-rank attachment: (1 + alpha) / alpha."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    return (1 + alpha) / alpha


def deterministic_closure(
    net: Network,
    assignment: ProfileAssignment | np.ndarray,
    gamma_threshold,
    seeds: Iterable[int],
) -> tuple[set[int], int]:
    """Smallest seed-containing set closed under both activation rules.

    An SS joins once it has an active neighbor; a TBS joins once its active
    fraction strictly exceeds the threshold. Because activation is
    irreversible and both rules are monotone, this is the state every
    cascade run reaches almost surely when its limits are unbounded.
    """
    is_ss = assignment.is_ss if isinstance(assignment, ProfileAssignment) else np.asarray(assignment, bool)
    gamma = as_fraction(gamma_threshold)
    deg = net.degrees
    active = np.zeros(net.node_count, dtype=bool)
    hits = np.zeros(net.node_count, dtype=np.int64)
    queue = deque()
    for s in seeds:
        if not active[s]:
            active[s] = True
            queue.append(int(s))
    while queue:
        u = queue.popleft()
        for v in net.neighbors(u):
            hits[v] += 1
            if active[v]:
                continue
            if is_ss[v]:
                joins = True
            else:
                joins = Fraction(int(hits[v]), int(deg[v])) > gamma
            if joins:
                active[v] = True
                queue.append(int(v))
    members = set(np.flatnonzero(active).tolist())
    return members, len(members)
