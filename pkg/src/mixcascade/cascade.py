"""Asynchronous irreversible cascades on a mixed SS/TBS population.

One iteration picks a node uniformly at random. Active nodes do nothing.
An inactive Simple Spreader copies the state of one uniformly drawn
neighbor. An inactive Threshold-based Spreader activates when its fraction
of active neighbors is strictly above the threshold. A run ends at the
iteration cap, at full activation, or once the active count has not
changed for a whole stagnation window.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from os import PathLike

import numba
import numpy as np

from .graph import Network
from .placement import ProfileAssignment

MAX_ITERATIONS_PER_NODE = 10**6
STAGNATION_PER_NODE = 10**2


class Termination(IntEnum):
    MAX_ITERATIONS = 0
    FULL_ACTIVATION = 1
    STAGNATION = 2


def as_fraction(value: float | int | str | Fraction) -> Fraction:
    """Exact rational from a threshold given as a float, string or Fraction.

    Floats go through their shortest repr, so ``0.05`` becomes ``1/20``.
    """
    if isinstance(value, Fraction):
        out = value
    elif isinstance(value, float):
        out = Fraction(repr(value))
    else:
        out = Fraction(value)
    if not 0 <= out <= 1:
        raise ValueError(f"threshold must lie in [0, 1], got {value}")
    return out


@dataclass(frozen=True)
class CascadeConfig:
    gamma_threshold: Fraction
    n_seeds: int = 1
    max_iterations: int | None = None  # None: Z * 10**6
    stagnation_window: int | None = None  # None: Z * 10**2
    rng_seed: int = 0
    early_exit: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "gamma_threshold", as_fraction(self.gamma_threshold))
        if self.n_seeds < 1:
            raise ValueError(f"n_seeds must be >= 1, got {self.n_seeds}")
        if self.stagnation_window is not None and self.stagnation_window < 1:
            raise ValueError("stagnation_window must be >= 1")
        if (
            self.max_iterations is not None
            and self.stagnation_window is not None
            and self.max_iterations < self.stagnation_window
        ):
            raise ValueError("max_iterations must be >= stagnation_window")

    def limits(self, node_count: int) -> tuple[int, int]:
        max_it = node_count * MAX_ITERATIONS_PER_NODE if self.max_iterations is None else self.max_iterations
        window = node_count * STAGNATION_PER_NODE if self.stagnation_window is None else self.stagnation_window
        if max_it < window:
            raise ValueError(f"max_iterations {max_it} < stagnation_window {window}")
        return max_it, window


@dataclass
class CascadeState:
    active: np.ndarray
    active_count: int
    iteration: int = 0

    @classmethod
    def from_seeds(cls, node_count: int, seeds) -> "CascadeState":
        active = np.zeros(node_count, dtype=bool)
        active[np.asarray(list(seeds), dtype=np.int64)] = True
        return cls(active, int(active.sum()))


@dataclass(frozen=True)
class CascadeResult:
    final_active: int
    cascade_size: float
    termination: Termination
    iterations_used: int
    active: np.ndarray = field(repr=False)
    # activation log: (iteration, node) in order; seeds carry iteration 0
    activation_iterations: np.ndarray = field(repr=False)
    activation_nodes: np.ndarray = field(repr=False)


def select_seeds(net: Network, n_seeds: int, rng: np.random.Generator) -> np.ndarray:
    if not 1 <= n_seeds <= net.node_count:
        raise ValueError(f"n_seeds must lie in [1, {net.node_count}], got {n_seeds}")
    return np.sort(rng.choice(net.node_count, size=n_seeds, replace=False))


def active_neighbor_fraction(state: CascadeState, net: Network, node: int) -> Fraction:
    deg = net.degree(node)
    if deg == 0:
        raise ValueError(f"node {node} has no neighbors")
    return Fraction(int(state.active[net.neighbors(node)].sum()), deg)


def exceeds_threshold(active_neighbors: int, degree: int, gamma: Fraction) -> bool:
    """Exact test of active_neighbors / degree > gamma."""
    return degree > 0 and active_neighbors * gamma.denominator > gamma.numerator * degree


@numba.njit(cache=True)
def _can_activate(i, active, is_ss, act_nbrs, deg, gnum, gden):
    if active[i] or deg[i] == 0:
        return False
    if is_ss[i]:
        return act_nbrs[i] > 0
    return act_nbrs[i] * gden > gnum * deg[i]


@numba.njit(cache=True)
def _cascade_kernel(indptr, indices, is_ss, gnum, gden, active, rng, max_it, window, early_exit,
                    log_it, log_node):
    n = active.shape[0]
    deg = indptr[1:] - indptr[:-1]
    act_nbrs = np.zeros(n, dtype=np.int64)
    count = 0
    for i in range(n):
        if active[i]:
            log_it[count] = 0
            log_node[count] = i
            count += 1
            for p in range(indptr[i], indptr[i + 1]):
                act_nbrs[indices[p]] += 1
    eligible = np.zeros(n, dtype=np.bool_)
    n_eligible = 0
    for i in range(n):
        if _can_activate(i, active, is_ss, act_nbrs, deg, gnum, gden):
            eligible[i] = True
            n_eligible += 1

    if count == n:
        return count, 1, 0
    last_change = 0
    it = 0
    while True:
        if early_exit and n_eligible == 0:
            # closed state: the literal rule would idle until the window ends
            if last_change + window < max_it:
                return count, 2, last_change + window
            return count, 0, max_it
        if it == max_it:
            return count, 0, it
        it += 1
        i = rng.integers(0, n)
        if active[i]:
            fired = False
        elif is_ss[i]:
            fired = False
            if deg[i] > 0:
                j = indices[indptr[i] + rng.integers(0, deg[i])]
                fired = active[j]
        else:
            fired = deg[i] > 0 and act_nbrs[i] * gden > gnum * deg[i]
        if fired:
            active[i] = True
            log_it[count] = it
            log_node[count] = i
            count += 1
            last_change = it
            if eligible[i]:
                eligible[i] = False
                n_eligible -= 1
            if count == n:
                return count, 1, it
            for p in range(indptr[i], indptr[i + 1]):
                v = indices[p]
                act_nbrs[v] += 1
                if not eligible[v] and _can_activate(v, active, is_ss, act_nbrs, deg, gnum, gden):
                    eligible[v] = True
                    n_eligible += 1
        elif it == max_it:
            return count, 0, it
        elif it - last_change >= window:
            return count, 2, it


def run_cascade(
    net: Network,
    assignment: ProfileAssignment,
    config: CascadeConfig,
    seeds=None,
    rng: np.random.Generator | None = None,
) -> CascadeResult:
    """Run one cascade to termination.

    ``seeds`` defaults to ``config.n_seeds`` uniform draws from ``rng``;
    ``rng`` defaults to a generator seeded with ``config.rng_seed``. With
    ``config.early_exit`` the run stops as soon as no inactive node can
    ever activate, reporting the same size, termination and iteration
    count the literal stagnation rule would have produced.
    """
    if len(assignment) != net.node_count:
        raise ValueError("assignment does not match the network size")
    if rng is None:
        rng = np.random.default_rng(config.rng_seed)
    if seeds is None:
        seeds = select_seeds(net, config.n_seeds, rng)
    state = CascadeState.from_seeds(net.node_count, seeds)
    max_it, window = config.limits(net.node_count)
    gamma = config.gamma_threshold
    log_it = np.zeros(net.node_count, dtype=np.int64)
    log_node = np.zeros(net.node_count, dtype=np.int64)
    count, term, iters = _cascade_kernel(
        net.indptr, net.indices, assignment.is_ss, gamma.numerator, gamma.denominator,
        state.active, rng, max_it, window, config.early_exit, log_it, log_node,
    )
    return CascadeResult(
        final_active=int(count),
        cascade_size=count / net.node_count,
        termination=Termination(term),
        iterations_used=int(iters),
        active=state.active,
        activation_iterations=log_it[:count],
        activation_nodes=log_node[:count],
    )


def write_trace(result: CascadeResult, assignment: ProfileAssignment, path: str | PathLike) -> None:
    """Line-delimited ``iteration<TAB>node<TAB>event`` activation log."""
    with open(path, "w", encoding="ascii") as fh:
        for it, node in zip(result.activation_iterations, result.activation_nodes):
            if it == 0:
                event = "seed"
            else:
                event = "ss_copy" if assignment.is_ss[node] else "tbs_threshold"
            fh.write(f"{it}\t{node}\t{event}\n")
        fh.write(f"{result.iterations_used}\t-1\t{result.termination.name.lower()}\n")
