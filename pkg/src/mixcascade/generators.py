"""Network families at fixed size and mean degree.

Four families are supported: Erdos-Renyi (``ER``), growth with uniform
attachment (``EXP``), Barabasi-Albert growth with preferential attachment
(``SFBA``), and growth with attachment biased by age rank (``SF_ALPHA``).
Scale-free instances can be pushed towards (dis)assortative mixing with
degree-preserving Xulvi-Brunet/Sokolov rewiring.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numba
import numpy as np
from scipy import optimize, special

from .graph import (
    GraphError,
    Network,
    _from_canonical,
    build_network,
    component_labels,
    is_connected,
)

ER_MAX_ATTEMPTS = 100


class Family(str, Enum):
    ER = "ER"
    EXP = "EXP"
    SFBA = "SFBA"
    SF_ALPHA = "SF_ALPHA"


class RewireMode(str, Enum):
    ASSORTATIVE = "assortative"
    DISASSORTATIVE = "disassortative"


@dataclass(frozen=True)
class GeneratorSpec:
    family: Family
    node_count: int = 1000
    target_mean_degree: int = 4
    alpha: float | None = None
    rng_seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", Family(self.family))
        if self.node_count < 4:
            raise ValueError(f"node_count must be >= 4, got {self.node_count}")
        if self.target_mean_degree <= 0:
            raise ValueError("target_mean_degree must be positive")
        if self.family is not Family.ER and self.target_mean_degree % 2:
            raise ValueError("growth models need an even target_mean_degree")
        if self.family is Family.SF_ALPHA:
            if self.alpha is None or not (1 / 3 - 1e-12 <= self.alpha <= 1.0):
                raise ValueError(f"alpha must lie in [1/3, 1] for SF_ALPHA, got {self.alpha}")

    @property
    def m(self) -> int:
        """Edges added per arriving node in the growth models."""
        return self.target_mean_degree // 2


@dataclass(frozen=True)
class RewireSpec:
    mode: RewireMode
    max_attempts: int | None = None  # None: 10 * edge_count
    target_assortativity: float | None = 0.3

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", RewireMode(self.mode))
        if self.max_attempts is not None and self.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")
        if self.target_assortativity is not None and abs(self.target_assortativity) > 1:
            raise ValueError("|target_assortativity| must be <= 1")


def _rng(spec: GeneratorSpec, rng: np.random.Generator | None) -> np.random.Generator:
    return np.random.default_rng(spec.rng_seed) if rng is None else rng


# --- Erdos-Renyi -------------------------------------------------------------


def _triangle_pairs(q: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Map row-major indices of the strict upper triangle of an n x n matrix to (i, j)."""
    q = q.astype(np.int64)
    i = n - 2 - np.floor(np.sqrt(-8.0 * q + 4.0 * n * (n - 1) - 7) / 2.0 - 0.5).astype(np.int64)
    j = q + i + 1 - n * (n - 1) // 2 + (n - i) * ((n - i) - 1) // 2
    return i, j


def gen_er(
    spec: GeneratorSpec, rng: np.random.Generator | None = None, connect: str = "patch"
) -> Network:
    """G(Z, p) with p = <k>/(Z-1), made connected.

    ``connect="patch"`` joins every minor component to the largest one with a
    single edge between uniformly chosen nodes (adds about Z*exp(-<k>) edges).
    ``connect="regenerate"`` redraws the whole graph until it is connected,
    giving up after 100 draws; at <k> = 4 and Z = 1000 that almost never
    succeeds.
    """
    if spec.family is not Family.ER:
        raise ValueError(f"gen_er needs family ER, got {spec.family}")
    if connect not in ("patch", "regenerate"):
        raise ValueError(f"unknown connect policy {connect!r}")
    rng = _rng(spec, rng)
    n = spec.node_count
    p = min(spec.target_mean_degree / (n - 1), 1.0)
    n_pairs = n * (n - 1) // 2
    for _ in range(ER_MAX_ATTEMPTS):
        m = rng.binomial(n_pairs, p)
        q = np.sort(rng.choice(n_pairs, size=m, replace=False))
        i, j = _triangle_pairs(q, n)
        net = _from_canonical(i, j, n)
        if is_connected(net):
            return net
        if connect == "patch":
            return _join_components(net, rng)
    raise GraphError(
        f"no connected G({n}, {p:.4g}) instance in {ER_MAX_ATTEMPTS} attempts"
    )


def _join_components(net: Network, rng: np.random.Generator) -> Network:
    labels = component_labels(net)
    roots, sizes = np.unique(labels, return_counts=True)
    giant = roots[np.argmax(sizes)]
    giant_nodes = np.flatnonzero(labels == giant)
    extra = []
    for root in roots:
        if root == giant:
            continue
        members = np.flatnonzero(labels == root)
        extra.append((int(rng.choice(members)), int(rng.choice(giant_nodes))))
    e = np.concatenate((net.edges(), np.asarray(extra, dtype=np.int64)))
    lo = np.minimum(e[:, 0], e[:, 1])
    hi = np.maximum(e[:, 0], e[:, 1])
    return _from_canonical(lo, hi, net.node_count)


# --- growth models -------------------------------------------------------------


def _seed_clique(m: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(m + 1) for j in range(i + 1, m + 1)]


def gen_ba(spec: GeneratorSpec, rng: np.random.Generator | None = None) -> Network:
    """Preferential attachment growth from an (m+1)-clique."""
    if spec.family is not Family.SFBA:
        raise ValueError(f"gen_ba needs family SFBA, got {spec.family}")
    rng = _rng(spec, rng)
    m, n = spec.m, spec.node_count
    edges = _seed_clique(m)
    # every edge endpoint appears once, so uniform draws are degree-proportional
    stubs = [v for e in edges for v in e]
    for new in range(m + 1, n):
        targets: list[int] = []
        while len(targets) < m:
            t = stubs[int(rng.integers(len(stubs)))]
            if t not in targets:
                targets.append(t)
        for t in targets:
            edges.append((t, new))
            stubs.extend((t, new))
    return build_network(edges, n)


def gen_exp(spec: GeneratorSpec, rng: np.random.Generator | None = None) -> Network:
    """Growth from an (m+1)-clique with uniform random attachment."""
    if spec.family is not Family.EXP:
        raise ValueError(f"gen_exp needs family EXP, got {spec.family}")
    rng = _rng(spec, rng)
    m, n = spec.m, spec.node_count
    edges = _seed_clique(m)
    for new in range(m + 1, n):
        for t in rng.choice(new, size=m, replace=False):
            edges.append((int(t), new))
    return build_network(edges, n)


def gen_age_rank_sf(spec: GeneratorSpec, rng: np.random.Generator | None = None) -> Network:
    """Growth from a 3-clique; targets drawn with weight t**-alpha, t = age rank (oldest 1)."""
    if spec.family is not Family.SF_ALPHA:
        raise ValueError(f"gen_age_rank_sf needs family SF_ALPHA, got {spec.family}")
    rng = _rng(spec, rng)
    m, n = spec.m, spec.node_count
    # node index i has age rank i + 1, so existing nodes always form a prefix
    cum = np.cumsum(np.arange(1, n + 1, dtype=float) ** -spec.alpha)
    edges = _seed_clique(m)
    for new in range(m + 1, n):
        targets: list[int] = []
        while len(targets) < m:
            t = int(np.searchsorted(cum[:new], rng.random() * cum[new - 1], side="right"))
            t = min(t, new - 1)
            if t not in targets:
                targets.append(t)
        for t in targets:
            edges.append((t, new))
    return build_network(edges, n)


_GENERATORS = {
    Family.ER: gen_er,
    Family.EXP: gen_exp,
    Family.SFBA: gen_ba,
    Family.SF_ALPHA: gen_age_rank_sf,
}


def generate(spec: GeneratorSpec, rng: np.random.Generator | None = None) -> Network:
    return _GENERATORS[spec.family](spec, rng)


def network_filename(spec: GeneratorSpec) -> str:
    alpha = "na" if spec.alpha is None else f"{spec.alpha:.4g}"
    return (
        f"{spec.family.value}_Z{spec.node_count}_k{spec.target_mean_degree}"
        f"_a{alpha}_s{spec.rng_seed}.edges"
    )


# --- Xulvi-Brunet/Sokolov rewiring ----------------------------------------------


@numba.njit(cache=True)
def _replace_neighbor(adj, deg, u, old, new):
    for p in range(deg[u]):
        if adj[u, p] == old:
            adj[u, p] = new
            return


@numba.njit(cache=True)
def _adjacent(adj, deg, u, v):
    for p in range(deg[u]):
        if adj[u, p] == v:
            return True
    return False


@numba.njit(cache=True)
def _all_reachable(adj, deg, src, targets, mark, stamp, queue):
    # BFS from src, stopping once every node in targets has been seen
    mark[src] = stamp
    queue[0] = src
    head, tail = 0, 1
    remaining = 0
    for t in targets:
        if mark[t] != stamp:
            remaining += 1
    while head < tail and remaining > 0:
        u = queue[head]
        head += 1
        for p in range(deg[u]):
            v = adj[u, p]
            if mark[v] != stamp:
                mark[v] = stamp
                queue[tail] = v
                tail += 1
                for t in targets:
                    if t == v:
                        remaining -= 1
    return remaining == 0


@numba.njit(cache=True)
def _rewire_kernel(edges, adj, deg, rng, assortative, max_attempts, target, sum_prod, num_sq, mean_sq):
    n_edges = edges.shape[0]
    n_nodes = deg.shape[0]
    mark = np.zeros(n_nodes, dtype=np.int64)
    queue = np.empty(n_nodes, dtype=np.int64)
    quad = np.empty(4, dtype=np.int64)
    keys = np.empty(4)
    accepted = 0
    attempts = 0
    r = (sum_prod / n_edges - mean_sq) / (num_sq - mean_sq)
    while attempts < max_attempts:
        if target >= 0.0:
            if assortative and r >= target:
                break
            if not assortative and r <= -target:
                break
        attempts += 1
        e1 = rng.integers(0, n_edges)
        e2 = rng.integers(0, n_edges)
        if e1 == e2:
            continue
        a, b = edges[e1, 0], edges[e1, 1]
        c, d = edges[e2, 0], edges[e2, 1]
        if a == c or a == d or b == c or b == d:
            continue
        quad[0], quad[1], quad[2], quad[3] = a, b, c, d
        for p in range(4):
            # random tie-break among equal degrees
            keys[p] = deg[quad[p]] + 0.5 * rng.random()
        order = np.argsort(keys)
        lo0, lo1, hi0, hi1 = quad[order[0]], quad[order[1]], quad[order[2]], quad[order[3]]
        if assortative:
            x1, y1, x2, y2 = hi1, hi0, lo1, lo0
        else:
            x1, y1, x2, y2 = hi1, lo0, hi0, lo1
        # same pairing as before: nothing to do
        if (x1 == a and y1 == b) or (x1 == b and y1 == a) or (x1 == c and y1 == d) or (x1 == d and y1 == c):
            continue
        if _adjacent(adj, deg, x1, y1) or _adjacent(adj, deg, x2, y2):
            continue
        # apply: remove a-b, c-d; add x1-y1, x2-y2
        _replace_neighbor(adj, deg, a, b, -1)
        _replace_neighbor(adj, deg, b, a, -1)
        _replace_neighbor(adj, deg, c, d, -1)
        _replace_neighbor(adj, deg, d, c, -1)
        _replace_neighbor(adj, deg, x1, -1, y1)
        _replace_neighbor(adj, deg, y1, -1, x1)
        _replace_neighbor(adj, deg, x2, -1, y2)
        _replace_neighbor(adj, deg, y2, -1, x2)
        stamp = attempts
        if not _all_reachable(adj, deg, a, quad, mark, stamp, queue):
            _replace_neighbor(adj, deg, x1, y1, -1)
            _replace_neighbor(adj, deg, y1, x1, -1)
            _replace_neighbor(adj, deg, x2, y2, -1)
            _replace_neighbor(adj, deg, y2, x2, -1)
            _replace_neighbor(adj, deg, a, -1, b)
            _replace_neighbor(adj, deg, b, -1, a)
            _replace_neighbor(adj, deg, c, -1, d)
            _replace_neighbor(adj, deg, d, -1, c)
            continue
        sum_prod += deg[x1] * deg[y1] + deg[x2] * deg[y2] - deg[a] * deg[b] - deg[c] * deg[d]
        edges[e1, 0], edges[e1, 1] = x1, y1
        edges[e2, 0], edges[e2, 1] = x2, y2
        accepted += 1
        r = (sum_prod / n_edges - mean_sq) / (num_sq - mean_sq)
    return accepted, attempts, r


def rewire_assortativity(
    net: Network, spec: RewireSpec, rng: np.random.Generator | np.random.SeedSequence | int | None = None
) -> Network:
    """Degree-preserving rewiring towards (dis)assortative mixing.

    Each attempt picks two edges with four distinct endpoints, sorts the
    endpoints by degree and reconnects the two highest and the two lowest
    together (assortative) or the highest with the lowest and the middle
    pair together (disassortative). An attempt is rejected if it would
    create a duplicate edge or disconnect the network. Stops after
    ``max_attempts`` attempts or once the signed target is reached; a
    ``RuntimeWarning`` reports the achieved coefficient when the target is
    missed.
    """
    if not is_connected(net):
        raise GraphError("rewiring requires a connected network")
    rng = np.random.default_rng(rng)
    edges = net.edges().copy()
    n_edges = edges.shape[0]
    if n_edges < 2:
        return net
    deg = net.degrees.copy()
    adj = np.full((net.node_count, max(int(deg.max()), 1)), -1, dtype=np.int64)
    for i in range(net.node_count):
        nb = net.neighbors(i)
        adj[i, : nb.size] = nb

    kx = deg[edges[:, 0]].astype(float)
    ky = deg[edges[:, 1]].astype(float)
    mean_sq = (0.5 * (kx + ky).sum() / n_edges) ** 2
    num_sq = 0.5 * (kx**2 + ky**2).sum() / n_edges
    if num_sq - mean_sq == 0.0:
        return net
    sum_prod = float((kx * ky).sum())

    max_attempts = 10 * n_edges if spec.max_attempts is None else spec.max_attempts
    target = -1.0 if spec.target_assortativity is None else abs(spec.target_assortativity)
    _, _, r = _rewire_kernel(
        edges, adj, deg, rng, spec.mode is RewireMode.ASSORTATIVE,
        max_attempts, target, sum_prod, num_sq, mean_sq,
    )
    if target >= 0.0 and abs(r) < target:
        warnings.warn(
            f"{spec.mode.value} rewiring stopped at r={r:.4f} after {max_attempts} attempts "
            f"(target {target})",
            RuntimeWarning,
            stacklevel=2,
        )
    lo = np.minimum(edges[:, 0], edges[:, 1])
    hi = np.maximum(edges[:, 0], edges[:, 1])
    return _from_canonical(lo, hi, net.node_count)


# --- exponent fitting --------------------------------------------------------------


def fit_power_law_exponent(net: Network | np.ndarray, k_min: int = 5, min_tail: int = 100) -> float:
    """Discrete maximum-likelihood exponent of a power law with fixed lower cutoff.

    Maximizes ``-n log zeta(g, k_min) - g * sum(log k)`` over degrees
    ``k >= k_min``. Accepts a network or a raw degree sample.

    The default cutoff sits above the growth models' minimum degree m = 2:
    at ``k_min = m`` the fit is dominated by the pile-up of newest nodes at
    degree m..m+1 rather than by the tail.
    """
    k = net.degrees if isinstance(net, Network) else np.asarray(net)
    tail = k[k >= k_min].astype(float)
    if tail.size < min_tail:
        raise ValueError(f"only {tail.size} values >= k_min={k_min}; need {min_tail}")
    if np.all(tail == tail[0]):
        raise ValueError("all tail values are equal; exponent is not identifiable")
    mean_log = np.log(tail).mean()

    def nll(g: float) -> float:
        return math.log(special.zeta(g, k_min)) + g * mean_log

    res = optimize.minimize_scalar(nll, bounds=(1.0 + 1e-6, 20.0), method="bounded",
                                   options={"xatol": 1e-8})
    return float(res.x)
