"""Immutable undirected simple graphs in compressed sparse row form."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from os import PathLike
from typing import Iterable, Sequence

import numpy as np


class GraphError(ValueError):
    """Raised when an edge list cannot form a simple undirected graph."""


@dataclass(frozen=True, eq=False)
class Network:
    """Undirected simple graph on nodes ``0..node_count-1``.

    Neighbor lists are stored sorted in CSR layout: the neighbors of node
    ``i`` are ``indices[indptr[i]:indptr[i + 1]]``. Node indices follow
    creation order for the growth generators, so a smaller index means an
    older node.
    """

    node_count: int
    indptr: np.ndarray
    indices: np.ndarray
    edge_count: int
    degrees: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "degrees", np.diff(self.indptr).astype(np.int64))
        for arr in (self.indptr, self.indices, self.degrees):
            arr.setflags(write=False)

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def degree(self, i: int) -> int:
        return int(self.degrees[i])

    def has_edge(self, i: int, j: int) -> bool:
        nb = self.neighbors(i)
        pos = np.searchsorted(nb, j)
        return bool(pos < nb.size and nb[pos] == j)

    def edges(self) -> np.ndarray:
        """Return an ``(edge_count, 2)`` array of pairs with ``i < j``, sorted."""
        src = np.repeat(np.arange(self.node_count, dtype=np.int64), self.degrees)
        mask = src < self.indices
        return np.column_stack((src[mask], self.indices[mask]))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Network):
            return NotImplemented
        return (
            self.node_count == other.node_count
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def __hash__(self) -> int:
        return hash((self.node_count, self.indices.tobytes()))

    def __repr__(self) -> str:
        return f"Network(node_count={self.node_count}, edge_count={self.edge_count})"


def build_network(edges: Iterable[Sequence[int]] | np.ndarray, node_count: int) -> Network:
    """Validate an edge list and build a :class:`Network`.

    Raises :class:`GraphError` naming the offending pair on an out-of-range
    index, a self-loop, or a repeated edge (in either orientation).
    """
    if node_count < 1:
        raise GraphError(f"node_count must be positive, got {node_count}")
    arr = np.asarray(edges, dtype=np.int64)
    if arr.size == 0:
        arr = arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise GraphError(f"edge list must have shape (E, 2), got {arr.shape}")

    bad = np.flatnonzero((arr < 0).any(axis=1) | (arr >= node_count).any(axis=1))
    if bad.size:
        i, j = arr[bad[0]]
        raise GraphError(f"edge ({i}, {j}) has an index outside [0, {node_count})")
    loops = np.flatnonzero(arr[:, 0] == arr[:, 1])
    if loops.size:
        i, j = arr[loops[0]]
        raise GraphError(f"edge ({i}, {j}) is a self-loop")

    lo = np.minimum(arr[:, 0], arr[:, 1])
    hi = np.maximum(arr[:, 0], arr[:, 1])
    keys = lo * node_count + hi
    order = np.argsort(keys, kind="stable")
    dup = np.flatnonzero(np.diff(keys[order]) == 0)
    if dup.size:
        i, j = arr[order[dup[0] + 1]]
        raise GraphError(f"edge ({i}, {j}) is a duplicate")

    return _from_canonical(lo, hi, node_count)


def _from_canonical(lo: np.ndarray, hi: np.ndarray, node_count: int) -> Network:
    # lo/hi: validated endpoint arrays, no loops or duplicates
    src = np.concatenate((lo, hi))
    dst = np.concatenate((hi, lo))
    order = np.lexsort((dst, src))
    counts = np.bincount(src, minlength=node_count)
    indptr = np.zeros(node_count + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return Network(
        node_count=int(node_count),
        indptr=indptr,
        indices=dst[order].astype(np.int64),
        edge_count=int(lo.size),
    )


def validate_network(net: Network) -> None:
    """Check every structural invariant; raise :class:`GraphError` on failure."""
    if net.indptr.shape != (net.node_count + 1,) or net.indptr[0] != 0:
        raise GraphError("malformed indptr")
    if int(net.degrees.sum()) != 2 * net.edge_count:
        raise GraphError("degree sum does not equal twice the edge count")
    for i in range(net.node_count):
        nb = net.neighbors(i)
        if nb.size and (nb[0] < 0 or nb[-1] >= net.node_count):
            raise GraphError(f"node {i} has an out-of-range neighbor")
        if np.any(np.diff(nb) <= 0):
            raise GraphError(f"node {i} has unsorted or repeated neighbors")
        if np.any(nb == i):
            raise GraphError(f"node {i} has a self-loop")
        for j in nb:
            if not net.has_edge(int(j), i):
                raise GraphError(f"edge ({i}, {j}) is not symmetric")


@dataclass(frozen=True)
class DegreeStats:
    """Degree distribution summary.

    ``assortativity`` is ``None`` when undefined (all edge endpoints share
    one degree, or there are no edges).
    """

    distribution: dict[int, float]
    mean_degree: float
    degree_variance: float
    assortativity: float | None


def degree_stats(net: Network) -> DegreeStats:
    k = net.degrees
    values, counts = np.unique(k, return_counts=True)
    freq = counts / net.node_count
    mean = float(np.dot(values, freq))
    var = max(float(np.dot(values.astype(float) ** 2, freq)) - mean**2, 0.0)
    return DegreeStats(
        distribution={int(v): float(f) for v, f in zip(values, freq)},
        mean_degree=mean,
        degree_variance=var,
        assortativity=degree_assortativity(net),
    )


def degree_assortativity(net: Network) -> float | None:
    """Newman's degree-degree Pearson coefficient over both edge directions."""
    if net.edge_count == 0:
        return None
    e = net.edges()
    x = net.degrees[np.concatenate((e[:, 0], e[:, 1]))].astype(float)
    y = net.degrees[np.concatenate((e[:, 1], e[:, 0]))].astype(float)
    xc = x - x.mean()
    yc = y - y.mean()
    den = np.sqrt(np.dot(xc, xc) * np.dot(yc, yc))
    if den == 0.0:
        return None
    return float(np.dot(xc, yc) / den)


def component_labels(net: Network) -> np.ndarray:
    """Label each node with the smallest node index in its component."""
    labels = np.full(net.node_count, -1, dtype=np.int64)
    indptr, indices = net.indptr, net.indices
    for root in range(net.node_count):
        if labels[root] >= 0:
            continue
        labels[root] = root
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in indices[indptr[u] : indptr[u + 1]]:
                if labels[v] < 0:
                    labels[v] = root
                    queue.append(v)
    return labels


def is_connected(net: Network) -> bool:
    return bool(np.all(component_labels(net) == 0))


def largest_component(net: Network) -> set[int]:
    """Nodes of the largest component; ties go to the one holding the smallest index."""
    labels = component_labels(net)
    sizes = np.bincount(labels, minlength=net.node_count)
    # argmax returns the first maximum, i.e. the smallest root label
    root = int(np.argmax(sizes))
    return set(np.flatnonzero(labels == root).tolist())


def write_edge_list(net: Network, path: str | PathLike) -> None:
    """Write ``# Z=<n>`` then one tab-separated pair per line."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"# Z={net.node_count}\n")
        for i, j in net.edges():
            fh.write(f"{i}\t{j}\n")


def read_edge_list(path: str | PathLike) -> Network:
    node_count = None
    pairs = []
    with open(path, encoding="ascii") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("Z="):
                    node_count = int(body[2:])
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise GraphError(f"{path}:{lineno}: expected 'i<TAB>j', got {line!r}")
            pairs.append((int(parts[0]), int(parts[1])))
    if node_count is None:
        raise GraphError(f"{path}: missing '# Z=<int>' header")
    return build_network(pairs, node_count)
