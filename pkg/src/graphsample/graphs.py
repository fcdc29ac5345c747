"""Random graph families: Erdős–Rényi, Watts–Strogatz small-world, ring
d-regular and star-like graphs, plus edge-list / CSV serialization.

All generators are pure functions of (parameters, rng); the returned Graph
is immutable and safe to share between workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ParameterError

__all__ = [
    "Graph",
    "GraphSpec",
    "generate_er",
    "generate_small_world",
    "generate_ring_regular",
    "generate_star_like",
    "small_world_edge_probability",
    "save_edge_list",
    "load_edge_list",
    "save_adjacency_csv",
]


def _validated_adjacency(adjacency) -> np.ndarray:
    a = np.asarray(adjacency, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ParameterError("adjacency must be a square matrix")
    if not np.array_equal(a, a.T):
        raise ParameterError("adjacency must be symmetric")
    if np.any(np.diagonal(a) != 0):
        raise ParameterError("adjacency must have a zero diagonal")
    if not np.all((a == 0) | (a == 1)):
        raise ParameterError("adjacency entries must be exactly 0 or 1")
    return a


@dataclass(frozen=True)
class Graph:
    """Undirected unweighted graph on n vertices.

    The adjacency matrix is symmetric with {0, 1} entries and a zero
    diagonal; both properties are checked at construction time.
    """

    n: int
    adjacency: np.ndarray

    def __post_init__(self):
        a = _validated_adjacency(self.adjacency)
        if self.n != a.shape[0]:
            raise ParameterError("n does not match the adjacency dimension")
        a = a.copy()
        a.flags.writeable = False
        object.__setattr__(self, "adjacency", a)

    @classmethod
    def from_adjacency(cls, adjacency) -> "Graph":
        a = _validated_adjacency(adjacency)
        return cls(n=a.shape[0], adjacency=a)

    @property
    def edge_count(self) -> int:
        return int(round(self.adjacency.sum() / 2))

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)


def generate_er(n: int, b: float, rng: np.random.Generator) -> Graph:
    """Erdős–Rényi graph: each unordered pair is an edge with probability b."""
    if n < 2:
        raise ParameterError(f"n must be >= 2, got {n}")
    if not 0.0 <= b <= 1.0:
        raise ParameterError(f"edge probability must lie in [0, 1], got {b}")
    a = np.zeros((n, n))
    iu = np.triu_indices(n, k=1)
    a[iu] = rng.random(len(iu[0])) < b
    a += a.T
    return Graph(n=n, adjacency=a)


def generate_ring_regular(n: int, d: int) -> Graph:
    """Ring d-regular graph: vertex i connects to its d/2 nearest neighbors
    on each side of a ring, so every row sum equals d."""
    if d % 2 != 0 or d < 2:
        raise ParameterError(f"degree must be a positive even integer, got {d}")
    if d >= n:
        raise ParameterError(f"degree must satisfy d <= n - 1, got d={d}, n={n}")
    a = np.zeros((n, n))
    idx = np.arange(n)
    for t in range(1, d // 2 + 1):
        a[idx, (idx + t) % n] = 1.0
        a[(idx + t) % n, idx] = 1.0
    return Graph(n=n, adjacency=a)


def small_world_edge_probability(n: int, d: int, b: float, ring_pair: bool) -> float:
    """Single-edge probability of the two-stage Watts–Strogatz rewiring.

    Ring pairs keep their edge unless it is erased (prob b) and not
    reconnected; non-ring pairs only gain the reconnection edge.
    """
    reconnect = b * d / (n - 1)
    if ring_pair:
        return 1.0 - b * (1.0 - reconnect)
    return reconnect


def generate_small_world(n: int, d: int, b: float, rng: np.random.Generator) -> Graph:
    """Watts–Strogatz small-world graph via the two-stage rewiring rule.

    Starting from the ring d-regular graph, every existing edge is erased
    independently with probability b, then every vertex pair (ring or not)
    gains a reconnection edge with probability b*d/(n-1).  Surviving and
    reconnected edges are OR-combined, which clamps multiplicities to 1 and
    reproduces the two-case single-edge probability law exactly.

    Draw order is fixed (erasure matrix first, then reconnection matrix) so
    that a seeded rng yields a reproducible graph.
    """
    if d % 2 != 0 or not 2 <= d <= n - 1:
        raise ParameterError(f"degree must be even with 2 <= d <= n-1, got d={d}, n={n}")
    if not 0.0 <= b <= 1.0:
        raise ParameterError(f"rewiring probability must lie in [0, 1], got {b}")
    ring = generate_ring_regular(n, d).adjacency
    iu = np.triu_indices(n, k=1)
    erased = rng.random(len(iu[0])) < b
    reconnected = rng.random(len(iu[0])) < b * d / (n - 1)
    kept = (ring[iu] > 0) & ~erased
    a = np.zeros((n, n))
    a[iu] = kept | reconnected
    a += a.T
    return Graph(n=n, adjacency=a)


def generate_star_like(n: int, target_edges: int, rng: np.random.Generator) -> Graph:
    """Star-like graph: vertex 0 is connected to all others, and the surplus
    edges are drawn uniformly without repetition among non-hub pairs."""
    max_edges = n * (n - 1) // 2
    if not n - 1 <= target_edges <= max_edges:
        raise ParameterError(
            f"target_edges must lie in [{n - 1}, {max_edges}], got {target_edges}"
        )
    a = np.zeros((n, n))
    a[0, 1:] = 1.0
    a[1:, 0] = 1.0
    surplus = target_edges - (n - 1)
    if surplus > 0:
        # non-hub pairs live in the (n-1) x (n-1) lower-right block
        iu, ju = np.triu_indices(n - 1, k=1)
        chosen = rng.choice(len(iu), size=surplus, replace=False)
        a[iu[chosen] + 1, ju[chosen] + 1] = 1.0
        a[ju[chosen] + 1, iu[chosen] + 1] = 1.0
    return Graph(n=n, adjacency=a)


_FAMILIES = ("er", "small_world", "ring_regular", "star_like", "custom")


@dataclass(frozen=True)
class GraphSpec:
    """Declarative description of a graph family plus its parameters.

    family: one of er | small_world | ring_regular | star_like | custom.
    """

    family: str
    n: int
    b: float | None = None
    d: int | None = None
    target_edges: int | None = None
    adjacency: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ParameterError(f"unknown graph family {self.family!r}")
        if self.n < 2:
            raise ParameterError("n must be >= 2")
        if self.family == "er":
            if self.b is None or not 0.0 <= self.b <= 1.0:
                raise ParameterError("er requires b in [0, 1]")
        elif self.family == "small_world":
            if self.d is None or self.d % 2 != 0 or not 2 <= self.d <= self.n - 1:
                raise ParameterError("small_world requires even d with 2 <= d <= n-1")
            if self.b is None or not 0.0 <= self.b <= 1.0:
                raise ParameterError("small_world requires b in [0, 1]")
        elif self.family == "ring_regular":
            if self.d is None or self.d % 2 != 0 or self.d >= self.n:
                raise ParameterError("ring_regular requires even d < n")
        elif self.family == "star_like":
            if self.target_edges is None or self.target_edges < self.n - 1:
                raise ParameterError("star_like requires target_edges >= n - 1")
        elif self.family == "custom":
            if self.adjacency is None:
                raise ParameterError("custom requires an adjacency matrix")

    def build(self, rng: np.random.Generator) -> Graph:
        if self.family == "er":
            return generate_er(self.n, self.b, rng)
        if self.family == "small_world":
            return generate_small_world(self.n, self.d, self.b, rng)
        if self.family == "ring_regular":
            return generate_ring_regular(self.n, self.d)
        if self.family == "star_like":
            return generate_star_like(self.n, self.target_edges, rng)
        return Graph.from_adjacency(self.adjacency)

    def to_dict(self) -> dict:
        out = {"family": self.family, "n": self.n}
        if self.b is not None:
            out["b"] = self.b
        if self.d is not None:
            out["d"] = self.d
        if self.target_edges is not None:
            out["target_edges"] = self.target_edges
        if self.adjacency is not None:
            out["adjacency"] = np.asarray(self.adjacency).tolist()
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "GraphSpec":
        known = {"family", "n", "b", "d", "target_edges", "adjacency"}
        unknown = set(data) - known
        if unknown:
            raise ParameterError(f"unknown graph spec fields: {sorted(unknown)}")
        kwargs = dict(data)
        if "adjacency" in kwargs and kwargs["adjacency"] is not None:
            kwargs["adjacency"] = np.asarray(kwargs["adjacency"], dtype=float)
        return cls(**kwargs)


def save_edge_list(graph: Graph, path) -> None:
    """Write `n` on the first line, then one 0-indexed `i j` pair per edge."""
    iu, ju = np.nonzero(np.triu(graph.adjacency, k=1))
    lines = [str(graph.n)]
    lines.extend(f"{i} {j}" for i, j in zip(iu, ju))
    Path(path).write_text("\n".join(lines) + "\n")


def load_edge_list(path) -> Graph:
    text = Path(path).read_text().strip().splitlines()
    if not text:
        raise ParameterError(f"empty edge-list file: {path}")
    n = int(text[0])
    a = np.zeros((n, n))
    for line in text[1:]:
        if not line.strip():
            continue
        i, j = (int(tok) for tok in line.split())
        if not (0 <= i < n and 0 <= j < n):
            raise ParameterError(f"edge ({i}, {j}) out of range for n={n}")
        a[i, j] = 1.0
        a[j, i] = 1.0
    return Graph(n=n, adjacency=a)


def save_adjacency_csv(graph: Graph, path) -> None:
    np.savetxt(path, graph.adjacency, fmt="%d", delimiter=",")
