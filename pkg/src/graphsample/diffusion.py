"""Diffusion operators and sparse source vectors.

The observed signal model is x = H @ alpha with H a symmetric diffusion
matrix and alpha a k-sparse source vector.  Two H constructions are
provided: the binary diffusion H = I + delta * A and the Metropolis
doubly stochastic weighting.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ParameterError
from .graphs import Graph

__all__ = [
    "DiffusionMatrix",
    "SparseInput",
    "binary_diffusion",
    "metropolis_matrix",
    "generate_sparse_input",
    "diffuse",
    "save_matrix_csv",
    "load_matrix_csv",
    "save_sparse_input",
    "load_sparse_input",
]

VALUE_MODELS = ("standard_normal", "nonnegative_half_normal", "unit")


@dataclass(frozen=True)
class DiffusionMatrix:
    """Dense symmetric diffusion operator with a nonnegativity flag."""

    entries: np.ndarray
    nonnegative: bool

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=float)
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise ParameterError("diffusion matrix must be square")
        if not np.array_equal(e, e.T):
            raise ParameterError("diffusion matrix must be symmetric")
        if self.nonnegative != bool(np.all(e >= 0)):
            raise ParameterError("nonnegative flag inconsistent with entries")
        e = e.copy()
        e.flags.writeable = False
        object.__setattr__(self, "entries", e)

    @classmethod
    def from_entries(cls, entries) -> "DiffusionMatrix":
        e = np.asarray(entries, dtype=float)
        return cls(entries=e, nonnegative=bool(np.all(e >= 0)))

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class SparseInput:
    """k-sparse source vector with an explicit support set."""

    n: int
    support: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        sup = np.asarray(self.support, dtype=np.intp)
        val = np.asarray(self.values, dtype=float)
        if sup.ndim != 1 or val.shape != sup.shape:
            raise ParameterError("support and values must be 1-d and equally long")
        if len(np.unique(sup)) != len(sup):
            raise ParameterError("support indices must be distinct")
        if len(sup) > self.n or (len(sup) and (sup.min() < 0 or sup.max() >= self.n)):
            raise ParameterError("support indices out of range")
        if np.any(val == 0):
            raise ParameterError("values on the support must be nonzero")
        order = np.argsort(sup)
        sup, val = sup[order].copy(), val[order].copy()
        sup.flags.writeable = False
        val.flags.writeable = False
        object.__setattr__(self, "support", sup)
        object.__setattr__(self, "values", val)

    @property
    def k(self) -> int:
        return len(self.support)

    def to_dense(self) -> np.ndarray:
        x = np.zeros(self.n)
        x[self.support] = self.values
        return x


def binary_diffusion(graph: Graph, delta: float) -> DiffusionMatrix:
    """Binary diffusion H = I + delta * A with coupling delta in (0, 1]."""
    if not 0.0 < delta <= 1.0:
        raise ParameterError(f"delta must lie in (0, 1], got {delta}")
    h = np.eye(graph.n) + delta * graph.adjacency
    return DiffusionMatrix(entries=h, nonnegative=True)


def metropolis_matrix(graph: Graph) -> DiffusionMatrix:
    """Symmetric doubly stochastic weighting by the Metropolis rule.

    Edges get weight 1 / (1 + max(d_i, d_j)); the diagonal absorbs the
    remainder so that every row and column sums to one.
    """
    deg = graph.degrees
    pair_max = np.maximum(deg[:, None], deg[None, :])
    h = np.where(graph.adjacency > 0, 1.0 / (1.0 + pair_max), 0.0)
    np.fill_diagonal(h, 0.0)
    np.fill_diagonal(h, 1.0 - h.sum(axis=1))
    return DiffusionMatrix(entries=h, nonnegative=True)


def generate_sparse_input(
    n: int,
    k: int,
    value_model: str = "standard_normal",
    rng: np.random.Generator | None = None,
) -> SparseInput:
    """Draw a k-sparse source with a uniformly random support.

    value_model: standard_normal | nonnegative_half_normal | unit.  The
    half-normal option produces the nonnegative sources required by the
    nonnegative-diffusion shortcut; unit gives deterministic ones.
    """
    if not 1 <= k <= n:
        raise ParameterError(f"sparsity must satisfy 1 <= k <= n, got k={k}, n={n}")
    if value_model not in VALUE_MODELS:
        raise ParameterError(f"unknown value model {value_model!r}")
    if rng is None:
        rng = np.random.default_rng()
    support = rng.choice(n, size=k, replace=False)
    if value_model == "unit":
        values = np.ones(k)
    else:
        values = rng.standard_normal(k)
        # resample the measure-zero exact zeros so values stay nonzero
        while np.any(values == 0):
            values[values == 0] = rng.standard_normal(np.count_nonzero(values == 0))
        if value_model == "nonnegative_half_normal":
            values = np.abs(values)
    return SparseInput(n=n, support=support, values=values)


def diffuse(h: DiffusionMatrix, alpha: SparseInput) -> np.ndarray:
    """Dense diffusion x = H @ alpha."""
    if h.n != alpha.n:
        raise ParameterError(f"dimension mismatch: H is {h.n}, alpha is {alpha.n}")
    return h.entries @ alpha.to_dense()


def save_matrix_csv(matrix, path) -> None:
    entries = matrix.entries if isinstance(matrix, DiffusionMatrix) else np.asarray(matrix)
    np.savetxt(path, entries, delimiter=",")


def load_matrix_csv(path) -> np.ndarray:
    return np.atleast_2d(np.loadtxt(path, delimiter=","))


def save_sparse_input(alpha: SparseInput, path) -> None:
    record = {
        "n": alpha.n,
        "support": alpha.support.tolist(),
        "values": alpha.values.tolist(),
    }
    Path(path).write_text(json.dumps(record, indent=2) + "\n")


def load_sparse_input(path) -> SparseInput:
    record = json.loads(Path(path).read_text())
    return SparseInput(
        n=record["n"],
        support=np.asarray(record["support"]),
        values=np.asarray(record["values"]),
    )
