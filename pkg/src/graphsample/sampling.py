"""Vertex sampling: uniform and variable-density plans, with-replacement
draws, and the observed system (y, H_M)."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .diffusion import DiffusionMatrix, SparseInput
from .errors import DegenerateInputError, ParameterError
from .spectral import GammaMatrix, expected_gram_inverse

__all__ = [
    "SamplingPlan",
    "VariableDensityPlan",
    "SampleSet",
    "Observation",
    "uniform_plan",
    "variable_density_plan",
    "draw_samples",
    "observe",
    "save_plan_csv",
    "save_sample_set",
    "load_sample_set",
]


@dataclass(frozen=True)
class SamplingPlan:
    """Per-vertex sampling probabilities (nonnegative, summing to one)."""

    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise ParameterError("p must be a nonempty vector")
        if np.any(p < 0):
            raise ParameterError("probabilities must be nonnegative")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ParameterError(f"probabilities must sum to 1, got {p.sum()!r}")
        p = p.copy()
        p.flags.writeable = False
        object.__setattr__(self, "p", p)

    @property
    def n(self) -> int:
        return len(self.p)


@dataclass(frozen=True)
class VariableDensityPlan:
    """Variable-density plan together with the weights that produced it."""

    plan: SamplingPlan
    phi: np.ndarray
    phi_tilde: np.ndarray
    phi_bar: float


@dataclass(frozen=True)
class SampleSet:
    """Ordered with-replacement draw of vertex indices."""

    n: int
    indices: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.intp)
        if idx.ndim != 1 or idx.size < 1:
            raise ParameterError("sample set must hold at least one index")
        if idx.min() < 0 or idx.max() >= self.n:
            raise ParameterError("sample indices out of range")
        idx = idx.copy()
        idx.flags.writeable = False
        object.__setattr__(self, "indices", idx)

    @property
    def m(self) -> int:
        return len(self.indices)

    def deduplicated(self) -> "SampleSet":
        """First occurrence of each vertex, in draw order (engineering option;
        the theory keeps duplicates)."""
        _, first = np.unique(self.indices, return_index=True)
        return SampleSet(n=self.n, indices=self.indices[np.sort(first)])


@dataclass(frozen=True)
class Observation:
    """Observed signal y together with the selected rows H_M."""

    y: np.ndarray
    rows: np.ndarray
    sample_set: SampleSet


def uniform_plan(n: int) -> SamplingPlan:
    if n < 1:
        raise ParameterError("n must be >= 1")
    return SamplingPlan(p=np.full(n, 1.0 / n))


def variable_density_plan(
    h: DiffusionMatrix, gamma, refine_iterations: int = 0
) -> VariableDensityPlan:
    """Variable-density plan p_i proportional to sqrt(phi_i * phi_tilde_i).

    phi_i is the largest |H| entry in row i and phi_tilde_i the largest
    |H Gamma| entry in row i; phi_bar is their combined average weight.

    The plan's defining Gamma is itself induced by the plan; this one-shot
    construction uses the uniform-sampling Gamma passed by the caller.
    refine_iterations > 0 optionally re-derives Gamma under the current plan
    and recomputes the weights (at most that many times, stopping early once
    max |delta p| < 1e-9).
    """
    e = h.entries
    g = gamma.gamma if isinstance(gamma, GammaMatrix) else np.asarray(gamma, dtype=float)
    if not np.all(np.isfinite(g)):
        raise ParameterError("Gamma must be finite")
    plan, phi, phi_tilde, phi_bar = _plan_from_gamma(e, g)
    for _ in range(refine_iterations):
        g = expected_gram_inverse(h, plan.p)
        new_plan, phi, phi_tilde, phi_bar = _plan_from_gamma(e, g)
        if np.abs(new_plan.p - plan.p).max() < 1e-9:
            plan = new_plan
            break
        plan = new_plan
    return VariableDensityPlan(plan=plan, phi=phi, phi_tilde=phi_tilde, phi_bar=phi_bar)


def _plan_from_gamma(e: np.ndarray, g: np.ndarray):
    phi = np.abs(e).max(axis=1)
    phi_tilde = np.abs(e @ g).max(axis=1)
    weights = np.sqrt(phi * phi_tilde)
    total = weights.sum()
    if total == 0.0:
        raise DegenerateInputError("all variable-density weights are zero")
    return SamplingPlan(p=weights / total), phi, phi_tilde, float(total / len(weights))


def draw_samples(plan: SamplingPlan, m: int, rng: np.random.Generator) -> SampleSet:
    """m i.i.d. with-replacement draws from the plan's distribution."""
    if m < 1:
        raise ParameterError("m must be >= 1")
    indices = rng.choice(plan.n, size=m, replace=True, p=plan.p)
    return SampleSet(n=plan.n, indices=indices)


def observe(h: DiffusionMatrix, alpha: SparseInput, sample_set: SampleSet) -> Observation:
    """Row-select H in draw order (duplicates repeated) and form y = H_M alpha."""
    if sample_set.n != h.n:
        raise ParameterError("sample set dimension does not match H")
    if alpha.n != h.n:
        raise ParameterError("alpha dimension does not match H")
    rows = h.entries[sample_set.indices]
    return Observation(y=rows @ alpha.to_dense(), rows=rows, sample_set=sample_set)


def save_plan_csv(plan: SamplingPlan, path) -> None:
    np.savetxt(path, plan.p, delimiter=",")


def save_sample_set(sample_set: SampleSet, path) -> None:
    record = {"n": sample_set.n, "indices": sample_set.indices.tolist()}
    Path(path).write_text(json.dumps(record) + "\n")


def load_sample_set(path) -> SampleSet:
    record = json.loads(Path(path).read_text())
    return SampleSet(n=record["n"], indices=np.asarray(record["indices"]))
