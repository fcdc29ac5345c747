"""Spectral analysis quantities behind the sample-complexity bounds.

Implements the Gamma matrix of uniform sampling, the incoherence parameter,
sparse (restricted) condition numbers, analytic expected Gram matrices for
Erdős–Rényi and small-world graphs, the four sample-count bound calculators,
and two empirical diagnostics (local isometry deviation, mutual coherence).

Sparse eigenvalues here are the extreme values of ||X v||_2 / ||v||_2 over
k-sparse vectors v restricted to the nonnegative orthant.  The restriction
is what makes the closed-form condition number of a11* + bI and the
cond(k, X^-1) <= cond(k, X) shortcut for nonnegative X hold; both are used
by the graph-model bounds, whose source vectors are nonnegative.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .diffusion import DiffusionMatrix
from .errors import (
    AssumptionViolationError,
    ContractError,
    DegenerateInputError,
    DegenerateModelError,
    EnumerationCapError,
    ParameterError,
)
from .graphs import Graph

__all__ = [
    "GammaMatrix",
    "SparseSpectrum",
    "BoundReport",
    "gamma_from_matrix",
    "expected_gram_inverse",
    "incoherence_mu",
    "analytic_mu_er",
    "expected_gram_er",
    "expected_gram_small_world",
    "sparse_eigs_bruteforce",
    "sparse_eigs_greedy",
    "sparse_spectrum",
    "cond_closed_form_rank1_shift",
    "kappa",
    "cond_nonnegative_shortcut",
    "delta_kappa_small_world",
    "bound_t1_uniform",
    "bound_t2_er",
    "bound_t3_small_world",
    "bound_t4_variable_density",
    "bound_c1_nonnegative",
    "local_isometry_deviation",
    "mutual_coherence",
    "DEFAULT_SUPPORT_CAP",
]

DEFAULT_SUPPORT_CAP = 2_000_000
_RCOND_FLOOR = 1e-12


@dataclass(frozen=True)
class GammaMatrix:
    """Inverse expected sampled Gram matrix, scaled by the sample count."""

    gamma: np.ndarray
    source: str = "exact_from_H"


@dataclass(frozen=True)
class SparseSpectrum:
    """Extreme k-sparse eigenvalues of a matrix and their ratio.

    certified is True for exact methods (brute force, closed form); the
    greedy estimate only certifies a lower bound on cond.
    """

    k: int
    lambda_max: float
    lambda_min: float
    cond: float
    method: str
    certified: bool = True


def _make_spectrum(k, lam_max, lam_min, method, certified) -> SparseSpectrum:
    cond = lam_max / lam_min if lam_min > 0 else math.inf
    return SparseSpectrum(
        k=k,
        lambda_max=float(lam_max),
        lambda_min=float(lam_min),
        cond=float(cond),
        method=method,
        certified=certified,
    )


@dataclass(frozen=True)
class BoundReport:
    """Evaluated sample-count bound together with the inputs that produced it."""

    theorem: str
    m_bound: float
    success_probability: float
    inputs: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "m_bound": self.m_bound,
            "success_probability": self.success_probability,
            "inputs": dict(self.inputs),
        }


def _symmetric_inverse(matrix: np.ndarray, what: str) -> np.ndarray:
    """Invert a symmetric PSD matrix, refusing when numerically singular."""
    w = np.linalg.eigvalsh(matrix)
    lam_max = float(np.abs(w).max())
    lam_min = float(np.abs(w).min())
    if lam_max == 0.0 or lam_min / lam_max < _RCOND_FLOOR:
        raise AssumptionViolationError(
            f"{what} is numerically singular (reciprocal condition "
            f"{0.0 if lam_max == 0 else lam_min / lam_max:.2e})"
        )
    return np.linalg.inv(matrix)


def _entries(matrix) -> np.ndarray:
    if isinstance(matrix, DiffusionMatrix):
        return matrix.entries
    if isinstance(matrix, GammaMatrix):
        return matrix.gamma
    return np.asarray(matrix, dtype=float)


def gamma_from_matrix(h: DiffusionMatrix) -> GammaMatrix:
    """Gamma of uniform sampling for a fixed realization: n * (H'H)^-1."""
    e = _entries(h)
    n = e.shape[0]
    inv = _symmetric_inverse(e.T @ e, "H*H")
    return GammaMatrix(gamma=n * inv, source="exact_from_H")


def expected_gram_inverse(h: DiffusionMatrix, p: np.ndarray) -> np.ndarray:
    """Inverse of sum_i p_i h_i h_i', the expected sampled Gram under plan p."""
    e = _entries(h)
    gram = e.T @ (np.asarray(p, dtype=float)[:, None] * e)
    return _symmetric_inverse(gram, "expected sampled Gram")


def incoherence_mu(h: DiffusionMatrix, gamma) -> float:
    """Smallest mu bounding both max |h_ij| and max |[H Gamma]_ij|."""
    e = _entries(h)
    g = _entries(gamma)
    if e.shape[1] != g.shape[0]:
        raise ParameterError("H and Gamma dimensions disagree")
    return float(max(np.abs(e).max(), np.abs(e @ g).max()))


def analytic_mu_er(b: float, delta: float) -> float:
    """Analytic incoherence bound for ER binary diffusion: 1/(delta^2 (b - b^2)),
    floored at the trivial bound max|h_ij| = 1."""
    if not 0.0 < b < 1.0:
        raise DegenerateModelError(
            f"b must lie strictly inside (0, 1); b={b} forces full sampling"
        )
    if not 0.0 < delta <= 1.0:
        raise ParameterError(f"delta must lie in (0, 1], got {delta}")
    return max(1.0, 1.0 / (delta**2 * (b - b * b)))


def expected_gram_er(n: int, b: float, delta: float, exact: bool = True) -> np.ndarray:
    """Expected squared binary diffusion E[H^2] for an ER graph.

    exact=True uses E[A^2] = (n-2) b^2 11* + ((n-1) b - (n-2) b^2) I; the
    approximate form replaces both n-2 and n-1 by n, which is the large-n
    simplification the ER bound is derived from.
    """
    if not 0.0 < b < 1.0:
        raise DegenerateModelError(f"b must lie strictly inside (0, 1), got {b}")
    ones = np.ones((n, n))
    eye = np.eye(n)
    if exact:
        ea2 = (n - 2) * b**2 * ones + ((n - 1) * b - (n - 2) * b**2) * eye
    else:
        ea2 = n * b**2 * ones + (n * b - n * b**2) * eye
    ea = b * (ones - eye)
    return delta**2 * ea2 + 2 * delta * ea + eye


def expected_gram_small_world(
    n: int, d: int, b: float, delta: float, a_reg: Graph
) -> np.ndarray:
    """Expected squared binary diffusion E[H^2] for a small-world graph.

    Assembled from the ring-regular adjacency and its square plus the
    rank-one / diagonal remainder; the remainder's off-diagonal weight has
    separate values on ring pairs and non-ring pairs, and the diagonal of
    E[A^2] is the nominal degree d.
    """
    ring = a_reg.adjacency
    if ring.shape[0] != n:
        raise ParameterError("a_reg dimension does not match n")
    if not np.all(a_reg.degrees == d):
        raise ParameterError("a_reg must be the ring d-regular adjacency")
    c = (1.0 - b) * (1.0 - b * d / (n - 1))
    ring2 = ring @ ring
    base = (n - 2) * (b * d / (n - 1)) ** 2
    f1_edge = base + 2 * b * (1 - b) * (n - 1 - b * d) * d * (d - 1) / (n - 1) ** 2
    f1_non = base + 2 * b * (1 - b) * (n - 1 - b * d) * d * d / (n - 1) ** 2
    f1 = np.where(ring > 0, f1_edge, f1_non)
    np.fill_diagonal(f1, 0.0)
    ea2 = c**2 * ring2 + f1
    np.fill_diagonal(ea2, float(d))
    ea = c * ring + (b * d / (n - 1)) * (np.ones((n, n)) - np.eye(n))
    return np.eye(n) + delta**2 * ea2 + 2 * delta * ea


# ---------------------------------------------------------------------------
# sparse (nonnegative-restricted) eigenvalues
# ---------------------------------------------------------------------------


def _faces(k: int) -> list[np.ndarray]:
    faces = []
    for size in range(1, k + 1):
        for combo in itertools.combinations(range(k), size):
            faces.append(np.asarray(combo, dtype=np.intp))
    return faces


def _cone_extremes_of_grams(grams: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Exact extremes of w' G w over unit-norm w >= 0, for a batch of Grams.

    Every extremum on the sphere-cone intersection is an eigenvector of a
    principal submatrix of G with sign-constant entries, so enumerating the
    2^k - 1 faces and keeping sign-feasible eigenpairs is exact.
    """
    batch, k, _ = grams.shape
    lo = np.full(batch, np.inf)
    hi = np.full(batch, -np.inf)
    for face in _faces(k):
        sub = grams[np.ix_(np.arange(batch), face, face)]
        if len(face) == 1:
            vals = sub[:, 0, 0]
            lo = np.minimum(lo, vals)
            hi = np.maximum(hi, vals)
            continue
        w, v = np.linalg.eigh(sub)
        flip = np.where(v.sum(axis=1, keepdims=True) >= 0, 1.0, -1.0)
        feasible = (v * flip).min(axis=1) >= -1e-10
        lo = np.minimum(lo, np.where(feasible, w, np.inf).min(axis=1))
        hi = np.maximum(hi, np.where(feasible, w, -np.inf).max(axis=1))
    return np.maximum(lo, 0.0), np.maximum(hi, 0.0)


def _iter_support_chunks(n: int, k: int, chunk: int = 20_000):
    combos = itertools.combinations(range(n), k)
    while True:
        block = list(itertools.islice(combos, chunk))
        if not block:
            return
        yield np.asarray(block, dtype=np.intp)


def sparse_eigs_bruteforce(
    X, k: int, support_cap: int = DEFAULT_SUPPORT_CAP
) -> SparseSpectrum:
    """Exact sparse extremes by enumerating every size-k support.

    Refuses when C(n, k) exceeds support_cap; callers must then fall back to
    the closed form or the greedy estimate.  Because each support's faces
    cover all of its sub-supports, the result honors the `at most k sparse`
    definition and is monotone in k.
    """
    x = _entries(X)
    n = x.shape[1]
    if not 1 <= k <= n:
        raise ParameterError(f"need 1 <= k <= n, got k={k}, n={n}")
    count = math.comb(n, k)
    if count > support_cap:
        raise EnumerationCapError(
            f"C({n}, {k}) = {count} supports exceeds the cap {support_cap}; "
            "use the closed form or the greedy estimate"
        )
    lam2_min, lam2_max = np.inf, -np.inf
    for supports in _iter_support_chunks(n, k):
        cols = np.moveaxis(x[:, supports], 0, 1)  # (chunk, n, k)
        grams = np.einsum("cni,cnj->cij", cols, cols)
        lo, hi = _cone_extremes_of_grams(grams)
        lam2_min = min(lam2_min, float(lo.min()))
        lam2_max = max(lam2_max, float(hi.max()))
    return _make_spectrum(
        k, math.sqrt(lam2_max), math.sqrt(lam2_min), "brute_force", certified=True
    )


def _cone_max_value(gram: np.ndarray, iters: int = 200, tol: float = 1e-14) -> float:
    """Feasible lower bound on max w' G w over unit w >= 0 (projected power
    iteration seeded at the best diagonal entry)."""
    k = gram.shape[0]
    best = float(gram.diagonal().max())
    w = np.zeros(k)
    w[int(np.argmax(gram.diagonal()))] = 1.0
    prev = best
    for _ in range(iters):
        w = np.maximum(gram @ w, 0.0)
        norm = np.linalg.norm(w)
        if norm == 0.0:
            break
        w /= norm
        val = float(w @ gram @ w)
        best = max(best, val)
        if abs(val - prev) <= tol * max(1.0, abs(val)):
            break
        prev = val
    return best


def _cone_min_value(gram: np.ndarray, iters: int = 200) -> float:
    """Feasible upper bound on min w' G w over unit w >= 0 (projected power
    iteration on the spectrally shifted complement)."""
    sigma = float(np.linalg.eigvalsh(gram).max())
    shifted = sigma * np.eye(gram.shape[0]) - gram
    k = gram.shape[0]
    best = float(gram.diagonal().min())
    w = np.zeros(k)
    w[int(np.argmin(gram.diagonal()))] = 1.0
    prev = best
    for _ in range(iters):
        w = np.maximum(shifted @ w, 0.0)
        norm = np.linalg.norm(w)
        if norm == 0.0:
            break
        w /= norm
        val = float(w @ gram @ w)
        best = min(best, val)
        if abs(val - prev) <= 1e-14 * max(1.0, abs(val)):
            break
        prev = val
    return max(best, 0.0)


def _greedy_support(gram_full: np.ndarray, k: int, start: int, maximize: bool) -> float:
    """Grow a support from `start` by locally extremal quadratic-form
    increments and return the refined cone value on the final support."""
    n = gram_full.shape[0]
    support = [start]
    w = np.ones(1)
    val = float(gram_full[start, start])
    for _ in range(k - 1):
        g = gram_full[:, support] @ w
        diag = gram_full.diagonal()
        half_sum = 0.5 * (val + diag)
        half_diff = 0.5 * (val - diag)
        root = np.sqrt(half_diff**2 + g**2)
        if maximize:
            # interior 2x2 stationary point feasible only when the cross term
            # pulls both coordinates in the same direction
            scores = np.where(g > 0, half_sum + root, np.maximum(val, diag))
        else:
            scores = np.where(g < 0, half_sum - root, np.minimum(val, diag))
        scores[support] = -np.inf if maximize else np.inf
        j = int(np.argmax(scores) if maximize else np.argmin(scores))
        support.append(j)
        sub = gram_full[np.ix_(support, support)]
        val = _cone_max_value(sub) if maximize else _cone_min_value(sub)
        w = _refine_cone_vector(sub, maximize)
    return val


def _refine_cone_vector(gram: np.ndarray, maximize: bool) -> np.ndarray:
    k = gram.shape[0]
    target = gram if maximize else (
        float(np.linalg.eigvalsh(gram).max()) * np.eye(k) - gram
    )
    w = np.ones(k) / math.sqrt(k)
    for _ in range(100):
        nxt = np.maximum(target @ w, 0.0)
        norm = np.linalg.norm(nxt)
        if norm == 0.0:
            break
        nxt /= norm
        if np.linalg.norm(nxt - w) < 1e-13:
            w = nxt
            break
        w = nxt
    if np.linalg.norm(w) == 0.0:
        w = np.zeros(k)
        idx = int(np.argmax(gram.diagonal()) if maximize else np.argmin(gram.diagonal()))
        w[idx] = 1.0
    return w


def sparse_eigs_greedy(
    X, k: int, restarts: int = 8, seed: int = 0
) -> SparseSpectrum:
    """Heuristic sparse extremes for sizes beyond the enumeration cap.

    Both extremes come from feasible vectors, so lambda_max is
    underestimated and lambda_min overestimated: the reported cond is a
    certified lower bound (certified=False marks it as an estimate)."""
    x = _entries(X)
    n = x.shape[1]
    if not 1 <= k <= n:
        raise ParameterError(f"need 1 <= k <= n, got k={k}, n={n}")
    gram_full = x.T @ x
    rng = np.random.default_rng(seed)
    diag = gram_full.diagonal()
    max_starts = [int(np.argmax(diag))] + list(rng.integers(0, n, size=restarts))
    min_starts = [int(np.argmin(diag))] + list(rng.integers(0, n, size=restarts))
    lam2_max = max(_greedy_support(gram_full, k, s, maximize=True) for s in max_starts)
    lam2_min = min(_greedy_support(gram_full, k, s, maximize=False) for s in min_starts)
    lam2_max = max(lam2_max, 0.0)
    lam2_min = max(lam2_min, 0.0)
    return _make_spectrum(
        k, math.sqrt(lam2_max), math.sqrt(lam2_min), "greedy_estimate", certified=False
    )


def sparse_spectrum(
    X,
    k: int,
    method: str = "auto",
    support_cap: int = DEFAULT_SUPPORT_CAP,
    restarts: int = 8,
    seed: int = 0,
) -> SparseSpectrum:
    """Dispatch between brute force and the greedy estimate."""
    if method == "brute_force":
        return sparse_eigs_bruteforce(X, k, support_cap)
    if method == "greedy_estimate":
        return sparse_eigs_greedy(X, k, restarts=restarts, seed=seed)
    if method == "auto":
        n = _entries(X).shape[1]
        if math.comb(n, k) <= support_cap:
            return sparse_eigs_bruteforce(X, k, support_cap)
        return sparse_eigs_greedy(X, k, restarts=restarts, seed=seed)
    raise ParameterError(f"unknown method {method!r}")


def cond_closed_form_rank1_shift(n: int, k: int, a: float, b: float) -> float:
    """Closed-form sparse condition number of X = a 11* + b I."""
    if a < 0 or b <= 0:
        raise ParameterError(f"need a >= 0 and b > 0, got a={a}, b={b}")
    if not 1 <= k <= n:
        raise ParameterError(f"need 1 <= k <= n, got k={k}, n={n}")
    return math.sqrt(k - (k - 1) * b**2 / (n * a**2 + b**2 + 2 * a * b))


def kappa(
    gamma,
    k: int,
    method: str = "auto",
    support_cap: int = DEFAULT_SUPPORT_CAP,
    restarts: int = 8,
    seed: int = 0,
) -> float:
    """Conditioning factor max(cond(k, Gamma), cond(k, Gamma^-1))."""
    g = _entries(gamma)
    g_inv = _symmetric_inverse(g, "Gamma")
    spec = sparse_spectrum(g, k, method, support_cap, restarts, seed)
    spec_inv = sparse_spectrum(g_inv, k, method, support_cap, restarts, seed)
    return max(spec.cond, spec_inv.cond)


def cond_nonnegative_shortcut(
    h: DiffusionMatrix,
    k: int,
    method: str = "auto",
    support_cap: int = DEFAULT_SUPPORT_CAP,
    restarts: int = 8,
    seed: int = 0,
) -> float:
    """cond(k, E H_M' H_M) for nonnegative H, usable in place of kappa(Gamma).

    E H_M' H_M under uniform sampling is H'H / n; the 1/n scale cancels in
    the condition-number ratio, so the unscaled Gram is used.
    """
    if not h.nonnegative:
        raise ContractError("diffusion matrix is not flagged nonnegative")
    gram = h.entries.T @ h.entries
    return sparse_spectrum(gram, k, method, support_cap, restarts, seed).cond


def delta_kappa_small_world(
    a_reg: Graph, n: int, d: int, b: float, delta: float, k: int
) -> float:
    """Small-world conditioning bound built from powers of the ring adjacency.

    Uses the leading k-by-k principal submatrices of A_reg^2 and A_reg^4
    (contiguous ring supports), their entrywise absolute sums, and the
    largest column norm of A_reg^2.
    """
    if d <= 0:
        raise ParameterError("d must be positive")
    if not 1 <= k <= n:
        raise ParameterError(f"need 1 <= k <= n, got k={k}, n={n}")
    ring = a_reg.adjacency
    if ring.shape[0] != n or not np.all(a_reg.degrees == d):
        raise ParameterError("a_reg must be the ring d-regular graph on n vertices")
    a2 = ring @ ring
    a4 = a2 @ a2
    c = delta * (1.0 - b) * (1.0 - b * d / (n - 1))
    norm_a2_12 = float(np.sqrt((a2**2).sum(axis=0)).max())
    term1 = c**2 * math.sqrt(np.abs(a4[:k, :k]).sum()) / norm_a2_12
    term2 = 2 * c * math.sqrt(np.abs(a2[:k, :k]).sum()) / math.sqrt(d)
    return term1 + term2 + math.sqrt(k)


# ---------------------------------------------------------------------------
# bound calculators
# ---------------------------------------------------------------------------


def _success_probability(n: int, epsilon: float) -> float:
    return 1.0 - math.exp(-epsilon) - 3.0 / n


def bound_t1_uniform(
    n: int, k: int, mu: float, kappa_val: float, C: float = 1.0, epsilon: float = 1.0
) -> BoundReport:
    """Uniform-sampling bound m >= C (1+eps) mu^2 k kappa (log n + log mu)."""
    if min(n, k, mu, kappa_val, C, epsilon) <= 0 or n < 2:
        raise ParameterError("all bound inputs must be positive with n >= 2")
    mu_below_one = mu < 1.0
    if mu_below_one:
        warnings.warn(
            "mu < 1 makes log(mu) negative; the bound is evaluated anyway",
            stacklevel=2,
        )
    m = C * (1 + epsilon) * mu**2 * k * kappa_val * (math.log(n) + math.log(mu))
    return BoundReport(
        theorem="T1_uniform",
        m_bound=m,
        success_probability=_success_probability(n, epsilon),
        inputs={
            "n": n,
            "k": k,
            "mu": mu,
            "kappa": kappa_val,
            "C": C,
            "epsilon": epsilon,
            "mu_below_one": mu_below_one,
        },
    )


def bound_t2_er(
    n: int, k: int, b: float, delta: float, C: float = 1.0, epsilon: float = 1.0
) -> BoundReport:
    """ER bound m >= C (1+eps) k^{3/2} (log n - log(delta^2 (b-b^2))) / (delta^2 (b-b^2))."""
    if not 0.0 < b < 1.0:
        raise DegenerateModelError(
            f"b={b}: as b - b^2 -> 0 all vertices must be sampled"
        )
    if min(n, k, C, epsilon, delta) <= 0 or n < 2:
        raise ParameterError("all bound inputs must be positive with n >= 2")
    scale = delta**2 * (b - b * b)
    m = C * (1 + epsilon) * k**1.5 * (math.log(n) - math.log(scale)) / scale
    return BoundReport(
        theorem="T2_er",
        m_bound=m,
        success_probability=_success_probability(n, epsilon),
        inputs={"n": n, "k": k, "b": b, "delta": delta, "C": C, "epsilon": epsilon},
    )


def bound_t3_small_world(
    n: int,
    k: int,
    mu: float,
    delta_kappa: float,
    C: float = 1.0,
    epsilon: float = 1.0,
) -> BoundReport:
    """Small-world bound m >= C (1+eps) k mu^2 Delta_kappa (log n + log mu)."""
    if min(n, k, mu, delta_kappa, C, epsilon) <= 0 or n < 2:
        raise ParameterError("all bound inputs must be positive with n >= 2")
    m = C * (1 + epsilon) * k * mu**2 * delta_kappa * (math.log(n) + math.log(mu))
    return BoundReport(
        theorem="T3_small_world",
        m_bound=m,
        success_probability=_success_probability(n, epsilon),
        inputs={
            "n": n,
            "k": k,
            "mu": mu,
            "delta_kappa": delta_kappa,
            "C": C,
            "epsilon": epsilon,
        },
    )


def bound_c1_nonnegative(
    n: int, k: int, mu: float, cond_val: float, C: float = 1.0, epsilon: float = 1.0
) -> BoundReport:
    """Nonnegative-diffusion bound: the conditioning factor kappa(Gamma) is
    replaced by cond(k, E H_M' H_M), valid when H and alpha are nonnegative."""
    if min(n, k, mu, cond_val, C, epsilon) <= 0 or n < 2:
        raise ParameterError("all bound inputs must be positive with n >= 2")
    m = C * (1 + epsilon) * mu**2 * k * cond_val * (math.log(n) + math.log(mu))
    return BoundReport(
        theorem="C1_nonnegative",
        m_bound=m,
        success_probability=_success_probability(n, epsilon),
        inputs={
            "n": n,
            "k": k,
            "mu": mu,
            "cond": cond_val,
            "C": C,
            "epsilon": epsilon,
        },
    )


def bound_t4_variable_density(
    n: int,
    k: int,
    phi_bar: float,
    kappa_val: float,
    C: float = 1.0,
    epsilon: float = 1.0,
) -> BoundReport:
    """Variable-density bound with the average weight in place of mu."""
    if min(n, k, phi_bar, kappa_val, C, epsilon) <= 0 or n < 2:
        raise ParameterError("all bound inputs must be positive with n >= 2")
    m = C * (1 + epsilon) * phi_bar**2 * k * kappa_val * (
        math.log(n) + math.log(phi_bar)
    )
    return BoundReport(
        theorem="T4_variable_density",
        m_bound=m,
        success_probability=_success_probability(n, epsilon),
        inputs={
            "n": n,
            "k": k,
            "phi_bar": phi_bar,
            "kappa": kappa_val,
            "C": C,
            "epsilon": epsilon,
        },
    )


# ---------------------------------------------------------------------------
# empirical diagnostics
# ---------------------------------------------------------------------------


def local_isometry_deviation(h: DiffusionMatrix, gamma, support, sample_set) -> float:
    """Support-restricted spectral deviation of the sampled Gram operator,
    || D_K ((1/m) Gamma H_M' H_M - I) D_K ||_2."""
    e = _entries(h)
    g = _entries(gamma)
    n = e.shape[0]
    indices = np.asarray(getattr(sample_set, "indices", sample_set), dtype=np.intp)
    support = np.asarray(support, dtype=np.intp)
    if indices.size == 0:
        raise ParameterError("sample set must be nonempty")
    m = len(indices)
    counts = np.bincount(indices, minlength=n).astype(float)
    sampled_gram = e.T @ (counts[:, None] * e)
    dev = (g @ sampled_gram) / m - np.eye(n)
    block = dev[np.ix_(support, support)]
    return float(np.linalg.norm(block, 2))


def mutual_coherence(matrix) -> float:
    """Largest normalized inner product between distinct columns."""
    m = np.asarray(matrix, dtype=float)
    norms = np.linalg.norm(m, axis=0)
    if np.any(norms == 0):
        raise DegenerateInputError("matrix has a zero column")
    normalized = m / norms
    gram = np.abs(normalized.T @ normalized)
    np.fill_diagonal(gram, -np.inf)
    return float(gram.max())
