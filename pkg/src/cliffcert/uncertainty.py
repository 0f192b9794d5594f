"""Entropy averages over anti-commuting observables and their minima.

Measuring an involutory observable with expectation g on a state gives the
two-outcome distribution ((1+g)/2, (1-g)/2), so the average Renyi entropy
over the first K observables depends on the state only through its
expectation vector.  Combined with the unit-ball characterization of
admissible vectors this turns state-space minimization into a K-dimensional
ball search with closed-form answers:

    alpha = 1   : min = 1 - 1/K            (one expectation at +-1)
    alpha = 2   : min = 1 - log2(1 + 1/K)  (all expectations at 1/sqrt(K))
    alpha = inf : >=    1 - log2(1 + 1/sqrt(K))   (proven lower bound;
                  tightness is observed numerically, not asserted)

All entropies are in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import pauli
from .clifford import GeneratorSet
from .errors import DomainError
from .pauli import PauliString
from .states import (
    DensityMatrix,
    GVector,
    extended_expectations,
    from_gvector,
    random_state_batch,
)
from .tolerances import ORTHOGONALITY, PSD, TRACE

_LN2 = math.log(2.0)
_SHANNON_EPS = 1e-12  # alpha within this of 1 is treated as Shannon


def _is_shannon(alpha) -> bool:
    return not math.isinf(alpha) and abs(float(alpha) - 1.0) < _SHANNON_EPS


def _xlog2x(p: np.ndarray) -> np.ndarray:
    return np.where(p > 0.0, p * np.log2(np.where(p > 0.0, p, 1.0)), 0.0)


def renyi_entropy(p, alpha) -> float:
    """Renyi entropy (bits) of a probability vector; ``alpha -> 1`` is Shannon.

    Entries may dip to ``-PSD`` (clamped to zero) and the sum may drift
    from 1 by ``TRACE``; anything worse is rejected.
    """
    probs = np.asarray(p, dtype=float)
    if np.any(probs < -PSD):
        raise DomainError(f"negative probability beyond tolerance: {probs.min():.3e}")
    total = float(probs.sum())
    if abs(total - 1.0) > TRACE:
        raise DomainError(f"probabilities sum to {total}, not 1")
    probs = np.clip(probs, 0.0, None) / total
    if math.isinf(alpha):
        return float(-np.log2(probs.max()))
    alpha = float(alpha)
    if alpha <= 0.0:
        raise DomainError("Renyi order must be positive")
    if _is_shannon(alpha):
        return float(-np.sum(_xlog2x(probs)))
    return float(np.log2(np.sum(probs**alpha)) / (1.0 - alpha))


def entropy_of_expectations(g, alpha) -> np.ndarray:
    """Vectorized two-outcome entropy for observables with expectations ``g``."""
    g = np.clip(np.asarray(g, dtype=float), -1.0, 1.0)
    if math.isinf(alpha):
        return -np.log2((1.0 + np.abs(g)) / 2.0)
    alpha = float(alpha)
    if alpha <= 0.0:
        raise DomainError("Renyi order must be positive")
    if _is_shannon(alpha):
        p = (1.0 + g) / 2.0
        q = (1.0 - g) / 2.0
        return -(_xlog2x(p) + _xlog2x(q))
    if alpha == 2.0:
        return -np.log2((1.0 + g * g) / 2.0)
    p = (1.0 + g) / 2.0
    q = (1.0 - g) / 2.0
    return np.log2(p**alpha + q**alpha) / (1.0 - alpha)


def observable_entropy(rho: DensityMatrix, g: PauliString, alpha) -> float:
    """Entropy of the outcome distribution of one Hermitian involution.

    Equals the eigenprojector route: the outcome probabilities are
    ``Tr(P^b rho) = (1 +- Tr(rho G))/2``.
    """
    if not g.is_hermitian or not pauli.mul(g, g).is_identity:
        raise DomainError("observable must be a Hermitian involutory string")
    val = float(np.trace(rho.mat @ pauli.to_dense(g)).real)
    return float(entropy_of_expectations(np.array([val]), alpha)[0])


def entropy_average(rho: DensityMatrix, gens: GeneratorSet, K: int, alpha) -> float:
    """Mean entropy over the first K observables in extended order."""
    size = 2 * gens.n + 1
    if not 1 <= K <= size:
        raise DomainError(f"K must lie in 1..{size}, got {K}")
    g = extended_expectations(rho.mat, gens)[:K]
    return float(entropy_of_expectations(g, alpha).mean())


def has_closed_form(alpha) -> bool:
    return math.isinf(alpha) or _is_shannon(alpha) or float(alpha) == 2.0


def closed_form_kind(alpha) -> str:
    """``exact-minimum`` for alpha in {1, 2}; ``proven-lower-bound`` for inf."""
    if math.isinf(alpha):
        return "proven-lower-bound"
    if _is_shannon(alpha) or float(alpha) == 2.0:
        return "exact-minimum"
    raise DomainError(f"no closed form for alpha = {alpha}")


def closed_form_min(K: int, alpha) -> float:
    """Closed-form bound (bits) on the K-observable entropy average."""
    if K < 1:
        raise DomainError("K must be at least 1")
    if math.isinf(alpha):
        return 1.0 - math.log2(1.0 + 1.0 / math.sqrt(K))
    if _is_shannon(alpha):
        return 1.0 - 1.0 / K
    if float(alpha) == 2.0:
        return 1.0 - math.log2(1.0 + 1.0 / K)
    raise DomainError(f"no closed form for alpha = {alpha}; supported: 1, 2, inf")


def _ball_objective(g, alpha) -> np.ndarray:
    """Average entropy as a function of a (stack of) expectation vector(s)."""
    return entropy_of_expectations(g, alpha).mean(axis=-1)


def _objective_gradient(g: np.ndarray, alpha) -> np.ndarray:
    g = np.clip(g, -1.0 + 1e-12, 1.0 - 1e-12)
    if math.isinf(alpha):
        d = -np.sign(g) / ((1.0 + np.abs(g)) * _LN2)
    elif _is_shannon(alpha):
        d = 0.5 * np.log2((1.0 - g) / (1.0 + g))
    elif float(alpha) == 2.0:
        d = -2.0 * g / ((1.0 + g * g) * _LN2)
    else:
        a = float(alpha)
        p = (1.0 + g) / 2.0
        q = (1.0 - g) / 2.0
        d = a * (p ** (a - 1.0) - q ** (a - 1.0)) / (2.0 * (1.0 - a) * _LN2 * (p**a + q**a))
    return d / g.size


def _project_ball(g: np.ndarray) -> np.ndarray:
    nrm = float(np.linalg.norm(g))
    return g / nrm if nrm > 1.0 else g


def _projected_descent(g0, alpha, max_iter: int = 1000) -> tuple[np.ndarray, float]:
    """Projected gradient descent on the closed unit ball with backtracking."""
    g = _project_ball(np.array(g0, dtype=float))
    f = float(_ball_objective(g, alpha))
    for _ in range(max_iter):
        grad = _objective_gradient(g, alpha)
        step = 1.0
        moved = False
        while step > 1e-14:
            cand = _project_ball(g - step * grad)
            fc = float(_ball_objective(cand, alpha))
            if fc < f and fc <= f - 1e-4 * float(np.dot(grad, g - cand)):
                g, f = cand, fc
                moved = True
                break
            step *= 0.5
        if not moved:
            break
    return g, f


@dataclass(frozen=True)
class EntropyReport:
    """Result of one entropy-average minimization."""

    n: int
    K: int
    alpha: float
    closed_form_bound: float | None
    bound_kind: str | None
    numeric_min: float
    argmin_g: GVector
    samples: int
    seed: int
    gap: float | None
    cross_check_min: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "K": self.K,
            "alpha": "inf" if math.isinf(self.alpha) else self.alpha,
            "closed_form_bound": self.closed_form_bound,
            "bound_kind": self.bound_kind,
            "numeric_min": self.numeric_min,
            "argmin_g": [float(v) for v in self.argmin_g.values],
            "samples": self.samples,
            "seed": self.seed,
            "gap": self.gap,
            "cross_check_min": self.cross_check_min,
        }


def find_minimizer(gens: GeneratorSet, K: int, alpha, budget: int, seed: int) -> EntropyReport:
    """Minimize the K-observable entropy average over all states.

    Samples ``budget`` points of the K-dimensional expectation ball (every
    point of which is realized by a state, so the search loses nothing),
    refines the best by projected gradient descent, and cross-checks
    against the same refinement started from the best of a batch of
    Hilbert-Schmidt random states.  The reported minimum is re-evaluated
    by building the minimizing state and measuring it densely.
    """
    size = 2 * gens.n + 1
    if not 1 <= K <= size:
        raise DomainError(f"K must lie in 1..{size}, got {K}")
    if budget < 1:
        raise DomainError("sample budget must be at least 1")
    if not math.isinf(alpha) and float(alpha) <= 0.0:
        raise DomainError("Renyi order must be positive")

    seed_ball, seed_states = np.random.SeedSequence(seed).spawn(2)
    rng = np.random.default_rng(seed_ball)
    dirs = rng.standard_normal((budget, K))
    norms = np.linalg.norm(dirs, axis=1)
    norms[norms == 0.0] = 1.0
    radii = rng.random(budget) ** (1.0 / K)
    ball = dirs * (radii / norms)[:, None]
    g_ball, _ = _projected_descent(ball[int(np.argmin(_ball_objective(ball, alpha)))], alpha)

    state_count = int(min(2000, budget))
    mats = random_state_batch(gens.n, state_count, seed_states, "mixed-hs")
    gs = extended_expectations(mats, gens)[:, :K]
    g_state, f_state = _projected_descent(gs[int(np.argmin(_ball_objective(gs, alpha)))], alpha)

    padded = np.zeros(size)
    padded[:K] = g_ball
    argmin_g = GVector(gens.n, padded)
    rho_min = from_gvector(argmin_g, gens)
    numeric_min = entropy_average(rho_min, gens, K, alpha)

    if has_closed_form(alpha):
        bound = closed_form_min(K, alpha)
        kind = closed_form_kind(alpha)
        gap = numeric_min - bound
    else:
        bound, kind, gap = None, None, None

    return EntropyReport(
        n=gens.n,
        K=K,
        alpha=float(alpha),
        closed_form_bound=bound,
        bound_kind=kind,
        numeric_min=numeric_min,
        argmin_g=argmin_g,
        samples=budget,
        seed=seed,
        gap=gap,
        cross_check_min=float(f_state),
    )


def bias_entropy(t) -> np.ndarray | float:
    """Shannon entropy (bits) of a binary outcome with squared bias ``t``.

    The outcome probabilities are ``(1 +- sqrt(t))/2``.
    """
    t = np.asarray(t, dtype=float)
    b = np.sqrt(t)
    val = -(_xlog2x((1.0 + b) / 2.0) + _xlog2x((1.0 - b) / 2.0))
    return float(val) if val.ndim == 0 else val


def bias_entropy_d1(t) -> np.ndarray | float:
    """First derivative of :func:`bias_entropy` on (0, 1)."""
    t = np.asarray(t, dtype=float)
    b = np.sqrt(t)
    val = (np.log(1.0 - b) - np.log(1.0 + b)) / (4.0 * _LN2 * b)
    return float(val) if val.ndim == 0 else val


def bias_entropy_d2(t) -> np.ndarray | float:
    """Second derivative of :func:`bias_entropy` on (0, 1); nonpositive."""
    t = np.asarray(t, dtype=float)
    b = np.sqrt(t)
    val = (np.log((1.0 + b) / (1.0 - b)) - 2.0 * b / (1.0 - t)) / (8.0 * _LN2 * t**1.5)
    return float(val) if val.ndim == 0 else val


@dataclass(frozen=True)
class ConcavityProfile:
    """Analytic value/slope/curvature of the bias-entropy function on a grid."""

    t: np.ndarray
    value: np.ndarray
    slope: np.ndarray
    curvature: np.ndarray


def concavity_profile(grid) -> ConcavityProfile:
    """Evaluate ``bias_entropy`` and its two derivatives on points in (0, 1)."""
    t = np.asarray(grid, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise DomainError("grid must be a non-empty 1-D array")
    if np.any(t <= 0.0) or np.any(t >= 1.0):
        raise DomainError("grid points must lie strictly inside (0, 1)")
    return ConcavityProfile(
        t=t,
        value=np.asarray(bias_entropy(t)),
        slope=np.asarray(bias_entropy_d1(t)),
        curvature=np.asarray(bias_entropy_d2(t)),
    )


def maassen_uffink_bound(basis_a: np.ndarray, basis_b: np.ndarray) -> float:
    """-log2 of the largest overlap between two orthonormal bases (columns).

    Lower-bounds the two-basis average Shannon entropy; used as a sanity
    oracle against the anti-commuting averages.
    """
    a = np.asarray(basis_a, dtype=complex)
    b = np.asarray(basis_b, dtype=complex)
    for name, u in (("basis_a", a), ("basis_b", b)):
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise DomainError(f"{name} must be a square matrix of column vectors")
        res = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
        if res > ORTHOGONALITY:
            raise DomainError(f"{name} is not unitary: residual {res:.3e}")
    if a.shape != b.shape:
        raise DomainError("bases must have matching dimensions")
    c = float(np.max(np.abs(a.conj().T @ b)))
    return -math.log2(c)
