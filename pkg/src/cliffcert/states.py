"""Density matrices, graded expansions, and the positivity projection.

Every state on n qubits expands uniquely in the graded basis,

    rho = (1/d) (1 + sum_j g_j G_j + sum_{j<k} g_jk G_jk + ... + g_0 G_0),

with real coefficients ``Tr(rho E)`` per basis element E.  Keeping only
the identity, generator, and pseudoscalar coefficients is a positive,
trace-preserving (not completely positive) map: the result is again a
state, and its 2n+1 expectations obey ``sum g_j**2 <= 1``.  Conversely
every coefficient vector inside that unit ball yields a valid state,
because ``A = sum g_j G_j`` satisfies ``A**2 = (sum g_j**2) * 1``.

Validation policy: matrices failing positive semidefiniteness by at most
``PSD`` are accepted (eigensolvers produce tiny negative eigenvalues) and
trace drift within ``TRACE`` is renormalized; harder failures reject.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import pauli
from .clifford import GeneratorSet, graded_basis
from .errors import BallViolationError, DomainError, ParseError, ValidationError
from .tolerances import DENSE_GUARD, HERMITICITY, PSD, TRACE


@dataclass(frozen=True)
class DensityMatrix:
    """Validated d x d state, d = 2**n."""

    n: int
    mat: np.ndarray

    @classmethod
    def from_matrix(
        cls,
        mat,
        *,
        tol_herm: float = HERMITICITY,
        tol_tr: float = TRACE,
        tol_psd: float = PSD,
    ) -> "DensityMatrix":
        m = np.asarray(mat, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError(f"expected a square matrix, got shape {m.shape}")
        d = m.shape[0]
        n = d.bit_length() - 1
        if 2**n != d or n < 1:
            raise ValidationError(f"matrix side {d} is not a power of two >= 2")
        if n > DENSE_GUARD:
            raise ValidationError(f"dense states limited to n <= {DENSE_GUARD}")
        herm_res = np.max(np.abs(m - m.conj().T))
        if herm_res > tol_herm:
            raise ValidationError(f"not Hermitian: residual {herm_res:.3e}")
        tr = m.trace()
        if abs(tr - 1.0) > tol_tr:
            raise ValidationError(f"trace {tr} differs from 1 beyond tolerance")
        m = m / tr.real
        min_eig = float(np.linalg.eigvalsh(m)[0])
        if min_eig < -tol_psd:
            raise ValidationError(f"minimum eigenvalue {min_eig:.3e} below -{tol_psd}")
        m = m.copy()
        m.setflags(write=False)
        return cls(n, m)

    @property
    def dim(self) -> int:
        return 2**self.n


@dataclass(frozen=True)
class GVector:
    """The 2n+1 observable expectations; index 0 is the pseudoscalar."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float).copy()
        if vals.shape != (2 * self.n + 1,):
            raise DomainError(f"expected {2 * self.n + 1} coefficients, got shape {vals.shape}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def norm_squared(self) -> float:
        return float(np.dot(self.values, self.values))


@dataclass(frozen=True)
class GradedExpansion:
    """Full coefficient map of a state over the 4**n graded basis elements."""

    n: int
    coeffs: dict[tuple[int, ...], float]

    def coeff(self, indices) -> float:
        return self.coeffs[tuple(indices)]

    def reconstruct(self, gens: GeneratorSet) -> np.ndarray:
        d = 2**self.n
        out = np.zeros((d, d), dtype=complex)
        for elem in graded_basis(gens):
            out += self.coeffs[elem.indices] * pauli.to_dense(elem.string)
        return out / d


def expand(rho: DensityMatrix, gens: GeneratorSet) -> GradedExpansion:
    """Coefficients ``Tr(rho E)`` for every graded basis element E.

    The identity coefficient equals 1 for any unit-trace input, and
    ``(1/d) * sum coeff * E`` reproduces the matrix.
    """
    coeffs: dict[tuple[int, ...], float] = {}
    for elem in graded_basis(gens):
        val = np.trace(rho.mat @ pauli.to_dense(elem.string))
        if abs(val.imag) > HERMITICITY:
            raise ValidationError(f"coefficient for {elem.indices} not real: {val}")
        coeffs[elem.indices] = float(val.real)
    return GradedExpansion(rho.n, coeffs)


def extended_expectations(mats: np.ndarray, gens: GeneratorSet) -> np.ndarray:
    """Expectations of the 2n+1 extended observables for stacked matrices.

    ``mats`` has shape ``(..., d, d)``; the result appends one axis of
    length 2n+1 in extended order (pseudoscalar first).
    """
    stack = gens.dense_extended
    return np.real(np.einsum("...ij,kji->...k", np.asarray(mats, dtype=complex), stack))


def matrix_from_expectations(g: np.ndarray, gens: GeneratorSet) -> np.ndarray:
    """Dense ``(1/d)(1 + sum_j g_j G_j)`` for stacked coefficient rows."""
    g = np.asarray(g, dtype=float)
    stack = gens.dense_extended
    d = stack.shape[-1]
    eye = np.eye(d, dtype=complex)
    return (eye + np.einsum("...k,kij->...ij", g, stack)) / d


def project_bloch(rho: DensityMatrix, gens: GeneratorSet) -> DensityMatrix:
    """Zero every graded coefficient except identity, vector, and pseudoscalar.

    The output shares the input's expectation vector and is again a valid
    state; the map is idempotent, trace-preserving and unital.
    """
    g = extended_expectations(rho.mat, gens)
    return DensityMatrix.from_matrix(matrix_from_expectations(g, gens))


def gvector(rho: DensityMatrix, gens: GeneratorSet, K: int | None = None) -> GVector:
    """Expectations of the first ``K`` observables (extended order), rest zero.

    ``Pr{G_j = +1 | rho} = (1 + g_j)/2`` relates each entry to the measured
    outcome distribution.
    """
    size = 2 * gens.n + 1
    if K is None:
        K = size
    if not 1 <= K <= size:
        raise DomainError(f"K must lie in 1..{size}, got {K}")
    full = extended_expectations(rho.mat, gens)
    vals = np.zeros(size)
    vals[:K] = full[:K]
    return GVector(gens.n, vals)


def from_gvector(g: GVector, gens: GeneratorSet, *, tol_psd: float = PSD) -> DensityMatrix:
    """State ``(1/d)(1 + sum_j g_j G_j)`` for coefficients in the unit ball.

    Rejects coefficient vectors with ``sum g_j**2 > 1 + tol_psd``, where
    positivity is no longer guaranteed.
    """
    if g.n != gens.n:
        raise DomainError(f"coefficient vector is for n={g.n}, generators for n={gens.n}")
    norm_sq = g.norm_squared
    if norm_sq > 1.0 + tol_psd:
        raise BallViolationError(f"sum of squares {norm_sq:.12f} exceeds 1")
    return DensityMatrix.from_matrix(matrix_from_expectations(g.values, gens), tol_psd=tol_psd)


_ENSEMBLES = ("pure-haar", "mixed-hs")


def random_state_batch(n: int, count: int, seed, ensemble: str = "mixed-hs") -> np.ndarray:
    """Stack of ``count`` random states, shape ``(count, d, d)``.

    ``pure-haar`` draws Haar-random pure states; ``mixed-hs`` draws from
    the Hilbert-Schmidt measure (square Ginibre matrix G, normalized
    G G^H).  Deterministic given the seed.
    """
    if ensemble not in _ENSEMBLES:
        raise DomainError(f"unknown ensemble {ensemble!r}; choose from {_ENSEMBLES}")
    if n > DENSE_GUARD:
        raise DomainError(f"dense sampling limited to n <= {DENSE_GUARD}")
    rng = np.random.default_rng(seed)
    d = 2**n
    if ensemble == "pure-haar":
        psi = rng.standard_normal((count, d)) + 1j * rng.standard_normal((count, d))
        psi /= np.linalg.norm(psi, axis=1, keepdims=True)
        return np.einsum("si,sj->sij", psi, psi.conj())
    gin = rng.standard_normal((count, d, d)) + 1j * rng.standard_normal((count, d, d))
    w = np.einsum("sij,skj->sik", gin, gin.conj())
    traces = np.trace(w, axis1=1, axis2=2).real
    return w / traces[:, None, None]


def random_state(n: int, seed, ensemble: str = "mixed-hs") -> DensityMatrix:
    """One random state as a validated :class:`DensityMatrix`."""
    return DensityMatrix.from_matrix(random_state_batch(n, 1, seed, ensemble)[0])


def to_document(rho: DensityMatrix) -> str:
    """Serialize as JSON: ``{"n": n, "matrix": [[[re, im], ...], ...]}``.

    Row-major entries rendered with 17 significant digits, which round-trip
    float64 exactly.
    """

    def fmt(v: float) -> str:
        return format(float(v), ".17g")

    rows = []
    for row in rho.mat:
        cells = ",".join(f"[{fmt(c.real)},{fmt(c.imag)}]" for c in row)
        rows.append(f"[{cells}]")
    return '{"n": %d, "matrix": [%s]}' % (rho.n, ",".join(rows))


def from_document(text: str) -> DensityMatrix:
    """Parse the :func:`to_document` format and validate the state."""
    try:
        doc = json.loads(text)
        n = doc["n"]
        entries = doc["matrix"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ParseError(f"malformed density-matrix document: {exc}") from exc
    d = 2**n
    mat = np.empty((d, d), dtype=complex)
    if len(entries) != d:
        raise ParseError(f"expected {d} rows, got {len(entries)}")
    for i, row in enumerate(entries):
        if len(row) != d:
            raise ParseError(f"row {i} has {len(row)} entries, expected {d}")
        for j, (re, im) in enumerate(row):
            mat[i, j] = complex(re, im)
    return DensityMatrix.from_matrix(mat)
