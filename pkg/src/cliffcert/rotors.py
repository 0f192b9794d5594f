"""Orthogonal transformations of the observable span and their unitary lifts.

An orthogonal matrix T acting on the generator span (size N = 2n), or a
special-orthogonal matrix on the extended span including the pseudoscalar
(N = 2n+1), is realized on the Hilbert space by a unitary U with

    U G_j U^H = sum_i T_ij G_i.

The lift factors T through its Euler-angle decomposition

    T = E_1^(det T) * prod_{j<k, lexicographic} R_jk(theta_jk),

where R_jk(theta) rotates the (j, k) coordinate plane and E_1 reflects the
first axis.  Plane rotations inside the generator span lift directly to
the rotor

    U = cos(theta/2) 1 + sin(theta/2) G_k G_j,

which fixes every other observable including the pseudoscalar.  Rotations
that involve the pseudoscalar are lifted by conjugating the (1,2)-plane
rotor with a generator-permutation unitary built from pair swaps
(G_a + G_b)/sqrt(2); the direct rotor formula also applies there and the
two constructions agree as channels.  The axis reflection lifts to
U = G_0 G_1, which flips G_1 together with G_0 - under a 2n-generator lift
the pseudoscalar therefore picks up the factor det T.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import pauli
from .clifford import GeneratorSet
from .errors import DimensionMismatchError, DomainError, OrientationError
from .states import DensityMatrix, extended_expectations
from .tolerances import ORTHOGONALITY

_TWO_PI = 2.0 * math.pi

# Degenerate-case guards for reduce_to_axis: generator-span weight below
# _NEGLIGIBLE is treated as zero; the antipodal pre-rotation triggers once
# the midpoint normalization 2(1 + g_1/sqrt(l')) drops under _ANTIPODAL.
_NEGLIGIBLE = 1e-24
_ANTIPODAL = 1e-8


class OrthoTransform:
    """Validated real orthogonal matrix with its determinant sign."""

    def __init__(self, mat, *, tol: float = ORTHOGONALITY):
        m = np.asarray(mat, dtype=float).copy()
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DomainError(f"expected a square matrix, got shape {m.shape}")
        res = np.max(np.abs(m @ m.T - np.eye(m.shape[0])))
        if res > tol:
            raise DomainError(f"matrix is not orthogonal: residual {res:.3e}")
        m.setflags(write=False)
        self.mat = m
        self.size = m.shape[0]
        self.det_sign = 1 if np.linalg.det(m) > 0 else -1

    def __repr__(self) -> str:
        return f"OrthoTransform(size={self.size}, det_sign={self.det_sign:+d})"


def _as_transform(t) -> OrthoTransform:
    return t if isinstance(t, OrthoTransform) else OrthoTransform(t)


@dataclass(frozen=True)
class EulerFactorization:
    """Reflection flag and plane-rotation angles, lexicographic in (j, k)."""

    size: int
    reflection_flag: int
    angles: tuple[tuple[int, int, float], ...]


def rotation_matrix(size: int, j: int, k: int, theta: float) -> np.ndarray:
    """R_jk(theta) on 1-based axes: column j rotates toward column k."""
    if j == k:
        raise DomainError("plane rotation needs two distinct axes")
    m = np.eye(size)
    c, s = math.cos(theta), math.sin(theta)
    m[j - 1, j - 1] = c
    m[k - 1, k - 1] = c
    m[k - 1, j - 1] = s
    m[j - 1, k - 1] = -s
    return m


def euler_decompose(t) -> EulerFactorization:
    """Factor an orthogonal matrix into reflection times plane rotations.

    Angles are found by Givens-style annihilation of the first column,
    then recursing on the trailing block; each angle is reduced to
    [0, 2*pi).  Recomposition reproduces the input to working precision.
    """
    trans = _as_transform(t)
    size = trans.size
    w = trans.mat.copy()
    if trans.det_sign < 0:
        w[0, :] = -w[0, :]
    angles = []
    for j in range(1, size):
        for k in range(j + 1, size + 1):
            theta = math.atan2(w[k - 1, j - 1], w[j - 1, j - 1])
            if theta != 0.0:
                c, s = math.cos(theta), math.sin(theta)
                rj = c * w[j - 1] + s * w[k - 1]
                rk = -s * w[j - 1] + c * w[k - 1]
                w[j - 1], w[k - 1] = rj, rk
            angles.append((j, k, theta % _TWO_PI))
    if np.max(np.abs(w - np.eye(size))) > 1e-8:
        raise DomainError("angle extraction failed to reduce the matrix")
    return EulerFactorization(size, trans.det_sign, tuple(angles))


def recompose(fact: EulerFactorization) -> np.ndarray:
    """Multiply the factorization back out (reflection first, then rotations)."""
    out = np.eye(fact.size)
    out[0, 0] = fact.reflection_flag
    for j, k, theta in fact.angles:
        out = out @ rotation_matrix(fact.size, j, k, theta)
    return out


def _rotor_direct(gens: GeneratorSet, j: int, k: int, theta: float) -> np.ndarray:
    """cos(theta/2) 1 + sin(theta/2) G_k G_j on extended indices."""
    gj = pauli.to_dense(gens.extended(j))
    gk = pauli.to_dense(gens.extended(k))
    eye = np.eye(gj.shape[0], dtype=complex)
    return math.cos(theta / 2.0) * eye + math.sin(theta / 2.0) * (gk @ gj)


def _swap_unitary(gens: GeneratorSet, a: int, b: int) -> np.ndarray:
    """(G_a + G_b)/sqrt(2): swaps the pair, negates the rest of the family."""
    return (pauli.to_dense(gens.extended(a)) + pauli.to_dense(gens.extended(b))) / math.sqrt(2.0)


def _permutation_unitary(gens: GeneratorSet, swaps) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Compose pair swaps; track the induced signed permutation exactly.

    Returns ``(V, sign, perm)`` with ``V G_i V^H = sign[i] * G_perm[i]`` on
    extended indices.
    """
    size = gens.extended_size
    d = 2**gens.n
    v = np.eye(d, dtype=complex)
    sign = np.ones(size, dtype=int)
    perm = np.arange(size)
    for a, b in swaps:
        v = _swap_unitary(gens, a, b) @ v
        for i in range(size):
            if perm[i] == a:
                perm[i] = b
            elif perm[i] == b:
                perm[i] = a
            else:
                sign[i] = -sign[i]
    return v, sign, perm


def _rotor_pseudoscalar(gens: GeneratorSet, k: int, theta: float) -> np.ndarray:
    """Lift of the rotation moving the pseudoscalar toward generator k.

    Maps the family (G_0, G_k, ...) onto plain generators with a
    permutation unitary, applies the (1,2)-plane rotor there, and maps
    back; the tracked signs fix the rotation's orientation.
    """
    if k == 1:
        swaps = [(1, 0), (2, 1)]
    elif k == 2:
        swaps = [(1, 0)]
    else:
        swaps = [(1, 0), (2, k)]
    v, sign, perm = _permutation_unitary(gens, swaps)
    if perm[1] != 0 or perm[2] != k:
        raise DomainError("internal error: swap chain missed its targets")
    orientation = sign[1] * sign[2]
    core = _rotor_direct(gens, 1, 2, orientation * theta)
    return v @ core @ v.conj().T


def plane_rotor(gens: GeneratorSet, j: int, k: int, theta: float) -> np.ndarray:
    """Unitary sending G_j to cos(theta) G_j + sin(theta) G_k by conjugation.

    ``j`` and ``k`` are extended indices (0 = pseudoscalar); every other
    observable in the extended set is fixed.
    """
    size = gens.extended_size
    if j == k:
        raise DomainError("rotation plane needs two distinct indices")
    for idx in (j, k):
        if not 0 <= idx < size:
            raise DomainError(f"extended index {idx} out of range 0..{size - 1}")
    if j == 0:
        return _rotor_pseudoscalar(gens, k, theta)
    if k == 0:
        return _rotor_pseudoscalar(gens, j, -theta)
    return _rotor_direct(gens, j, k, theta)


def flip_unitary(gens: GeneratorSet, j: int) -> np.ndarray:
    """G_0 G_j: conjugation negates G_j and G_0, fixing all other generators."""
    if not 1 <= j <= 2 * gens.n:
        raise DomainError(f"generator index {j} out of range 1..{2 * gens.n}")
    return pauli.to_dense(pauli.mul(gens.gamma0, gens.gammas[j - 1]))


def lift(t, gens: GeneratorSet) -> np.ndarray:
    """Unitary implementing an orthogonal transform of the observable span.

    ``t`` of size 2n acts on the generators (any determinant; the
    pseudoscalar picks up det T).  Size 2n+1 acts on the extended set and
    must be special-orthogonal.  Built as the product of the lifted
    Euler-angle factors.
    """
    trans = _as_transform(t)
    n = gens.n
    d = 2**n
    fact = euler_decompose(trans)
    u = np.eye(d, dtype=complex)
    if trans.size == 2 * n + 1:
        if trans.det_sign < 0:
            raise OrientationError("extended-set lift requires determinant +1")
        for j, k, theta in fact.angles:
            if theta != 0.0:
                u = u @ plane_rotor(gens, j - 1, k - 1, theta)
    elif trans.size == 2 * n:
        if fact.reflection_flag < 0:
            u = flip_unitary(gens, 1)
        for j, k, theta in fact.angles:
            if theta != 0.0:
                u = u @ plane_rotor(gens, j, k, theta)
    else:
        raise DimensionMismatchError(
            f"transform size {trans.size} matches neither 2n={2 * n} nor 2n+1={2 * n + 1}"
        )
    return u


def _vector_rotor(gens: GeneratorSet, coeffs: np.ndarray, axis: int) -> np.ndarray:
    """Rotor G_axis m_hat taking the unit vector ``coeffs`` onto G_axis.

    ``coeffs`` holds extended coefficients of a unit vector g_hat in the
    observable span; m_hat is the normalized midpoint (g_hat + G_axis).
    Requires 1 + <g_hat, G_axis> bounded away from zero.
    """
    stack = gens.dense_extended
    g_hat = np.einsum("k,kij->ij", coeffs, stack)
    denom = 2.0 * (1.0 + coeffs[axis])
    m_hat = (g_hat + stack[axis]) / math.sqrt(denom)
    return stack[axis] @ m_hat


def reduce_to_axis(rho: DensityMatrix, gens: GeneratorSet) -> tuple[DensityMatrix, np.ndarray, float]:
    """Rotate a state's expectation vector onto the first generator axis.

    Three reflections-based rotors move the full extended expectation
    vector onto G_1 (generator-span rotation, pseudoscalar/G_2 exchange,
    final in-plane rotation); averaging over the sign flips F_j for
    j = 2..2n then erases every remaining graded coefficient except the
    identity and G_1.

    Returns ``(rho_hat, U, ell)`` where ``ell`` is the squared length of
    the expectation vector, ``rho_hat = (1/d)(1 + sqrt(ell) G_1)``, and
    ``U^H rho_hat U`` equals the Bloch projection of the input.  States
    with no expectation-vector weight skip the rotations; an expectation
    vector anti-parallel to G_1 is pre-rotated by pi in the (1,2) plane to
    avoid the midpoint singularity.
    """
    n = gens.n
    d = 2**n
    work = np.asarray(rho.mat, dtype=complex)
    u = np.eye(d, dtype=complex)
    g = extended_expectations(work, gens)
    ell = float(np.dot(g, g))

    if ell > _NEGLIGIBLE:
        ell_span = float(np.dot(g[1:], g[1:]))
        if ell_span > _NEGLIGIBLE:
            root_span = math.sqrt(ell_span)
            if 1.0 + g[1] / root_span < _ANTIPODAL:
                pre = plane_rotor(gens, 1, 2, math.pi)
                u = pre @ u
                work = pre @ work @ pre.conj().T
                g = extended_expectations(work, gens)
                root_span = math.sqrt(float(np.dot(g[1:], g[1:])))
            coeffs = g.copy()
            coeffs[0] = 0.0
            coeffs /= root_span
            r = _vector_rotor(gens, coeffs, axis=1)
            u = r @ u
            work = r @ work @ r.conj().T
            g = extended_expectations(work, gens)

        # Exchange the pseudoscalar with G_2 (90-degree rotation in their
        # plane), then rotate the remaining (G_1, G_2) weight onto G_1.
        stack = gens.dense_extended
        n_hat = (stack[0] + stack[2]) / math.sqrt(2.0)
        r_ex = stack[2] @ n_hat
        u = r_ex @ u
        work = r_ex @ work @ r_ex.conj().T
        g = extended_expectations(work, gens)

        span = math.hypot(g[1], g[2])
        if span > math.sqrt(_NEGLIGIBLE):
            coeffs = np.zeros_like(g)
            coeffs[1] = g[1] / span
            coeffs[2] = g[2] / span
            r_fin = _vector_rotor(gens, coeffs, axis=1)
            u = r_fin @ u
            work = r_fin @ work @ r_fin.conj().T

    for j in range(2, 2 * n + 1):
        f = flip_unitary(gens, j)
        work = 0.5 * (work + f @ work @ f.conj().T)

    rho_hat = DensityMatrix.from_matrix(work)
    return rho_hat, u, ell


def conjugation_residual(u: np.ndarray, t, gens: GeneratorSet) -> float:
    """Worst-case entrywise error of ``U G_j U^H - sum_i T_ij G_i``.

    For a 2n-sized transform the generators are checked and the
    pseudoscalar must acquire det T; for 2n+1 the whole extended set is
    checked.  Used by the verification suites.
    """
    trans = _as_transform(t)
    n = gens.n
    stack = gens.dense_extended
    uh = u.conj().T
    worst = 0.0
    if trans.size == 2 * n + 1:
        for j in range(trans.size):
            target = np.einsum("i,iab->ab", trans.mat[:, j], stack)
            worst = max(worst, float(np.max(np.abs(u @ stack[j] @ uh - target))))
    elif trans.size == 2 * n:
        for j in range(1, 2 * n + 1):
            target = np.einsum("i,iab->ab", trans.mat[:, j - 1], stack[1:])
            worst = max(worst, float(np.max(np.abs(u @ stack[j] @ uh - target))))
        target0 = trans.det_sign * stack[0]
        worst = max(worst, float(np.max(np.abs(u @ stack[0] @ uh - target0))))
    else:
        raise DimensionMismatchError("transform size matches neither 2n nor 2n+1")
    return worst
