"""Anti-commuting generator sets and the graded operator basis.

The 2n generators come from the Jordan-Wigner construction,

    G_{2j-1} = Z^(j-1) (x) X (x) 1^(n-j)
    G_{2j}   = Z^(j-1) (x) Y (x) 1^(n-j)      (j = 1..n),

which are Hermitian involutions with {G_j, G_k} = 2 delta_jk.  The
pseudoscalar is the top-grade product with the uniform Hermitizing phase,

    G_0 = i**n * G_1 G_2 ... G_2n,

and anti-commutes with every generator, extending the set to 2n+1 mutually
anti-commuting observables.

Products over an index subset S = {s_1 < ... < s_m} carry the grade-m
phase i**(m(m-1)/2), which makes every basis element Hermitian and
involutory for every grade (reversing m mutually anti-commuting factors
costs (-1)**(m(m-1)/2), so this phase squares to exactly that sign).  The
4**n elements, ordered by grade then lexicographically by index set, form
an orthogonal basis for the d x d matrices under the trace inner product.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np

from . import pauli
from .errors import DomainError
from .pauli import PauliString
from .tolerances import DENSE_GUARD


class GeneratorSet:
    """The 2n Jordan-Wigner generators plus the pseudoscalar.

    Index convention used throughout the package: extended index 0 is the
    pseudoscalar and indices 1..2n are the generators, so "the first K
    observables" means ``(G_0, G_1, ..., G_{K-1})``.
    """

    def __init__(self, n: int, gammas, gamma0: PauliString):
        if len(gammas) != 2 * n:
            raise DomainError(f"expected {2 * n} generators, got {len(gammas)}")
        self.n = int(n)
        self.gammas = tuple(gammas)
        self.gamma0 = gamma0

    @property
    def extended_size(self) -> int:
        return 2 * self.n + 1

    def extended(self, i: int) -> PauliString:
        """Element of the extended set; ``i = 0`` is the pseudoscalar."""
        if i == 0:
            return self.gamma0
        if 1 <= i <= 2 * self.n:
            return self.gammas[i - 1]
        raise DomainError(f"extended index {i} out of range 0..{2 * self.n}")

    def extended_list(self) -> list[PauliString]:
        return [self.gamma0, *self.gammas]

    @cached_property
    def dense_extended(self) -> np.ndarray:
        """Stack of dense observables, shape ``(2n+1, d, d)``, extended order."""
        if self.n > DENSE_GUARD:
            raise DomainError(f"dense work limited to n <= {DENSE_GUARD}")
        stack = np.stack([pauli.to_dense(g) for g in self.extended_list()])
        stack.setflags(write=False)
        return stack

    def verify_anticommutation(self) -> bool:
        """Exact check of {G_j, G_k} = 2 delta_jk over the extended set."""
        elems = self.extended_list()
        for a, b in combinations(elems, 2):
            if not pauli.anticommutes(a, b):
                return False
        return all(pauli.mul(g, g).is_identity for g in elems)

    def __repr__(self) -> str:
        return f"GeneratorSet(n={self.n})"


def jordan_wigner(n: int) -> GeneratorSet:
    """Build the generator set for ``n`` qubits.

    Raises a domain error for ``n < 1``.  The pseudoscalar phase follows
    the grade-2n Hermitizing convention (module docstring), which reduces
    to ``i * G_1 G_2 = -Z`` at ``n = 1``.
    """
    if n < 1:
        raise DomainError("qubit count must be at least 1")
    gammas = []
    for j in range(1, n + 1):
        x = np.zeros(n, dtype=np.uint8)
        z = np.zeros(n, dtype=np.uint8)
        z[: j - 1] = 1
        x[j - 1] = 1
        gammas.append(PauliString(n, x, z, 0))
        zy = z.copy()
        zy[j - 1] = 1
        gammas.append(PauliString(n, x, zy, 1))
    prod = gammas[0]
    for g in gammas[1:]:
        prod = pauli.mul(prod, g)
    m = 2 * n
    gamma0 = prod.phase_shifted(m * (m - 1) // 2)
    return GeneratorSet(n, gammas, gamma0)


@dataclass(frozen=True)
class GradedBasisElement:
    """Hermitian involutory product of generators over one index subset."""

    indices: tuple[int, ...]
    grade: int
    string: PauliString


def graded_basis(gens: GeneratorSet) -> list[GradedBasisElement]:
    """All 4**n basis elements, grades ascending, index sets lexicographic.

    Grade 0 is the identity; grade 2n equals the pseudoscalar under the
    shared phase convention.  Distinct elements are trace-orthogonal.
    """
    n = gens.n
    out = []
    for m in range(0, 2 * n + 1):
        for subset in combinations(range(1, 2 * n + 1), m):
            prod = PauliString.identity(n)
            for i in subset:
                prod = pauli.mul(prod, gens.gammas[i - 1])
            elem = prod.phase_shifted(m * (m - 1) // 2)
            out.append(GradedBasisElement(subset, m, elem))
    return out


def eigenprojectors(g: PauliString) -> tuple[np.ndarray, np.ndarray]:
    """Projectors onto the +1 and -1 eigenspaces of a Hermitian involution.

    Returns ``(P0, P1)`` with ``P0 + P1 = 1`` and ``P0 - P1`` the dense
    observable; each has rank ``2**(n-1)``.
    """
    if not g.is_hermitian:
        raise DomainError("eigenprojectors need a Hermitian involutory string")
    if pauli.mul(g, g) != PauliString.identity(g.n):
        raise DomainError("string does not square to the identity")
    dense = pauli.to_dense(g)
    eye = np.eye(dense.shape[0], dtype=complex)
    return (eye + dense) / 2.0, (eye - dense) / 2.0
