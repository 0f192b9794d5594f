"""Exact algebra of signed Pauli strings in the symplectic encoding.

A string on ``n`` qubits is stored as two length-``n`` bit vectors and an
integer phase exponent, and denotes the operator

    i**phase * (X**x[0] Z**z[0]) (x) ... (x) (X**x[n-1] Z**z[n-1])

with qubit 0 the leftmost tensor factor.  Products, commutation checks and
Hermiticity tests reduce to bit arithmetic modulo small integers and are
therefore exact at any ``n``; :func:`to_dense` is the only floating-point
surface and is guarded to small qubit counts.

Phase convention: ``Y`` is stored as ``x=1, z=1, phase=1`` so that its
dense rendering is the standard Pauli Y matrix (``Y = i X Z``).  A string
is Hermitian iff ``phase + overlap`` is even, where ``overlap`` counts the
qubits carrying both an X and a Z bit.
"""

from __future__ import annotations

import re

import numpy as np

from .errors import CapacityError, DimensionMismatchError, ParseError
from .tolerances import DENSE_GUARD

_I_POW = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)  # exact powers of i

_LABEL_RE = re.compile(r"^([+-]?)(1|i)?([IXYZ]+)$")
_PREFIX_FOR_PHASE = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_LETTER_FOR_BITS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}

# Unsigned single-qubit factors X**x Z**z.  The (1,1) entry is X @ Z, so the
# stored phase supplies the i that turns it into Y.
_XZ_FACTOR = {
    (0, 0): np.eye(2, dtype=complex),
    (1, 0): np.array([[0, 1], [1, 0]], dtype=complex),
    (0, 1): np.array([[1, 0], [0, -1]], dtype=complex),
    (1, 1): np.array([[0, -1], [1, 0]], dtype=complex),
}


def _as_bits(bits, n: int) -> np.ndarray:
    arr = np.asarray(bits, dtype=np.uint8).copy()
    if arr.shape != (n,):
        raise DimensionMismatchError(f"bit vector has shape {arr.shape}, expected ({n},)")
    if np.any(arr > 1):
        raise ParseError("bit vectors must contain only 0 and 1")
    arr.setflags(write=False)
    return arr


class PauliString:
    """Immutable signed Pauli product on ``n`` qubits."""

    __slots__ = ("n", "x", "z", "phase")

    def __init__(self, n: int, x, z, phase: int = 0):
        if n < 1:
            raise DimensionMismatchError("qubit count must be positive")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "x", _as_bits(x, n))
        object.__setattr__(self, "z", _as_bits(z, n))
        object.__setattr__(self, "phase", int(phase) % 4)

    def __setattr__(self, name, value):
        raise AttributeError("PauliString is immutable")

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, np.zeros(n, dtype=np.uint8), np.zeros(n, dtype=np.uint8), 0)

    @property
    def overlap(self) -> int:
        """Number of qubits carrying both an X and a Z bit."""
        return int(np.count_nonzero(np.logical_and(self.x, self.z)))

    @property
    def is_hermitian(self) -> bool:
        return (self.phase + self.overlap) % 2 == 0

    @property
    def is_identity(self) -> bool:
        return self.phase == 0 and not self.x.any() and not self.z.any()

    def phase_shifted(self, k: int) -> "PauliString":
        """Same string multiplied by i**k."""
        return PauliString(self.n, self.x, self.z, self.phase + k)

    def __mul__(self, other: "PauliString") -> "PauliString":
        return mul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliString):
            return NotImplemented
        return (
            self.n == other.n
            and self.phase == other.phase
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.z, other.z)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.phase, self.x.tobytes(), self.z.tobytes()))

    def __repr__(self) -> str:
        return f"PauliString({to_label(self)!r})"


def from_label(label: str) -> PauliString:
    """Parse ``[+|-][1|i] LETTERS`` with letters in ``IXYZ``.

    The optional prefix selects the sign/phase (``+1``, ``-1``, ``+i``,
    ``-i``; a bare sign means ``+1``/``-1``).  Each ``Y`` contributes one
    factor of ``i`` to the stored phase so the encoding round-trips with
    :func:`to_label`.
    """
    m = _LABEL_RE.match(label.strip())
    if m is None:
        raise ParseError(f"not a Pauli label: {label!r}")
    sign, unit, letters = m.groups()
    phase = 2 if sign == "-" else 0
    if unit == "i":
        phase += 1
    n = len(letters)
    x = np.zeros(n, dtype=np.uint8)
    z = np.zeros(n, dtype=np.uint8)
    for j, ch in enumerate(letters):
        if ch == "X":
            x[j] = 1
        elif ch == "Z":
            z[j] = 1
        elif ch == "Y":
            x[j] = 1
            z[j] = 1
            phase += 1
    return PauliString(n, x, z, phase)


def to_label(p: PauliString) -> str:
    """Inverse of :func:`from_label` (canonical ``+``/``-``/``+i``/``-i`` prefix)."""
    prefix = _PREFIX_FOR_PHASE[(p.phase - p.overlap) % 4]
    letters = "".join(_LETTER_FOR_BITS[(int(a), int(b))] for a, b in zip(p.x, p.z))
    return prefix + letters


def product_components(xa, za, pa, xb, zb, pb):
    """Vectorized product kernel on stacked ``(..., n)`` bit arrays.

    Reordering ``Z**za X**xb = (-1)**(za.xb) X**xb Z**za`` is the only
    phase source, so the product of ``i**pa P_a`` and ``i**pb P_b`` has
    phase exponent ``pa + pb + 2*(za.xb)`` mod 4.  Returns ``(x, z, phase)``.
    """
    x = np.bitwise_xor(xa, xb)
    z = np.bitwise_xor(za, zb)
    swaps = np.count_nonzero(np.logical_and(za, xb), axis=-1)
    phase = (np.asarray(pa) + np.asarray(pb) + 2 * swaps) % 4
    return x, z, phase


def mul(a: PauliString, b: PauliString) -> PauliString:
    """Exact product ``a @ b`` including phase, in O(n) bit operations."""
    if a.n != b.n:
        raise DimensionMismatchError(f"qubit counts differ: {a.n} vs {b.n}")
    x, z, phase = product_components(a.x, a.z, a.phase, b.x, b.z, b.phase)
    return PauliString(a.n, x, z, int(phase))


def symplectic_inner(a: PauliString, b: PauliString) -> int:
    """Parity of the symplectic form: 1 iff the strings anti-commute."""
    if a.n != b.n:
        raise DimensionMismatchError(f"qubit counts differ: {a.n} vs {b.n}")
    s = np.count_nonzero(np.logical_and(a.x, b.z)) + np.count_nonzero(
        np.logical_and(a.z, b.x)
    )
    return int(s) & 1


def anticommutes(a: PauliString, b: PauliString) -> bool:
    """True iff ``ab = -ba``; no matrix work."""
    return symplectic_inner(a, b) == 1


def to_dense(p: PauliString, guard: int = DENSE_GUARD) -> np.ndarray:
    """Dense ``2**n x 2**n`` complex matrix via Kronecker assembly.

    All entries are exact (drawn from ``{0, +-1, +-i}``).
    """
    if p.n > guard:
        raise CapacityError(f"dense rendering limited to n <= {guard}, got n = {p.n}")
    m = np.array([[_I_POW[p.phase]]], dtype=complex)
    for a, b in zip(p.x, p.z):
        m = np.kron(m, _XZ_FACTOR[(int(a), int(b))])
    return m
