"""Exact n-qubit Pauli algebra with phase tracking.

A Pauli word is stored as ``i**phase * X**x * Z**z`` where ``x`` and ``z`` are
bit masks (bit ``j`` is qubit ``j``) and on every qubit the X factor sits to the
left of the Z factor.  With this convention ``Y = i X Z``.

Two string forms are supported:

* compact: ``"+XYZII"``, ``"-iZZ"`` -- a coefficient in ``{+, -, +i, -i}``
  followed by one letter per qubit, qubit 0 first (``Y`` is the genuine Y).
* text: ``"i^3 X0110 Z0010"`` -- the raw phase exponent and both masks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "PauliOperator",
    "PauliError",
    "multiply",
    "commutes",
    "canonical_hermitian",
    "support",
    "restrict",
    "identity",
    "single",
    "from_axes",
    "product",
]

_COEFF = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_AXES = {"x": (1, 0), "y": (1, 1), "z": (0, 1)}


class PauliError(ValueError):
    """Raised for ill-formed Pauli operations (size mismatch, bad strings)."""


@dataclass(frozen=True)
class PauliOperator:
    num_qubits: int
    phase_exp: int
    x_mask: int
    z_mask: int

    def __post_init__(self):
        full = (1 << self.num_qubits) - 1
        if self.num_qubits < 0 or self.x_mask & ~full or self.z_mask & ~full:
            raise PauliError("mask wider than num_qubits")
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    # -- basic properties -------------------------------------------------
    @property
    def y_count(self) -> int:
        return (self.x_mask & self.z_mask).bit_count()

    @property
    def weight(self) -> int:
        return (self.x_mask | self.z_mask).bit_count()

    @property
    def coefficient_exp(self) -> int:
        """Exponent ``c`` such that the operator is ``i**c`` times the letter word."""
        return (self.phase_exp - self.y_count) % 4

    @property
    def is_hermitian(self) -> bool:
        return (self.phase_exp + self.y_count) % 2 == 0

    @property
    def sign(self) -> int:
        """Real coefficient (+1 or -1) of a Hermitian operator."""
        c = self.coefficient_exp
        if c % 2:
            raise PauliError("operator is not Hermitian")
        return 1 if c == 0 else -1

    def is_identity(self, up_to_phase: bool = True) -> bool:
        if self.x_mask or self.z_mask:
            return False
        return up_to_phase or self.phase_exp == 0

    def same_word(self, other: "PauliOperator") -> bool:
        """True if the two operators agree up to a phase."""
        _check_sizes(self, other)
        return self.x_mask == other.x_mask and self.z_mask == other.z_mask

    def letter(self, q: int) -> str:
        xb = (self.x_mask >> q) & 1
        zb = (self.z_mask >> q) & 1
        return "IZXY"[2 * xb + zb]

    # -- algebra ----------------------------------------------------------
    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return multiply(self, other)

    def __neg__(self) -> "PauliOperator":
        return self.times_phase(2)

    def times_phase(self, k: int) -> "PauliOperator":
        """Multiply by ``i**k``."""
        return PauliOperator(self.num_qubits, self.phase_exp + k, self.x_mask, self.z_mask)

    def inverse(self) -> "PauliOperator":
        # (i^k X^x Z^z)^-1 = Z^z X^x i^-k = (-1)^{|x&z|} i^-k X^x Z^z
        return PauliOperator(
            self.num_qubits, -self.phase_exp + 2 * self.y_count, self.x_mask, self.z_mask
        )

    def commutes_with(self, other: "PauliOperator") -> bool:
        return commutes(self, other)

    # -- string forms -----------------------------------------------------
    def to_compact(self) -> str:
        letters = "".join(self.letter(q) for q in range(self.num_qubits))
        return _COEFF[self.coefficient_exp] + letters

    def to_text(self) -> str:
        n = self.num_qubits
        xs = "".join(str((self.x_mask >> q) & 1) for q in range(n))
        zs = "".join(str((self.z_mask >> q) & 1) for q in range(n))
        return f"i^{self.phase_exp} X{xs} Z{zs}"

    @classmethod
    def from_compact(cls, s: str) -> "PauliOperator":
        s = s.strip()
        for prefix, c in (("+i", 1), ("-i", 3), ("+", 0), ("-", 2), ("i", 1)):
            if s.startswith(prefix) and (prefix != "i" or len(s) > 1):
                body = s[len(prefix):]
                break
        else:
            c, body = 0, s
        x = z = 0
        for q, ch in enumerate(body):
            if ch not in "IXYZ":
                raise PauliError(f"bad Pauli letter {ch!r} in {s!r}")
            if ch in "XY":
                x |= 1 << q
            if ch in "ZY":
                z |= 1 << q
        y = (x & z).bit_count()
        return cls(len(body), c + y, x, z)

    @classmethod
    def from_text(cls, s: str) -> "PauliOperator":
        try:
            head, xs, zs = s.split()
            if not (head.startswith("i^") and xs[0] == "X" and zs[0] == "Z"):
                raise ValueError
            k = int(head[2:])
            xs, zs = xs[1:], zs[1:]
            if len(xs) != len(zs) or set(xs + zs) - {"0", "1"}:
                raise ValueError
        except (ValueError, IndexError):
            raise PauliError(f"cannot parse Pauli text {s!r}") from None
        x = sum(1 << q for q, b in enumerate(xs) if b == "1")
        z = sum(1 << q for q, b in enumerate(zs) if b == "1")
        return cls(len(xs), k, x, z)

    def __str__(self) -> str:
        return self.to_compact()


def _check_sizes(a: PauliOperator, b: PauliOperator) -> None:
    if a.num_qubits != b.num_qubits:
        raise PauliError(f"size mismatch: {a.num_qubits} vs {b.num_qubits} qubits")


def multiply(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    """Exact product ``a * b``."""
    _check_sizes(a, b)
    # moving Z^{z_a} to the right past X^{x_b} costs (-1)^{|z_a & x_b|}
    k = a.phase_exp + b.phase_exp + 2 * (a.z_mask & b.x_mask).bit_count()
    return PauliOperator(a.num_qubits, k, a.x_mask ^ b.x_mask, a.z_mask ^ b.z_mask)


def product(ops: Iterable[PauliOperator], num_qubits: int | None = None) -> PauliOperator:
    """Left-to-right product of ``ops``; ``num_qubits`` is needed for an empty list."""
    result = None
    for op in ops:
        result = op if result is None else multiply(result, op)
    if result is None:
        if num_qubits is None:
            raise PauliError("empty product needs num_qubits")
        return identity(num_qubits)
    return result


def symplectic(a: PauliOperator, b: PauliOperator) -> int:
    _check_sizes(a, b)
    return ((a.x_mask & b.z_mask).bit_count() + (a.z_mask & b.x_mask).bit_count()) & 1


def commutes(a: PauliOperator, b: PauliOperator) -> bool:
    return symplectic(a, b) == 0


def canonical_hermitian(a: PauliOperator) -> tuple[PauliOperator, int]:
    """Split ``a`` as ``i**discarded * P`` with ``P`` Hermitian and coefficient +1."""
    canon = PauliOperator(a.num_qubits, a.y_count, a.x_mask, a.z_mask)
    return canon, a.coefficient_exp


def hermitian_real(a: PauliOperator) -> PauliOperator:
    """Keep ``a`` if Hermitian, else return ``i * a`` (the convention used for tracked signs)."""
    return a if a.is_hermitian else a.times_phase(1)


def support(a: PauliOperator) -> frozenset[int]:
    m = a.x_mask | a.z_mask
    out = []
    q = 0
    while m:
        if m & 1:
            out.append(q)
        m >>= 1
        q += 1
    return frozenset(out)


def restrict(a: PauliOperator, qubits: Sequence[int], truncate: bool = False) -> PauliOperator:
    """Re-index ``a`` onto ``qubits`` (new qubit ``t`` is old qubit ``qubits[t]``).

    Without ``truncate`` the operator must act trivially outside ``qubits``.
    With ``truncate`` the outside factors are dropped and the letter-form
    coefficient is kept.
    """
    keep = 0
    for q in qubits:
        keep |= 1 << q
    outside = (a.x_mask | a.z_mask) & ~keep
    if outside and not truncate:
        raise PauliError("operator acts outside the kept qubits")
    x = z = 0
    for t, q in enumerate(qubits):
        x |= ((a.x_mask >> q) & 1) << t
        z |= ((a.z_mask >> q) & 1) << t
    y = (x & z).bit_count()
    return PauliOperator(len(qubits), a.coefficient_exp + y, x, z)


def identity(n: int) -> PauliOperator:
    return PauliOperator(n, 0, 0, 0)


def single(n: int, q: int, axis: str) -> PauliOperator:
    """The Hermitian single-qubit Pauli ``sigma^axis_q`` on ``n`` qubits."""
    return from_axes(n, {q: axis})


def from_axes(n: int, axes: dict[int, str]) -> PauliOperator:
    """Hermitian Pauli with coefficient +1 from a ``{qubit: 'x'|'y'|'z'}`` map."""
    x = z = 0
    for q, ax in axes.items():
        if not 0 <= q < n:
            raise PauliError(f"qubit {q} out of range")
        xb, zb = _AXES[ax.lower()]
        x |= xb << q
        z |= zb << q
    return PauliOperator(n, (x & z).bit_count(), x, z)
