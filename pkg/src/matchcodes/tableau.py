"""Stabilizer tableau with arbitrary-weight Pauli measurement.

Rows are :class:`~matchcodes.pauli.PauliOperator` values, so every row product
carries its exact phase.  Only Pauli application and Pauli measurement are
supported; no Clifford gates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .pauli import PauliOperator, commutes, multiply, single, hermitian_real

__all__ = [
    "StabilizerState",
    "MeasurementRecord",
    "TableauError",
    "canonical_group",
    "groups_equal",
    "group_rank",
    "serialize_group",
]


class TableauError(ValueError):
    pass


@dataclass(frozen=True)
class MeasurementRecord:
    measured: PauliOperator
    outcome: int
    deterministic: bool
    correction_applied: PauliOperator | None = None


def _real_sign_ok(p: PauliOperator) -> bool:
    return p.is_hermitian


class StabilizerState:
    """Mutable stabilizer state on ``num_qubits`` qubits.

    ``stabilizers[i]`` and ``destabilizers[i]`` anticommute; all other
    stabilizer/destabilizer pairs commute.
    """

    def __init__(self, stabilizers: Sequence[PauliOperator], destabilizers: Sequence[PauliOperator]):
        self.stabilizers = list(stabilizers)
        self.destabilizers = list(destabilizers)
        self.num_qubits = len(self.stabilizers)

    # -- construction -----------------------------------------------------
    @classmethod
    def from_z_basis(cls, bits: Iterable[int]) -> "StabilizerState":
        bits = [int(b) for b in bits]
        n = len(bits)
        stabs = [single(n, q, "z").times_phase(2 * b) for q, b in enumerate(bits)]
        destabs = [single(n, q, "x") for q in range(n)]
        return cls(stabs, destabs)

    @classmethod
    def from_generators(cls, gens: Sequence[PauliOperator], num_qubits: int | None = None) -> "StabilizerState":
        """State stabilized by ``gens``.

        Rank-deficient sets are completed deterministically: ``|0...0>`` is
        projected onto the ``+1`` eigenspace of each generator in order, and
        generators that came out ``-1`` deterministically are then flipped by
        one Pauli.  The completion is therefore drawn from products of Z's.
        """
        gens = list(gens)
        if num_qubits is None:
            if not gens:
                raise TableauError("need num_qubits for an empty generator list")
            num_qubits = gens[0].num_qubits
        _check_commuting(gens)
        state = cls.from_z_basis([0] * num_qubits)
        for g in gens:
            if not g.is_hermitian:
                raise TableauError(f"generator {g} is not Hermitian")
            if state.expectation(g) == 0:
                state.measure(g, forced=+1)
        target = sum(1 << i for i, g in enumerate(gens) if state.expectation(g) == -1)
        if target:
            fix = _pauli_with_commutation(gens, target, num_qubits)
            if fix is None:
                raise TableauError("sign-inconsistent dependency: -1 is in the group")
            state.apply_pauli(fix)
        return state

    def copy(self) -> "StabilizerState":
        return StabilizerState(self.stabilizers, self.destabilizers)

    # -- queries ----------------------------------------------------------
    def _anticommuting(self, rows: list[PauliOperator], p: PauliOperator) -> list[int]:
        return [i for i, r in enumerate(rows) if not commutes(r, p)]

    def _group_element_for(self, p: PauliOperator) -> PauliOperator:
        # p commutes with every stabilizer, so p ~ product of the stabilizers
        # whose destabilizers anticommute with it
        acc = PauliOperator(self.num_qubits, 0, 0, 0)
        for i in self._anticommuting(self.destabilizers, p):
            acc = multiply(acc, self.stabilizers[i])
        if not acc.same_word(p):
            raise TableauError("tableau is inconsistent")
        return acc

    def expectation(self, p: PauliOperator) -> int:
        """+1/-1 if ``+-p`` lies in the stabilizer group, else 0."""
        if not p.is_hermitian:
            raise TableauError("expectation needs a Hermitian Pauli")
        if self._anticommuting(self.stabilizers, p):
            return 0
        g = self._group_element_for(p)
        return 1 if g.phase_exp == p.phase_exp else -1

    # -- updates ----------------------------------------------------------
    def apply_pauli(self, p: PauliOperator) -> "StabilizerState":
        """Conjugate by ``p``: stabilizer signs flip where ``p`` anticommutes."""
        for rows in (self.stabilizers, self.destabilizers):
            for i in self._anticommuting(rows, p):
                rows[i] = rows[i].times_phase(2)
        return self

    def measure(self, p: PauliOperator, forced: int | None = None,
                rng: np.random.Generator | None = None) -> MeasurementRecord:
        """Measure Hermitian ``p``.

        ``forced`` post-selects the outcome of a random measurement; forcing a
        deterministic measurement to the other value raises.
        """
        if not p.is_hermitian:
            raise TableauError("can only measure Hermitian Paulis")
        anti = self._anticommuting(self.stabilizers, p)
        if not anti:
            outcome = self.expectation(p)
            if forced is not None and forced != outcome:
                raise TableauError("forced outcome contradicts a deterministic measurement")
            return MeasurementRecord(p, outcome, True)
        if forced is not None:
            outcome = int(forced)
            if outcome not in (1, -1):
                raise TableauError("forced outcome must be +1 or -1")
        else:
            if rng is None:
                raise TableauError("random measurement needs an rng")
            outcome = 1 if rng.integers(2) == 0 else -1
        piv = anti[0]
        old = self.stabilizers[piv]
        for i in anti[1:]:
            self.stabilizers[i] = multiply(self.stabilizers[i], old)
        for i in self._anticommuting(self.destabilizers, p):
            if i != piv:
                self.destabilizers[i] = hermitian_real(multiply(self.destabilizers[i], old))
        self.destabilizers[piv] = old
        self.stabilizers[piv] = p if outcome == 1 else p.times_phase(2)
        return MeasurementRecord(p, outcome, False)

    def measure_corrected(self, p: PauliOperator, rng: np.random.Generator,
                          correction: PauliOperator | None = None) -> MeasurementRecord:
        """Measure ``p``; on a random -1 outcome apply ``correction`` to flip it to +1.

        ``correction`` defaults to a current stabilizer anticommuting with ``p``.
        """
        anti = self._anticommuting(self.stabilizers, p)
        if correction is None and anti:
            correction = self.stabilizers[anti[0]]
        rec = self.measure(p, rng=rng)
        if rec.deterministic or rec.outcome == 1:
            return rec
        if correction is None or commutes(correction, p):
            raise TableauError("correction must anticommute with the measured operator")
        self.apply_pauli(correction)
        return MeasurementRecord(p, rec.outcome, False, correction)

    # -- validation -------------------------------------------------------
    def validate(self) -> None:
        """Raise if the tableau invariants are broken."""
        n = self.num_qubits
        if len(self.destabilizers) != n:
            raise TableauError("row count mismatch")
        for i, s in enumerate(self.stabilizers):
            if s.num_qubits != n or not s.is_hermitian:
                raise TableauError(f"stabilizer {i} is malformed")
            for j, t in enumerate(self.stabilizers):
                if j > i and not commutes(s, t):
                    raise TableauError(f"stabilizers {i},{j} anticommute")
            for j, d in enumerate(self.destabilizers):
                if commutes(s, d) == (i == j):
                    raise TableauError(f"bad stabilizer/destabilizer pairing at {i},{j}")
        if group_rank(self.stabilizers) != n:
            raise TableauError("stabilizers are dependent")

    def generators(self) -> list[PauliOperator]:
        return list(self.stabilizers)


def _check_commuting(gens: Sequence[PauliOperator]) -> None:
    for i, a in enumerate(gens):
        for b in gens[i + 1:]:
            if not commutes(a, b):
                raise TableauError(f"generators {a} and {b} do not commute")


def _pauli_with_commutation(gens: Sequence[PauliOperator], target: int, n: int) -> PauliOperator | None:
    """A Pauli anticommuting with exactly the generators flagged in ``target``."""
    basis = []  # (pivot bit, commutation bits, operator)
    for q in range(n):
        for ax in "xz":
            op = single(n, q, ax)
            bits = sum(1 << i for i, g in enumerate(gens) if not commutes(g, op))
            for piv, b, o in basis:
                if (bits >> piv) & 1:
                    bits ^= b
                    op = multiply(op, o)
            if bits:
                basis.append(((bits & -bits).bit_length() - 1, bits, op))
    acc = PauliOperator(n, 0, 0, 0)
    for piv, b, o in basis:
        if (target >> piv) & 1:
            target ^= b
            acc = multiply(acc, o)
    return None if target else acc


def _bit(p: PauliOperator, col: int) -> int:
    q, kind = divmod(col, 2)
    mask = p.x_mask if kind == 0 else p.z_mask
    return (mask >> q) & 1


def canonical_group(gens) -> list[PauliOperator]:
    """Reduced row echelon form of a commuting Hermitian set with exact signs.

    Columns are ordered qubit by qubit, X bit before Z bit.  Equal groups give
    identical lists.  Raises if ``-1`` is in the group.
    """
    if isinstance(gens, StabilizerState):
        gens = gens.stabilizers
    rows = [g for g in gens]
    if not rows:
        return []
    n = rows[0].num_qubits
    for g in rows:
        if not g.is_hermitian:
            raise TableauError(f"generator {g} is not Hermitian")
    _check_commuting(rows)
    pivot_row = 0
    for col in range(2 * n):
        hit = next((r for r in range(pivot_row, len(rows)) if _bit(rows[r], col)), None)
        if hit is None:
            continue
        rows[pivot_row], rows[hit] = rows[hit], rows[pivot_row]
        piv = rows[pivot_row]
        for r in range(len(rows)):
            if r != pivot_row and _bit(rows[r], col):
                rows[r] = multiply(rows[r], piv)
        pivot_row += 1
        if pivot_row == len(rows):
            break
    basis, rest = rows[:pivot_row], rows[pivot_row:]
    for r in rest:
        if r.x_mask or r.z_mask:
            raise TableauError("internal elimination error")
        if r.phase_exp != 0:
            raise TableauError("sign-inconsistent dependency: -1 is in the group")
    return basis


def group_rank(gens) -> int:
    return len(canonical_group(gens))


def groups_equal(a, b) -> bool:
    return canonical_group(a) == canonical_group(b)


def serialize_group(gens) -> str:
    return "\n".join(g.to_compact() for g in canonical_group(gens))
