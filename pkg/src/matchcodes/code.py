"""Matching codes: compile a (lattice, matching) pair and check its algebra."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .lattice import (
    Lattice,
    Matching,
    LatticeError,
    link_operator,
    order_path,
    path_endpoints,
    random_matching,
    wen_grid_index,
)
from .pauli import PauliOperator, hermitian_real, identity, multiply, product, from_axes
from .tableau import StabilizerState, canonical_group


class CodeError(ValueError):
    pass


def path_product(lat: Lattice, path: Sequence[int], start: int) -> PauliOperator:
    """Ordered product of link operators along ``path`` walked from ``start``."""
    ordered = order_path(lat, path, start)
    return product((link_operator(lat, e) for e in ordered), lat.num_vertices)


def face_product(lat: Lattice, f: int) -> PauliOperator:
    return product((link_operator(lat, e) for e in lat.faces[f]), lat.num_vertices)


# -- span / membership helpers ---------------------------------------------

class _Span:
    """Incremental GF(2) span of Pauli words that remembers which inputs built each row."""

    def __init__(self, n: int):
        self.n = n
        self.rows: list[tuple[int, PauliOperator, int]] = []  # (pivot, op, combo bitmask)

    @staticmethod
    def _pivot(p: PauliOperator) -> int:
        m = p.x_mask | p.z_mask
        if not m:
            return -1
        q = (m & -m).bit_length() - 1
        return 2 * q + (0 if (p.x_mask >> q) & 1 else 1)

    @staticmethod
    def _has(p: PauliOperator, col: int) -> bool:
        q, kind = divmod(col, 2)
        return bool(((p.x_mask if kind == 0 else p.z_mask) >> q) & 1)

    def reduce(self, p: PauliOperator, combo: int = 0) -> tuple[PauliOperator, int]:
        for piv, row, rc in self.rows:
            if self._has(p, piv):
                p = multiply(p, row)
                combo ^= rc
        return p, combo

    def add(self, p: PauliOperator, tag: int) -> tuple[PauliOperator, int]:
        """Insert ``p``; returns its remainder and combination (remainder is identity if dependent)."""
        rem, combo = self.reduce(p, 1 << tag)
        piv = self._pivot(rem)
        if piv >= 0:
            # keep rows reduced: clear the new pivot from older rows
            new_rows = []
            for opiv, row, rc in self.rows:
                if self._has(row, piv):
                    row, rc = multiply(row, rem), rc ^ combo
                new_rows.append((opiv, row, rc))
            self.rows = new_rows + [(piv, rem, combo)]
        return rem, combo


def solve_in_span(gens: Sequence[PauliOperator], target: PauliOperator):
    """Find ``S`` with ``prod_{i in S} gens[i] == i**k * target``; returns ``(S, k)`` or ``None``.

    The product is taken in increasing index order.
    """
    sp = _Span(target.num_qubits)
    for i, g in enumerate(gens):
        sp.add(g, i)
    rem, combo = sp.reduce(target)
    if rem.x_mask or rem.z_mask:
        return None
    subset = [i for i in range(len(gens)) if (combo >> i) & 1]
    prod = product((gens[i] for i in subset), target.num_qubits)
    diff = multiply(prod, target.inverse())
    return subset, diff.phase_exp


# -- the code ----------------------------------------------------------------

@dataclass(frozen=True)
class AnyonConfiguration:
    e_sites: frozenset = frozenset()
    m_sites: frozenset = frozenset()
    eps_sites: frozenset = frozenset()

    @property
    def empty(self) -> bool:
        return not (self.e_sites or self.m_sites or self.eps_sites)

    def __xor__(self, other: "AnyonConfiguration") -> "AnyonConfiguration":
        return AnyonConfiguration(self.e_sites ^ other.e_sites, self.m_sites ^ other.m_sites,
                                  self.eps_sites ^ other.eps_sites)


@dataclass
class MatchingCode:
    lattice: Lattice
    matching: Matching
    plaquette_ops: list[PauliOperator]
    pair_order: list[tuple[int, int]]
    string_ops: dict[tuple[int, int], PauliOperator]
    link_multiplicity: list[int]
    odd_links: frozenset
    even_links: frozenset
    coloring: list[str] | None
    sign_fixes: list[str] = field(default_factory=list)

    @property
    def num_qubits(self) -> int:
        return self.lattice.num_vertices

    def generators(self) -> list[PauliOperator]:
        """Plaquette operators (face order) followed by string operators (sorted pairs)."""
        return list(self.plaquette_ops) + [self.string_ops[p] for p in self.pair_order]

    def generator_labels(self) -> list[tuple[str, object]]:
        return [("W", f) for f in range(len(self.plaquette_ops))] + [("S", p) for p in self.pair_order]

    @property
    def white(self) -> list[int]:
        return [f for f, c in enumerate(self.coloring or []) if c == "white"]

    @property
    def black(self) -> list[int]:
        return [f for f, c in enumerate(self.coloring or []) if c == "black"]

    def string_of(self, v: int) -> tuple[int, int]:
        w = self.matching.partner(v)
        return (min(v, w), max(v, w))


def _parity_coloring(lat: Lattice, odd: frozenset) -> list[str] | None:
    nf = len(lat.faces)
    if nf == 0:
        return []
    color: list[int | None] = [None] * nf
    for start in range(nf):
        if color[start] is not None:
            continue
        color[start] = 0
        dq = deque([start])
        while dq:
            f = dq.popleft()
            for e in lat.faces[f]:
                for g in lat.faces_of_edge(e):
                    if g == f:
                        continue
                    want = color[f] if e in odd else 1 - color[f]
                    if color[g] is None:
                        color[g] = want
                        dq.append(g)
                    elif color[g] != want:
                        return None
    return ["white" if c == 0 else "black" for c in color]


def build(lat: Lattice, matching: Matching) -> MatchingCode:
    """Compile plaquette and string operators and classify links.

    Operators keep the real sign of their ordered link product (anti-Hermitian
    products are multiplied by ``i``).  If a generator's word is already in the
    group built from the earlier ones with the opposite sign, its sign is
    flipped and the fix is recorded in ``sign_fixes``.
    """
    try:
        matching.check(lat, complete=True)
    except LatticeError as exc:
        raise CodeError(f"invalid matching: {exc}") from exc
    n = lat.num_vertices
    plaq = [hermitian_real(face_product(lat, f)) for f in range(len(lat.faces))]
    pair_order = sorted(matching.pairs)
    strings = {p: hermitian_real(path_product(lat, matching.pairs[p], p[0])) for p in pair_order}

    gens = plaq + [strings[p] for p in pair_order]
    for i, a in enumerate(gens):
        for b in gens[i + 1:]:
            if (a.x_mask & b.z_mask).bit_count() + (a.z_mask & b.x_mask).bit_count() & 1:
                raise CodeError("generators fail to commute; construction bug")

    fixes = _fix_signs(plaq, strings, pair_order, n)
    mult = matching.multiplicity(lat)
    odd = frozenset(e for e, k in enumerate(mult) if k % 2)
    even = frozenset(range(lat.num_edges)) - odd
    coloring = _parity_coloring(lat, odd) if lat.boundary_kind == "torus" else None
    return MatchingCode(lat, matching, plaq, pair_order, strings, mult, odd, even, coloring, fixes)


def _fix_signs(plaq, strings, pair_order, n: int, keep_plaquettes: bool = False) -> list[str]:
    """Flip any generator whose word is already in the group with the opposite sign (in place)."""
    fixes = []
    sp = _Span(n)
    gens = list(plaq) + [strings[p] for p in pair_order]
    for i, g in enumerate(gens):
        rem, _ = sp.add(g, i)
        if not (rem.x_mask or rem.z_mask) and rem.phase_exp == 2:
            if i < len(plaq):
                if keep_plaquettes:
                    raise CodeError("plaquette signs are inconsistent with each other")
                plaq[i] = plaq[i].times_phase(2)
                fixes.append(f"W[{i}]")
            else:
                p = pair_order[i - len(plaq)]
                strings[p] = strings[p].times_phase(2)
                fixes.append(f"S{p}")
    return fixes


def with_plaquette_signs(code: MatchingCode, plaquette_ops: Sequence[PauliOperator]) -> MatchingCode:
    """Copy of ``code`` with re-signed plaquette operators; string signs are re-fixed to stay consistent."""
    plaq = list(plaquette_ops)
    if len(plaq) != len(code.plaquette_ops) or any(
            not a.same_word(b) for a, b in zip(plaq, code.plaquette_ops)):
        raise CodeError("new plaquette operators must have the same Pauli words")
    strings = {p: hermitian_real(path_product(code.lattice, code.matching.pairs[p], p[0]))
               for p in code.pair_order}
    fixes = _fix_signs(plaq, strings, code.pair_order, code.num_qubits, keep_plaquettes=True)
    return MatchingCode(code.lattice, code.matching, plaq, list(code.pair_order), strings,
                        list(code.link_multiplicity), code.odd_links, code.even_links,
                        code.coloring, fixes)


def bicolor(code: MatchingCode) -> list[str]:
    if code.coloring is None:
        raise CodeError("even links do not bound a face set; no consistent bicolouring")
    return code.coloring


# -- relation checks -------------------------------------------------------

@dataclass
class RelationCheck:
    name: str
    ok: bool
    phase: int | None = None
    detail: str = ""


@dataclass
class RelationReport:
    num_qubits: int
    num_generators: int
    rank: int | None
    expected_rank: int | None
    checks: list[RelationCheck]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def lines(self) -> list[str]:
        out = [f"generators: {self.num_generators}  qubits: {self.num_qubits}  "
               f"rank: {self.rank}/{self.num_generators}"]
        for c in self.checks:
            ph = "" if c.phase is None else f"  phase i^{c.phase}"
            extra = f"  ({c.detail})" if c.detail else ""
            out.append(f"  {'PASS' if c.ok else 'FAIL'}  {c.name}{ph}{extra}")
        return out


def _ratio(a: PauliOperator, b: PauliOperator) -> int | None:
    if not a.same_word(b):
        return None
    return multiply(a, b.inverse()).phase_exp


def verify_relations(code: MatchingCode) -> RelationReport:
    lat = code.lattice
    n = lat.num_vertices
    checks = []
    K = [link_operator(lat, e) for e in range(lat.num_edges)]

    all_links = product(K, n)
    checks.append(RelationCheck("prod of all K_l ~ 1", all_links.is_identity(), all_links.phase_exp))

    nu = code.matching.nu(lat)
    odd_nu = all(v % 2 == 1 for v in nu.values())
    checks.append(RelationCheck("nu_j odd at every vertex", odd_nu))
    even_deg = all(sum(1 for e in lat.incident(v) if e in code.even_links) % 2 == 0 for v in range(n))
    checks.append(RelationCheck("even links form loops", even_deg))

    s_prod = product((code.string_ops[p] for p in code.pair_order), n)
    odd_prod = product((K[e] for e in sorted(code.odd_links)), n)
    ph = _ratio(s_prod, odd_prod)
    checks.append(RelationCheck("prod S ~ prod_odd K", ph is not None, ph))

    if lat.boundary_kind == "torus":
        if code.coloring is None:
            checks.append(RelationCheck("bicolouring", False, detail="no consistent colouring"))
        else:
            black = product((code.plaquette_ops[f] for f in code.black), n)
            white = product((code.plaquette_ops[f] for f in code.white), n)
            even_prod = product((K[e] for e in sorted(code.even_links)), n)
            p1, p2, p3 = _ratio(black, white), _ratio(white, s_prod), _ratio(black, even_prod)
            checks.append(RelationCheck("prod_b W ~ prod_w W", p1 is not None, p1))
            checks.append(RelationCheck("prod_w W ~ prod S", p2 is not None, p2))
            checks.append(RelationCheck("prod_b W ~ prod_even K", p3 is not None, p3))

    gens = code.generators()
    try:
        rank = len(canonical_group(gens))
        checks.append(RelationCheck("signed rank consistent", True))
    except ValueError as exc:
        rank = None
        checks.append(RelationCheck("signed rank consistent", False, detail=str(exc)))
    expected = n - 2 if lat.boundary_kind == "torus" else None
    if expected is not None:
        checks.append(RelationCheck(f"rank == N-2 == {expected}", rank == expected, detail=f"rank {rank}"))
    return RelationReport(n, len(gens), rank, expected, checks)


def path_independence_check(code: MatchingCode, pair: tuple[int, int], alternative: Sequence[int]) -> bool:
    """True if the two strings for ``pair`` differ by an exact product of plaquette operators."""
    lat = code.lattice
    a, b = pair
    if path_endpoints(lat, alternative) != (min(a, b), max(a, b)):
        raise CodeError("alternative path has different endpoints")
    s = code.string_ops[(min(a, b), max(a, b))]
    s_alt = hermitian_real(path_product(lat, alternative, min(a, b)))
    loop = hermitian_real(multiply(s, s_alt))
    sol = solve_in_span(code.plaquette_ops, loop)
    if sol is None:
        return False
    _, k = sol
    return k % 2 == 0


def enclosed_faces(code: MatchingCode, pair: tuple[int, int], alternative: Sequence[int]):
    """Faces whose plaquette product equals the loop ``S * S'`` (and the phase)."""
    lat = code.lattice
    a, b = min(pair), max(pair)
    loop = multiply(code.string_ops[(a, b)], path_product(lat, alternative, a))
    return solve_in_span(code.plaquette_ops, loop)


# -- states and syndromes --------------------------------------------------

def vacuum_state(code: MatchingCode) -> StabilizerState:
    return StabilizerState.from_generators(code.generators(), code.num_qubits)


def syndrome(code: MatchingCode, state: StabilizerState) -> AnyonConfiguration:
    if state.num_qubits != code.num_qubits:
        raise CodeError("state size does not match the code")
    colors = code.coloring
    e, m, eps = set(), set(), set()
    for f, w in enumerate(code.plaquette_ops):
        val = state.expectation(w)
        if val == 0:
            raise CodeError(f"plaquette {f} has no definite value")
        if val == -1:
            if colors is not None and colors[f] == "black":
                m.add(f)
            else:
                e.add(f)
    for p in code.pair_order:
        val = state.expectation(code.string_ops[p])
        if val == 0:
            raise CodeError(f"string {p} has no definite value")
        if val == -1:
            eps.add(p)
    return AnyonConfiguration(frozenset(e), frozenset(m), frozenset(eps))


def flips(code: MatchingCode, op: PauliOperator) -> AnyonConfiguration:
    """Generators anticommuting with ``op``, as an anyon configuration."""
    colors = code.coloring
    e, m, eps = set(), set(), set()
    for f, w in enumerate(code.plaquette_ops):
        if not _commute(w, op):
            (m if colors is not None and colors[f] == "black" else e).add(f)
    for p in code.pair_order:
        if not _commute(code.string_ops[p], op):
            eps.add(p)
    return AnyonConfiguration(frozenset(e), frozenset(m), frozenset(eps))


def _commute(a: PauliOperator, b: PauliOperator) -> bool:
    return ((a.x_mask & b.z_mask).bit_count() + (a.z_mask & b.x_mask).bit_count()) % 2 == 0


# -- planar Wen code -------------------------------------------------------

def planar_wen_generators(lat: Lattice) -> list[PauliOperator]:
    """Square (half-hexagon) stabilizers of a planar Wen patch.

    Bulk squares carry ``X Y X Y`` counterclockwise from the lower-left corner.
    Squares hanging off the patch are truncated onto the two qubits that
    exist; as in the rotated surface code, top/bottom truncations are kept on
    one checkerboard colour and left/right truncations on the other, leaving
    one logical qubit.
    """
    if lat.name != "planar_wen":
        raise CodeError("needs a planar_wen lattice")
    Lx, Ly = lat.dims
    n = lat.num_vertices
    bulk, boundary = [], []
    for level in range(-1, Ly):
        for X in range(-1, Lx):
            corners = [(X, level), (X + 1, level), (X + 1, level + 1), (X, level + 1)]
            axes = {}
            for (cx, cl), ax in zip(corners, _square_axes(X, level)):
                idx = wen_grid_index(lat, cx, cl)
                if idx is not None:
                    axes[idx] = ax
            if len(axes) == 4:
                bulk.append(from_axes(n, axes))
            elif len(axes) == 2:
                colour = (X + level) % 2
                horizontal_side = level in (-1, Ly - 1)
                if colour == (0 if horizontal_side else 1):
                    boundary.append(from_axes(n, axes))
    return bulk + boundary


def _square_axes(X: int, level: int) -> tuple[str, str, str, str]:
    # (lower-left, lower-right, upper-right, upper-left): both hexagon halves
    # read x, y, x, y in this order
    return ("x", "y", "x", "y")


def random_bicolorable_matching(lat: Lattice, seed: int, tries: int = 500) -> tuple[Matching, int]:
    """First seeded random matching whose even links bound a face set.

    Attempt ``k`` uses the seed ``seed`` itself when ``k == 0`` and the
    stream ``[seed, k]`` afterwards; returns the matching and ``k``.
    """
    for k in range(tries):
        m = random_matching(lat, seed if k == 0 else [seed, k])
        mult = m.multiplicity(lat)
        odd = frozenset(e for e, c in enumerate(mult) if c % 2)
        if _parity_coloring(lat, odd) is not None:
            return m, k
    raise CodeError(f"no bicolourable matching in {tries} attempts")
