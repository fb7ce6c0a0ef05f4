"""Anyon phenomenology of matching codes: moves, fusion table, statistics."""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from itertools import product as iproduct
from typing import Sequence

from .code import AnyonConfiguration, MatchingCode, syndrome, vacuum_state
from .lattice import link_operator
from .pauli import PauliOperator, commutes, multiply, product, single
from .tableau import StabilizerState


class AnyonError(ValueError):
    pass


@dataclass(frozen=True)
class ExcitationMove:
    operator: PauliOperator
    before: AnyonConfiguration
    after: AnyonConfiguration

    @property
    def delta(self) -> AnyonConfiguration:
        return self.before ^ self.after


def _move(code: MatchingCode, state: StabilizerState, op: PauliOperator) -> ExcitationMove:
    before = syndrome(code, state)
    state.apply_pauli(op)
    return ExcitationMove(op, before, syndrome(code, state))


def apply_link(code: MatchingCode, state: StabilizerState, edge: int) -> ExcitationMove:
    return _move(code, state, link_operator(code.lattice, edge))


def apply_site(code: MatchingCode, state: StabilizerState, vertex: int, axis: str) -> ExcitationMove:
    return _move(code, state, single(code.num_qubits, vertex, axis))


# -- GF(2) machinery -------------------------------------------------------

def _commutation_bits(gens: Sequence[PauliOperator], op: PauliOperator) -> int:
    bits = 0
    for i, g in enumerate(gens):
        if not commutes(g, op):
            bits |= 1 << i
    return bits


def _left_nullspace(gens: Sequence[PauliOperator]) -> list[int]:
    """Basis of generator subsets whose product is proportional to the identity."""
    rows = []  # (pivot col, word bits, combo)
    null = []
    n = gens[0].num_qubits if gens else 0
    for i, g in enumerate(gens):
        word = g.x_mask | (g.z_mask << n)
        combo = 1 << i
        for piv, w, c in rows:
            if (word >> piv) & 1:
                word ^= w
                combo ^= c
        if word:
            piv = (word & -word).bit_length() - 1
            rows.append((piv, word, combo))
        else:
            null.append(combo)
    return null


def charge(relations: Sequence[int], flipped: int) -> tuple[int, ...]:
    """Topological charge of a syndrome pattern: its parity against each relation."""
    return tuple((r & flipped).bit_count() & 1 for r in relations)


def sector_count(gens: Sequence[PauliOperator]) -> int:
    """Number of superselection sectors, 2**(number of independent relations)."""
    return 2 ** len(_left_nullspace(gens))


# -- fusion table ------------------------------------------------------------

SECTORS = ("1", "e", "m", "eps")


@dataclass
class FusionTable:
    labels: tuple[str, ...]
    charges: dict[str, tuple[int, ...]]
    table: dict[tuple[str, str], str]
    num_sectors: int
    m_source: str = "black plaquette"

    def fuse(self, a: str, b: str) -> str:
        return self.table[(a, b)]

    def is_d_z2(self) -> bool:
        t = self.table
        return (
            self.num_sectors == 4
            and len(set(self.charges.values())) == 4
            and all(t[(a, a)] == "1" for a in self.labels)
            and t[("e", "m")] == "eps" and t[("m", "e")] == "eps"
            and t[("e", "eps")] == "m" and t[("m", "eps")] == "e"
            and all(t[("1", a)] == a for a in self.labels)
        )

    def grid(self) -> str:
        w = 4
        lines = [" x  " + "".join(f"{b:>{w}}" for b in self.labels)]
        for a in self.labels:
            lines.append(f"{a:<4}" + "".join(f"{self.table[(a, b)]:>{w}}" for b in self.labels))
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps({
            "labels": list(self.labels),
            "num_sectors": self.num_sectors,
            "table": [[self.table[(a, b)] for b in self.labels] for a in self.labels],
        })


def derive_fusion_table(code: MatchingCode, max_qubits: int = 400) -> FusionTable:
    """Classify syndrome patterns into sectors by brute-force linear algebra.

    Every single-qubit Pauli and link operator is a local move; its flip
    pattern lies in the span of achievable syndromes.  Sectors are the cosets
    of that span, detected by parity against the generator relations.  Each
    generator label class (white face, black face, string) must land in one
    sector, and the sector sums give the fusion rules.
    """
    if code.num_qubits > max_qubits:
        raise AnyonError("code too large for brute-force classification")
    if code.coloring is None:
        raise AnyonError("code has no bicolouring; e and m cannot be told apart")
    gens = code.generators()
    relations = _left_nullspace(gens)
    n = code.num_qubits
    moves = [single(n, q, ax) for q in range(n) for ax in "xyz"]
    moves += [link_operator(code.lattice, e) for e in range(code.lattice.num_edges)]
    for mv in moves:
        if any(c for c in charge(relations, _commutation_bits(gens, mv))):
            raise AnyonError("a local move changed the total charge; classification failed")

    nf = len(code.plaquette_ops)
    groups = {"e": [f for f in code.white], "m": [f for f in code.black],
              "eps": [nf + i for i in range(len(code.pair_order))]}
    m_source = "black plaquette"
    if not groups["m"]:
        # every link odd: one plaquette colour.  The second boson is a plaquette
        # flipped together with a string, a single square violation in the
        # two-square picture of each hexagon.
        m_source = "plaquette + string composite"
        del groups["m"]
    charges = {"1": tuple(0 for _ in relations)}
    for name, idxs in groups.items():
        seen = {charge(relations, 1 << i) for i in idxs}
        if len(seen) != 1:
            raise AnyonError(f"{name} sites do not share a single sector")
        charges[name] = seen.pop()
    if "m" not in charges:
        charges["m"] = tuple(a ^ b for a, b in zip(charges["e"], charges["eps"]))
    by_charge = {v: k for k, v in charges.items()}
    if len(by_charge) != 4:
        raise AnyonError("sector labels collide")
    table = {}
    for a, b in iproduct(SECTORS, SECTORS):
        c = tuple(x ^ y for x, y in zip(charges[a], charges[b]))
        if c not in by_charge:
            raise AnyonError("fusion leaves the labelled sectors")
        table[(a, b)] = by_charge[c]
    return FusionTable(SECTORS, charges, table, 2 ** len(relations), m_source)


# -- statistics ---------------------------------------------------------------

def fermion_exchange_phase(code: MatchingCode, i: int, j: int, k: int, jp: int, jpp: int) -> complex:
    """Scalar of ``K_jk K_j'j'' K_ij K_jk K_j'j'' K_ij`` for an epsilon exchange."""
    lat = code.lattice
    if len({i, j, k}) < 3:
        raise AnyonError("i, j, k must be distinct")
    nb = set(lat.neighbors(j))
    if i not in nb or k not in nb:
        raise AnyonError("i and k must both neighbour j")
    m = code.matching
    if m.partner(j) != jp or jp in (i, k):
        raise AnyonError("j' must be the partner of j, distinct from i and k")
    if m.partner(i) in (j, k) or m.partner(k) in (i, j):
        raise AnyonError("i, j, k must end distinct strings")
    if jpp not in set(lat.neighbors(jp)) or jpp in (i, j, k):
        raise AnyonError("j'' must neighbour j' and differ from i, j, k")
    e = lat.edge_between
    K_ij = link_operator(lat, e(i, j))
    K_jk = link_operator(lat, e(j, k))
    K_pp = link_operator(lat, e(jp, jpp))
    op = product([K_jk, K_pp, K_ij, K_jk, K_pp, K_ij])
    if not op.is_identity():
        raise AnyonError("exchange sequence is not proportional to the identity")
    return 1j ** op.phase_exp


def reduced_exchange_identity(code: MatchingCode, i: int, j: int, k: int) -> complex:
    """Scalar of ``K_jk K_ij K_jk K_ij``; two distinct links meeting at ``j`` anticommute, so -1."""
    lat = code.lattice
    e_ij, e_jk = lat.edge_between(i, j), lat.edge_between(j, k)
    if e_ij is None or e_jk is None or i == k:
        raise AnyonError("(i, j) and (j, k) must be two distinct links")
    K_ij, K_jk = link_operator(lat, e_ij), link_operator(lat, e_jk)
    op = product([K_jk, K_ij, K_jk, K_ij])
    if not op.is_identity():
        raise AnyonError("sequence is not proportional to the identity")
    return 1j ** op.phase_exp


def exchange_triples(code: MatchingCode):
    """All ``(i, j, k, j', j'')`` that satisfy the exchange adjacency pattern."""
    lat = code.lattice
    m = code.matching
    out = []
    for j in range(lat.num_vertices):
        jp = m.partner(j)
        nbs = sorted(set(lat.neighbors(j)) - {jp})
        for a in range(len(nbs)):
            for b in range(len(nbs)):
                i, k = nbs[a], nbs[b]
                if i == k or m.partner(i) in (j, k) or m.partner(k) in (i, j):
                    continue
                for jpp in sorted(set(lat.neighbors(jp)) - {j, i, k}):
                    out.append((i, j, k, jp, jpp))
    return out


def pauli_with_flips(gens: Sequence[PauliOperator], target: int, qubits: Sequence[int],
                     n: int) -> PauliOperator | None:
    """Hermitian Pauli on ``qubits`` anticommuting with exactly the ``gens`` flagged in ``target``."""
    basis = []  # (pivot, bits, op)
    for q in sorted(qubits):
        for ax in "xz":
            op = single(n, q, ax)
            bits = _commutation_bits(gens, op)
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
    if target:
        return None
    return acc if acc.is_hermitian else acc.times_phase(1)


def solve_flips(code: MatchingCode, target: AnyonConfiguration, qubits: Sequence[int]) -> PauliOperator | None:
    """A Pauli supported on ``qubits`` whose flip pattern is exactly ``target``."""
    want = 0
    nf = len(code.plaquette_ops)
    for f in target.e_sites | target.m_sites:
        want |= 1 << f
    for p in target.eps_sites:
        want |= 1 << (nf + code.pair_order.index(p))
    return pauli_with_flips(code.generators(), want, qubits, code.num_qubits)


def _face_qubits(code: MatchingCode, faces) -> set[int]:
    out: set[int] = set()
    for f in faces:
        out.update(code.lattice.face_vertices(f))
    return out


def _adjacent_faces(code: MatchingCode, f: int) -> set[int]:
    lat = code.lattice
    out = set()
    for e in lat.faces[f]:
        out.update(lat.faces_of_edge(e))
    out.discard(f)
    return out


def white_loop_around(code: MatchingCode, black_faces) -> list[int]:
    """Closed cyclic sequence of white faces around one or more black faces (first face repeated)."""
    if isinstance(black_faces, int):
        black_faces = [black_faces]
    inside = set(black_faces)
    ring = sorted({g for b in inside for g in _adjacent_faces(code, b)
                   if code.coloring[g] == "white"} - inside)
    if len(ring) < 2:
        raise AnyonError("black faces have fewer than two white neighbours")
    first = _centroid(code, black_faces[0])
    pts = [_centroid(code, b, ref=first) for b in black_faces]
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)

    def angle(g):
        x, y = _centroid(code, g, ref=(cx, cy))
        return math.atan2(y - cy, x - cx)

    ring.sort(key=angle)
    return ring + ring[:1]


def _centroid(code: MatchingCode, f: int, ref=None):
    lat = code.lattice
    pts = [lat.coords[v] for v in lat.face_vertices(f)]
    if ref is None:
        ref = pts[0]
    if lat.periods is not None:
        pts = [_nearest_image(p, ref, lat.periods) for p in pts]
    return (sum(p[0] for p in pts) / len(pts), sum(p[1] for p in pts) / len(pts))


def _nearest_image(p, ref, periods):
    (ax, ay), (bx, by) = periods
    best = None
    for s in (-1, 0, 1):
        for t in (-1, 0, 1):
            q = (p[0] + s * ax + t * bx, p[1] + s * ay + t * by)
            d = (q[0] - ref[0]) ** 2 + (q[1] - ref[1]) ** 2
            if best is None or d < best[0]:
                best = (d, q)
    return best[1]


def transport_loop(code: MatchingCode, loop: Sequence[int], avoid: Sequence[int] = ()) -> PauliOperator:
    """Product of local moves carrying a plaquette anyon around ``loop``.

    Each hop is solved on the qubits of the two faces and of faces touching
    both, excluding faces in ``avoid``.
    """
    if len(loop) < 2 or loop[0] != loop[-1]:
        raise AnyonError("transport loop must be closed")
    n = code.num_qubits
    acc = PauliOperator(n, 0, 0, 0)
    avoid = set(avoid)
    colors = code.coloring
    for a, b in zip(loop, loop[1:]):
        common = (_adjacent_faces(code, a) & _adjacent_faces(code, b)) - avoid
        region = (_face_qubits(code, common) - _face_qubits(code, avoid)) | _face_qubits(code, {a, b})
        kind = "m" if colors[a] == "black" else "e"
        tgt = AnyonConfiguration(**{f"{kind}_sites": frozenset({a, b})})
        hop = solve_flips(code, tgt, region)
        if hop is None:
            raise AnyonError(f"no local move from face {a} to face {b}")
        acc = multiply(hop, acc)
    return acc if acc.is_hermitian else acc.times_phase(1)


def mutual_statistics_check(code: MatchingCode, white_loop: Sequence[int], black_sites: Sequence[int]) -> int:
    """Relative sign picked up by an e carried around ``white_loop`` with m's on ``black_sites``.

    The m's are created in pairs with partners on distant black faces; the
    loop operator's eigenvalue with and without them is compared.
    """
    if isinstance(black_sites, int):
        black_sites = [black_sites]
    loop = transport_loop(code, white_loop, avoid=black_sites)
    if any(not commutes(loop, g) for g in code.generators()):
        raise AnyonError("transport loop is open")
    vac = vacuum_state(code)
    v0 = vac.expectation(loop)
    excited = vac.copy()
    for b in black_sites:
        excited.apply_pauli(_m_pair_operator(code, b))
    v1 = excited.expectation(loop)
    if v0 == 0 or v1 == 0:
        raise AnyonError("loop operator is not a stabilizer element")
    return v0 * v1


def _m_pair_operator(code: MatchingCode, b: int) -> PauliOperator:
    # partner: the black face farthest from b through the face adjacency graph
    dist = {b: 0}
    dq = deque([b])
    while dq:
        f = dq.popleft()
        for g in sorted(_adjacent_faces(code, f)):
            if g not in dist:
                dist[g] = dist[f] + 1
                dq.append(g)
    far = max((f for f in code.black if f != b), key=lambda f: (dist[f], -f))
    op = solve_flips(code, AnyonConfiguration(m_sites=frozenset({b, far})), range(code.num_qubits))
    if op is None:
        raise AnyonError("cannot create the m pair")
    return op
