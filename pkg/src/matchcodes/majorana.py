"""Computational Majoranas on the modified honeycomb: creation, teleportation, braiding.

Majoranas are numbered from 0 along the line.  Creation pairs are
``(2t, 2t+1)``; the parity operator of neighbours ``(j, j+1)`` is
``i * K_1 K_2 ... K_n`` along a parity path walked from ``j``, so the factor
at ``j``'s end sits left-most.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .code import MatchingCode, path_product
from .lattice import Lattice, Matching, link_operator
from .pauli import PauliOperator, commutes, hermitian_real, multiply, product
from .tableau import MeasurementRecord, StabilizerState, canonical_group, groups_equal

CCW = "ccw"
CW = "cw"
_ORIENT_ALIASES = {"ccw": CCW, "anticlockwise": CCW, "counterclockwise": CCW,
                   "cw": CW, "clockwise": CW}


class MajoranaError(ValueError):
    pass


def orientation_of(name: str) -> str:
    try:
        return _ORIENT_ALIASES[name.lower()]
    except KeyError:
        raise MajoranaError(f"unknown orientation {name!r}") from None


@dataclass
class MajoranaLayout:
    code: MatchingCode
    d: int
    line_row: int
    flagged_links: list[int]
    creation_paths: dict[int, tuple[int, ...]]
    parity_paths: dict[int, tuple[int, ...]]
    current_matching: Matching
    majorana_positions: list[int]
    above: frozenset = frozenset()
    fused: dict[int, int] = field(default_factory=dict)

    @property
    def lattice(self) -> Lattice:
        return self.code.lattice

    @property
    def num_majoranas(self) -> int:
        return len(self.majorana_positions)

    def active(self) -> list[int]:
        gone = set()
        for j in self.fused:
            gone |= {j, j + 1}
        return [j for j in range(self.num_majoranas) if j not in gone]

    def active_positions(self) -> set[int]:
        return {self.majorana_positions[j] for j in self.active()}

    def position_of(self, v: int) -> int | None:
        for j in self.active():
            if self.majorana_positions[j] == v:
                return j
        return None

    def generators(self) -> list[PauliOperator]:
        """Plaquettes plus one string operator per current pair."""
        lat = self.lattice
        out = list(self.code.plaquette_ops)
        for (a, b) in sorted(self.current_matching.pairs):
            out.append(hermitian_real(path_product(lat, self.current_matching.pairs[(a, b)], a)))
        return out

    def copy(self) -> "MajoranaLayout":
        return MajoranaLayout(self.code, self.d, self.line_row, list(self.flagged_links),
                              dict(self.creation_paths), dict(self.parity_paths),
                              self.current_matching.copy(), list(self.majorana_positions),
                              self.above, dict(self.fused))


# -- geometry helpers --------------------------------------------------------

def _row(lat: Lattice, v: int) -> int:
    return lat.cells[v][1]


def _above_region(lat: Lattice, r0: int, height: int) -> frozenset:
    Ly = lat.dims[1]
    out = set()
    for v in range(lat.num_vertices):
        off = (_row(lat, v) - r0) % Ly
        if (off == 0 and lat.roles[v] == "U") or 1 <= off <= height:
            out.add(v)
    return frozenset(out)


def _alternating_path(lat: Lattice, matching: Matching, start: int, goal: int,
                      allowed, max_len: int = 40):
    """Shortest path from unpaired ``start`` to ``goal``: non-matching link first, then alternating,
    ending with the matching link into ``goal``.  Returns (vertices, edges)."""
    best = None
    dq = deque([(start, (start,), ())])
    while dq:
        v, verts, edges = dq.popleft()
        if len(edges) > max_len:
            break
        for ei in sorted(lat.incident(v)):
            w = lat.edges[ei].other(v)
            if w in verts or w not in allowed:
                continue
            p = matching.partner(w)
            if p is None or p in verts or p not in allowed:
                continue
            if matching.path(w, p) != (lat.edge_between(w, p),):
                continue
            e2 = lat.edge_between(w, p)
            nv, ne = verts + (w, p), edges + (ei, e2)
            if p == goal:
                return nv, ne
            dq.append((p, nv, ne))
    return best


def _parity_search(lat: Lattice, matching: Matching, start: int, goal: int, allowed,
                   max_len: int = 30):
    """Shortest path start->goal alternating non-matching/matching links except at one
    junction where two non-matching links meet.  Returns the edge tuple walked from start."""
    # state: (v, last_was_matching, junction_used)
    dq = deque([(start, True, False, (start,), ())])
    while dq:
        v, last_m, junc, verts, edges = dq.popleft()
        if len(edges) > max_len:
            break
        for ei in sorted(lat.incident(v)):
            w = lat.edges[ei].other(v)
            is_m = matching.partner(v) == w and matching.path(v, w) == (ei,)
            if w in verts:
                continue
            if is_m:
                if last_m:
                    continue
                nj = junc
            else:
                if not last_m:
                    if junc or v == start:
                        continue
                    nj = True
                else:
                    nj = junc
            if w == goal:
                if not is_m and nj:
                    return edges + (ei,)
                continue
            if w not in allowed:
                continue
            dq.append((w, is_m, nj, verts + (w,), edges + (ei,)))
    return None


def _alternating_paths_from(lat, matching, start, allowed, max_hops):
    """All simple alternating paths from an unpaired ``start``, by hop count then edge order."""
    out = []
    frontier = [((start,), ())]
    for _ in range(max_hops):
        nxt = []
        for verts, edges in frontier:
            v = verts[-1]
            for ei in sorted(lat.incident(v)):
                w = lat.edges[ei].other(v)
                if w in verts or w not in allowed:
                    continue
                p = matching.partner(w)
                if p is None or p in verts or p not in allowed:
                    continue
                e2 = lat.edge_between(w, p)
                if e2 is None or matching.path(w, p) != (e2,):
                    continue
                nxt.append((verts + (w, p), edges + (ei, e2)))
        out.extend(nxt)
        frontier = nxt
    return out


# -- layout construction -----------------------------------------------------

def make_layout(code: MatchingCode, d: int, line_row: int = 0) -> tuple[MajoranaLayout, StabilizerState]:
    """Flag every ``d``-th z-link of a row and create Majorana pairs by measurement.

    Each consecutive pair of flagged links is joined above the line by an
    alternating creation path; its non-matching links are measured (with
    correction) so the two lower vertices are left unpaired.
    """
    lat = code.lattice
    if lat.name != "modified":
        raise MajoranaError("layouts need the modified honeycomb")
    if d < 1:
        raise MajoranaError("spacing d must be at least 1")
    Lx, Ly = lat.dims
    if Lx % d:
        raise MajoranaError("row length must be a multiple of d")
    nflag = Lx // d
    if nflag < 2 or nflag % 2:
        raise MajoranaError("row too short or gives an odd number of flagged links")
    if Ly < 3:
        raise MajoranaError("need at least three rows")
    for (a, b), path in code.matching.pairs.items():
        if len(path) != 1:
            raise MajoranaError("base code must use a nearest-neighbour matching")
    r0 = line_row % Ly
    flagged = []
    positions = []
    for t in range(nflag):
        c = t * d
        tz, u = lat.index("Tz", c, r0), lat.index("U", c, r0)
        e = lat.edge_between(tz, u)
        if code.matching.partner(tz) != u:
            raise MajoranaError("line links must belong to the matching")
        flagged.append(e)
        positions.append(tz)

    state = StabilizerState.from_generators(code.generators(), code.num_qubits)
    matching = code.matching.copy()
    creation = {}
    height = 1
    while True:
        above = _above_region(lat, r0, height)
        paths = []
        ok = True
        for t in range(0, nflag, 2):
            a, b = positions[t], positions[t + 1]
            ua = matching.partner(a)
            found = _alternating_path(lat, matching, ua, b, above | {a, b}, max_len=8 * d + 8)
            if found is None:
                ok = False
                break
            verts, edges = found
            paths.append(((a,) + verts, (flagged[t],) + edges))
        if ok:
            break
        height += 1
        if height > Ly // 2:
            raise MajoranaError("could not route creation paths above the line")

    rng = np.random.default_rng(0)
    for t, (verts, edges) in zip(range(0, nflag, 2), paths):
        creation[t] = edges
        # edges alternate matching (even index) / new link (odd index)
        for k in range(1, len(edges), 2):
            new = hermitian_real(link_operator(lat, edges[k]))
            corr = link_operator(lat, edges[k + 1])
            state.measure_corrected(new, rng, correction=corr)
        pairs = dict(matching.pairs)
        for k in range(0, len(edges), 2):
            u, w = verts[k], verts[k + 1]
            del pairs[(min(u, w), max(u, w))]
        for k in range(1, len(edges), 2):
            u, w = verts[k], verts[k + 1]
            pairs[(min(u, w), max(u, w))] = (edges[k],)
        matching = Matching(pairs)

    layout = MajoranaLayout(code, d, r0, flagged, creation, {}, matching, positions, above)
    below = frozenset(range(lat.num_vertices)) - above
    for j in range(nflag - 1):
        path = _parity_search(lat, matching, positions[j], positions[j + 1],
                              below - set(positions))
        if path is None:
            path = _parity_search(lat, matching, positions[j], positions[j + 1],
                                  frozenset(range(lat.num_vertices)) - set(positions))
        if path is None:
            raise MajoranaError(f"no parity path for pair ({j},{j + 1})")
        layout.parity_paths[j] = path
    return layout, state


def _parity_path_valid(layout: MajoranaLayout, j: int, path) -> bool:
    lat = layout.lattice
    m = layout.current_matching
    start, goal = layout.majorana_positions[j], layout.majorana_positions[j + 1]
    v = start
    junctions = 0
    last_m = True
    seen = {v}
    others = layout.active_positions() - {start, goal}
    for k, ei in enumerate(path):
        e = lat.edges[ei]
        if v not in (e.u, e.v):
            return False
        w = e.other(v)
        is_m = m.partner(v) == w and m.path(v, w) == (ei,)
        if is_m and last_m:
            return False
        if not is_m and not last_m:
            junctions += 1
        if w in seen or w in others:
            return False
        seen.add(w)
        last_m, v = is_m, w
    return v == goal and junctions == 1 and not last_m


def parity_operator(layout: MajoranaLayout, j: int) -> PauliOperator:
    """``pi_{j,j+1} = i * (sequential link product along P_j)``, ``j``'s end left-most."""
    if j not in layout.parity_paths and not (0 <= j < layout.num_majoranas - 1):
        raise MajoranaError(f"no parity path for pair ({j},{j + 1})")
    path = layout.parity_paths.get(j)
    if path is None or not _parity_path_valid(layout, j, path):
        lat = layout.lattice
        a, b = layout.majorana_positions[j], layout.majorana_positions[j + 1]
        others = layout.active_positions() - {a, b}
        path = _parity_search(lat, layout.current_matching, a, b,
                              frozenset(range(lat.num_vertices)) - others)
        if path is None:
            raise MajoranaError(f"no parity path for pair ({j},{j + 1})")
        layout.parity_paths[j] = path
    return _path_parity(layout.lattice, path)


def _path_parity(lat: Lattice, path: Sequence[int]) -> PauliOperator:
    ops = [link_operator(lat, e) for e in path]
    acc = product(ops, lat.num_vertices)
    op = acc.times_phase(1)
    if not op.is_hermitian:
        raise MajoranaError("parity path has odd length")
    return op


def reversed_parity_operator(layout: MajoranaLayout, j: int) -> PauliOperator:
    """Same path, factors multiplied in the opposite order: equals ``-pi_{j,j+1}``."""
    parity_operator(layout, j)
    lat = layout.lattice
    ops = [link_operator(lat, e) for e in layout.parity_paths[j]]
    return product(reversed(ops), lat.num_vertices).times_phase(1)


def layout_syndrome(layout: MajoranaLayout, state: StabilizerState) -> list[int]:
    """Indices (into :meth:`MajoranaLayout.generators`) that are not ``+1``."""
    return [i for i, g in enumerate(layout.generators()) if state.expectation(g) != 1]


# -- teleportation -----------------------------------------------------------

def _as_path(x) -> tuple[int, ...]:
    if isinstance(x, (int, np.integer)):
        return (int(x),)
    return tuple(int(e) for e in x)


def teleport_step(state: StabilizerState, layout: MajoranaLayout, measure_link,
                  background_link=None, rng: np.random.Generator | None = None,
                  forced: int | None = None) -> MeasurementRecord:
    """Move a Majorana at one end of ``measure_link`` to the far end of the displaced pair.

    ``measure_link`` is an edge or an edge path from the Majorana at ``i`` to
    a paired vertex ``j``; ``background_link`` is the path of ``j``'s pair
    ``(j, k)`` and defaults to the one stored in the matching.  Afterwards
    ``(i, j)`` is a pair and the Majorana sits on ``k``.
    """
    lat = layout.lattice
    path = _as_path(measure_link)
    ends = _path_ends(lat, path)
    act = layout.active_positions()
    if ends[0] in act and ends[1] not in act:
        i, j = ends
    elif ends[1] in act and ends[0] not in act:
        j, i = ends
    else:
        raise MajoranaError("measured link must join a computational Majorana to a paired vertex")
    m = layout.current_matching
    k = m.partner(j)
    if k is None:
        raise MajoranaError(f"vertex {j} is unpaired")
    bg = m.path(j, k)
    if background_link is not None and set(_as_path(background_link)) != set(bg):
        raise MajoranaError("background link is not the displaced pair's path")
    op = hermitian_real(path_product(lat, path, i))
    rec = state.measure(op, forced=forced, rng=rng)
    if rec.deterministic:
        raise MajoranaError("teleport measurement was deterministic; routing bug")
    corr = None
    if rec.outcome == -1:
        corr = hermitian_real(path_product(lat, bg, j))
        state.apply_pauli(corr)
    pairs = dict(m.pairs)
    del pairs[(min(j, k), max(j, k))]
    pairs[(min(i, j), max(i, j))] = path
    layout.current_matching = Matching(pairs)
    idx = layout.position_of(i)
    layout.majorana_positions[idx] = k
    return MeasurementRecord(op, rec.outcome, False, corr)


def _path_ends(lat: Lattice, path) -> tuple[int, int]:
    from .lattice import path_endpoints

    ends = path_endpoints(lat, path)
    if len(ends) != 2:
        raise MajoranaError("measured path must be open")
    return ends


def _hop(state, layout, v, w, rng, forced=None):
    lat = layout.lattice
    e = lat.edge_between(v, w)
    if e is None:
        raise MajoranaError(f"vertices {v} and {w} are not adjacent")
    return teleport_step(state, layout, e, rng=rng, forced=forced)


# -- exchange ----------------------------------------------------------------

@dataclass
class ExchangeRoute:
    """Measured neighbour vertices for each of the three legs."""
    first: int
    second: int
    legs: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    waypoint: int


@dataclass
class ExchangeRecord:
    j: int
    orientation: str
    route: ExchangeRoute
    steps: list[MeasurementRecord]
    initial_matching: Matching
    final_matching: Matching

    @property
    def background_restored(self) -> bool:
        return self.initial_matching.pairs == self.final_matching.pairs


def plan_exchange(layout: MajoranaLayout, j: int, orientation: str, max_hops: int = 6) -> ExchangeRoute:
    """Three-leg route below the line.

    Anticlockwise: ``j`` walks to a waypoint, ``j+1`` walks into ``j``'s spot,
    the waypoint walks into ``j+1``'s spot.  Clockwise swaps the roles of the
    two Majoranas.  Candidates are tried shortest first with ties broken by
    edge index.
    """
    orientation = orientation_of(orientation)
    act = layout.active()
    if j not in act or j + 1 not in act:
        raise MajoranaError(f"Majoranas {j} and {j + 1} are not both active")
    first, second = (j, j + 1) if orientation == CCW else (j + 1, j)
    lat = layout.lattice
    m = layout.current_matching
    pa, pb = layout.majorana_positions[first], layout.majorana_positions[second]
    others = layout.active_positions() - {pa, pb}
    allowed = frozenset(range(lat.num_vertices)) - layout.above - others
    best = None
    for verts, _ in _alternating_paths_from(lat, m, pa, allowed - {pb}, max_hops):
        mlen = (len(verts) - 1) // 2
        if best is not None and mlen >= best[0]:
            break
        aset = set(verts)
        for s in range(mlen):
            v = verts[2 * s + 1]
            for x in sorted(lat.neighbors(v)):
                if x in aset or x not in allowed or x == pb:
                    continue
                xp = m.partner(x)
                if xp is None or xp in aset:
                    continue
                b = _alternating_path(lat, m, pb, x, allowed - aset | {pb, x}, max_len=2 * max_hops)
                if b is None:
                    continue
                bverts, _ = b
                cost = mlen + (len(bverts) - 1) // 2
                if best is None or cost < best[0]:
                    best = (cost, verts, bverts, s)
    if best is None:
        raise MajoranaError("no exchange route found")
    _, a, b, s = best
    mlen = (len(a) - 1) // 2
    r = (len(b) - 1) // 2
    leg1 = tuple(a[2 * t + 1] for t in range(mlen))
    leg2 = tuple(b[2 * t + 1] for t in range(r)) + tuple(a[2 * t + 1] for t in range(s, -1, -1))
    # leg 3 starts at the waypoint; a[2s+1] is where it crosses to b's side
    leg3 = tuple(a[2 * t + 1] for t in range(mlen - 1, s - 1, -1)) + tuple(
        b[2 * t + 1] for t in range(r - 1, -1, -1))
    return ExchangeRoute(first, second, (leg1, leg2, leg3), a[-1])


def exchange(state: StabilizerState, layout: MajoranaLayout, j: int, orientation: str = CCW,
             seed: int | np.random.Generator | None = 0, skip_leg: int | None = None,
             forced: int | None = None) -> ExchangeRecord:
    """Braid Majoranas ``j`` and ``j+1`` with three legs of teleport hops.

    ``skip_leg`` drops one leg, a negative control that leaves the background
    disturbed.  ``forced`` post-selects every measurement outcome.
    """
    orientation = orientation_of(orientation)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    route = plan_exchange(layout, j, orientation)
    before = layout.current_matching.copy()
    saved = list(layout.majorana_positions)
    steps = []
    for leg_no, leg in enumerate(route.legs):
        if leg_no == skip_leg:
            continue
        who = route.second if leg_no == 1 else route.first
        for w in leg:
            v = layout.majorana_positions[who]
            steps.append(_hop(state, layout, v, w, rng, forced))
    if sorted(layout.majorana_positions) == sorted(saved):
        # the two Majoranas traded places; keep labels attached to sites
        layout.majorana_positions = saved
    return ExchangeRecord(j, orientation, route, steps, before, layout.current_matching.copy())


# -- symbolic action ---------------------------------------------------------

def expected_braid_action(pi: PauliOperator, q: PauliOperator, orientation: str = CCW) -> PauliOperator:
    """Conjugation by ``(1 +- i pi)/sqrt 2``: ``q`` if it commutes with ``pi``, else ``+-i pi q``."""
    if not pi.is_hermitian:
        raise MajoranaError("parity operator must be Hermitian")
    if commutes(pi, q):
        return q
    k = 1 if orientation_of(orientation) == CCW else 3
    return multiply(pi, q).times_phase(k)


def braid_map(pis: Sequence[PauliOperator], orientations: Sequence[str], q: PauliOperator) -> PauliOperator:
    """Apply a word of braid actions to ``q``; the first entry acts first."""
    for pi, o in zip(pis, orientations):
        q = expected_braid_action(pi, q, o)
    return q


def _unitary_terms(pi: PauliOperator, orientation: str):
    n = pi.num_qubits
    one = PauliOperator(n, 0, 0, 0)
    k = 1 if orientation_of(orientation) == CCW else 3
    return [(1 / np.sqrt(2), one), (1 / np.sqrt(2), pi.times_phase(k))]


# -- verification ------------------------------------------------------------

def parity_bases(layout: MajoranaLayout) -> list[list[int]]:
    """Two maximal commuting sets of neighbour parities: creation pairs and the interleaved ones."""
    act = layout.active()
    n = len(act)
    first = [act[t] for t in range(0, n - 1, 2)]
    second = [act[t] for t in range(1, n - 1, 2)]
    return [b for b in (first, second) if b]


def prepare_parity_state(state: StabilizerState, layout: MajoranaLayout, basis: Sequence[int],
                         signs: Sequence[int]) -> StabilizerState:
    """Copy of ``state`` projected onto the given parity eigenvalues.

    A parity already fixed to the other value is flipped by applying a
    neighbouring parity operator, which commutes with every stabilizer
    except the ones it shares a Majorana with.
    """
    out = state.copy()
    for j, s in zip(basis, signs):
        pi = parity_operator(layout, j)
        val = out.expectation(pi)
        if val == 0:
            out.measure(pi, forced=s)
        elif val != s:
            out.measure(pi, forced=val)
            flipper = _flipper(layout, j, basis)
            if flipper is None:
                raise MajoranaError(f"cannot flip parity {j} alone")
            out.apply_pauli(flipper)
    return out


def _flipper(layout: MajoranaLayout, j: int, basis) -> PauliOperator | None:
    # product of parities sharing one Majorana with j and none with the other basis entries
    act = layout.active()
    cands = [k for k in (j - 1, j + 1) if k in act and k + 1 in act]
    basis = set(basis)
    for k in cands:
        pk = parity_operator(layout, k)
        hits = [b for b in basis if not commutes(pk, parity_operator(layout, b))]
        if hits == [j]:
            return pk
    return None


def verify_exchange(layout: MajoranaLayout, state: StabilizerState, j: int, orientation: str = CCW,
                    seed: int = 0, skip_leg: int | None = None, shots: int = 2) -> bool:
    """Run the exchange from parity basis states and compare with the symbolic action.

    The final stabilizer group must equal the image of the initial group
    under the braid map, and the matching must be restored with an empty
    syndrome.  Instances within the dense oracle's reach also compare state
    overlaps.
    """
    from . import oracle

    rng = np.random.default_rng(seed)
    pi = parity_operator(layout, j)
    for basis in parity_bases(layout):
        for signs in _sign_choices(len(basis)):
            try:
                s0 = prepare_parity_state(state, layout, basis, signs)
            except MajoranaError:
                continue
            for _ in range(shots):
                L = layout.copy()
                s = s0.copy()
                init = canonical_group(s)
                try:
                    rec = exchange(s, L, j, orientation, seed=rng, skip_leg=skip_leg)
                except (MajoranaError, ValueError):
                    return False
                if not rec.background_restored or layout_syndrome(L, s):
                    return False
                try:
                    if not groups_equal(s, [expected_braid_action(pi, q, orientation) for q in init]):
                        return False
                except ValueError:
                    return False
                if s.num_qubits <= oracle.MAX_QUBITS:
                    a = oracle.state_from_stabilizers(s0.stabilizers, s.num_qubits)
                    want = oracle.apply_operator(a, _unitary_terms(pi, orientation))
                    got = oracle.state_from_stabilizers(s.stabilizers, s.num_qubits)
                    if abs(abs(oracle.overlap(want, got)) - 1) > 1e-12:
                        return False
    return True


def _sign_choices(n: int):
    for mask in range(1 << n):
        yield [(-1 if (mask >> i) & 1 else 1) for i in range(n)]


# -- fusion and moves ------------------------------------------------------------

def fuse(state: StabilizerState, layout: MajoranaLayout, j: int,
         rng: np.random.Generator | None = None) -> MeasurementRecord:
    """Measure ``pi_{j,j+1}`` and return the pair to the matching along its parity path."""
    act = layout.active()
    if j not in act or j + 1 not in act:
        raise MajoranaError(f"Majoranas {j} and {j + 1} are not both active")
    pi = parity_operator(layout, j)
    if rng is None:
        rng = np.random.default_rng(0)
    rec = state.measure(pi, rng=rng)
    a, b = layout.majorana_positions[j], layout.majorana_positions[j + 1]
    pairs = dict(layout.current_matching.pairs)
    pairs[(min(a, b), max(a, b))] = layout.parity_paths[j]
    layout.current_matching = Matching(pairs)
    layout.fused[j] = rec.outcome
    return rec


def move(state: StabilizerState, layout: MajoranaLayout, j: int, target: int,
         rng: np.random.Generator | None = None) -> list[MeasurementRecord]:
    """Teleport Majorana ``j`` to ``target`` along the shortest alternating path."""
    if j not in layout.active():
        raise MajoranaError(f"Majorana {j} is not active")
    lat = layout.lattice
    start = layout.majorana_positions[j]
    if target == start:
        return []
    others = layout.active_positions() - {start}
    found = _alternating_path(lat, layout.current_matching, start, target,
                              frozenset(range(lat.num_vertices)) - others)
    if found is None:
        raise MajoranaError(f"Majorana {j} cannot reach vertex {target}")
    verts, _ = found
    rng = rng if rng is not None else np.random.default_rng(0)
    recs = []
    for t in range(1, len(verts), 2):
        recs.append(_hop(state, layout, layout.majorana_positions[j], verts[t], rng))
    return recs


# -- braid scripts ------------------------------------------------------------

class BraidScriptError(ValueError):
    pass


@dataclass(frozen=True)
class Instruction:
    op: str
    j: int
    arg: str | int | None = None

    def to_line(self) -> str:
        return f"{self.op} {self.j}" + ("" if self.arg is None else f" {self.arg}")


@dataclass
class BraidScript:
    instructions: list[Instruction]

    @classmethod
    def parse(cls, text: str) -> "BraidScript":
        out = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            op = parts[0].lower()
            try:
                if op == "exchange" and len(parts) == 3:
                    out.append(Instruction("exchange", int(parts[1]), orientation_of(parts[2])))
                elif op == "fuse" and len(parts) == 2:
                    out.append(Instruction("fuse", int(parts[1])))
                elif op == "move" and len(parts) == 3:
                    out.append(Instruction("move", int(parts[1]), int(parts[2])))
                else:
                    raise BraidScriptError(f"line {lineno}: cannot parse {raw.strip()!r}")
            except (ValueError, MajoranaError) as exc:
                if isinstance(exc, BraidScriptError):
                    raise
                raise BraidScriptError(f"line {lineno}: {exc}") from None
        return cls(out)

    def to_text(self) -> str:
        return "".join(ins.to_line() + "\n" for ins in self.instructions)

    def validate(self, layout: MajoranaLayout) -> None:
        n = layout.num_majoranas
        for ins in self.instructions:
            if ins.op in ("exchange", "fuse") and not 0 <= ins.j < n - 1:
                raise BraidScriptError(f"{ins.op} {ins.j}: index out of range")
            if ins.op == "move":
                if not 0 <= ins.j < n:
                    raise BraidScriptError(f"move {ins.j}: index out of range")
                if not 0 <= ins.arg < layout.lattice.num_vertices:
                    raise BraidScriptError(f"move {ins.j}: no vertex {ins.arg}")


@dataclass
class ScriptResult:
    ok: bool
    log: list[str]
    fusion_outcomes: dict[int, int]


def run_script(script: BraidScript, layout: MajoranaLayout, state: StabilizerState,
               seed: int = 0, verify: bool = True) -> ScriptResult:
    """Execute a script in place; exchanges are checked against the symbolic action."""
    script.validate(layout)
    rng = np.random.default_rng(seed)
    log, outcomes, ok = [], {}, True
    for ins in script.instructions:
        if ins.op == "exchange":
            pi = parity_operator(layout, ins.j)
            init = canonical_group(state)
            rec = exchange(state, layout, ins.j, ins.arg, seed=rng)
            good = rec.background_restored and not layout_syndrome(layout, state)
            if verify:
                good = good and groups_equal(state, [expected_braid_action(pi, q, ins.arg) for q in init])
            ok &= good
            log.append(f"exchange {ins.j} {ins.arg}: {len(rec.steps)} hops, {'PASS' if good else 'FAIL'}")
        elif ins.op == "fuse":
            rec = fuse(state, layout, ins.j, rng)
            outcomes[ins.j] = rec.outcome
            kind = "deterministic" if rec.deterministic else "random"
            log.append(f"fuse {ins.j}: {rec.outcome:+d} ({kind})")
        else:
            recs = move(state, layout, ins.j, ins.arg, rng)
            good = not layout_syndrome(layout, state)
            ok &= good
            log.append(f"move {ins.j} {ins.arg}: {len(recs)} hops, {'PASS' if good else 'FAIL'}")
    return ScriptResult(bool(ok), log, outcomes)
