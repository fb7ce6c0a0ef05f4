"""Trivalent labelled lattices, paths and matchings.

Indexing
--------
All builders number cells row-major, ``cell = r * Lx + c``, and vertices
within a cell in a fixed order:

* ``honeycomb_torus``: ``[L, U]`` -- the lower and upper end of the cell's
  vertical z-link.  ``U(c, r)`` has an x-link up-right to ``L(c, r+1)`` and a
  y-link up-left to ``L(c-1, r+1)``.
* ``modified_honeycomb_torus``: ``[U, Tz, Tx, Ty]`` -- the ``L`` vertex is
  replaced by a triangle whose corners ``Tz, Tx, Ty`` keep the original z, x
  and y link respectively.
* ``tricolored_honeycomb_torus``: same vertices as the honeycomb, labels
  reassigned from a 3-colouring of the hexagons.

Faces are stored as cyclic edge lists, counterclockwise, starting at the
edge that leaves the face's lowest-index vertex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .pauli import PauliOperator, from_axes

LABELS = ("x", "y", "z")
_S3 = math.sqrt(3.0)


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    label: str

    def other(self, w: int) -> int:
        if w == self.u:
            return self.v
        if w == self.v:
            return self.u
        raise LatticeError(f"vertex {w} is not on edge ({self.u},{self.v})")


@dataclass
class Lattice:
    coords: list[tuple[float, float]]
    edges: list[Edge]
    faces: list[tuple[int, ...]]
    boundary_kind: str = "torus"
    name: str = "custom"
    dims: tuple[int, int] = (0, 0)
    roles: list[str] = field(default_factory=list)
    cells: list[tuple[int, int]] = field(default_factory=list)
    face_types: list[str] | None = None
    periods: tuple[tuple[float, float], tuple[float, float]] | None = None

    def __post_init__(self):
        self._incident: list[list[int]] = [[] for _ in range(self.num_vertices)]
        for i, e in enumerate(self.edges):
            if not (0 <= e.u < self.num_vertices and 0 <= e.v < self.num_vertices):
                raise LatticeError(f"edge {i} has an endpoint out of range")
            self._incident[e.u].append(i)
            self._incident[e.v].append(i)
        self._face_of_edge: list[list[int]] = [[] for _ in self.edges]
        for f, cyc in enumerate(self.faces):
            for ei in cyc:
                self._face_of_edge[ei].append(f)

    @property
    def num_vertices(self) -> int:
        return len(self.coords)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def incident(self, v: int) -> list[int]:
        return self._incident[v]

    def neighbors(self, v: int) -> list[int]:
        return [self.edges[e].other(v) for e in self._incident[v]]

    def edge_between(self, u: int, v: int) -> int | None:
        for e in self._incident[u]:
            if self.edges[e].other(u) == v:
                return e
        return None

    def faces_of_edge(self, e: int) -> list[int]:
        return self._face_of_edge[e]

    def face_vertices(self, f: int) -> list[int]:
        """Vertices of face ``f`` in traversal order (the start vertex first)."""
        return _cycle_vertices(self, self.faces[f])

    def index(self, role: str, c: int, r: int) -> int:
        """Vertex index of ``role`` in cell ``(c, r)`` (coordinates taken modulo the torus)."""
        Lx, Ly = self.dims
        c, r = c % Lx, r % Ly
        per = _ROLES[self.name]
        return (r * Lx + c) * len(per) + per.index(role)


_ROLES = {
    "honeycomb": ("L", "U"),
    "tricolored": ("L", "U"),
    "modified": ("U", "Tz", "Tx", "Ty"),
}


def _cycle_vertices(lat: Lattice, cyc: Sequence[int]) -> list[int]:
    if len(cyc) == 1:
        raise LatticeError("degenerate face")
    e0, e1 = lat.edges[cyc[0]], lat.edges[cyc[1]]
    start = e0.u if e0.u not in (e1.u, e1.v) else e0.v
    out, cur = [], start
    for ei in cyc:
        out.append(cur)
        cur = lat.edges[ei].other(cur)
    if cur != start:
        raise LatticeError("face edges do not close")
    return out


def _faces_from_vertex_cycles(cycles, edge_lookup) -> list[tuple[int, ...]]:
    faces = []
    for cyc in cycles:
        k = min(range(len(cyc)), key=lambda i: cyc[i])
        cyc = cyc[k:] + cyc[:k]
        eids = []
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            eids.append(edge_lookup[frozenset((a, b))])
        faces.append(tuple(eids))
    return faces


class _Builder:
    def __init__(self):
        self.edges: list[Edge] = []
        self.lookup: dict[frozenset, int] = {}

    def add(self, u: int, v: int, label: str) -> int:
        key = frozenset((u, v))
        if key in self.lookup:
            raise LatticeError(f"duplicate edge ({u},{v}); lattice too small")
        self.lookup[key] = len(self.edges)
        self.edges.append(Edge(u, v, label))
        return self.lookup[key]


def _check_dims(Lx: int, Ly: int) -> None:
    if Lx < 2 or Ly < 2:
        raise LatticeError("lattice dimensions must be at least 2")


def _hex_point(c: float, r: float) -> tuple[float, float]:
    return (_S3 * (c + 0.5 * r), 1.5 * r)


def honeycomb_torus(Lx: int, Ly: int) -> Lattice:
    """Honeycomb torus with vertical z-links, x right-leaning and y left-leaning."""
    _check_dims(Lx, Ly)
    return _honeycomb_graph(Lx, Ly, "honeycomb")


def _honeycomb_graph(Lx: int, Ly: int, name: str, labeler=None) -> Lattice:
    def L(c, r):
        return 2 * ((r % Ly) * Lx + (c % Lx))

    def U(c, r):
        return L(c, r) + 1

    coords, roles, cells = [], [], []
    for r in range(Ly):
        for c in range(Lx):
            x, y = _hex_point(c, r)
            coords += [(x, y), (x, y + 1.0)]
            roles += ["L", "U"]
            cells += [(c, r), (c, r)]
    b = _Builder()
    for r in range(Ly):
        for c in range(Lx):
            b.add(L(c, r), U(c, r), "z")
            b.add(U(c, r), L(c, r + 1), "x")
            b.add(U(c, r), L(c - 1, r + 1), "y")
    cycles = []
    for r in range(Ly):
        for c in range(Lx):
            cycles.append([U(c, r), L(c, r + 1), U(c, r + 1), L(c - 1, r + 2),
                           U(c - 1, r + 1), L(c - 1, r + 1)])
    faces = _faces_from_vertex_cycles(cycles, b.lookup)
    periods = ((_S3 * Lx, 0.0), (_S3 * 0.5 * Ly, 1.5 * Ly))
    return Lattice(coords, b.edges, faces, "torus", name, (Lx, Ly), roles, cells,
                   periods=periods)


def modified_honeycomb_torus(Lx: int, Ly: int) -> Lattice:
    """Honeycomb with every lower z-link end replaced by a labelled triangle."""
    _check_dims(Lx, Ly)

    def base(c, r):
        return 4 * ((r % Ly) * Lx + (c % Lx))

    def U(c, r):
        return base(c, r)

    def Tz(c, r):
        return base(c, r) + 1

    def Tx(c, r):
        return base(c, r) + 2

    def Ty(c, r):
        return base(c, r) + 3

    t = 0.3
    coords, roles, cells = [], [], []
    for r in range(Ly):
        for c in range(Lx):
            x, y = _hex_point(c, r)
            coords += [(x, y + 1.0), (x, y + t),
                       (x - t * _S3 / 2, y - t / 2), (x + t * _S3 / 2, y - t / 2)]
            roles += ["U", "Tz", "Tx", "Ty"]
            cells += [(c, r)] * 4
    b = _Builder()
    for r in range(Ly):
        for c in range(Lx):
            b.add(Tz(c, r), U(c, r), "z")
            b.add(U(c, r), Tx(c, r + 1), "x")
            b.add(U(c, r), Ty(c - 1, r + 1), "y")
            # triangle: each side avoids the labels of the two corners' outer links
            b.add(Tz(c, r), Tx(c, r), "y")
            b.add(Tz(c, r), Ty(c, r), "x")
            b.add(Tx(c, r), Ty(c, r), "z")
    cycles = []
    for r in range(Ly):
        for c in range(Lx):
            cycles.append([Tz(c, r), Tx(c, r), Ty(c, r)])
            cycles.append([U(c, r), Tx(c, r + 1), Tz(c, r + 1), U(c, r + 1),
                           Ty(c - 1, r + 2), Tx(c - 1, r + 2), U(c - 1, r + 1),
                           Tz(c - 1, r + 1), Ty(c - 1, r + 1)])
    faces = _faces_from_vertex_cycles(cycles, b.lookup)
    periods = ((_S3 * Lx, 0.0), (_S3 * 0.5 * Ly, 1.5 * Ly))
    return Lattice(coords, b.edges, faces, "torus", "modified", (Lx, Ly), roles, cells,
                   periods=periods)


def tricolored_honeycomb_torus(Lx: int, Ly: int) -> Lattice:
    """Honeycomb whose hexagons are 3-coloured and each link takes the colour
    not used by its two faces, so an alpha-hexagon has alpha on every outer link."""
    _check_dims(Lx, Ly)
    if Lx % 3 or Ly % 3:
        raise LatticeError("tricolored torus needs both dimensions divisible by 3")
    lat = _honeycomb_graph(Lx, Ly, "tricolored")
    face_types = []
    for r in range(Ly):
        for c in range(Lx):
            face_types.append(LABELS[(c - r) % 3])
    edges = []
    for i, e in enumerate(lat.edges):
        f1, f2 = lat.faces_of_edge(i)
        third = ({"x", "y", "z"} - {face_types[f1], face_types[f2]}).pop()
        edges.append(Edge(e.u, e.v, third))
    return Lattice(lat.coords, edges, lat.faces, "torus", "tricolored", lat.dims,
                   lat.roles, lat.cells, face_types=face_types, periods=lat.periods)


# -- planar Wen patch ------------------------------------------------------

def _wen_grid_vertex(X: int, level: int) -> tuple[str, int, int]:
    """Honeycomb (role, c, r) of the square-grid point ``(X, level)``.

    The two halves of every hexagon are unit squares of a square grid; column
    ``k`` of square row ``r`` sits at ``X = k + r``.
    """
    r = level
    k = X - r
    if k % 2 == 0:
        return ("L", k // 2 - 1, r + 1)
    return ("U", (k - 1) // 2, r)


def planar_wen(Lx: int, Ly: int) -> Lattice:
    """Planar honeycomb patch whose half-hexagon squares form an ``Lx x Ly`` grid of qubits.

    Vertices are listed row by row of the grid.  ``faces`` holds the complete
    hexagons; the square stabilizers, including boundary truncations, are
    produced by :func:`matchcodes.code.planar_wen_generators`.
    """
    _check_dims(Lx, Ly)
    pts = {}
    coords, roles, cells = [], [], []
    for level in range(Ly):
        for X in range(Lx):
            role, c, r = _wen_grid_vertex(X, level)
            pts[(role, c, r)] = len(coords)
            x, y = _hex_point(c, r)
            coords.append((x, y + (1.0 if role == "U" else 0.0)))
            roles.append(role)
            cells.append((c, r))
    b = _Builder()
    for (role, c, r), v in sorted(pts.items(), key=lambda kv: kv[1]):
        if role != "U":
            continue
        for other, label in ((("L", c, r), "z"), (("L", c, r + 1), "x"), (("L", c - 1, r + 1), "y")):
            if other in pts:
                b.add(v, pts[other], label)
    cycles = []
    seen = set()
    for (role, c, r) in pts:
        key = (c, r) if role == "U" else None
        if key is None or key in seen:
            continue
        ring = [("U", c, r), ("L", c, r + 1), ("U", c, r + 1), ("L", c - 1, r + 2),
                ("U", c - 1, r + 1), ("L", c - 1, r + 1)]
        if all(p in pts for p in ring):
            seen.add(key)
            cycles.append([pts[p] for p in ring])
    faces = _faces_from_vertex_cycles(cycles, b.lookup)
    return Lattice(coords, b.edges, faces, "planar", "planar_wen", (Lx, Ly), roles, cells)


def wen_grid_index(lat: Lattice, X: int, level: int) -> int | None:
    Lx, Ly = lat.dims
    if 0 <= X < Lx and 0 <= level < Ly:
        return level * Lx + X
    return None


# -- validation ------------------------------------------------------------

@dataclass
class ValidationReport:
    degree_violations: list[int] = field(default_factory=list)
    label_violations: list[int] = field(default_factory=list)
    face_violations: list[int] = field(default_factory=list)
    euler: int | None = None
    nu: dict[int, int] | None = None

    @property
    def ok(self) -> bool:
        return not (self.degree_violations or self.label_violations or self.face_violations)


def validate(lat: Lattice, matching: "Matching | None" = None) -> ValidationReport:
    rep = ValidationReport()
    for v in range(lat.num_vertices):
        inc = lat.incident(v)
        deg = len(inc)
        if lat.boundary_kind == "torus" and deg != 3:
            rep.degree_violations.append(v)
        elif lat.boundary_kind == "planar" and not 1 <= deg <= 3:
            rep.degree_violations.append(v)
        labels = [lat.edges[e].label for e in inc]
        if len(set(labels)) != len(labels):
            rep.label_violations.append(v)
    for f, cyc in enumerate(lat.faces):
        try:
            _cycle_vertices(lat, cyc)
        except LatticeError:
            rep.face_violations.append(f)
    if lat.boundary_kind == "torus":
        for i in range(lat.num_edges):
            if len(lat.faces_of_edge(i)) != 2:
                rep.face_violations.append(-1 - i)
        rep.euler = lat.num_vertices - lat.num_edges + len(lat.faces)
        if rep.euler != 0:
            rep.face_violations.append(-10 ** 9)
    if matching is not None:
        rep.nu = matching.nu(lat)
    return rep


def link_operator(lat: Lattice, edge: int) -> PauliOperator:
    """``K_l = sigma^a_u sigma^a_v`` for edge ``l`` with label ``a``."""
    if not 0 <= edge < lat.num_edges:
        raise LatticeError(f"no edge {edge}")
    e = lat.edges[edge]
    return from_axes(lat.num_vertices, {e.u: e.label, e.v: e.label})


# -- paths and matchings ---------------------------------------------------

def path_endpoints(lat: Lattice, path: Iterable[int]) -> tuple[int, ...]:
    """Vertices touched by an odd number of path edges (empty for a loop)."""
    odd: set[int] = set()
    for ei in path:
        e = lat.edges[ei]
        odd ^= {e.u}
        odd ^= {e.v}
    if len(odd) > 2:
        raise LatticeError("edge set has more than two odd vertices; not a path")
    if len(odd) == 1:
        raise LatticeError("edge set has one odd vertex")
    return tuple(sorted(odd))


def order_path(lat: Lattice, path: Sequence[int], start: int) -> list[int]:
    """Order the edges of a simple string so the traversal begins at ``start``."""
    remaining = list(path)
    out, cur = [], start
    while remaining:
        for k, ei in enumerate(remaining):
            e = lat.edges[ei]
            if cur in (e.u, e.v):
                out.append(ei)
                cur = e.other(cur)
                remaining.pop(k)
                break
        else:
            raise LatticeError("path is not a connected simple string")
    return out


@dataclass
class Matching:
    """Disjoint vertex pairs ``(j, k)``, ``j < k``, each with a defining edge path."""

    pairs: dict[tuple[int, int], tuple[int, ...]]

    def __post_init__(self):
        self._partner: dict[int, int] = {}
        for (a, b) in self.pairs:
            if a in self._partner or b in self._partner or a == b:
                raise LatticeError(f"pair ({a},{b}) overlaps another pair")
            self._partner[a] = b
            self._partner[b] = a

    def partner(self, v: int) -> int | None:
        return self._partner.get(v)

    def covered(self) -> set[int]:
        return set(self._partner)

    def path(self, a: int, b: int) -> tuple[int, ...]:
        return self.pairs[(min(a, b), max(a, b))]

    def check(self, lat: Lattice, complete: bool = True) -> None:
        for (a, b), path in self.pairs.items():
            if path_endpoints(lat, path) != (a, b):
                raise LatticeError(f"path for pair ({a},{b}) has the wrong endpoints")
        if complete and len(self._partner) != lat.num_vertices:
            raise LatticeError("matching does not cover every vertex")

    def multiplicity(self, lat: Lattice) -> list[int]:
        n = [0] * lat.num_edges
        for path in self.pairs.values():
            for ei in path:
                n[ei] += 1
        return n

    def nu(self, lat: Lattice) -> dict[int, int]:
        n = self.multiplicity(lat)
        return {v: sum(n[e] for e in lat.incident(v)) for v in range(lat.num_vertices)}

    def copy(self) -> "Matching":
        return Matching(dict(self.pairs))

    @classmethod
    def from_edges(cls, lat: Lattice, edges: Iterable[int]) -> "Matching":
        pairs = {}
        for ei in edges:
            e = lat.edges[ei]
            pairs[(min(e.u, e.v), max(e.u, e.v))] = (ei,)
        return cls(pairs)


def label_matching(lat: Lattice, label: str = "z") -> Matching:
    """Nearest-neighbour matching on every link of one label."""
    return Matching.from_edges(lat, [i for i, e in enumerate(lat.edges) if e.label == label])


def wen_matching(lat: Lattice) -> Matching:
    """Pair the top and bottom vertex of every hexagon through its right-hand side.

    With qubits numbered clockwise from the upper-right corner this path gives
    ``S_p = Y_6 X_1 Y_2 X_3``.
    """
    if lat.name not in ("honeycomb", "tricolored"):
        raise LatticeError("wen matching needs a honeycomb torus")
    pairs = {}
    for f in range(len(lat.faces)):
        bottom, lr, ur, top = hexagon_corners(lat, f)[:4]
        path = [lat.edge_between(top, ur), lat.edge_between(ur, lr), lat.edge_between(lr, bottom)]
        pairs[(min(top, bottom), max(top, bottom))] = tuple(path)
    return Matching(pairs)


def hexagon_corners(lat: Lattice, f: int) -> tuple[int, int, int, int, int, int]:
    """(bottom, lower-right, upper-right, top, upper-left, lower-left) of honeycomb face ``f``."""
    Lx, _ = lat.dims
    r, c = divmod(f, Lx)
    pts = [("U", c, r), ("L", c, r + 1), ("U", c, r + 1), ("L", c - 1, r + 2),
           ("U", c - 1, r + 1), ("L", c - 1, r + 1)]
    return tuple(lat.index(*p) for p in pts)


def plaquette_numbering(lat: Lattice, f: int) -> dict[int, int]:
    """Map qubit labels 1..6 (clockwise from upper-right) to vertex indices of hexagon ``f``."""
    bottom, lr, ur, top, ul, ll = hexagon_corners(lat, f)
    return {1: ur, 2: lr, 3: bottom, 4: ll, 5: ul, 6: top}


def shortest_path(lat: Lattice, a: int, b: int, forbidden_edges=frozenset()) -> tuple[int, ...]:
    """BFS edge path from ``a`` to ``b`` with ties broken by edge index."""
    from collections import deque

    prev: dict[int, tuple[int, int] | None] = {a: None}
    dq = deque([a])
    while dq:
        v = dq.popleft()
        if v == b:
            break
        for ei in sorted(lat.incident(v)):
            if ei in forbidden_edges:
                continue
            w = lat.edges[ei].other(v)
            if w not in prev:
                prev[w] = (v, ei)
                dq.append(w)
    if b not in prev:
        raise LatticeError(f"no path from {a} to {b}")
    out = []
    cur = b
    while prev[cur] is not None:
        v, ei = prev[cur]
        out.append(ei)
        cur = v
    return tuple(reversed(out))


def random_matching(lat: Lattice, seed) -> Matching:
    """Seeded randomized greedy pairing joined by shortest paths.

    Vertices are visited in a random order; each unpaired vertex is paired with
    a random unpaired vertex among the nearest ones (by graph distance).
    """
    import numpy as np
    from collections import deque

    rng = np.random.default_rng(seed)
    order = list(rng.permutation(lat.num_vertices))
    free = set(range(lat.num_vertices))
    pairs = {}
    for v in order:
        v = int(v)
        if v not in free:
            continue
        free.discard(v)
        # BFS rings until a free vertex appears
        dist = {v: 0}
        dq = deque([v])
        found: list[int] = []
        best = None
        while dq:
            w = dq.popleft()
            if best is not None and dist[w] > best:
                break
            if w in free:
                best = dist[w]
                found.append(w)
                continue
            for u in lat.neighbors(w):
                if u not in dist:
                    dist[u] = dist[w] + 1
                    dq.append(u)
        if not found:
            raise LatticeError("odd number of vertices; no perfect matching")
        partner = int(sorted(found)[rng.integers(len(found))])
        free.discard(partner)
        pairs[(min(v, partner), max(v, partner))] = shortest_path(lat, v, partner)
    return Matching(pairs)
