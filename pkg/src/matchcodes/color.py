"""Surface code embedded in the z-link matching code of the tricolored honeycomb.

Each z-link is a link qubit whose Z is the string operator ``K_l``.  On the
triangular lattice formed by z-plaquettes (vertices) and z-links (edges),
x- and y-plaquettes are the triangles and carry ``B`` (product of their three
z-links); each z-plaquette is a vertex and carries ``A`` (product of its three
x-links).  Together with the plaquette operators this reproduces the color
code, X^6 and Z^6 on every hexagon.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .anyons import pauli_with_flips, sector_count
from .code import MatchingCode, build, with_plaquette_signs
from .lattice import Lattice, label_matching, link_operator
from .pauli import PauliOperator, commutes, from_axes, multiply, product
from .tableau import groups_equal


class ColorError(ValueError):
    pass


@dataclass
class EmbeddedColorCode:
    base: MatchingCode
    link_qubits: list[int]
    B_ops: dict[int, PauliOperator]
    A_ops: dict[int, PauliOperator]
    color_gens: dict[int, tuple[PauliOperator, PauliOperator]]
    notes: list[str] = field(default_factory=list)

    @property
    def lattice(self) -> Lattice:
        return self.base.lattice

    def embedded_generators(self) -> list[PauliOperator]:
        """W for every face, then A (z-faces), then B (x/y faces)."""
        return (list(self.base.plaquette_ops) + [self.A_ops[f] for f in sorted(self.A_ops)]
                + [self.B_ops[f] for f in sorted(self.B_ops)])

    def color_generators(self) -> list[PauliOperator]:
        return [g for f in sorted(self.color_gens) for g in self.color_gens[f]]

    def to_json(self) -> str:
        return json.dumps({
            "schema": "matchcodes.color/1",
            "dims": list(self.lattice.dims),
            "link_qubits": self.link_qubits,
            "A": {str(f): p.to_compact() for f, p in sorted(self.A_ops.items())},
            "B": {str(f): p.to_compact() for f, p in sorted(self.B_ops.items())},
            "color": {str(f): [a.to_compact(), b.to_compact()] for f, (a, b) in sorted(self.color_gens.items())},
        }, indent=2)


def _face_type(lat: Lattice, f: int) -> str:
    return lat.face_types[f]


def _face_edges_with(lat: Lattice, f: int, label: str) -> list[int]:
    return [e for e in lat.faces[f] if lat.edges[e].label == label]


def _z_face_of(lat: Lattice, v: int) -> int:
    for f in range(len(lat.faces)):
        if _face_type(lat, f) == "z" and v in lat.face_vertices(f):
            return f
    raise ColorError(f"vertex {v} is on no z-plaquette")


def link_qubit_order(lat: Lattice) -> list[int]:
    """z-links ordered by the z-plaquette they leave, then direction.

    Each z-link joins two z-plaquettes; it is listed under the one from which
    it points into the half-plane of angles ``[-60, 120)`` degrees, and
    within a plaquette by that angle.
    """
    from .anyons import _nearest_image

    zface = {}
    for v in range(lat.num_vertices):
        zface[v] = _z_face_of(lat, v)

    def centre(f, ref):
        pts = [_nearest_image(lat.coords[v], ref, lat.periods) for v in lat.face_vertices(f)]
        return (sum(p[0] for p in pts) / 6, sum(p[1] for p in pts) / 6)

    keyed = []
    for e, edge in enumerate(lat.edges):
        if edge.label != "z":
            continue
        for a, b in ((edge.u, edge.v), (edge.v, edge.u)):
            ca = centre(zface[a], lat.coords[a])
            cb = centre(zface[b], _nearest_image(lat.coords[b], lat.coords[a], lat.periods))
            ang = math.degrees(math.atan2(cb[1] - ca[1], cb[0] - ca[0]))
            if -60 - 1e-6 <= ang < 120 - 1e-6:
                keyed.append(((zface[a], round(ang, 6)), e))
                break
    return [e for _, e in sorted(keyed)]


def build_embedding(lat: Lattice) -> EmbeddedColorCode:
    if lat.name != "tricolored" or lat.face_types is None:
        raise ColorError("embedding needs a tricolored honeycomb torus")
    literal = build(lat, label_matching(lat, "z"))
    n = lat.num_vertices
    # plaquette phases are a convention: pick W so that x- and z-faces carry +X^6, +Z^6 and
    # y-faces carry X^6 Z^6 = -Y^6, the form in which the color code lists them
    signed = []
    for f, w in enumerate(literal.plaquette_ops):
        verts = lat.face_vertices(f)
        x6 = from_axes(n, {v: "x" for v in verts})
        z6 = from_axes(n, {v: "z" for v in verts})
        signed.append({"x": x6, "z": z6, "y": multiply(x6, z6)}[_face_type(lat, f)])
    code = with_plaquette_signs(literal, signed)
    flipped = sum(a != b for a, b in zip(signed, literal.plaquette_ops))
    A, B, col = {}, {}, {}
    for f in range(len(lat.faces)):
        t = _face_type(lat, f)
        verts = lat.face_vertices(f)
        if len(verts) != 6:
            raise ColorError("tricolored faces must be hexagons")
        if t == "z":
            A[f] = product((link_operator(lat, e) for e in _face_edges_with(lat, f, "x")), n)
        else:
            B[f] = product((link_operator(lat, e) for e in _face_edges_with(lat, f, "z")), n)
        col[f] = (from_axes(n, {v: "x" for v in verts}), from_axes(n, {v: "z" for v in verts}))
    emb = EmbeddedColorCode(code, link_qubit_order(lat), B, A, col,
                            [f"{flipped} plaquette signs differ from the literal link product"])
    _check_families(emb)
    return emb


def _check_families(emb: EmbeddedColorCode) -> None:
    lat = emb.lattice
    n = lat.num_vertices
    for f, a in emb.A_ops.items():
        if a != emb.color_gens[f][0]:
            raise ColorError(f"A on face {f} is not X on its six qubits")
    for f, b in emb.B_ops.items():
        if b != emb.color_gens[f][1]:
            raise ColorError(f"B on face {f} is not Z on its six qubits")
    ops = emb.embedded_generators()
    for i, p in enumerate(ops):
        for q in ops[i + 1:]:
            if not commutes(p, q):
                raise ColorError("embedded generators fail to commute")
    for f, (sx, sz) in emb.color_gens.items():
        y6 = from_axes(n, {v: "y" for v in lat.face_vertices(f)})
        if not multiply(sx, sz).same_word(y6):
            raise ColorError("X^6 Z^6 is not proportional to Y^6")


def verify_color_group(emb: EmbeddedColorCode) -> bool:
    """``<W, A, B> == <X^6, Z^6 per plaquette>`` including signs."""
    try:
        return groups_equal(emb.embedded_generators(), emb.color_generators())
    except ValueError:
        return False


def mislabel_a(emb: EmbeddedColorCode, face: int | None = None) -> EmbeddedColorCode:
    """Copy with one A built from y-links instead of x-links (a negative control)."""
    lat = emb.lattice
    face = min(emb.A_ops) if face is None else face
    bad = dict(emb.A_ops)
    bad[face] = product((link_operator(lat, e) for e in _face_edges_with(lat, face, "y")), lat.num_vertices)
    return EmbeddedColorCode(emb.base, emb.link_qubits, emb.B_ops, bad, emb.color_gens,
                             emb.notes + [f"A[{face}] mislabelled"])


def plaquette_triple_closure(emb: EmbeddedColorCode, f: int) -> bool:
    """Product of any two of X^6, Y^6, Z^6 on face ``f`` is proportional to the third."""
    n = emb.lattice.num_vertices
    verts = emb.lattice.face_vertices(f)
    x, y, z = (from_axes(n, {v: a for v in verts}) for a in "xyz")
    return (multiply(x, y).same_word(z) and multiply(y, z).same_word(x)
            and multiply(z, x).same_word(y))


def combined_sector_count(emb: EmbeddedColorCode) -> int:
    return sector_count(emb.embedded_generators())


@dataclass
class ReorganizationReport:
    source: int
    target: int
    operator: PauliOperator | None
    flipped_W: list[int]
    flipped_A: list[int]
    flipped_B: list[int]

    @property
    def embedded_syndrome(self) -> list[str]:
        return [f"A{f}" for f in self.flipped_A] + [f"B{f}" for f in self.flipped_B]

    def lines(self) -> list[str]:
        op = "identity" if self.operator is None else self.operator.to_text()
        return [f"move W[{self.source}] -> W[{self.target}] with {op}",
                f"flipped W: {self.flipped_W}",
                f"embedded syndrome: {self.embedded_syndrome or 'none'}"]


def sector_reorganization_demo(emb: EmbeddedColorCode, source: int | None = None,
                               target: int | None = None, avoid_embedded: bool = False) -> ReorganizationReport:
    """Transport a plaquette anyon of the base code and report what the color code sees.

    The default hop goes from an x-plaquette to a neighbouring y-plaquette.
    With ``avoid_embedded`` the search looks for a representative that also
    commutes with every A and B (possible only between faces of one type).
    """
    lat = emb.lattice
    if source is None:
        source = next(f for f in range(len(lat.faces)) if lat.face_types[f] == "x")
    if target is None:
        target = next(g for e in lat.faces[source] for g in lat.faces_of_edge(e)
                      if g != source and lat.face_types[g] == "y")
    if source == target:
        return ReorganizationReport(source, target, None, [], [], [])
    base = emb.base
    gens = list(base.plaquette_ops) + [base.string_ops[p] for p in base.pair_order]
    want = (1 << source) | (1 << target)
    if avoid_embedded:
        extra = [emb.A_ops[f] for f in sorted(emb.A_ops)] + [emb.B_ops[f] for f in sorted(emb.B_ops)]
        gens = gens + extra
    # grow the search region ring by ring around the two faces
    region: set[int] = set(lat.face_vertices(source)) | set(lat.face_vertices(target))
    op = None
    for _ in range(len(lat.faces)):
        op = pauli_with_flips(gens, want, sorted(region), lat.num_vertices)
        if op is not None:
            break
        grown = set(region)
        for v in region:
            grown.update(lat.neighbors(v))
        if grown == region:
            break
        region = grown
    if op is None:
        return ReorganizationReport(source, target, None, [], [], [])
    fw = [f for f, w in enumerate(base.plaquette_ops) if not commutes(w, op)]
    fa = [f for f in sorted(emb.A_ops) if not commutes(emb.A_ops[f], op)]
    fb = [f for f in sorted(emb.B_ops) if not commutes(emb.B_ops[f], op)]
    return ReorganizationReport(source, target, op, fw, fa, fb)
