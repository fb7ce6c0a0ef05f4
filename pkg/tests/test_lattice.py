import math
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from matchcodes.lattice import (
    Edge,
    Lattice,
    LatticeError,
    Matching,
    hexagon_corners,
    honeycomb_torus,
    label_matching,
    link_operator,
    modified_honeycomb_torus,
    path_endpoints,
    planar_wen,
    random_matching,
    tricolored_honeycomb_torus,
    validate,
    wen_matching,
)
from matchcodes.pauli import support

BUILDERS = [honeycomb_torus, modified_honeycomb_torus]
dims = st.tuples(st.integers(2, 6), st.integers(2, 6))


@pytest.mark.parametrize("L,V,E,F", [((2, 2), 8, 12, 4), ((4, 4), 32, 48, 16), ((3, 5), 30, 45, 15)])
def test_honeycomb_counts(L, V, E, F):
    lat = honeycomb_torus(*L)
    assert (lat.num_vertices, lat.num_edges, len(lat.faces)) == (V, E, F)


def test_face_labels_cycle_xyz():
    # faces are stored counterclockwise; read clockwise the labels run x, y, z
    lat = honeycomb_torus(3, 3)
    for f, cyc in enumerate(lat.faces):
        labels = [lat.edges[e].label for e in reversed(cyc)]
        k = labels.index("x")
        assert labels[k:] + labels[:k] == list("xyzxyz")


@given(dims)
def test_honeycomb_invariants(L):
    lat = honeycomb_torus(*L)
    rep = validate(lat)
    assert rep.ok and rep.euler == 0
    assert 2 * lat.num_edges == 3 * lat.num_vertices
    assert 2 * len(lat.faces) == lat.num_vertices


@given(dims)
def test_modified_invariants(L):
    lat = modified_honeycomb_torus(*L)
    assert lat.num_vertices == 4 * L[0] * L[1]
    assert validate(lat).ok


def test_modified_small_count_and_triangles():
    lat = modified_honeycomb_torus(2, 2)
    assert lat.num_vertices == 16
    tri = [f for f in lat.faces if len(f) == 3]
    assert len(tri) == 4
    for f in tri:
        assert sorted(lat.edges[e].label for e in f) == ["x", "y", "z"]


def test_modified_is_not_bipartite():
    lat = modified_honeycomb_torus(2, 2)
    color = {0: 0}
    stack = [0]
    clash = False
    while stack:
        v = stack.pop()
        for w in lat.neighbors(v):
            if w not in color:
                color[w] = 1 - color[v]
                stack.append(w)
            elif color[w] == color[v]:
                clash = True
    assert clash


def test_tricolored():
    lat = tricolored_honeycomb_torus(3, 3)
    assert validate(lat).ok
    assert Counter(lat.face_types) == {"x": 3, "y": 3, "z": 3}
    for f, t in enumerate(lat.face_types):
        labels = [lat.edges[e].label for e in lat.faces[f]]
        assert t not in labels
        if t == "z":
            assert all(a != b for a, b in zip(labels, labels[1:] + labels[:1]))
    with pytest.raises(LatticeError):
        tricolored_honeycomb_torus(4, 3)


def test_planar_wen():
    lat = planar_wen(3, 3)
    assert lat.boundary_kind == "planar"
    assert validate(lat).ok
    degs = Counter(len(lat.incident(v)) for v in range(lat.num_vertices))
    assert degs[3] > 0 and max(degs) == 3 and min(degs) >= 1


@pytest.mark.parametrize("builder", [honeycomb_torus, modified_honeycomb_torus, planar_wen])
def test_small_dimensions_rejected(builder):
    with pytest.raises(LatticeError):
        builder(1, 3)


def _toy(edges, n):
    coords = [(float(i), 0.0) for i in range(n)]
    return Lattice(coords, [Edge(u, v, lab) for u, v, lab in edges], [], boundary_kind="torus")


def test_validator_negative_controls():
    # two z-links at vertex 1
    lat = _toy([(0, 1, "z"), (1, 2, "z"), (2, 3, "x")], 4)
    rep = validate(lat)
    assert 1 in rep.label_violations
    assert 0 in rep.degree_violations
    assert not rep.ok


def test_link_operator():
    lat = honeycomb_torus(2, 2)
    for e, edge in enumerate(lat.edges):
        k = link_operator(lat, e)
        assert support(k) == {edge.u, edge.v}
        assert k.is_hermitian and k.sign == 1
        assert k.letter(edge.u) == edge.label.upper()
    with pytest.raises(LatticeError):
        link_operator(lat, 99)


def test_path_endpoints():
    lat = honeycomb_torus(3, 3)
    assert path_endpoints(lat, lat.faces[0]) == ()
    e = lat.edges[5]
    assert path_endpoints(lat, [5]) == tuple(sorted((e.u, e.v)))
    bottom, lr, ur, top, ul, ll = hexagon_corners(lat, 4)
    left = [lat.edge_between(top, ul), lat.edge_between(ul, ll), lat.edge_between(ll, bottom)]
    assert path_endpoints(lat, left) == tuple(sorted((top, bottom)))
    star = lat.incident(lat.edges[0].u)
    with pytest.raises(LatticeError):
        path_endpoints(lat, star)


@pytest.mark.parametrize("builder", [honeycomb_torus, modified_honeycomb_torus, tricolored_honeycomb_torus])
def test_coordinates_are_local(builder):
    lat = builder(3, 3)
    (ax, ay), (bx, by) = lat.periods
    for edge in lat.edges:
        p, q = lat.coords[edge.u], lat.coords[edge.v]
        d = min(math.dist(p, (q[0] + s * ax + t * bx, q[1] + s * ay + t * by))
                for s in (-1, 0, 1) for t in (-1, 0, 1))
        assert 0 < d <= 1 + 1e-9


def test_matchings_cover_and_check():
    lat = honeycomb_torus(3, 4)
    for m in (label_matching(lat, "z"), wen_matching(lat), random_matching(lat, 3)):
        m.check(lat)
        assert m.covered() == set(range(lat.num_vertices))
    with pytest.raises(LatticeError):
        Matching({(0, 1): (0,), (1, 2): (1,)})


@given(st.integers(0, 10_000))
def test_random_matching_is_perfect(seed):
    lat = honeycomb_torus(4, 4)
    m = random_matching(lat, seed)
    m.check(lat)
    assert m.pairs == random_matching(lat, seed).pairs
