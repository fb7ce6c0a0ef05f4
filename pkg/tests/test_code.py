import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from matchcodes.code import (
    AnyonConfiguration,
    CodeError,
    _parity_coloring,
    bicolor,
    build,
    enclosed_faces,
    flips,
    path_independence_check,
    planar_wen_generators,
    random_bicolorable_matching,
    solve_in_span,
    syndrome,
    vacuum_state,
    verify_relations,
    with_plaquette_signs,
)
from matchcodes.lattice import (
    Matching,
    honeycomb_torus,
    link_operator,
    planar_wen,
    plaquette_numbering,
    random_matching,
    shortest_path,
)
from matchcodes.pauli import multiply, single, support
from matchcodes.tableau import group_rank, groups_equal
from conftest import wencode, zcode


def labelled(p, numbering):
    inv = {v: k for k, v in numbering.items()}
    return " ".join(f"{p.letter(v)}{inv[v]}" for v in sorted(support(p), key=inv.get))


def test_z_matching_strings_are_z_links(z44):
    lat = z44.lattice
    for (a, b), s in z44.string_ops.items():
        e = lat.edge_between(a, b)
        assert lat.edges[e].label == "z"
        assert s == link_operator(lat, e)


def test_generator_counts(z44):
    n = z44.num_qubits
    assert len(z44.plaquette_ops) == n // 2
    assert len(z44.string_ops) == n // 2


@pytest.mark.parametrize("face", [0, 4, 8])
def test_wen_golden_strings(face):
    code = wencode(3, 3)
    num = plaquette_numbering(code.lattice, face)
    key = (min(num[3], num[6]), max(num[3], num[6]))
    s = code.string_ops[key]
    assert labelled(s, num) == "X1 Y2 X3 Y6"
    assert labelled(multiply(s, code.plaquette_ops[face]), num) == "Y3 X4 Y5 X6"
    assert labelled(code.plaquette_ops[face], num) == "X1 Y2 Z3 X4 Y5 Z6"


def test_relations_z44(z44):
    rep = verify_relations(z44)
    assert rep.ok
    assert rep.rank == 30 and rep.num_generators == 32
    assert all(c.phase in (None, 0, 1, 2, 3) for c in rep.checks)
    text = "\n".join(rep.lines())
    assert "rank: 30/32" in text


def test_relations_wen():
    rep = verify_relations(wencode(4, 4))
    assert rep.ok and rep.rank == 30


def _brute_force_black_sets(code):
    """All face subsets whose W product has the word of prod of even links (Gray-code walk)."""
    lat = code.lattice
    words = [(w.x_mask, w.z_mask) for w in code.plaquette_ops]
    tx = tz = 0
    for e in code.even_links:
        k = link_operator(lat, e)
        tx ^= k.x_mask
        tz ^= k.z_mask
    found = []
    x = z = 0
    prev = 0
    for i in range(1, 1 << len(words)):
        gray = i ^ (i >> 1)
        bit = (gray ^ prev).bit_length() - 1
        prev = gray
        x ^= words[bit][0]
        z ^= words[bit][1]
        if x == tx and z == tz:
            found.append(gray)
    return found


@pytest.mark.parametrize("maker", [lambda: zcode(4, 4),
                                   lambda: build(honeycomb_torus(4, 4),
                                                 random_bicolorable_matching(honeycomb_torus(4, 4), 7)[0])])
def test_parity_colouring_matches_brute_force(maker):
    code = maker()
    black = sum(1 << f for f in code.black)
    white = sum(1 << f for f in code.white)
    assert sorted(_brute_force_black_sets(code)) == sorted({black, white} - {0})


def test_z_matching_rows_alternate(z44):
    Lx = z44.lattice.dims[0]
    rows = [set(z44.coloring[r * Lx:(r + 1) * Lx]) for r in range(4)]
    assert all(len(r) == 1 for r in rows)
    assert [r.pop() for r in rows] == ["white", "black", "white", "black"]


def test_single_colour_when_all_links_odd():
    lat = honeycomb_torus(3, 3)
    assert set(_parity_coloring(lat, frozenset(range(lat.num_edges)))) == {"white"}
    assert set(wencode(3, 3).coloring) == {"white"}


def test_bicolor_raises_without_colouring():
    with pytest.raises(CodeError):
        bicolor(zcode(3, 3))


def test_path_independence(z44):
    lat = z44.lattice
    pair = z44.pair_order[5]
    e = lat.edge_between(*pair)
    f = lat.faces_of_edge(e)[0]
    other = [x for x in lat.faces[f] if x != e]
    assert path_independence_check(z44, pair, other)
    subset, _ = enclosed_faces(z44, pair, other)
    assert subset == [f]
    assert path_independence_check(z44, pair, [e])
    assert enclosed_faces(z44, pair, [e])[0] == []
    # the complement of e around two adjacent faces f and g
    g = next(h for x in lat.faces[f] if x != e for h in lat.faces_of_edge(x) if e not in lat.faces[h])
    alt = sorted((set(lat.faces[f]) ^ set(lat.faces[g])) - {e})
    subset, _ = enclosed_faces(z44, pair, alt)
    assert sorted(subset) == sorted([f, g])
    with pytest.raises(CodeError):
        path_independence_check(z44, pair, [lat.incident(pair[0])[0], lat.incident(pair[0])[1]])


def _winding(lat, start, path):
    """Net displacement along an ordered edge path, using nearest periodic images."""
    from matchcodes.lattice import order_path

    (ax, ay), (bx, by) = lat.periods
    cur, tot = start, [0.0, 0.0]
    for ei in order_path(lat, path, start):
        nxt = lat.edges[ei].other(cur)
        p, q = lat.coords[cur], lat.coords[nxt]
        d = min(((q[0] + s * ax + t * bx - p[0], q[1] + s * ay + t * by - p[1])
                 for s in (-1, 0, 1) for t in (-1, 0, 1)), key=lambda v: v[0] ** 2 + v[1] ** 2)
        tot[0] += d[0]
        tot[1] += d[1]
        cur = nxt
    return tot


@given(st.integers(0, 5000))
@settings(max_examples=25)
def test_path_independence_random(seed):
    # S S' is a plaquette product exactly when the loop it traces is contractible
    code = zcode(4, 4)
    lat = code.lattice
    rng = np.random.default_rng(seed)
    pair = code.pair_order[int(rng.integers(len(code.pair_order)))]
    e = lat.edge_between(*pair)
    banned = frozenset(int(x) for x in rng.choice(lat.num_edges, size=3, replace=False)) | {e}
    alt = shortest_path(lat, pair[0], pair[1], forbidden_edges=banned)
    w1 = _winding(lat, pair[0], alt)
    w2 = _winding(lat, pair[0], [e])
    contractible = abs(w1[0] - w2[0]) < 1e-9 and abs(w1[1] - w2[1]) < 1e-9
    assert path_independence_check(code, pair, alt) == contractible


def test_vacuum_and_syndromes(z44):
    vac = vacuum_state(z44)
    assert syndrome(z44, vac).empty
    assert all(vac.expectation(g) == 1 for g in z44.generators())
    lat = z44.lattice
    e = next(i for i, ed in enumerate(lat.edges) if ed.label == "x")
    s = vac.copy().apply_pauli(link_operator(lat, e))
    conf = syndrome(z44, s)
    assert len(conf.eps_sites) == 2 and not conf.e_sites and not conf.m_sites
    s = vac.copy().apply_pauli(single(z44.num_qubits, 0, "z"))
    conf = syndrome(z44, s)
    assert not conf.eps_sites and len(conf.e_sites) + len(conf.m_sites) == 2
    assert conf == flips(z44, single(z44.num_qubits, 0, "z"))


def test_configuration_xor():
    a = AnyonConfiguration(frozenset({1}), frozenset(), frozenset({(0, 1)}))
    b = AnyonConfiguration(frozenset({1, 2}), frozenset(), frozenset())
    assert (a ^ b) == AnyonConfiguration(frozenset({2}), frozenset(), frozenset({(0, 1)}))
    assert (a ^ a).empty


def test_invalid_matching_rejected():
    lat = honeycomb_torus(3, 4)
    m = random_matching(lat, 0)
    broken = Matching(dict(list(m.pairs.items())[:-1]))
    with pytest.raises(CodeError):
        build(lat, broken)


def test_plaquette_resign_consistency(z44):
    flipped = [w.times_phase(2) if f == 0 else w for f, w in enumerate(z44.plaquette_ops)]
    # flipping one W alone contradicts prod_all W ~ 1 unless strings absorb it: must raise
    with pytest.raises(CodeError):
        with_plaquette_signs(z44, flipped)
    same = with_plaquette_signs(z44, z44.plaquette_ops)
    assert groups_equal(same.generators(), z44.generators())


def test_solve_in_span_phase(z44):
    target = multiply(z44.plaquette_ops[0], z44.plaquette_ops[3])
    subset, k = solve_in_span(z44.plaquette_ops, target)
    assert subset == [0, 3] and k == 0


def test_planar_wen_one_logical_qubit():
    for L in [(2, 2), (3, 3), (4, 3)]:
        lat = planar_wen(*L)
        gens = planar_wen_generators(lat)
        assert group_rank(gens) == lat.num_vertices - 1


@given(st.integers(0, 10_000))
@settings(max_examples=8)
def test_random_bicolourable_codes_satisfy_relations(seed):
    lat = honeycomb_torus(4, 4)
    m, _ = random_bicolorable_matching(lat, seed)
    rep = verify_relations(build(lat, m))
    assert rep.ok and rep.rank == lat.num_vertices - 2
