"""Acceptance criteria, one test each.

Every test prints a ``PASS``/``FAIL`` line with its wall time; the lines are
also repeated in the pytest terminal summary.  Run with
``pytest tests/test_acceptance.py -v -s`` to see them inline.
"""

import time

import numpy as np
import pytest

from matchcodes import oracle
from matchcodes.anyons import derive_fusion_table, exchange_triples, fermion_exchange_phase
from matchcodes.code import build, path_product, random_bicolorable_matching, verify_relations
from matchcodes.color import build_embedding, combined_sector_count, verify_color_group
from matchcodes.lattice import honeycomb_torus, plaquette_numbering
from matchcodes.majorana import (
    CCW,
    CW,
    braid_map,
    exchange,
    layout_syndrome,
    make_layout,
    parity_operator,
    plan_exchange,
    teleport_step,
    verify_exchange,
)
from matchcodes.pauli import hermitian_real, multiply, single, support
from matchcodes.tableau import canonical_group, group_rank, groups_equal
from matchcodes.threequbit import INPUTS, demo_three_qubit, exact_output_group, target_dense
from conftest import modcode, tricolored, wencode, zcode
from differential import run_sequence

RESULTS = []
RANDOM_SEEDS = (1, 2, 3, 4, 5, 6)


def report(n, title, ok, elapsed, limit=None, detail=""):
    ok = bool(ok) and (limit is None or elapsed < limit)
    budget = "" if limit is None else f" (limit {limit:g} s)"
    line = f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title}  [{elapsed:.2f} s{budget}]"
    if detail:
        line += f"  {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def _random_code(seed):
    lat = honeycomb_torus(4, 4)
    return build(lat, random_bicolorable_matching(lat, seed)[0])


def test_criterion_01_generator_independence():
    t = time.perf_counter()
    code = zcode.__wrapped__(4, 4)
    gens = code.generators()
    rank = group_rank(gens)
    dt = time.perf_counter() - t
    report(1, "honeycomb(4,4) z-links: 32 generators, rank 30", len(gens) == 32 and rank == 30, dt, 1.0,
           f"rank {rank}/{len(gens)}")


def test_criterion_02_product_relations():
    t = time.perf_counter()
    codes = {"z-links": zcode(4, 4), "wen": wencode(4, 4)}
    codes.update({f"random:{s}": _random_code(s) for s in RANDOM_SEEDS})
    bad = []
    for name, code in codes.items():
        rep = verify_relations(code)
        need = {"prod S ~ prod_odd K", "prod_b W ~ prod_w W", "prod_w W ~ prod S"}
        seen = {c.name for c in rep.checks if c.ok and (c.phase is None or c.phase in (0, 1, 2, 3))}
        if not rep.ok or not need <= seen:
            bad.append(name)
    dt = time.perf_counter() - t
    report(2, f"product relations on {len(codes)} matchings", not bad, dt, detail=f"failures {bad}" if bad else "")


def _labelled(p, num):
    inv = {v: k for k, v in num.items()}
    return " ".join(f"{p.letter(v)}{inv[v]}" for v in sorted(support(p), key=inv.get))


def test_criterion_03_wen_golden():
    t = time.perf_counter()
    code = wencode(3, 3)
    ok = True
    for f in range(len(code.lattice.faces)):
        num = plaquette_numbering(code.lattice, f)
        s = code.string_ops[(min(num[3], num[6]), max(num[3], num[6]))]
        sw = multiply(s, code.plaquette_ops[f])
        ok &= _labelled(s, num) == "X1 Y2 X3 Y6" and s.is_hermitian
        ok &= _labelled(sw, num) == "Y3 X4 Y5 X6" and sw.is_hermitian
    dt = time.perf_counter() - t
    report(3, "Wen S_p = Y6 X1 Y2 X3 and S_p W_p = Y3 X4 Y5 X6 on every hexagon", ok, dt)


def test_criterion_04_fermionic_exchange():
    t = time.perf_counter()
    code = zcode(3, 3)
    triples = exchange_triples(code)
    phases = {fermion_exchange_phase(code, *tr) for tr in triples}
    dt = time.perf_counter() - t
    report(4, f"exchange sequence = -1 on all {len(triples)} triples of (3,3)",
           phases == {-1} and len(triples) > 0, dt)


@pytest.mark.parametrize("name", ["z-links", "wen", "random:1", "random:2", "random:3"])
def test_criterion_05_fusion_table(name):
    code = {"z-links": lambda: zcode(4, 4), "wen": lambda: wencode(4, 4)}.get(
        name, lambda: _random_code(int(name.split(":")[1])))()
    t = time.perf_counter()
    table = derive_fusion_table(code)
    dt = time.perf_counter() - t
    report(5, f"fusion table D(Z2) for {name}", table.is_d_z2() and table.num_sectors == 4, dt, 10.0)


def test_criterion_06_teleportation():
    t = time.perf_counter()
    base, base_state = make_layout(modcode(4, 4), 1)
    lat = base.lattice
    hops = 0
    ok = True
    rng = np.random.default_rng(6)
    for j in range(base.num_majoranas - 1):
        for o in (CCW, CW):
            lay, s = base.copy(), base_state.copy()
            route = plan_exchange(lay, j, o)
            for leg_no, leg in enumerate(route.legs):
                who = route.second if leg_no == 1 else route.first
                for w in leg:
                    i = lay.majorana_positions[who]
                    k = lay.current_matching.partner(w)
                    e = lat.edge_between(i, w)
                    op = hermitian_real(path_product(lat, (e,), i))
                    ok &= s.expectation(op) == 0
                    rec = teleport_step(s, lay, e, rng=rng)
                    ok &= not rec.deterministic
                    ok &= layout_syndrome(lay, s) == []
                    ok &= lay.current_matching.partner(i) == w and lay.current_matching.partner(k) is None
                    ok &= lay.majorana_positions[who] == k
                    hops += 1
            ok &= lay.current_matching.pairs == base.current_matching.pairs
    dt = time.perf_counter() - t
    report(6, f"teleport steps nondeterministic and clean ({hops} hops over 6 routes)", ok, dt)


@pytest.mark.parametrize("L", [(4, 4), (6, 4)])
def test_criterion_07_exchange_symbolic(L):
    t = time.perf_counter()
    lay, state = make_layout(modcode(*L), 1)
    ok = all(verify_exchange(lay, state, j, o, seed=j)
             for j in range(lay.num_majoranas - 1) for o in (CCW, CW))
    dt = time.perf_counter() - t
    report(7, f"d=1 modified{L} ({lay.lattice.num_vertices} qubits): final group = Gamma image", ok, dt, 10.0)


def test_criterion_08_exchange_numeric():
    t = time.perf_counter()
    ok = True
    for k in INPUTS:
        for o in ("ccw", "cw"):
            got = oracle.state_from_stabilizers(exact_output_group(*k, o), 3)
            ok &= abs(abs(oracle.overlap(target_dense(*k, o), got)) - 1) <= 1e-12
    details = []
    for o in ("ccw", "cw"):
        rep = demo_three_qubit(2000, seed=8, mode="postselect", orientation=o)
        ok &= rep["ok"]
        for r in rep["reports"]:
            ok &= bool(r["r2_flips"]) and all(r["oracle_ok"].values())
            for name in ("R", "R2"):
                p = r["oracle_acceptance"][name]
                sigma = np.sqrt(p * (1 - p) / r["shots"])
                ok &= abs(r["acceptance"][name] - p) < 5 * sigma
        details.append(f"{o} acceptance R {rep['reports'][0]['acceptance']['R']:.3f} (oracle 0.125)")
    dt = time.perf_counter() - t
    report(8, "three-qubit R overlap 1, R^2 flips, cw = (1 - i pi)/sqrt2, 2000 shots", ok, dt, 10.0,
           "; ".join(details))


def test_criterion_09_braid_relations():
    t = time.perf_counter()
    lay, state = make_layout(modcode(4, 4), 1)
    n = lay.lattice.num_vertices
    p0, p1 = parity_operator(lay, 0), parity_operator(lay, 1)
    probes = [single(n, v, a) for v in range(n) for a in "xz"]
    ok = True
    for o in (CCW, CW):
        inv = CW if o == CCW else CCW
        for q in probes:
            ok &= braid_map([p0, p1, p0], [o] * 3, q) == braid_map([p1, p0, p1], [o] * 3, q)
            ok &= braid_map([p0, p0], [o, inv], q) == q
    s = state.copy()
    init = canonical_group(s)
    exchange(s, lay, 1, CCW, seed=1)
    exchange(s, lay, 1, CW, seed=2)
    ok &= groups_equal(s, init)
    dt = time.perf_counter() - t
    report(9, "Yang-Baxter on 4 Majoranas and ccw then cw = identity", ok, dt)


def test_criterion_10_color_embedding():
    t = time.perf_counter()
    emb = build_embedding(tricolored(3, 3))
    equal = verify_color_group(emb)
    sectors = combined_sector_count(emb)
    dt = time.perf_counter() - t
    report(10, "<W, A, B> = color code with signs; 16 sectors", equal and sectors == 16, dt, 30.0,
           f"sectors {sectors}")


def test_criterion_11_tableau_oracle_differential():
    t = time.perf_counter()
    bad = [(seed, p) for seed in range(10_000) for p in [run_sequence(seed, max_qubits=10)] if p]
    dt = time.perf_counter() - t
    report(11, "10000 random sequences: tableau agrees with dense oracle", not bad, dt,
           detail=f"first mismatch {bad[0]}" if bad else "")
