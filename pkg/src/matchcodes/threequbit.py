"""Three-qubit truncation of a single exchange.

Qubits 0, 1, 2 are the lower end of link A, the upper end of link C and the
lower end of link B in a six-qubit patch where z-links A and B sit side by
side above C.  Truncated to these three qubits:

    K_D = Y0 Y1   (y-link from the top of C to the bottom of A)
    K_E = X1 X2   (x-link from the top of C to the bottom of B)
    S   = Z1,  pi_A = Z0,  pi_B = Z2

Measuring K_D, K_E and then S with all outcomes +1 applies
``(1 + i pi_ex)/sqrt 2`` with ``pi_ex = Y0 X2``; swapping the first two
measurements gives the inverse.  The flipped-parity basis state is defined as
``|-kA,-kB> = pi_ex |kA,kB>``.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import oracle
from .pauli import PauliOperator, from_axes
from .tableau import StabilizerState, canonical_group, serialize_group

N = 3


def _op(s: str) -> PauliOperator:
    # s lists letters for qubit 0, 1, 2
    return from_axes(N, {q: c.lower() for q, c in enumerate(s) if c != "I"})


K_D = _op("YYI")
K_E = _op("IXX")
S = _op("IZI")
PI_A = _op("ZII")
PI_B = _op("IIZ")
PI_EX = _op("YIX")
INPUTS = ((1, 1), (1, -1), (-1, 1), (-1, -1))
SCHEMA = "matchcodes.demo_report/1"


def sequence(orientation: str = "ccw") -> list[PauliOperator]:
    from .majorana import CCW, orientation_of

    return [K_D, K_E, S] if orientation_of(orientation) == CCW else [K_E, K_D, S]


def _corrections(seq):
    # each measurement is undone with the operator stabilized just before it
    return [S if i == 0 else seq[i - 1] for i in range(len(seq))]


def initial_state(kA: int, kB: int) -> StabilizerState:
    return StabilizerState.from_generators([PI_A.times_phase(0 if kA == 1 else 2), S,
                                            PI_B.times_phase(0 if kB == 1 else 2)])


def initial_dense(kA: int, kB: int) -> oracle.DenseState:
    bits = [0 if kA == 1 else 1, 0, 0 if kB == 1 else 1]
    return oracle.DenseState.basis(bits)


def target_dense(kA: int, kB: int, orientation: str = "ccw", repeats: int = 1) -> oracle.DenseState:
    """``((1 +- i pi_ex)/sqrt 2)^repeats`` applied to ``|kA,kB>``."""
    from .majorana import CCW, orientation_of

    k = 1 if orientation_of(orientation) == CCW else 3
    psi = initial_dense(kA, kB)
    eye = PauliOperator(N, 0, 0, 0)
    for _ in range(repeats):
        psi = oracle.apply_operator(psi, [(1.0, eye), (1.0, PI_EX.times_phase(k))])
    return psi


def oracle_acceptance(kA: int, kB: int, orientation: str = "ccw", repeats: int = 1) -> float:
    """Probability that every measurement of ``repeats`` rounds returns +1."""
    psi = initial_dense(kA, kB)
    p = 1.0
    for _ in range(repeats):
        for op in sequence(orientation):
            psi, prob = oracle.project(psi, op, +1)
            p *= prob
    return p


@dataclass
class _Shot:
    accepted: bool
    piA: int
    piB: int
    detA: bool
    detB: bool
    group: str


def _run_shot(kA, kB, mode, orientation, repeats, rng) -> _Shot:
    st = initial_state(kA, kB)
    seq = sequence(orientation)
    corr = _corrections(seq)
    ok = True
    for _ in range(repeats):
        for op, c in zip(seq, corr):
            if mode == "corrected":
                st.measure_corrected(op, rng, correction=c)
            else:
                rec = st.measure(op, rng=rng)
                if rec.outcome != 1:
                    ok = False
                    break
        if not ok:
            break
    if not ok:
        return _Shot(False, 0, 0, False, False, "")
    group = serialize_group(st)
    a = st.measure(PI_A, rng=rng)
    b = st.measure(PI_B, rng=rng)
    return _Shot(True, a.outcome, b.outcome, a.deterministic, b.deterministic, group)


def _shot_rng(seed: int, state_idx: int, branch: int, shot: int) -> np.random.Generator:
    # counter scheme: one independent stream per (seed, input, branch, shot)
    return np.random.default_rng([seed, state_idx, branch, shot])


def _batch(args):
    seed, si, kA, kB, mode, orientation, repeats, lo, hi = args
    return [_run_shot(kA, kB, mode, orientation, repeats, _shot_rng(seed, si, repeats, s))
            for s in range(lo, hi)]


def _run_many(seed, si, kA, kB, mode, orientation, repeats, shots, jobs):
    if jobs <= 1:
        return _batch((seed, si, kA, kB, mode, orientation, repeats, 0, shots))
    step = -(-shots // jobs)
    chunks = [(seed, si, kA, kB, mode, orientation, repeats, lo, min(lo + step, shots))
              for lo in range(0, shots, step)]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        parts = list(ex.map(_batch, chunks))
    return [s for part in parts for s in part]


def _dense_matches(group: str, kA: int, kB: int, orientation: str, repeats: int) -> bool:
    gens = [PauliOperator.from_compact(line) for line in group.splitlines()]
    got = oracle.state_from_stabilizers(gens, N)
    want = target_dense(kA, kB, orientation, repeats)
    return abs(abs(oracle.overlap(want, got)) - 1) <= 1e-12


def demo_three_qubit(shots: int, seed: int = 0, mode: str = "postselect",
                     orientation: str = "ccw", jobs: int = 1) -> dict:
    """Run one exchange (R) and two exchanges (R^2) from all four parity inputs."""
    if shots < 1:
        raise ValueError("shots must be at least 1")
    if mode not in ("postselect", "corrected"):
        raise ValueError(f"unknown mode {mode!r}")
    from .majorana import orientation_of

    orientation = orientation_of(orientation)
    reports = []
    all_ok = True
    for si, (kA, kB) in enumerate(INPUTS):
        rep = {"state_in": [kA, kB], "mode": mode, "orientation": orientation, "shots": shots,
               "accepted": {}, "acceptance": {}, "oracle_acceptance": {},
               "freq_piA": {}, "freq_piB": {}, "deterministic_flags": {}, "oracle_ok": {}}
        for name, repeats in (("R", 1), ("R2", 2)):
            res = _run_many(seed, si, kA, kB, mode, orientation, repeats, shots, jobs)
            acc = [r for r in res if r.accepted]
            rep["accepted"][name] = len(acc)
            rep["acceptance"][name] = len(acc) / shots
            rep["oracle_acceptance"][name] = 1.0 if mode == "corrected" else oracle_acceptance(
                kA, kB, orientation, repeats)
            rep["freq_piA"][name] = (sum(r.piA == 1 for r in acc) / len(acc)) if acc else None
            rep["freq_piB"][name] = (sum(r.piB == 1 for r in acc) / len(acc)) if acc else None
            rep["deterministic_flags"][name] = [bool(acc) and all(r.detA for r in acc),
                                                bool(acc) and all(r.detB for r in acc)]
            checked = {g: _dense_matches(g, kA, kB, orientation, repeats) for g in {r.group for r in acc}}
            good = all(checked[r.group] for r in acc)
            rep["oracle_ok"][name] = good
            all_ok &= good
        if acc:
            # R^2 flips both parities deterministically
            flips = rep["deterministic_flags"]["R2"] == [True, True] and \
                rep["freq_piA"]["R2"] == (1.0 if kA == -1 else 0.0) and \
                rep["freq_piB"]["R2"] == (1.0 if kB == -1 else 0.0)
            rep["r2_flips"] = bool(flips)
            all_ok &= flips
        reports.append(rep)
    return {"schema": SCHEMA, "seed": seed, "mode": mode, "orientation": orientation,
            "shots": shots, "ok": bool(all_ok), "reports": reports}


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)


def exact_output_group(kA: int, kB: int, orientation: str = "ccw", repeats: int = 1) -> list[PauliOperator]:
    """Canonical stabilizer group after post-selected rounds (tableau, forced +1)."""
    st = initial_state(kA, kB)
    for _ in range(repeats):
        for op in sequence(orientation):
            st.measure(op, forced=+1)
    return canonical_group(st)
