import json

import numpy as np
import pytest

from matchcodes import oracle
from matchcodes.pauli import PauliOperator, commutes
from matchcodes.threequbit import (
    INPUTS,
    K_D,
    K_E,
    PI_A,
    PI_B,
    PI_EX,
    S,
    demo_three_qubit,
    exact_output_group,
    initial_dense,
    initial_state,
    oracle_acceptance,
    report_json,
    sequence,
    target_dense,
)


def compact(gens):
    return [p.to_compact() for p in gens]


def test_operator_algebra():
    assert PI_A.to_compact() == "+ZII" and PI_B.to_compact() == "+IIZ"
    assert not commutes(K_D, K_E) and not commutes(K_D, S) and not commutes(K_E, S)
    assert not commutes(PI_EX, PI_A) and not commutes(PI_EX, PI_B) and commutes(PI_EX, S)
    assert sequence("ccw") == [K_D, K_E, S] and sequence("cw") == [K_E, K_D, S]


@pytest.mark.parametrize("k,ccw,cw", [
    ((1, 1), ["-XIX", "+ZIZ", "+IZI"], ["+XIX", "+ZIZ", "+IZI"]),
    ((1, -1), ["-XIX", "-ZIZ", "+IZI"], ["+XIX", "-ZIZ", "+IZI"]),
    ((-1, 1), ["+XIX", "-ZIZ", "+IZI"], ["-XIX", "-ZIZ", "+IZI"]),
    ((-1, -1), ["+XIX", "+ZIZ", "+IZI"], ["-XIX", "+ZIZ", "+IZI"]),
])
def test_exact_single_exchange_groups(k, ccw, cw):
    assert compact(exact_output_group(*k, "ccw")) == ccw
    assert compact(exact_output_group(*k, "cw")) == cw


@pytest.mark.parametrize("k", INPUTS)
def test_double_exchange_flips_both(k):
    kA, kB = k
    grp = compact(exact_output_group(kA, kB, "ccw", 2))
    want = sorted([("+" if kA == -1 else "-") + "ZII", "+IZI", ("+" if kB == -1 else "-") + "IIZ"])
    assert sorted(grp) == want


@pytest.mark.parametrize("k", INPUTS)
@pytest.mark.parametrize("o", ["ccw", "cw"])
def test_exact_groups_match_dense_target(k, o):
    got = oracle.state_from_stabilizers(exact_output_group(*k, o), 3)
    want = target_dense(*k, o)
    assert abs(abs(oracle.overlap(want, got)) - 1) < 1e-12


@pytest.mark.parametrize("k", INPUTS)
def test_target_is_superposition_with_flipped_state(k):
    # (|k> + i|-k>)/sqrt2 with |-k> = pi_ex |k>
    psi = initial_dense(*k)
    flipped = oracle.apply_pauli_dense(psi, PI_EX)
    want = target_dense(*k, "ccw")
    manual = oracle.DenseState(3, (psi.amplitudes + 1j * flipped.amplitudes) / np.sqrt(2))
    assert abs(oracle.overlap(want, manual) - 1) < 1e-12
    # the flipped state has both parities reversed
    assert oracle.expectation_dense(flipped, PI_A) == pytest.approx(-k[0])
    assert oracle.expectation_dense(flipped, PI_B) == pytest.approx(-k[1])


@pytest.mark.parametrize("k", INPUTS)
def test_oracle_acceptance(k):
    assert oracle_acceptance(*k, "ccw", 1) == pytest.approx(1 / 8, abs=1e-12)
    assert oracle_acceptance(*k, "ccw", 2) == pytest.approx(1 / 64, abs=1e-12)
    assert oracle_acceptance(*k, "cw", 1) == pytest.approx(1 / 8, abs=1e-12)


def test_initial_state():
    s = initial_state(1, -1)
    assert s.expectation(PI_A) == 1 and s.expectation(PI_B) == -1 and s.expectation(S) == 1


def test_demo_postselect_statistics():
    rep = demo_three_qubit(2000, seed=3, mode="postselect")
    assert rep["ok"]
    for r in rep["reports"]:
        n, p = r["shots"], r["oracle_acceptance"]["R"]
        sigma = np.sqrt(p * (1 - p) / n)
        assert abs(r["acceptance"]["R"] - p) < 5 * sigma
        # pi_A is random; pi_B is then fixed by the stabilized product Z0 Z2
        assert r["deterministic_flags"]["R"] == [False, True]
        assert r["deterministic_flags"]["R2"] == [True, True]
        assert r["r2_flips"]


def test_demo_corrected_piA_frequency():
    rep = demo_three_qubit(1200, seed=1, mode="corrected")
    assert rep["ok"]
    r = rep["reports"][0]
    assert r["accepted"]["R"] == 1200
    sigma = np.sqrt(0.25 / 1200)
    assert abs(r["freq_piA"]["R"] - 0.5) < 5 * sigma


def test_demo_deterministic_and_json():
    a = report_json(demo_three_qubit(50, seed=9))
    b = report_json(demo_three_qubit(50, seed=9))
    assert a == b
    data = json.loads(a)
    assert data["schema"] == "matchcodes.demo_report/1"
    keys = {"state_in", "mode", "shots", "accepted", "freq_piA", "freq_piB", "deterministic_flags"}
    assert keys <= set(data["reports"][0])


def test_demo_parallel_matches_serial():
    assert demo_three_qubit(40, seed=2, jobs=2) == demo_three_qubit(40, seed=2, jobs=1)


def test_demo_argument_errors():
    with pytest.raises(ValueError):
        demo_three_qubit(0)
    with pytest.raises(ValueError):
        demo_three_qubit(5, mode="magic")
