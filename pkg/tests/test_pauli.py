import numpy as np
import pytest
from hypothesis import given

from matchcodes.oracle import pauli_matrix
from matchcodes.pauli import (
    PauliError,
    PauliOperator,
    canonical_hermitian,
    commutes,
    from_axes,
    hermitian_real,
    identity,
    multiply,
    product,
    restrict,
    single,
    support,
)
from strategies import pauli_pairs, paulis


def P(s):
    return PauliOperator.from_compact(s)


def test_y_is_i_x_z():
    y = single(1, 0, "y")
    assert y == multiply(single(1, 0, "x"), single(1, 0, "z")).times_phase(1)
    assert y.is_hermitian and y.sign == 1


@pytest.mark.parametrize("a,b,want", [
    ("X", "Z", "-iY"),
    ("Z", "X", "+iY"),
    ("X", "Y", "+iZ"),
    ("Y", "Z", "+iX"),
    ("XX", "ZZ", "-YY"),
    ("XI", "IX", "XX"),
])
def test_small_products(a, b, want):
    assert P(a) * P(b) == P(want)


def test_compact_round_trip_and_errors():
    for s in ["+XYZI", "-YY", "+iZ", "-iXZ", "I"]:
        assert P(P(s).to_compact()) == P(s)
    with pytest.raises(PauliError):
        P("XQ")
    with pytest.raises(PauliError):
        multiply(P("X"), P("XX"))
    with pytest.raises(PauliError):
        PauliOperator.from_text("garbage")


@given(paulis())
def test_text_round_trip(p):
    assert PauliOperator.from_text(p.to_text()) == p
    assert PauliOperator.from_compact(p.to_compact()) == p


@given(pauli_pairs())
def test_product_matches_matrices(ab):
    a, b = ab
    np.testing.assert_allclose(pauli_matrix(a * b), pauli_matrix(a) @ pauli_matrix(b), atol=1e-12)


@given(pauli_pairs())
def test_commutation_matches_matrices(ab):
    a, b = ab
    ma, mb = pauli_matrix(a), pauli_matrix(b)
    assert commutes(a, b) == np.allclose(ma @ mb, mb @ ma)


@given(paulis())
def test_hermiticity_matches_matrix(p):
    m = pauli_matrix(p)
    assert p.is_hermitian == np.allclose(m, m.conj().T)


@given(paulis())
def test_inverse(p):
    assert (p * p.inverse()).is_identity(up_to_phase=False)


@given(paulis(), paulis(), paulis())
def test_associativity(a, b, c):
    if a.num_qubits == b.num_qubits == c.num_qubits:
        assert (a * b) * c == a * (b * c)


@given(paulis())
def test_canonical_hermitian(p):
    h, k = canonical_hermitian(p)
    assert h.is_hermitian and h.sign == 1
    assert h.times_phase(k) == p
    assert hermitian_real(p).is_hermitian


def test_support_restrict_and_builders():
    p = from_axes(5, {0: "x", 3: "y"})
    assert support(p) == {0, 3}
    assert p.weight == 2
    r = restrict(p, [0, 3])
    assert r.to_compact() == "+XY"
    with pytest.raises(PauliError):
        restrict(p, [0])
    assert identity(3).is_identity(up_to_phase=False)
    assert product([P("XI"), P("IX"), P("XX")]).is_identity(up_to_phase=False)
    with pytest.raises(PauliError):
        product([])
