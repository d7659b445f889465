import numpy as np
import pytest
from hypothesis import given, strategies as st

from homcode.complex_core import circle, torus_grid
from homcode.homology import ChainVector, cohomology, homology
from homcode.stabilizer import (
    COHOMOLOGY,
    HOMOLOGY,
    QuditPauliOperator,
    apply_stabilizer_product,
    build_code,
    check_commutation,
    check_logicals,
    code_dimension,
    symplectic_phase,
)

import oracles
from conftest import FIXTURES

SITES = ("a", "b", "c")


@st.composite
def paulis(draw, d=None):
    d = d or draw(st.integers(2, 5))
    exps = st.dictionaries(st.sampled_from(SITES), st.integers(0, d - 1), max_size=3)
    return QuditPauliOperator(d, draw(exps), draw(exps), draw(st.integers(0, d - 1)))


@st.composite
def pauli_pairs(draw):
    d = draw(st.integers(2, 5))
    return draw(paulis(d)), draw(paulis(d))


def dense(op):
    return oracles.kron_pauli(op.d, SITES, dict(op.x), dict(op.z), op.phase)


@given(pauli_pairs())
def test_symplectic_phase_is_antisymmetric(pair):
    a, b = pair
    assert (symplectic_phase(a, b) + symplectic_phase(b, a)) % a.d == 0


@given(pauli_pairs())
def test_group_commutator_matches_dense_matrices(pair):
    a, b = pair
    A, B = dense(a), dense(b)
    comm = np.linalg.inv(A) @ np.linalg.inv(B) @ A @ B
    zeta = np.exp(2j * np.pi / a.d)
    assert np.allclose(comm, zeta ** symplectic_phase(a, b) * np.eye(len(A)), atol=1e-9)


@given(pauli_pairs())
def test_product_matches_dense_matrices(pair):
    a, b = pair
    assert np.allclose(dense(a * b), dense(a) @ dense(b), atol=1e-9)


@given(paulis())
def test_inverse_and_order(op):
    ident = QuditPauliOperator.identity(op.d)
    assert op * op.inverse() == ident
    assert np.allclose(dense(op.inverse()), np.linalg.inv(dense(op)), atol=1e-9)
    # X^a Z^b has order dividing d up to a phase; the phase vanishes for odd d
    if op.d % 2:
        assert (op ** op.d) == ident


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_single_site_commutator(d):
    z, x = QuditPauliOperator.Z(d, "a"), QuditPauliOperator.X(d, "a")
    assert symplectic_phase(z, x) == 1
    Z, X = oracles.single_z(d), oracles.single_x(d)
    assert np.allclose(Z @ X, np.exp(2j * np.pi / d) * X @ Z)


@pytest.mark.parametrize("name", sorted(FIXTURES))
@pytest.mark.parametrize("d", [2, 3, 4, 5])
@pytest.mark.parametrize("mode", [HOMOLOGY, COHOMOLOGY])
def test_stabilizers_commute(name, d, mode):
    c = FIXTURES[name]()
    for k in range(c.dimension + 1):
        code = build_code(c, k, d, mode)
        assert check_commutation(code) == []


@pytest.mark.parametrize("name", ["torus22", "torus33", "cube", "circle3", "square22"])
@pytest.mark.parametrize("d", [2, 3, 5])
@pytest.mark.parametrize("mode", [HOMOLOGY, COHOMOLOGY])
def test_logicals_commute_and_pair(name, d, mode):
    c = FIXTURES[name]()
    for k in range(c.dimension + 1):
        code = build_code(c, k, d, mode)
        assert check_logicals(code) == []
        assert code.pairing_ok
        group = homology(c, k, d) if mode == HOMOLOGY else cohomology(c, k, d)
        assert code_dimension(code) == group.order


def test_rp2_pairing_at_composite_modulus():
    code = build_code(FIXTURES["rp2"](), 1, 4)
    assert code_dimension(code) == 2
    assert not code.pairing_ok


def test_torus_check_weights():
    code = build_code(torus_grid(3, 3), 1, 2)
    assert all(op.weight == 4 and op.z and not op.x for op in code.v_stabilizers.values())
    assert all(op.weight == 4 and op.x and not op.z for op in code.p_stabilizers.values())
    assert code.summary(3) == "[[18, 2, 3]]_2"


def test_cohomology_mode_swaps_types():
    code = build_code(torus_grid(2, 2), 1, 3, COHOMOLOGY)
    assert all(op.x and not op.z for op in code.v_stabilizers.values())
    assert all(op.z and not op.x for op in code.p_stabilizers.values())


def test_plaquette_powers_shift_by_boundaries():
    c = circle(3)
    code = build_code(c, 0, 3)  # P checks on edges shift vertices by their boundary
    p = code.p_stabilizers["e0"]
    out = apply_stabilizer_product([p, p], ChainVector.zero(0))
    assert out == ChainVector(0, {"v0": 1, "v1": 2})


def test_integer_code_has_no_logicals():
    code = build_code(torus_grid(2, 2), 1, None)
    assert code.x_logicals == []
    assert check_commutation(code) == []
