import numpy as np
import pytest
from hypothesis import given, strategies as st

from homcode.complex_core import circle, sphere_cube, torus_grid
from homcode.exceptions import CapacityError
from homcode.homology import ChainVector, differential, homology
from homcode.qudit_sim import (
    DenseState,
    apply_pauli,
    build_projector_stabilizers,
    chain_index,
    code_projector_apply,
    energy,
    ground_space_basis,
    ground_space_dimension,
    ground_state,
    hamiltonian_spectrum_check,
    index_chain,
    pauli_matrix,
    subspace_distance,
)
from homcode.stabilizer import COHOMOLOGY, HOMOLOGY, QuditPauliOperator, build_code

import oracles


@pytest.mark.parametrize("d", [2, 3, 4])
def test_single_qudit_relations(d):
    x = pauli_matrix(QuditPauliOperator.X(d, "a"), ["a"])
    z = pauli_matrix(QuditPauliOperator.Z(d, "a"), ["a"])
    eye = np.eye(d)
    assert np.allclose(np.linalg.matrix_power(x, d), eye)
    assert np.allclose(np.linalg.matrix_power(z, d), eye)
    assert np.allclose(z @ x, np.exp(2j * np.pi / d) * x @ z)
    assert np.allclose(x, oracles.single_x(d))
    assert np.allclose(z, oracles.single_z(d))


@given(st.integers(2, 3), st.lists(st.integers(0, 2), min_size=3, max_size=3),
       st.lists(st.integers(0, 2), min_size=3, max_size=3), st.integers(0, 2))
def test_pauli_matrix_matches_kron(d, xs, zs, phase):
    sites = ["a", "b", "c"]
    op = QuditPauliOperator(d, dict(zip(sites, xs)), dict(zip(sites, zs)), phase)
    assert np.allclose(pauli_matrix(op, sites), oracles.kron_pauli(d, sites, op.x, op.z, op.phase))


@given(st.integers(2, 4), st.integers(0, 80))
def test_chain_index_roundtrip(d, idx):
    sites = ("a", "b", "c", "d")
    idx %= d**4
    assert chain_index(d, sites, index_chain(d, sites, idx, 1)) == idx


@pytest.mark.parametrize("mode", [HOMOLOGY, COHOMOLOGY])
@pytest.mark.parametrize("d", [2, 3])
def test_stabilizer_matrices_commute_densely(mode, d):
    code = build_code(circle(3), 1, d, mode)
    mats = [pauli_matrix(op, code.sites) for _, _, op in code.stabilizers()]
    for a in mats:
        for b in mats:
            assert np.allclose(a @ b, b @ a, atol=1e-9)


@pytest.mark.parametrize(
    "c, k, d",
    [(circle(3), 1, 2), (circle(3), 1, 3), (circle(4), 0, 3), (torus_grid(2, 2), 1, 2),
     (sphere_cube(), 2, 2), (sphere_cube(), 0, 2)],
)
def test_ground_space_dimension_is_homology_order(c, k, d):
    code = build_code(c, k, d)
    assert ground_space_dimension(code) == homology(c, k, d).order


def test_trace_route_agrees_with_svd_route():
    code = build_code(torus_grid(2, 2), 1, 2)
    assert ground_space_dimension(code, svd_limit=16, batch=64) == 4


def test_ground_state_is_fixed_by_every_check():
    code = build_code(torus_grid(2, 2), 1, 3)
    g = ground_state(code)
    for _, _, op in code.stabilizers():
        assert np.allclose(apply_pauli(g, op).amplitudes, g.amplitudes, atol=1e-9)
    assert abs(energy(code, g)) < 1e-9


def test_ground_state_lies_in_projector_range():
    code = build_code(torus_grid(2, 2), 1, 2)
    basis = ground_space_basis(code)
    # a cycle: h0_0 + h1_0 wraps around the torus
    rep = ChainVector(1, {"h0_0": 1, "h1_0": 1})
    assert not (differential(code.complex, 1) @ rep.to_array(code.complex) % 2).any()
    g = ground_state(code, rep).amplitudes
    assert np.allclose(basis @ (basis.conj().T @ g), g, atol=1e-9)


def test_logical_operator_moves_between_sectors():
    code = build_code(torus_grid(2, 2), 1, 2)
    g0 = ground_state(code)
    moved = apply_pauli(g0, code.x_logicals[0])
    assert abs(np.vdot(g0.amplitudes, moved.amplitudes)) < 1e-9
    assert abs(energy(code, moved)) < 1e-9


def test_spectrum_report():
    rep = hamiltonian_spectrum_check(build_code(circle(3), 1, 3), trials=10, seed=1)
    assert rep.ok
    assert rep.min_eigenvalue >= -1e-9


def test_projector_variant_matches():
    rep = build_projector_stabilizers(build_code(circle(3), 1, 3))
    assert rep.fixed_dimension == rep.pauli_dimension == 3
    assert rep.subspace_distance < 1e-9
    assert rep.max_commutator < 1e-9
    assert rep.max_idempotence_error < 1e-9


def test_subspace_distance_detects_difference():
    a = np.eye(4)[:, :2]
    b = np.eye(4)[:, 1:3]
    assert subspace_distance(a, a) < 1e-12
    assert abs(subspace_distance(a, b) - 1.0) < 1e-12


def test_projector_is_idempotent():
    code = build_code(circle(3), 1, 2)
    eye = np.eye(8, dtype=complex)
    p = code_projector_apply(code, eye)
    assert np.allclose(code_projector_apply(code, p), p)


def test_capacity_guard():
    with pytest.raises(CapacityError):
        DenseState.basis(2, [f"s{i}" for i in range(25)])
    with pytest.raises(CapacityError):
        ground_space_dimension(build_code(torus_grid(3, 3), 1, 2), limit=1024)
    with pytest.raises(CapacityError):
        ground_state(build_code(circle(3), 1, None))
