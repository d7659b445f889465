import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from homcode.complex_core import circle, sphere_cube, torus_grid
from homcode.exceptions import DegreeError, InfeasibleSyndromeError
from homcode.homology import ChainVector, differential, incoming, is_boundary
from homcode.error_analysis import (
    ErrorConfig,
    Syndrome,
    code_distance,
    decode_min_weight,
    decompose_error,
    energy_barrier,
    error_energy,
    logical_residual_trivial,
    recombine,
    syndrome,
    syndrome_by_phases,
)
from homcode.qudit_sim import apply_pauli, energy, ground_state
from homcode.stabilizer import COHOMOLOGY, HOMOLOGY, build_code

from conftest import FIXTURES

CASES = [("circle3", 1), ("torus22", 1), ("torus33", 1), ("cube", 1), ("cube", 2),
         ("rp2", 1), ("square22", 1), ("interval3", 0)]


def random_error(code, rng, density=0.4):
    d = code.d
    x = {s: int(rng.integers(1, d)) for s in code.sites if rng.random() < density}
    z = {s: int(rng.integers(1, d)) for s in code.sites if rng.random() < density}
    return ErrorConfig.make(d, code.k, x, z)


def by_side(comps, side):
    return [cp for cp in comps if cp.kind == side]


@pytest.mark.parametrize("name, k", CASES)
@pytest.mark.parametrize("d", [2, 3, 4, 5])
@pytest.mark.parametrize("mode", [HOMOLOGY, COHOMOLOGY])
def test_syndrome_routes_agree_and_are_linear(name, k, d, mode):
    code = build_code(FIXTURES[name](), k, d, mode)
    rng = np.random.default_rng(hash((name, k, d, mode)) % 2**32)
    for _ in range(15):
        e1, e2 = random_error(code, rng), random_error(code, rng)
        s1 = syndrome(code, e1)
        assert s1 == syndrome_by_phases(code, e1)
        assert syndrome(code, e1 + e2) == s1 + syndrome(code, e2)


@pytest.mark.parametrize("name, k", CASES)
@pytest.mark.parametrize("d", [2, 3, 4, 5])
@pytest.mark.parametrize("mode", [HOMOLOGY, COHOMOLOGY])
def test_decomposition_recombines(name, k, d, mode):
    code = build_code(FIXTURES[name](), k, d, mode)
    rng = np.random.default_rng(7 + d)
    for _ in range(25):
        e = random_error(code, rng)
        comps = decompose_error(code, e)
        for cp in comps:
            assert all(v in (1, d - 1) for v in cp.chain.coeffs.values())
        total, syn = recombine(code, comps)
        assert total == e
        assert syn == syndrome(code, e)


def test_decomposition_of_adjacent_edges():
    code = build_code(circle(5), 1, 3)
    e = ErrorConfig.make(3, 1, x={"e0": 1, "e1": 1})
    comps = decompose_error(code, e)
    assert len(comps) == 1
    assert comps[0].chain.support == ("e0", "e1")
    assert comps[0].boundary == {"v0": 2, "v2": 1}


def test_decomposition_stacks_copies():
    code = build_code(circle(5), 1, 3)
    comps = decompose_error(code, ErrorConfig.make(3, 1, x={"e2": 2}))
    assert len(comps) == 2
    assert all(cp.chain == ChainVector(1, {"e2": 1}) for cp in comps)


def test_syndrome_energy_matches_dense_energy():
    code = build_code(torus_grid(2, 2), 1, 3)
    g = ground_state(code)
    rng = np.random.default_rng(3)
    for _ in range(10):
        e = random_error(code, rng)
        got = energy(code, apply_pauli(g, e.operator()))
        assert abs(got - error_energy(syndrome(code, e))) < 1e-9


def coset_minimum(code, cohomology):
    """Smallest weight of a nontrivial (co)cycle, by scanning all chains over Z_2."""
    c, k = code.complex, code.k
    out = differential(c, k, cohomology)
    n = code.n_qudits
    best = None
    for bits in itertools.product((0, 1), repeat=n):
        v = np.array(bits)
        w = int(v.sum())
        if w == 0 or (best is not None and w >= best):
            continue
        if out.size and (out @ v % 2).any():
            continue
        if not is_boundary(ChainVector.from_array(c, k, v), c, 2, cohomology):
            best = w
    return best


@pytest.mark.parametrize("n", [2, 3])
def test_torus_distance_is_systole(n):
    code = build_code(torus_grid(n, n), 1, 2)
    res = code_distance(code)
    assert res.distance == n
    assert res.x_distance == coset_minimum(code, False)
    assert res.z_distance == coset_minimum(code, True)
    assert is_boundary(res.x_witness, code.complex, 2) is False


def test_circle_sides_differ():
    res = code_distance(build_code(circle(5), 1, 3))
    assert res.x_distance == 5
    assert res.z_distance == 1
    assert res.distance == 1


def test_distance_without_logicals():
    res = code_distance(build_code(sphere_cube(), 1, 2))
    assert res.describe() == "no logicals"


def test_distance_cap():
    res = code_distance(build_code(torus_grid(3, 3), 1, 2), cap=2)
    assert res.distance is None
    assert res.describe() == ">= 3"


def test_single_errors_are_corrected():
    code = build_code(torus_grid(3, 3), 1, 2)
    for s in code.sites:
        for part in ("x", "z"):
            e = ErrorConfig.make(2, 1, **{part: {s: 1}})
            res = decode_min_weight(code, syndrome(code, e), injected=e)
            assert res.found and res.success
            assert syndrome(code, res.correction) == syndrome(code, e)


def test_decoder_fails_on_two_thirds_of_a_loop():
    code = build_code(torus_grid(3, 3), 1, 2)
    e = ErrorConfig.make(2, 1, x={"h0_0": 1, "h1_0": 1})
    res = decode_min_weight(code, syndrome(code, e), injected=e)
    assert res.found
    assert res.correction.x_part == ChainVector(1, {"h2_0": 1})
    assert res.success is False


def test_infeasible_syndrome():
    code = build_code(torus_grid(2, 2), 1, 2)
    with pytest.raises(InfeasibleSyndromeError):
        decode_min_weight(code, Syndrome(2, {"v0_0": 1}, {}))


@given(st.lists(st.integers(0, 2), min_size=6, max_size=6))
def test_decoder_output_reproduces_syndrome(vals):
    code = build_code(circle(6), 1, 3)
    e = ErrorConfig.make(3, 1, x=dict(zip(code.sites, vals)))
    s = syndrome(code, e)
    res = decode_min_weight(code, s)
    assert syndrome(code, res.correction) == s
    assert res.correction.weight <= e.weight


@pytest.mark.parametrize("m", range(3, 9))
def test_circle_barrier(m):
    res = energy_barrier(build_code(circle(m), 1, 2))
    assert res.barrier == 2
    assert len(res.path) == m


def test_torus_barrier_and_cube_none():
    assert energy_barrier(build_code(torus_grid(2, 2), 1, 2)).barrier == 2
    assert energy_barrier(build_code(sphere_cube(), 1, 2)).barrier is None


def test_barrier_needs_qubits():
    with pytest.raises(DegreeError):
        energy_barrier(build_code(circle(3), 1, 3))


def test_residual_of_boundary_is_trivial():
    code = build_code(torus_grid(2, 2), 1, 2)
    loop = ErrorConfig.make(2, 1, x=dict(code.p_stabilizers["f0_0"].x))
    assert logical_residual_trivial(code, loop, ErrorConfig.make(2, 1))
    assert not logical_residual_trivial(code, ErrorConfig.make(2, 1, x=dict(code.x_logicals[0].x)),
                                        ErrorConfig.make(2, 1))


def test_serialization_roundtrips():
    e = ErrorConfig.make(3, 1, x={"e0": 4}, z={"e1": 2})
    assert ErrorConfig.from_dict(e.to_dict()) == e
    s = Syndrome(3, {"v0": 1}, {})
    assert Syndrome.from_dict(s.to_dict()) == s
