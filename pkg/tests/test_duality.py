import math

import numpy as np
import pytest

from necroswap.duality import (
    DistinguisherSpec,
    SwapOverlaps,
    ancilla_return_check,
    build_distinguisher,
    build_swapper,
    conjugate_pair,
    distinguish_bias,
    hadamard_spec,
    flag_probability,
    optimal_theta,
    perfect_swap_instance,
    swap_overlaps,
)
from necroswap.statevec import (
    Circuit,
    CircuitError,
    QuantumState,
    cnot,
    h,
    orthogonal_pair,
    product_state,
    random_circuit,
    superpose,
    unitary1,
    unitary2,
    x,
)

from oracles import circuit_matrix, controlled_matrix, padded

CYCLE = np.array([[0, 0, 1, 0], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)


def test_perfect_swap_overlaps():
    ov = swap_overlaps(Circuit(1, 0, (x(0),)), product_state("0"), product_state("1"))
    assert np.isclose(ov.a, 1) and np.isclose(ov.b, 1) and np.isclose(ov.bias, 1)


def test_three_cycle_overlaps():
    U = Circuit(2, 0, (unitary2(0, 1, CYCLE),))
    ov = swap_overlaps(U, product_state("00"), product_state("01"))
    assert np.isclose(ov.a, 1) and np.isclose(ov.b, 0) and np.isclose(ov.bias, 0.5)


def test_quarter_rotation_has_no_bias():
    U = Circuit(1, 0, (unitary1(0, np.array([[0, -1], [1, 0]])),))
    ov = swap_overlaps(U, product_state("0"), product_state("1"))
    assert np.isclose(ov.a, 1) and np.isclose(ov.b, -1) and abs(ov.bias) < 1e-15


def test_swap_overlaps_rejects_non_orthogonal():
    with pytest.raises(CircuitError):
        swap_overlaps(Circuit(1, 0, ()), product_state("0"), product_state("+"))


@pytest.mark.parametrize("total,expected", [(1, 0.0), (1j, -math.pi / 2)])
def test_optimal_theta_examples(total, expected):
    assert math.isclose(optimal_theta(SwapOverlaps(total, 0)), expected, abs_tol=1e-15)


def test_optimal_theta_rotates_to_modulus():
    ov = SwapOverlaps(-0.3 + 0.4j, 0)
    th = optimal_theta(ov)
    val = np.exp(1j * th) * (-0.3 + 0.4j)
    assert abs(val.real - 0.5) <= 1e-12 and abs(val.imag) <= 1e-12
    assert optimal_theta(SwapOverlaps(0, 0)) == 0.0


def test_distinguisher_with_x():
    spec = hadamard_spec(Circuit(1, 0, (x(0),)), 0.0)
    assert np.isclose(flag_probability(spec, product_state("+")), 1)
    assert np.isclose(flag_probability(spec, product_state("-")), 0)


def test_distinguisher_with_identity():
    spec = hadamard_spec(Circuit(2, 0, ()), 0.0)
    rng = np.random.default_rng(0)
    a, b = orthogonal_pair(2, rng)
    assert np.isclose(flag_probability(spec, a), 1)
    assert abs(distinguish_bias(spec, a, b).bias) < 1e-12


def test_distinguisher_matches_dense_hadamard_test():
    """Accept probability from the oracle: H, phase, controlled-U, H."""
    rng = np.random.default_rng(1)
    U = random_circuit(3, 15, rng)
    theta = 0.7
    psi = QuantumState(3, orthogonal_pair(3, rng)[0].amplitudes)
    Hm = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    Hc = np.kron(Hm, np.eye(8))
    Pc = np.kron(np.diag([1, np.exp(1j * theta)]), np.eye(8))
    full = Hc @ controlled_matrix(circuit_matrix(U)) @ Pc @ Hc
    out = full @ np.kron([1, 0], psi.amplitudes)
    p_ref = np.sum(np.abs(out[:8]) ** 2)
    assert math.isclose(flag_probability(hadamard_spec(U, theta), psi), p_ref, abs_tol=1e-12)


def test_distinguisher_circuit_shape():
    U = Circuit(2, 1, (cnot(0, 2),))
    D = build_distinguisher(U, 0.3)
    assert D.n_qubits == 3 and D.n_ancillas == 1
    assert D.gates[0] == h(0) and D.gates[-1] == h(0)
    assert len(build_distinguisher(U, 0.0)) == len(D) - 1


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_bias_formula_random(n):
    rng = np.random.default_rng(n)
    for _ in range(10):
        U = random_circuit(n, 20, rng)
        a, b = orthogonal_pair(n, rng)
        ov = swap_overlaps(U, a, b)
        th = float(rng.uniform(0, 2 * math.pi))
        d = distinguish_bias(hadamard_spec(U, th), *conjugate_pair(a, b))
        assert abs(d.bias - (np.exp(1j * th) * (ov.a + ov.b)).real / 2) <= 1e-10
        d_opt = distinguish_bias(hadamard_spec(U, optimal_theta(ov)), *conjugate_pair(a, b))
        assert abs(d_opt.bias - ov.bias) <= 1e-10
        assert -1e-12 <= d.p_psi <= 1 + 1e-12 and -1e-12 <= d.p_phi <= 1 + 1e-12


def test_overlaps_against_dense_oracle():
    rng = np.random.default_rng(2)
    U = random_circuit(2, 12, rng, n_ancillas=1)
    a, b = orthogonal_pair(2, rng)
    M = circuit_matrix(U)
    pa, pb = padded(a.amplitudes, 1), padded(b.amplitudes, 1)
    ov = swap_overlaps(U, a, b)
    assert np.isclose(ov.a, np.vdot(pb, M @ pa), atol=1e-12)
    assert np.isclose(ov.b, np.vdot(pa, M @ pb), atol=1e-12)


def test_h_distinguisher_and_swapper():
    spec = DistinguisherSpec(Circuit(1, 0, (h(0),)), 0, 0)
    rep = distinguish_bias(spec, product_state("+"), product_state("-"))
    assert np.isclose(rep.p_psi, 1) and np.isclose(rep.p_phi, 0) and np.isclose(rep.bias, 1)
    sw = build_swapper(spec)
    assert np.allclose(circuit_matrix(sw), [[0, 1], [1, 0]], atol=1e-12)


def test_identity_distinguisher_gives_useless_swapper():
    spec = DistinguisherSpec(Circuit(2, 0, ()), 0, 0)
    a, b = product_state("00"), product_state("01")
    assert abs(swap_overlaps(build_swapper(spec), a, b).bias) < 1e-12


def test_bare_circuit_distinguisher():
    D = build_distinguisher(Circuit(1, 0, (x(0),)))
    rep = distinguish_bias(D, product_state("+"), product_state("-"))
    assert np.isclose(rep.bias, 1)


@pytest.mark.parametrize("offset", [0, 1])
def test_exact_delta_transfer(offset):
    rng = np.random.default_rng(10 + offset)
    for _ in range(40):
        n = int(rng.integers(1, 5))
        A = random_circuit(n + offset, 12, rng, n_ancillas=int(rng.integers(0, 2)))
        psi, phi = orthogonal_pair(n, rng)
        xs = QuantumState.from_vector(psi.amplitudes + phi.amplitudes)
        ys = QuantumState.from_vector(psi.amplitudes - phi.amplitudes)
        spec = DistinguisherSpec(A, int(rng.integers(0, A.width)), int(rng.integers(0, 2)),
                                 offset)
        rep = distinguish_bias(spec, psi, phi)
        ov = swap_overlaps(build_swapper(spec), xs, ys)
        # Z flips sign on flag value 1, so the signed identity carries that sign.
        sign = 1 if spec.accept_on == 0 else -1
        assert abs(sign * (ov.a + ov.b) / 2 - rep.bias) <= 1e-10
        assert abs(ov.bias - abs(rep.bias)) <= 1e-10


def test_round_trip_perfect_swap():
    rng = np.random.default_rng(3)
    for n in range(2, 7):
        V = random_circuit(n, 30, rng)
        xs, ys, U = perfect_swap_instance(V)
        ov = swap_overlaps(U, xs, ys)
        assert np.isclose(ov.a, 1, atol=1e-10) and np.isclose(ov.b, 1, atol=1e-10)
        spec = hadamard_spec(U, optimal_theta(ov))
        assert abs(distinguish_bias(spec, *conjugate_pair(xs, ys)).bias - 1) <= 1e-10
        assert abs(swap_overlaps(build_swapper(spec), xs, ys).bias - 1) <= 1e-10
        dropped = swap_overlaps(build_swapper(spec, include_z=False), xs, ys)
        assert dropped.bias < 1e-10


def test_conjugate_basis_rule():
    rng = np.random.default_rng(4)
    for _ in range(20):
        n = 3
        U = random_circuit(n, 15, rng)
        a, b = orthogonal_pair(n, rng)
        psi_i, phi_i = superpose(a, b, math.pi / 2), superpose(a, b, -math.pi / 2)
        b_rot = QuantumState(n, 1j * b.amplitudes)
        ov = swap_overlaps(U, a, b_rot)
        d = distinguish_bias(hadamard_spec(U, optimal_theta(ov)), psi_i, phi_i)
        assert abs(d.bias - ov.bias) <= 1e-10


def test_ancilla_return_examples():
    clean = ancilla_return_check(Circuit(1, 0, (x(0),)), product_state("0"), product_state("1"))
    assert clean.ok and clean.residual == 0
    dirty = ancilla_return_check(Circuit(1, 1, (cnot(0, 1),)), product_state("+"),
                                 product_state("-"))
    assert not dirty.ok and math.isclose(dirty.residual, 0.5, abs_tol=1e-12)


def test_swapper_from_clean_distinguisher_returns_ancillas():
    rng = np.random.default_rng(5)
    xs, ys, U = perfect_swap_instance(random_circuit(3, 20, rng))
    spec = hadamard_spec(U)
    sw = build_swapper(spec)
    assert sw.n_ancillas == 1
    assert ancilla_return_check(sw, xs, ys).ok


def test_dirty_ancilla_loses_bias():
    U = Circuit(1, 1, (x(0), cnot(0, 1)))
    xs, ys = product_state("0"), product_state("1")
    chk = ancilla_return_check(U, xs, ys)
    ov = swap_overlaps(U, xs, ys)
    d = distinguish_bias(hadamard_spec(U, optimal_theta(ov)), *conjugate_pair(xs, ys))
    assert not chk.ok
    assert d.bias < chk.traced_bias
    assert d.bias < swap_overlaps(Circuit(1, 0, (x(0),)), xs, ys).bias


def test_spec_validation():
    with pytest.raises(CircuitError):
        DistinguisherSpec(Circuit(1, 0, ()), 1, 0)
    with pytest.raises(CircuitError):
        DistinguisherSpec(Circuit(1, 0, ()), 0, 2)
    with pytest.raises(CircuitError):
        distinguish_bias(DistinguisherSpec(Circuit(2, 0, ()), 0, 0), product_state("0"),
                         product_state("1"))
