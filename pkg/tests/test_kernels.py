import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from necroswap import _pykernels, kernels

BACKENDS = kernels.available_backends()


def test_selected_backend_is_available():
    assert kernels.BACKEND in BACKENDS


def rand_batch(rng, rows, width):
    v = rng.standard_normal((rows, 2 ** width)) + 1j * rng.standard_normal((rows, 2 ** width))
    return np.ascontiguousarray(v / np.linalg.norm(v, axis=1, keepdims=True))


def rand_u(rng, d):
    q, r = np.linalg.qr(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))
    return q * (np.diag(r) / abs(np.diag(r)))


def dense_1q(u, q, width):
    out = np.array([[1]], dtype=complex)
    for k in range(width):
        out = np.kron(out, u if k == q else np.eye(2))
    return out


@pytest.mark.parametrize("name", sorted(BACKENDS))
@settings(max_examples=30, deadline=None)
@given(width=st.integers(1, 6), data=st.data())
def test_apply_1q_matches_dense(name, width, data):
    mod = BACKENDS[name]
    q = data.draw(st.integers(0, width - 1))
    rng = np.random.default_rng(data.draw(st.integers(0, 2 ** 31)))
    states, u = rand_batch(rng, 3, width), rand_u(rng, 2)
    got = mod.apply_1q(states, width, q, u)
    ref = states @ dense_1q(u, q, width).T
    assert np.allclose(got, ref, atol=1e-12)


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_apply_2q_and_controls_agree_across_backends(name):
    mod = BACKENDS[name]
    rng = np.random.default_rng(1)
    width = 5
    states = rand_batch(rng, 4, width)
    u = rand_u(rng, 4)
    for q0, q1 in [(0, 1), (3, 1), (4, 0)]:
        ref = _pykernels.apply_2q(states, width, q0, q1, u)
        assert np.allclose(mod.apply_2q(states, width, q0, q1, u), ref, atol=1e-14)
    mask = 1 << (width - 1 - 2)
    ref = _pykernels.apply_1q(states, width, 0, u[:2, :2] / np.linalg.norm(u[:2, 0]), mask)
    got = mod.apply_1q(states, width, 0, u[:2, :2] / np.linalg.norm(u[:2, 0]), mask)
    assert np.allclose(got, ref, atol=1e-14)


def test_backends_agree_on_quantize():
    rng = np.random.default_rng(2)
    states = rand_batch(rng, 50, 4) * np.exp(1j * rng.uniform(0, 6, (50, 1)))
    states = np.ascontiguousarray(states)
    outs = [BACKENDS[n].canonical_quantize(states, 1e-12) for n in sorted(BACKENDS)]
    for canon, keys in outs[1:]:
        assert np.allclose(canon, outs[0][0], atol=1e-15)
        assert np.max(np.abs(keys - outs[0][1])) <= 1


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_quantize_phase_invariance(name):
    mod = BACKENDS[name]
    rng = np.random.default_rng(3)
    base = rand_batch(rng, 20, 3)
    rotated = np.ascontiguousarray(base * np.exp(1j * rng.uniform(0, 6, (20, 1))))
    c1, _ = mod.canonical_quantize(base, 1e-9)
    c2, _ = mod.canonical_quantize(rotated, 1e-9)
    assert np.allclose(c1, c2, atol=1e-12)
    _, k_exact = mod.canonical_quantize(rotated, 1e-9, False)
    _, k_base = mod.canonical_quantize(base, 1e-9, False)
    assert not np.array_equal(k_exact, k_base)
