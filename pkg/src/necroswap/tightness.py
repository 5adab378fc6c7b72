"""Eight-branch tightness construction and Haar-overlap statistics.

Branch k of the register is |k_bar> = |k> (3 index qubits) tensor |eta_k>
(m inner qubits). For 0 <= b <= a <= 1 and c = 1 - a,

    x = sqrt(a-b) (|0_bar>+|1_bar>+|2_bar>+|3_bar>)/2
        + sqrt(b) (|4_bar>+|5_bar>)/sqrt2 + sqrt(c) |6_bar>
    y = sqrt(a-b) (|0_bar>+i|1_bar>-|2_bar>-i|3_bar>)/2
        + sqrt(b) (|4_bar>-|5_bar>)/sqrt2 + sqrt(c) |7_bar>

and the index-diagonal U = diag(1, i, -1, -i, 1, -1, 1, 1) gives
<y|U|x> = a and <x|U|y> = b. A unitary restricted to phases and damping on
the branches, sum_k beta_k e^{i theta_k} |k_bar><k_bar|, cannot push
|a~ + b~| above a + b.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .duality import SwapOverlaps, swap_overlaps
from .statevec import (
    Circuit,
    CircuitError,
    QuantumState,
    diag,
    haar_vectors,
    x as xgate,
)

INDEX_QUBITS = 3
U_PHASES = (1, 1j, -1, -1j, 1, -1, 1, 1)


@dataclass(frozen=True)
class TightnessParams:
    a: float
    b: float
    c: float | None = None

    def __post_init__(self):
        c = 1.0 - self.a if self.c is None else self.c
        object.__setattr__(self, "c", c)
        if not (0 <= self.b <= self.a <= 1):
            raise CircuitError("need 0 <= b <= a <= 1")
        if abs(self.a + c - 1) > 1e-12:
            raise CircuitError("need a + c = 1")


@dataclass(frozen=True)
class EtaFamily:
    """Eight inner states on ``inner_qubits`` qubits.

    ``mode="basis"`` uses eta_k = |k> (exactly orthonormal, needs m >= 3);
    ``mode="haar"`` draws them from the seed, leaving small overlaps.
    """

    inner_qubits: int
    states: tuple
    seed: int | None = None
    mode: str = "haar"

    @classmethod
    def haar(cls, inner_qubits=4, seed=0):
        vecs = haar_vectors(inner_qubits, 8, np.random.default_rng(seed))
        return cls(inner_qubits, tuple(QuantumState(inner_qubits, v) for v in vecs),
                   seed, "haar")

    @classmethod
    def basis(cls, inner_qubits=3):
        if inner_qubits < 3:
            raise CircuitError("basis mode needs at least 3 inner qubits")
        states = []
        for k in range(8):
            v = np.zeros(2 ** inner_qubits, dtype=complex)
            v[k] = 1
            states.append(QuantumState(inner_qubits, v))
        return cls(inner_qubits, tuple(states), None, "basis")

    def max_overlap(self):
        m = np.array([s.amplitudes for s in self.states])
        g = np.abs(m.conj() @ m.T)
        np.fill_diagonal(g, 0)
        return float(g.max())


@dataclass(frozen=True)
class TightnessInstance:
    params: TightnessParams
    etas: EtaFamily
    x: QuantumState
    y: QuantumState
    U: Circuit

    @property
    def residual_bound(self):
        """Allowance for cross-branch leakage: 8 times the largest eta overlap."""
        return 8 * self.etas.max_overlap()


def _branch_coeffs(p):
    r, s, c = math.sqrt(p.a - p.b), math.sqrt(p.b / 2), math.sqrt(p.c)
    cx = np.array([r / 2] * 4 + [s, s, c, 0], dtype=complex)
    cy = np.array([r / 2 * ph for ph in (1, 1j, -1, -1j)] + [s, -s, 0, c], dtype=complex)
    return cx, cy


def _assemble(coeffs, etas):
    out = np.zeros((8, 2 ** etas.inner_qubits), dtype=complex)
    for k, st in enumerate(etas.states):
        out[k] = coeffs[k] * st.amplitudes
    return out.ravel()


def build_instance(params, etas):
    """States x, y and the index-diagonal U for ``params`` and ``etas``."""
    cx, cy = _branch_coeffs(params)
    n = INDEX_QUBITS + etas.inner_qubits
    xs = QuantumState.from_vector(_assemble(cx, etas), normalize=False)
    ys = QuantumState.from_vector(_assemble(cy, etas), normalize=False)
    U = Circuit(n, 0, (diag((0, 1, 2), U_PHASES),))
    return TightnessInstance(params, etas, xs, ys, U)


def verify_instance(inst):
    """Overlaps (a', b') of the built U, by simulation."""
    return swap_overlaps(inst.U, inst.x, inst.y)


def zero_bias_instance():
    """U with U|x> = -|y>, U|y> = |x> on the (a, b) = (1, 1) states.

    Composes the instance U with an X on the lowest index and inner qubits,
    which exchanges |4_bar> and |5_bar> when eta_k = |k>. Then a + b = 0.
    """
    etas = EtaFamily.basis(3)
    base = build_instance(TightnessParams(1.0, 1.0), etas)
    U = base.U.append(xgate(2), xgate(INDEX_QUBITS + 2))
    return TightnessInstance(base.params, etas, base.x, base.y, U)


@dataclass(frozen=True)
class RestrictedUnitary:
    beta: tuple
    theta: tuple

    def __post_init__(self):
        beta = tuple(float(v) for v in self.beta)
        theta = tuple(float(v) % (2 * math.pi) for v in self.theta)
        if len(beta) != 8 or len(theta) != 8:
            raise CircuitError("need 8 betas and 8 thetas")
        if any(not 0 <= v <= 1 for v in beta):
            raise CircuitError("beta must lie in [0, 1]")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "theta", theta)

    @property
    def diagonal(self):
        return np.asarray(self.beta) * np.exp(1j * np.asarray(self.theta))


def _closed_form(p, d):
    k = np.arange(4)
    mid = p.b / 2 * (d[4] - d[5])
    at = (p.a - p.b) / 4 * np.sum(d[:4] * (-1j) ** k) + mid
    bt = (p.a - p.b) / 4 * np.sum(d[:4] * (1j) ** k) + mid
    return complex(at), complex(bt)


def restricted_overlaps(inst, ru):
    """(a~, b~) for the branch-diagonal unitary ``ru`` (exact diagonal model)."""
    return _closed_form(inst.params, ru.diagonal)


def restricted_overlaps_simulated(inst, ru):
    """Same quantity by applying the diagonal to the states directly."""
    d = np.repeat(ru.diagonal, 2 ** inst.etas.inner_qubits)
    ux = d * inst.x.amplitudes
    uy = d * inst.y.amplitudes
    return complex(np.vdot(inst.y.amplitudes, ux)), complex(np.vdot(inst.x.amplitudes, uy))


@dataclass(frozen=True)
class OptimizeResult:
    max_value: float
    argmax: RestrictedUnitary
    converged: bool


def optimize_restricted_bias(inst, grid=16):
    """Maximize |a~ + b~| over all beta in [0,1]^8, theta in [0,2pi)^8.

    A ``grid``-step phase grid over theta_0, theta_2, theta_4, theta_5 (the
    phases entering the sum) with all beta = 1 seeds an L-BFGS-B refinement
    over all 16 variables.
    """
    p = inst.params
    steps = 2 * math.pi * np.arange(grid) / grid
    t0, t2, t4, t5 = np.meshgrid(steps, steps, steps, steps, indexing="ij")
    e = lambda t: np.exp(1j * t)  # noqa: E731
    # theta_1, theta_3 cancel in a~ + b~; with beta = 1 the sum is closed form
    total = (p.a - p.b) / 2 * (e(t0) - e(t2)) + p.b * (e(t4) - e(t5))
    best = np.unravel_index(np.argmax(np.abs(total)), total.shape)
    theta0 = np.zeros(8)
    theta0[[0, 2, 4, 5]] = [steps[i] for i in best]
    start = np.concatenate([np.ones(8), theta0])

    def neg(v):
        d = v[:8] * np.exp(1j * v[8:])
        at, bt = _closed_form(p, d)
        return -abs(at + bt)

    bounds = [(0.0, 1.0)] * 8 + [(None, None)] * 8
    res = minimize(neg, start, method="L-BFGS-B", bounds=bounds)
    v = res.x if -res.fun >= -neg(start) else start
    ru = RestrictedUnitary(np.clip(v[:8], 0, 1), v[8:])
    at, bt = restricted_overlaps(inst, ru)
    return OptimizeResult(abs(at + bt), ru, bool(res.success))


# Haar statistics ---------------------------------------------------------

def haar_overlap_cdf(N, eps):
    """Pr(|<psi|0...0>| >= eps) = (1 - eps^2)^(N-1) for Haar psi in dimension N."""
    if N < 2 or not 0 <= eps <= 1:
        raise CircuitError("need N >= 2 and 0 <= eps <= 1")
    if eps == 1:
        return 0.0
    return math.exp((N - 1) * math.log1p(-eps * eps))


def haar_overlap_magnitudes(n_qubits, samples, seed, chunk=1 << 14):
    """|<psi|0...0>| for ``samples`` Haar states (Gaussian vectors, normalized)."""
    rng = np.random.default_rng(seed)
    out = np.empty(samples)
    for start in range(0, samples, chunk):
        k = min(chunk, samples - start)
        v = haar_vectors(n_qubits, k, rng)
        out[start:start + k] = np.abs(v[:, 0])
    return out


@dataclass(frozen=True)
class MonteCarloResult:
    fraction: float
    stderr: float
    expected: float
    samples: int

    @property
    def sigmas(self):
        sd = math.sqrt(self.expected * (1 - self.expected) / self.samples)
        return abs(self.fraction - self.expected) / sd if sd > 0 else (
            0.0 if self.fraction == self.expected else math.inf)


def haar_overlap_montecarlo(n_qubits, eps, samples, seed):
    """Fraction of Haar samples with |<psi|0...0>| >= eps, with binomial error."""
    if samples < 1000:
        raise CircuitError("need at least 1000 samples")
    mags = haar_overlap_magnitudes(n_qubits, samples, seed)
    frac = float(np.mean(mags >= eps))
    return MonteCarloResult(frac, math.sqrt(frac * (1 - frac) / samples),
                            haar_overlap_cdf(2 ** n_qubits, eps), samples)


def union_bound_log(g, M, N, eps):
    """log2 of g^M (1-eps^2)^(N-1) and of the looser g^M e^{-eps^2 (N-1)}."""
    if g <= 0 or M < 0 or N < 2 or not 0 < eps < 1:
        raise CircuitError("need g > 0, M >= 0, N >= 2, 0 < eps < 1")
    head = M * math.log2(g)
    exact = head + (N - 1) * math.log1p(-eps * eps) / math.log(2)
    loose = head - eps * eps * (N - 1) / math.log(2)
    return exact, loose


def min_detectable_eps(M, g, N, base=math.e):
    """sqrt(M log(g) / N), with the logarithm in ``base`` (natural by default)."""
    if M <= 0 or g <= 0 or N <= 0:
        raise CircuitError("inputs must be positive")
    return math.sqrt(M * math.log(g, base) / N)


__all__ = [
    "TightnessParams", "EtaFamily", "TightnessInstance", "RestrictedUnitary",
    "build_instance", "verify_instance", "zero_bias_instance", "restricted_overlaps",
    "restricted_overlaps_simulated", "optimize_restricted_bias", "haar_overlap_cdf",
    "haar_overlap_magnitudes", "haar_overlap_montecarlo", "union_bound_log",
    "min_detectable_eps", "SwapOverlaps",
]
