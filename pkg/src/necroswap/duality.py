"""Swap <-> distinguish constructions.

A unitary U with a = <y|U|x> and b = <x|U|y> yields, via a controlled-U
interferometer, a measurement telling (x+y)/sqrt2 from (x-y)/sqrt2 with bias
|a+b|/2. Conversely a distinguisher A with bias D gives the swapper A^dag Z A
whose symmetrized overlap is exactly D.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .statevec import (
    Circuit,
    CircuitError,
    QuantumState,
    adjoint,
    controlled,
    h,
    inner_product,
    rphi,
    run_vectors,
    superpose,
    x as xgate,
    z,
)

ORTHO_TOL = 1e-10


@dataclass(frozen=True)
class SwapOverlaps:
    """``a = <y,0|U|x,0>`` and ``b = <x,0|U|y,0>``."""

    a: complex
    b: complex

    @property
    def bias(self):
        return abs(self.a + self.b) / 2

    def to_dict(self):
        return {"a": [self.a.real, self.a.imag], "b": [self.b.real, self.b.imag],
                "bias": self.bias}


@dataclass(frozen=True)
class DistinguisherSpec:
    """Unitary ``circuit`` whose ``flag_qubit`` reads ``accept_on`` for the psi side.

    The circuit acts on ``data_offset`` leading work qubits prepared in |0>,
    followed by the data register. The Hadamard-test layout has one leading control.
    """

    circuit: Circuit
    flag_qubit: int = 0
    accept_on: int = 0
    data_offset: int = 0

    def __post_init__(self):
        if not 0 <= self.flag_qubit < self.circuit.width:
            raise CircuitError(f"flag qubit {self.flag_qubit} outside width "
                               f"{self.circuit.width}")
        if self.accept_on not in (0, 1):
            raise CircuitError("accept_on must be 0 or 1")
        if not 0 <= self.data_offset < self.circuit.n_qubits:
            raise CircuitError("data_offset must leave at least one data qubit")

    @property
    def data_qubits(self):
        return self.circuit.n_qubits - self.data_offset


@dataclass(frozen=True)
class DistinguishReport:
    p_psi: float
    p_phi: float

    @property
    def bias(self):
        return self.p_psi - self.p_phi

    def to_dict(self):
        return {"p_psi": self.p_psi, "p_phi": self.p_phi, "bias": self.bias}


def _check_orthogonal(x, y, what="x, y"):
    ov = inner_product(x, y)
    if abs(ov) > ORTHO_TOL:
        raise CircuitError(f"{what} are not orthogonal (|overlap| = {abs(ov):.3g})")


def _outputs(circuit, *states):
    rows = np.stack([st.padded(circuit.n_ancillas) for st in states])
    return run_vectors(rows, circuit)


def swap_overlaps(U, x, y):
    """Ancilla-projected swap overlaps of ``U`` on orthogonal ``x``, ``y``."""
    if x.n_qubits != U.n_qubits or y.n_qubits != U.n_qubits:
        raise CircuitError("state width does not match the circuit")
    _check_orthogonal(x, y)
    ux, uy = _outputs(U, x, y)
    px = x.padded(U.n_ancillas)
    py = y.padded(U.n_ancillas)
    return SwapOverlaps(complex(np.vdot(py, ux)), complex(np.vdot(px, uy)))


def optimal_theta(overlaps, tol=1e-15):
    """Phase making ``e^{i theta}(a+b)`` real and non-negative (0 when a+b = 0)."""
    total = overlaps.a + overlaps.b
    if abs(total) <= tol:
        return 0.0
    return -math.atan2(total.imag, total.real) + 0.0  # no negative zero


def build_distinguisher(U, theta=0.0):
    """Hadamard-test circuit: H and a phase on control 0, controlled-U, H.

    Control reading 0 means "psi". The phase gate is omitted when theta is 0.
    """
    cu = controlled(U)
    gates = [h(0)]
    if theta != 0.0:
        gates.append(rphi(0, theta))
    gates.extend(cu.gates)
    gates.append(h(0))
    return Circuit(cu.n_qubits, cu.n_ancillas, tuple(gates))


def hadamard_spec(U, theta=0.0):
    """`DistinguisherSpec` for `build_distinguisher` with its control as flag."""
    return DistinguisherSpec(build_distinguisher(U, theta), flag_qubit=0,
                             accept_on=0, data_offset=1)


def flag_probability(spec, state):
    """Exact probability that ``spec`` accepts ``state``."""
    if state.n_qubits != spec.data_qubits:
        raise CircuitError(f"state has {state.n_qubits} qubits, distinguisher "
                           f"expects {spec.data_qubits}")
    c = spec.circuit
    full = state.padded(c.n_ancillas)
    if spec.data_offset:
        lead = np.zeros(2 ** spec.data_offset, dtype=complex)
        lead[0] = 1.0
        full = np.kron(lead, full)
    out = run_vectors(full, c)[0]
    bits = (np.arange(out.size) >> (c.width - 1 - spec.flag_qubit)) & 1
    return float(np.sum(np.abs(out[bits == spec.accept_on]) ** 2))


def _as_spec(spec_or_circuit, psi):
    if isinstance(spec_or_circuit, DistinguisherSpec):
        return spec_or_circuit
    c = spec_or_circuit
    offset = c.n_qubits - psi.n_qubits
    if offset < 0:
        raise CircuitError("state is wider than the distinguisher")
    return DistinguisherSpec(c, 0, 0, offset)


def distinguish_bias(spec, psi, phi):
    """Acceptance probabilities on ``psi`` and ``phi`` and their difference.

    A bare circuit is read as flag 0, accept on 0, with any extra leading
    qubits prepared in |0>.
    """
    spec = _as_spec(spec, psi)
    if psi.n_qubits != phi.n_qubits:
        raise CircuitError("psi and phi differ in width")
    _check_orthogonal(psi, phi, "psi, phi")
    return DistinguishReport(flag_probability(spec, psi), flag_probability(spec, phi))


def build_swapper(spec, include_z=True):
    """A, then Z on the flag, then A^dag, as one circuit on the data register.

    Leading work qubits of ``spec`` become trailing ancillas so the swapper acts
    on data states directly. ``include_z=False`` drops the Z (negative control).
    """
    A = spec.circuit
    k, n = spec.data_offset, spec.data_qubits

    def relabel(q):
        if q < k:
            return n + q
        if q < k + n:
            return q - k
        return q

    body = list(A.gates)
    if include_z:
        body.append(z(spec.flag_qubit))
    body.extend(adjoint(A).gates)
    gates = tuple(g.remap(relabel) for g in body)
    return Circuit(n, A.n_ancillas + k, gates)


@dataclass(frozen=True)
class AncillaCheck:
    ok: bool
    residual: float
    # Data-level overlap magnitudes with the ancillas traced out.
    a_traced: float
    b_traced: float

    @property
    def traced_bias(self):
        return (self.a_traced + self.b_traced) / 2


def ancilla_return_check(U, x, y, tol=1e-9):
    """How far ``U`` leaves its ancillas from |0...0> on ``x`` and ``y``."""
    if x.n_qubits != U.n_qubits or y.n_qubits != U.n_qubits:
        raise CircuitError("state width does not match the circuit")
    ux, uy = _outputs(U, x, y)
    na = U.n_ancillas
    ux = ux.reshape(-1, 2 ** na)
    uy = uy.reshape(-1, 2 ** na)
    w = min(float(np.sum(np.abs(ux[:, 0]) ** 2)), float(np.sum(np.abs(uy[:, 0]) ** 2)))
    residual = max(0.0, 1.0 - w)
    # (<y| ⊗ I) U|x,0> is a vector over ancilla states; its norm ignores them
    a_tr = float(np.linalg.norm(y.amplitudes.conj() @ ux))
    b_tr = float(np.linalg.norm(x.amplitudes.conj() @ uy))
    return AncillaCheck(residual < tol, residual, a_tr, b_tr)


def conjugate_pair(x, y, alpha=0.0):
    """(psi, phi) = superpositions of x, y with relative phase alpha and alpha+pi."""
    return superpose(x, y, alpha), superpose(x, y, alpha + math.pi)


def perfect_swap_instance(V):
    """x = V|0...0>, y = V|10...0>, U = V X_0 V^dag (an exact swapper)."""
    n = V.n_qubits
    zero = np.zeros(2 ** n, dtype=complex)
    zero[0] = 1
    one = np.zeros(2 ** n, dtype=complex)
    one[1 << (n - 1)] = 1
    if V.n_ancillas:
        raise CircuitError("V must be ancilla-free")
    vx, vy = run_vectors(np.stack([zero, one]), V)
    U = adjoint(V).append(xgate(0)).then(V)
    return QuantumState(n, vx), QuantumState(n, vy), U
