"""Dense state vectors, gates and circuits.

Qubit 0 is the most significant bit of a basis index, so wires read top to
bottom match the usual circuit diagrams. Ancillas are appended after the data
qubits and start in |0>.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import kernels

NORM_TOL = 1e-10
UNITARY_TOL = 1e-10
DEFAULT_MAX_QUBITS = 24

_SQRT1_2 = 1 / math.sqrt(2)

_FIXED = {
    "H": np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT1_2,
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "CNOT": np.array([[0, 1], [1, 0]], dtype=complex),  # acts on the target
}
_ARITY = {"H": 1, "X": 1, "Z": 1, "S": 1, "R": 1, "U1": 1, "CNOT": 2, "U2": 2}
KINDS = ("H", "X", "Z", "S", "R", "CNOT", "U1", "U2", "DIAG")


class CircuitError(ValueError):
    """Invalid gate, circuit or state."""


def max_qubits():
    """Width cap, overridable with ``NECROSWAP_MAX_QUBITS``."""
    raw = os.environ.get("NECROSWAP_MAX_QUBITS")
    return int(raw) if raw else DEFAULT_MAX_QUBITS


def _is_unitary(m, tol=UNITARY_TOL):
    return np.allclose(m.conj().T @ m, np.eye(m.shape[0]), atol=tol, rtol=0)


@dataclass(frozen=True)
class Gate:
    """A gate placement.

    ``params`` holds the angle for ``R``, the row-major matrix entries for
    ``U1``/``U2`` and the diagonal for ``DIAG``. ``targets`` is ``(control,
    target)`` for ``CNOT``. Extra ``controls`` condition the whole gate on those
    qubits being |1>.
    """

    kind: str
    targets: tuple[int, ...]
    params: tuple = ()
    controls: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        object.__setattr__(self, "controls", tuple(int(c) for c in self.controls))
        object.__setattr__(self, "params", tuple(self.params))
        if self.kind not in KINDS:
            raise CircuitError(f"unknown gate kind {self.kind!r}")
        if self.kind == "DIAG":
            if not self.targets or len(self.params) != 2 ** len(self.targets):
                raise CircuitError("DIAG needs 2**len(targets) phases")
            if not np.allclose(np.abs(np.asarray(self.params, dtype=complex)), 1.0,
                               atol=UNITARY_TOL, rtol=0):
                raise CircuitError("DIAG entries must have modulus 1")
        elif len(self.targets) != _ARITY[self.kind]:
            raise CircuitError(f"{self.kind} acts on {_ARITY[self.kind]} qubit(s)")
        qubits = self.qubits
        if len(set(qubits)) != len(qubits):
            raise CircuitError(f"repeated qubit in {self}")
        if min(qubits) < 0:
            raise CircuitError("negative qubit index")
        if self.kind in ("U1", "U2"):
            m = self.matrix()
            if not _is_unitary(m):
                raise CircuitError(f"{self.kind} matrix is not unitary")
        if self.kind == "R" and len(self.params) != 1:
            raise CircuitError("R takes exactly one angle")

    @property
    def qubits(self):
        return self.controls + self.targets

    def matrix(self):
        """Local unitary on ``targets`` (controls excluded).

        For ``CNOT`` this is the full 4x4 matrix on ``(control, target)``.
        """
        k = self.kind
        if k == "CNOT":
            m = np.eye(4, dtype=complex)
            m[2:, 2:] = _FIXED["X"]
            return m
        if k in _FIXED:
            return _FIXED[k].copy()
        if k == "R":
            return np.diag([1, np.exp(1j * self.params[0])]).astype(complex)
        if k == "U1":
            return np.asarray(self.params, dtype=complex).reshape(2, 2)
        if k == "U2":
            return np.asarray(self.params, dtype=complex).reshape(4, 4)
        return np.diag(np.asarray(self.params, dtype=complex))

    def inverse(self):
        k = self.kind
        if k in ("H", "X", "Z", "CNOT"):
            return self
        if k == "S":
            return Gate("R", self.targets, (-math.pi / 2,), self.controls)
        if k == "R":
            return Gate("R", self.targets, (-self.params[0],), self.controls)
        if k == "DIAG":
            return Gate(k, self.targets, tuple(np.conj(self.params)), self.controls)
        m = self.matrix().conj().T
        return Gate(k, self.targets, tuple(m.ravel()), self.controls)

    def remap(self, mapping):
        """Relabel qubits through ``mapping`` (a callable or a sequence)."""
        f = mapping if callable(mapping) else mapping.__getitem__
        return Gate(self.kind, tuple(f(q) for q in self.targets), self.params,
                    tuple(f(q) for q in self.controls))

    def with_control(self, qubit):
        return Gate(self.kind, self.targets, self.params, (qubit,) + self.controls)

    def __str__(self):
        name = self.kind
        if self.kind == "R":
            name = f"R({self.params[0]:.6g})"
        ctrl = f"C[{','.join(map(str, self.controls))}]" if self.controls else ""
        return f"{ctrl}{name}{list(self.targets)}"

    def to_dict(self):
        d = {"kind": self.kind, "targets": list(self.targets)}
        if self.kind == "R":
            d["params"] = {"phi": float(self.params[0])}
        elif self.kind in ("U1", "U2"):
            n = 2 if self.kind == "U1" else 4
            m = self.matrix()
            d["params"] = {"matrix": [[_c2j(m[i, j]) for j in range(n)] for i in range(n)]}
        elif self.kind == "DIAG":
            d["params"] = {"phases": [_c2j(p) for p in self.params]}
        else:
            d["params"] = {}
        if self.controls:
            d["controls"] = list(self.controls)
        return d

    @classmethod
    def from_dict(cls, d):
        kind = d["kind"]
        p = d.get("params") or {}
        if kind == "R":
            params = (float(p["phi"]),)
        elif kind in ("U1", "U2"):
            params = tuple(_j2c(z) for row in p["matrix"] for z in row)
        elif kind == "DIAG":
            params = tuple(_j2c(z) for z in p["phases"])
        else:
            params = ()
        return cls(kind, tuple(d["targets"]), params, tuple(d.get("controls", ())))


# Gate constructors -------------------------------------------------------

def h(q):
    return Gate("H", (q,))


def x(q):
    return Gate("X", (q,))


def z(q):
    return Gate("Z", (q,))


def s(q):
    return Gate("S", (q,))


def rphi(q, phi):
    """Phase gate |0><0| + e^{i phi}|1><1|."""
    return Gate("R", (q,), (float(phi),))


def cnot(control, target):
    return Gate("CNOT", (control, target))


def unitary1(q, matrix):
    return Gate("U1", (q,), tuple(np.asarray(matrix, dtype=complex).ravel()))


def unitary2(q0, q1, matrix):
    return Gate("U2", (q0, q1), tuple(np.asarray(matrix, dtype=complex).ravel()))


def diag(targets, phases):
    return Gate("DIAG", tuple(targets), tuple(complex(p) for p in phases))


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over ``n_qubits`` data qubits plus ``n_ancillas``."""

    n_qubits: int
    n_ancillas: int = 0
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.n_qubits < 1 or self.n_ancillas < 0:
            raise CircuitError("need n_qubits >= 1 and n_ancillas >= 0")
        if self.width > max_qubits():
            raise CircuitError(f"width {self.width} exceeds cap {max_qubits()}")
        for g in self.gates:
            if max(g.qubits) >= self.width:
                raise CircuitError(f"{g} out of range for width {self.width}")

    @property
    def width(self):
        return self.n_qubits + self.n_ancillas

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def then(self, other):
        """Circuit running ``self`` first, then ``other``."""
        if (other.n_qubits, other.n_ancillas) != (self.n_qubits, self.n_ancillas):
            raise CircuitError("cannot compose circuits of different shapes")
        return Circuit(self.n_qubits, self.n_ancillas, self.gates + other.gates)

    def append(self, *gates):
        return Circuit(self.n_qubits, self.n_ancillas, self.gates + tuple(gates))

    def unitary(self):
        """Dense unitary on the full width (small circuits only)."""
        dim = 2 ** self.width
        return run_vectors(np.eye(dim, dtype=complex), self).T

    def to_dict(self):
        return {
            "n_qubits": self.n_qubits,
            "n_ancillas": self.n_ancillas,
            "gates": [g.to_dict() for g in self.gates],
        }

    @classmethod
    def from_dict(cls, d):
        return cls(int(d["n_qubits"]), int(d.get("n_ancillas", 0)),
                   tuple(Gate.from_dict(g) for g in d["gates"]))

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def __str__(self):
        return " ".join(str(g) for g in self.gates) or "I"


# Gate execution ----------------------------------------------------------

def _bit(width, q):
    return 1 << (width - 1 - q)


def compile_gate(gate, width):
    """Lower ``gate`` to a kernel op for a register of ``width`` qubits.

    Returns one of ``("perm", index)``, ``("diag", vector)``,
    ``("1q", qubit, matrix, mask)`` or ``("2q", q0, q1, matrix, mask)``.
    """
    dim = 1 << width
    mask = 0
    for c in gate.controls:
        mask |= _bit(width, c)
    k = gate.kind
    if k in ("X", "CNOT"):
        if k == "CNOT":
            mask |= _bit(width, gate.targets[0])
        flip = _bit(width, gate.targets[-1])
        idx = np.arange(dim)
        on = (idx & mask) == mask
        return ("perm", np.where(on, idx ^ flip, idx))
    if k in ("Z", "S", "R", "DIAG"):
        idx = np.arange(dim)
        if k == "DIAG":
            local = np.zeros(dim, dtype=np.int64)
            for q in gate.targets:
                local = (local << 1) | ((idx >> (width - 1 - q)) & 1)
            d = np.asarray(gate.params, dtype=complex)[local]
        else:
            m = gate.matrix()
            bits = (idx >> (width - 1 - gate.targets[0])) & 1
            d = np.where(bits == 1, m[1, 1], m[0, 0]).astype(complex)
        on = (idx & mask) == mask
        return ("diag", np.where(on, d, 1.0 + 0j))
    if k in ("H", "U1"):
        return ("1q", gate.targets[0], gate.matrix(), mask)
    return ("2q", gate.targets[0], gate.targets[1], gate.matrix(), mask)


def apply_op(op, states, width, kern=None):
    """Apply a compiled op to a ``(rows, 2**width)`` batch."""
    kern = kern or kernels
    tag = op[0]
    if tag == "perm":
        return states[:, op[1]]
    if tag == "diag":
        return states * op[1]
    states = np.ascontiguousarray(states)
    if tag == "1q":
        return kern.apply_1q(states, width, op[1], op[2], op[3])
    return kern.apply_2q(states, width, op[1], op[2], op[3], op[4])


def run_vectors(vectors, circuit, kern=None):
    """Apply ``circuit`` to each row of ``vectors`` (full width, any norm)."""
    states = np.ascontiguousarray(np.atleast_2d(vectors), dtype=complex)
    if states.shape[1] != 2 ** circuit.width:
        raise CircuitError("vector length does not match circuit width")
    for g in circuit.gates:
        states = apply_op(compile_gate(g, circuit.width), states, circuit.width, kern)
    return states


# States ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class QuantumState:
    """Normalized pure state on ``n_qubits`` qubits."""

    n_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).ravel()
        if self.n_qubits < 1 or amps.size != 2 ** self.n_qubits:
            raise CircuitError(f"need 2**{self.n_qubits} amplitudes, got {amps.size}")
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise CircuitError(f"state not normalized (norm^2 = {norm2!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_vector(cls, vec, normalize=True):
        v = np.asarray(vec, dtype=complex).ravel()
        n = int(round(math.log2(v.size)))
        if normalize:
            nrm = np.linalg.norm(v)
            if nrm == 0:
                raise CircuitError("zero vector")
            v = v / nrm
        return cls(n, v)

    @property
    def dim(self):
        return self.amplitudes.size

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def tensor(self, other):
        return QuantumState(self.n_qubits + other.n_qubits,
                            np.kron(self.amplitudes, other.amplitudes))

    def with_phase(self, angle):
        return QuantumState(self.n_qubits, np.exp(1j * angle) * self.amplitudes)

    def padded(self, n_ancillas):
        """Amplitudes of ``self ⊗ |0...0>`` on ``n_ancillas`` extra qubits."""
        if n_ancillas == 0:
            return np.array(self.amplitudes)
        out = np.zeros(self.dim << n_ancillas, dtype=complex)
        out[:: 1 << n_ancillas] = self.amplitudes
        return out

    def isclose(self, other, tol=1e-10, up_to_phase=False):
        if self.n_qubits != other.n_qubits:
            return False
        if up_to_phase:
            return abs(abs(inner_product(self, other)) - 1.0) <= tol
        return bool(np.max(np.abs(self.amplitudes - other.amplitudes)) <= tol)

    def to_list(self):
        return [_c2j(a) for a in self.amplitudes]

    @classmethod
    def from_list(cls, pairs):
        return cls.from_vector([_j2c(p) for p in pairs], normalize=False)


_SHORTHAND = {
    "0": (1.0, 0.0),
    "1": (0.0, 1.0),
    "+": (_SQRT1_2, _SQRT1_2),
    "-": (_SQRT1_2, -_SQRT1_2),
    "−": (_SQRT1_2, -_SQRT1_2),
}


def product_state(spec):
    """State from a string over ``0 1 + -``, e.g. ``"1--"``."""
    if not spec:
        raise CircuitError("empty state string")
    v = np.ones(1, dtype=complex)
    for ch in spec:
        if ch not in _SHORTHAND:
            raise CircuitError(f"bad state character {ch!r}")
        v = np.kron(v, np.array(_SHORTHAND[ch], dtype=complex))
    return QuantumState(len(spec), v)


def basis_state(n_qubits, index):
    v = np.zeros(2 ** n_qubits, dtype=complex)
    v[index] = 1.0
    return QuantumState(n_qubits, v)


def zero_state(n_qubits):
    return basis_state(n_qubits, 0)


# Operations --------------------------------------------------------------

def apply_circuit(state, circuit):
    """Run ``circuit`` on ``state ⊗ |0...0>`` and return the full output state."""
    if state.n_qubits != circuit.n_qubits:
        raise CircuitError(f"state has {state.n_qubits} qubits, circuit expects "
                           f"{circuit.n_qubits}")
    out = run_vectors(state.padded(circuit.n_ancillas), circuit)[0]
    return QuantumState(circuit.width, out)


def inner_product(s1, s2):
    """<s1|s2>."""
    if s1.dim != s2.dim:
        raise CircuitError(f"dimension mismatch: {s1.dim} vs {s2.dim}")
    return complex(np.vdot(s1.amplitudes, s2.amplitudes))


def controlled(circuit):
    """Circuit on one extra leading qubit (index 0) controlling every gate."""
    shift = lambda q: q + 1  # noqa: E731
    gates = tuple(g.remap(shift).with_control(0) for g in circuit.gates)
    return Circuit(circuit.n_qubits + 1, circuit.n_ancillas, gates)


def adjoint(circuit):
    return Circuit(circuit.n_qubits, circuit.n_ancillas,
                   tuple(g.inverse() for g in reversed(circuit.gates)))


def haar_vectors(n_qubits, count, rng):
    """``count`` Haar-random vectors as rows, from normalized complex Gaussians."""
    dim = 2 ** n_qubits
    g = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def haar_sample(n_qubits, seed):
    if n_qubits < 1:
        raise CircuitError("n_qubits must be >= 1")
    rng = np.random.default_rng(seed)
    return QuantumState(n_qubits, haar_vectors(n_qubits, 1, rng)[0])


def superpose(x, y, alpha, tol=1e-10):
    """(|x> + e^{i alpha}|y>)/sqrt(2) for orthogonal ``x``, ``y``."""
    ov = inner_product(x, y)
    if abs(ov) > tol:
        raise CircuitError(f"states are not orthogonal (|<x|y>| = {abs(ov):.3g})")
    return QuantumState.from_vector(
        (x.amplitudes + np.exp(1j * alpha) * y.amplitudes) * _SQRT1_2)


def canonical_phase(state, threshold=1e-9):
    """Same state with its first non-negligible amplitude real and positive."""
    amps = state.amplitudes
    big = np.flatnonzero(np.abs(amps) > threshold)
    if big.size == 0:
        raise CircuitError("zero vector has no phase")
    lead = amps[big[0]]
    if lead.imag == 0 and lead.real > 0:
        return state
    out = amps * (np.conj(lead) / abs(lead))
    out[big[0]] = abs(lead)
    return QuantumState(state.n_qubits, out)


def orthogonal_pair(n_qubits, rng):
    """Haar-random ``x`` and a Haar-random ``y`` orthogonalized against it."""
    vx, vy = haar_vectors(n_qubits, 2, rng)
    vy = vy - np.vdot(vx, vy) * vx
    return QuantumState(n_qubits, vx), QuantumState.from_vector(vy)


def random_unitary(dim, rng):
    """Haar-random ``dim x dim`` unitary (QR of a complex Gaussian)."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_circuit(n_qubits, n_gates, rng, n_ancillas=0):
    """Random circuit mixing fixed, parametric and generic gates."""
    width = n_qubits + n_ancillas
    kinds = ["H", "X", "Z", "S", "R", "U1"]
    if width >= 2:
        kinds += ["CNOT", "U2"]
    gates = []
    for _ in range(n_gates):
        k = kinds[rng.integers(len(kinds))]
        if _ARITY[k] == 2:
            q0, q1 = rng.choice(width, size=2, replace=False)
            if k == "CNOT":
                gates.append(cnot(int(q0), int(q1)))
            else:
                gates.append(unitary2(int(q0), int(q1), random_unitary(4, rng)))
            continue
        q = int(rng.integers(width))
        if k == "R":
            gates.append(rphi(q, rng.uniform(0, 2 * math.pi)))
        elif k == "U1":
            gates.append(unitary1(q, random_unitary(2, rng)))
        else:
            gates.append(Gate(k, (q,)))
    return Circuit(n_qubits, n_ancillas, tuple(gates))


# Serialization -----------------------------------------------------------

def _c2j(zv):
    zv = complex(zv)
    return [zv.real, zv.imag]


def _j2c(pair):
    if isinstance(pair, (int, float)):
        return complex(pair)
    re, im = pair
    return complex(re, im)


def state_to_json(state):
    return json.dumps({"n_qubits": state.n_qubits, "amplitudes": state.to_list()})


def state_from_json(text):
    d = json.loads(text)
    if isinstance(d, list):
        return QuantumState.from_list(d)
    st = QuantumState.from_list(d["amplitudes"])
    if "n_qubits" in d and st.n_qubits != int(d["n_qubits"]):
        raise CircuitError("n_qubits does not match amplitude count")
    return st


def load_state(text_or_path):
    """Parse shorthand (``"01+-"``) or read a JSON amplitude file."""
    if all(ch in _SHORTHAND for ch in text_or_path):
        return product_state(text_or_path)
    with open(text_or_path) as fh:
        return state_from_json(fh.read())


def load_circuit(path):
    with open(path) as fh:
        return Circuit.from_json(fh.read())
