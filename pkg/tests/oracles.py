"""Independent reference implementations used only by the tests.

These avoid the package's compiled/permutation execution path: every gate is
embedded as a full 2^w x 2^w matrix by Kronecker products and explicit basis
enumeration, and searches enumerate every gate sequence without dedup.
"""

import itertools

import numpy as np

I2 = np.eye(2, dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.diag([1, -1]).astype(complex)
S = np.diag([1, 1j])


def r(phi):
    return np.diag([1, np.exp(1j * phi)])


def one_qubit_base(gate):
    k = gate.kind
    if k == "H":
        return H
    if k == "X":
        return X
    if k == "Z":
        return Z
    if k == "S":
        return S
    if k == "R":
        return r(gate.params[0])
    if k == "U1":
        return np.asarray(gate.params, dtype=complex).reshape(2, 2)
    raise ValueError(k)


def embed_1q(m, q, width):
    ops = [I2] * width
    ops[q] = m
    out = ops[0]
    for o in ops[1:]:
        out = np.kron(out, o)
    return out


def embed_general(local, qubits, width, controls=()):
    """Full matrix of ``local`` acting on ``qubits`` (first = most significant
    local bit), applied only where all ``controls`` are 1."""
    dim = 2 ** width
    out = np.zeros((dim, dim), dtype=complex)
    k = len(qubits)
    for col in range(dim):
        bits = [(col >> (width - 1 - q)) & 1 for q in range(width)]
        if not all(bits[c] for c in controls):
            out[col, col] = 1
            continue
        sub = sum(bits[q] << (k - 1 - i) for i, q in enumerate(qubits))
        for new in range(2 ** k):
            amp = local[new, sub]
            if amp == 0:
                continue
            nb = list(bits)
            for i, q in enumerate(qubits):
                nb[q] = (new >> (k - 1 - i)) & 1
            row = sum(b << (width - 1 - q) for q, b in enumerate(nb))
            out[row, col] += amp
    return out


def gate_matrix(gate, width):
    if gate.kind == "CNOT":
        c, t = gate.targets
        return embed_general(X, (t,), width, (c,) + tuple(gate.controls))
    if gate.kind == "U2":
        return embed_general(np.asarray(gate.params, dtype=complex).reshape(4, 4),
                             gate.targets, width, gate.controls)
    if gate.kind == "DIAG":
        ph = np.asarray(gate.params, dtype=complex)
        return embed_general(np.diag(ph), gate.targets, width, gate.controls)
    base = one_qubit_base(gate)
    if gate.controls:
        return embed_general(base, gate.targets, width, gate.controls)
    return embed_1q(base, gate.targets[0], width)


def circuit_matrix(circuit):
    w = circuit.width
    out = np.eye(2 ** w, dtype=complex)
    for g in circuit.gates:
        out = gate_matrix(g, w) @ out
    return out


def padded(vec, n_anc):
    z = np.zeros(2 ** n_anc, dtype=complex)
    z[0] = 1
    return np.kron(vec, z)


def brute_force_size(x, y, placements, width, max_depth, objective="relative",
                     thr=1 - 1e-9, phase="symmetric"):
    """Smallest k <= max_depth over all |placements|^k sequences, else None."""
    mats = [gate_matrix(g, width) for g in placements]
    vx, vy = x, y

    def score(u):
        if objective == "relative":
            return abs(np.vdot(vy, u @ vx)) ** 2
        total = np.vdot(vx, u @ vy) + np.vdot(vy, u @ vx)
        return total.real / 2 if phase == "exact" else abs(total) / 2

    if score(np.eye(len(vx))) >= thr:
        return 0
    level = [np.eye(len(vx), dtype=complex)]
    for depth in range(1, max_depth + 1):
        nxt = []
        for u in level:
            for m in mats:
                v = m @ u
                if score(v) >= thr:
                    return depth
                nxt.append(v)
        level = nxt
    return None


def controlled_matrix(u):
    d = u.shape[0]
    out = np.eye(2 * d, dtype=complex)
    out[d:, d:] = u
    return out


def all_sequences(n_gates, depth):
    return itertools.product(range(n_gates), repeat=depth)
