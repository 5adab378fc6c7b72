"""Numpy implementations of the batched state kernels.

Every kernel takes a C-contiguous ``(rows, 2**width)`` complex128 array, one
state vector per row, and returns a new array. Qubit 0 is the most significant
bit of the basis index.
"""

import numpy as np

BACKEND = "python"


def _controlled_rows(dim, ctrl_mask):
    if not ctrl_mask:
        return None
    idx = np.arange(dim)
    return (idx & ctrl_mask) == ctrl_mask


def apply_1q(states, width, qubit, u, ctrl_mask=0):
    """Apply the 2x2 matrix ``u`` to ``qubit`` of every row.

    Only basis indices whose bits in ``ctrl_mask`` are all set are touched.
    """
    rows, dim = states.shape
    lo = 1 << (width - 1 - qubit)
    view = states.reshape(rows, dim // (2 * lo), 2, lo)
    a = view[:, :, 0, :]
    b = view[:, :, 1, :]
    out = np.empty_like(view)
    out[:, :, 0, :] = u[0, 0] * a + u[0, 1] * b
    out[:, :, 1, :] = u[1, 0] * a + u[1, 1] * b
    out = out.reshape(rows, dim)
    mask = _controlled_rows(dim, ctrl_mask)
    if mask is not None:
        out[:, ~mask] = states[:, ~mask]
    return out


def apply_2q(states, width, q0, q1, u, ctrl_mask=0):
    """Apply the 4x4 matrix ``u`` to qubits ``(q0, q1)``; ``q0`` is the high local bit."""
    rows, dim = states.shape
    b0 = 1 << (width - 1 - q0)
    b1 = 1 << (width - 1 - q1)
    idx = np.arange(dim)
    base = idx[(idx & (b0 | b1)) == 0]
    if ctrl_mask:
        base = base[(base & ctrl_mask) == ctrl_mask]
    cols = np.stack([base, base | b1, base | b0, base | b0 | b1])
    block = states[:, cols]  # (rows, 4, len(base))
    out = states.copy()
    out[:, cols] = np.einsum("ij,rjk->rik", u, block)
    return out


def canonical_quantize(states, tol, fix_phase=True, threshold=1e-9):
    """Return (canonical states, integer keys) for rows of ``states``.

    With ``fix_phase`` each row is multiplied by the conjugate phase of its first
    amplitude above ``threshold`` so that amplitude becomes real positive. Keys
    are the real and imaginary parts rounded to multiples of ``tol``.
    """
    rows = states.shape[0]
    if fix_phase:
        big = np.abs(states) > threshold
        first = np.argmax(big, axis=1)
        lead = states[np.arange(rows), first]
        mod = np.abs(lead)
        mod[mod == 0] = 1.0
        states = states * (np.conj(lead) / mod)[:, None]
    scaled = np.empty((rows, 2 * states.shape[1]))
    scaled[:, 0::2] = states.real
    scaled[:, 1::2] = states.imag
    keys = np.rint(scaled / tol).astype(np.int64)
    return np.ascontiguousarray(states), keys
