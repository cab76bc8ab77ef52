"""Dense complex linear algebra for small qubit registers.

Matrices and state vectors are plain complex numpy arrays. Qubit 0 is the
leftmost (most significant) tensor factor throughout: basis index b of a
2^n-dimensional space spells the bitstring x0 x1 ... x_{n-1} with x0 as the
high bit.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

DEFAULT_MAX_QUBITS = 8


class DimensionError(ValueError):
    """Raised when operand shapes are incompatible."""


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def basis_state(index: int, dim: int) -> np.ndarray:
    """Computational basis vector |index> in a dim-dimensional register."""
    if not 0 <= index < dim:
        raise DimensionError(f"basis index {index} out of range for dim {dim}")
    s = np.zeros(dim, dtype=complex)
    s[index] = 1.0
    return s


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product a @ b with an explicit shape check."""
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"matmul shape mismatch: {a.shape} @ {b.shape}")
    return a @ b


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor (Kronecker) product a ⊗ b."""
    return np.kron(a, b)


def frobenius_distance(a: np.ndarray, b: np.ndarray) -> float:
    """sqrt(tr[(a-b)^dag (a-b)]), the entrywise L2 distance."""
    if a.shape != b.shape:
        raise DimensionError(f"frobenius_distance shape mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def is_unitary(u: np.ndarray, tol: float = 1e-10) -> bool:
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= tol)


def apply(u: np.ndarray, state: np.ndarray) -> np.ndarray:
    """Apply a unitary to a state vector; the result keeps norm 1."""
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise DimensionError(f"operator must be square, got {u.shape}")
    if u.shape[1] != state.shape[0]:
        raise DimensionError(f"apply shape mismatch: {u.shape} on {state.shape}")
    return u @ state


def n_qubits_of(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim <= 0 or 2**n != dim:
        raise DimensionError(f"dimension {dim} is not a power of two")
    return n


@lru_cache(maxsize=None)
def _embed_pattern(wires: tuple[int, ...], n_qubits: int) -> tuple[np.ndarray, np.ndarray]:
    """Gather pattern for lifting a gate matrix M on `wires` to the register.

    The embedded operator has E[i, j] = M[g(i), g(j)] when i and j agree on
    every non-wire bit and 0 otherwise, where g(b) extracts the wire bits of
    basis index b in wire order. Returns (flat index into M, zero mask).
    """
    dim = 2**n_qubits
    w = len(wires)
    b = np.arange(dim)
    gbits = np.zeros(dim, dtype=np.intp)
    rest = np.zeros(dim, dtype=np.intp)
    for pos, q in enumerate(wires):
        gbits |= ((b >> (n_qubits - 1 - q)) & 1) << (w - 1 - pos)
    shift = 0
    for q in range(n_qubits - 1, -1, -1):
        if q in wires:
            continue
        rest |= ((b >> (n_qubits - 1 - q)) & 1) << shift
        shift += 1
    idx = gbits[:, None] * (2**w) + gbits[None, :]
    mask = rest[:, None] == rest[None, :]
    return idx, mask


def embed(gate_matrix: np.ndarray, wires: tuple[int, ...] | list[int], n_qubits: int,
          max_qubits: int = DEFAULT_MAX_QUBITS) -> np.ndarray:
    """Lift a gate on |wires| qubits to the full 2^n register.

    Acts as ``gate_matrix`` on the listed wires (in order) and as identity on
    the rest. Non-adjacent wires are handled by basis-index permutation, so
    the result is exact for any wire placement.
    """
    wires = tuple(wires)
    w = len(wires)
    if n_qubits > max_qubits:
        raise DimensionError(f"register of {n_qubits} qubits exceeds cap {max_qubits}")
    if len(set(wires)) != w:
        raise DimensionError(f"duplicate wires in {wires}")
    if any(q < 0 or q >= n_qubits for q in wires):
        raise DimensionError(f"wire out of range in {wires} for {n_qubits} qubits")
    if gate_matrix.shape != (2**w, 2**w):
        raise DimensionError(
            f"gate on {w} wires must be {2**w}x{2**w}, got {gate_matrix.shape}")

    idx, mask = _embed_pattern(wires, n_qubits)
    out = gate_matrix.reshape(-1)[idx]
    out[~mask] = 0.0
    return out
