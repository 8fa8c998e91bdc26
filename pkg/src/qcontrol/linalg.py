"""Dense complex linear algebra shared by every other module.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; states are 1-D
arrays. Residuals are always Frobenius norms.
"""

from __future__ import annotations

import numpy as np

DEFAULT_TOL = 1e-10


def as_matrix(m) -> np.ndarray:
    """Return ``m`` as a finite 2-D complex array."""
    out = np.asarray(m, dtype=np.complex128)
    if out.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {out.shape}")
    if not np.all(np.isfinite(out)):
        raise ValueError("matrix has non-finite entries")
    return out


def as_state(v, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Return ``v`` as a 1-D complex unit vector, rejecting unnormalized input."""
    out = np.asarray(v, dtype=np.complex128).reshape(-1)
    if not np.all(np.isfinite(out)):
        raise ValueError("state has non-finite amplitudes")
    norm = np.linalg.norm(out)
    if abs(norm - 1.0) > tol:
        raise ValueError(f"state is not normalized (norm = {norm!r})")
    return out


def basis_state(dim: int, index: int) -> np.ndarray:
    v = np.zeros(dim, dtype=np.complex128)
    v[index] = 1.0
    return v


def kron(a, b) -> np.ndarray:
    """Kronecker product with row index ``i_a * rows(b) + i_b``."""
    return np.kron(as_matrix(a), as_matrix(b))


def direct_sum(a, b) -> np.ndarray:
    """Block-diagonal ``a ⊕ b`` with ``a`` in the upper-left block."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[0] != a.shape[1] or b.shape[0] != b.shape[1]:
        raise ValueError(f"direct_sum needs square blocks, got {a.shape} and {b.shape}")
    n, m = a.shape[0], b.shape[0]
    out = np.zeros((n + m, n + m), dtype=np.complex128)
    out[:n, :n] = a
    out[n:, n:] = b
    return out


def hermitian_residual(h) -> float:
    h = np.asarray(h)
    return float(np.linalg.norm(h - h.conj().T))


def expi_hermitian(h, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Compute ``exp(iH)`` for Hermitian ``H`` through its eigendecomposition.

    Raises
    ------
    ValueError
        If ``H`` is not Hermitian within ``tol * dim`` (Frobenius norm).
    """
    h = as_matrix(h)
    n = h.shape[0]
    if h.shape != (n, n):
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    res = hermitian_residual(h)
    if res > tol * n:
        raise ValueError(f"matrix is not Hermitian: ||H - H^dagger||_F = {res:.3e}")
    w, v = np.linalg.eigh(0.5 * (h + h.conj().T))
    return (v * np.exp(1j * w)) @ v.conj().T


def unitarity_residual(m) -> float:
    m = np.asarray(m)
    return float(np.linalg.norm(m.conj().T @ m - np.eye(m.shape[1])))


def is_unitary(m, tol: float = DEFAULT_TOL) -> bool:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"is_unitary needs a square matrix, got {m.shape}")
    return unitarity_residual(m) <= tol * m.shape[0]


def identity(d: int) -> np.ndarray:
    return np.eye(d, dtype=np.complex128)


_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
_H = (_X + _Z) / np.sqrt(2)
_S = np.diag([1, 1j]).astype(np.complex128)
_T = np.diag([1, np.exp(1j * np.pi / 4)]).astype(np.complex128)


def standard_gates() -> dict[str, np.ndarray]:
    """Named single-qubit gates; ``H`` is defined as ``(X + Z) / sqrt(2)``."""
    gates = {"I": identity(2), "X": _X, "Y": _Y, "Z": _Z, "H": _H, "S": _S, "T": _T}
    return {k: v.copy() for k, v in gates.items()}


def state_overlap(u, v) -> complex:
    """Return ``<u|v>``."""
    u = as_state(u)
    v = as_state(v)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape[0]} vs {v.shape[0]}")
    return complex(np.vdot(u, v))


def trace_distance_pure(u, v) -> float:
    """``sqrt(1 - |<u|v>|^2)`` for unit vectors.

    Evaluated as ``sqrt(sum_{i<j} |u_i v_j - u_j v_i|^2)`` (Lagrange identity),
    which keeps full relative accuracy when ``u`` and ``v`` nearly coincide.
    """
    state_overlap(u, v)
    u = np.asarray(u, dtype=np.complex128).reshape(-1)
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    wedge = np.outer(u, v) - np.outer(v, u)
    return float(min(1.0, np.sqrt(0.5) * np.linalg.norm(wedge)))


def random_hermitian(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * 0.5 * (g + g.conj().T)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary (QR of a Ginibre matrix with phase fix)."""
    z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_state(n: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)
