"""Single-query circuit model: the sandwich ``B (1_a ⊗ 1_2 ⊗ U) A`` and control-U.

Composite basis ordering is ancilla ⊗ control ⊗ target. The ancilla is always
prepared in ``|0>``, so the isometry realized by a sandwich is the first
``2d`` columns of the full composite operator.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    as_matrix,
    as_state,
    direct_sum,
    identity,
    is_unitary,
    state_overlap,
    unitarity_residual,
)


@dataclass(frozen=True)
class BlackboxGate:
    """A ``d x d`` unitary used only through queries.

    ``known_eigenpair`` optionally carries ``(eigvec, eigval)`` metadata for
    constructions that need one eigenvector of the gate.
    """

    U: np.ndarray
    known_eigenpair: tuple[np.ndarray, complex] | None = None
    label: str = ""

    def __post_init__(self):
        u = as_matrix(self.U)
        if u.shape[0] != u.shape[1]:
            raise ValueError(f"blackbox gate must be square, got {u.shape}")
        if not is_unitary(u, DEFAULT_TOL):
            raise ValueError(f"blackbox gate is not unitary (residual {unitarity_residual(u):.3e})")
        object.__setattr__(self, "U", u)
        if self.known_eigenpair is not None:
            vec, val = self.known_eigenpair
            vec = as_state(vec)
            val = complex(val)
            if vec.shape[0] != u.shape[0]:
                raise ValueError("eigenvector dimension does not match the gate")
            if abs(abs(val) - 1.0) > 1e-8:
                raise ValueError(f"eigenvalue {val!r} is not unit-modulus")
            res = np.linalg.norm(u @ vec - val * vec)
            if res > 1e-8:
                raise ValueError(f"declared eigenpair is invalid (residual {res:.3e})")
            object.__setattr__(self, "known_eigenpair", (vec, val))

    @property
    def dim(self) -> int:
        return self.U.shape[0]

    def with_phase(self, phi: float) -> "BlackboxGate":
        pair = None
        if self.known_eigenpair is not None:
            pair = (self.known_eigenpair[0], self.known_eigenpair[1] * np.exp(1j * phi))
        return BlackboxGate(np.exp(1j * phi) * self.U, pair, self.label)


def gate_matrix(U) -> np.ndarray:
    if isinstance(U, BlackboxGate):
        return U.U
    return as_matrix(U)


@dataclass(frozen=True)
class CircuitSandwich:
    """Most general one-query circuit: ``B (1_a ⊗ 1_2 ⊗ U) A`` with ancilla in ``|0>``."""

    a: int
    d: int
    A: np.ndarray = field(repr=False)
    B: np.ndarray = field(repr=False)

    def __post_init__(self):
        n = self.a * 2 * self.d
        if self.a < 1 or self.d < 1:
            raise ValueError("ancilla and target dimensions must be positive")
        for name in ("A", "B"):
            m = as_matrix(getattr(self, name))
            if m.shape != (n, n):
                raise ValueError(f"{name} must be {n}x{n}, got {m.shape}")
            if not is_unitary(m, DEFAULT_TOL):
                raise ValueError(f"{name} is not unitary (residual {unitarity_residual(m):.3e})")
            object.__setattr__(self, name, m)

    @property
    def n(self) -> int:
        return self.a * 2 * self.d

    @classmethod
    def identity(cls, a: int, d: int) -> "CircuitSandwich":
        n = a * 2 * d
        return cls(a, d, identity(n), identity(n))


def control_u(U) -> np.ndarray:
    """Return ``1_d ⊕ U``: applies ``U`` to the target iff the control is ``|1>``."""
    u = gate_matrix(U)
    return direct_sum(identity(u.shape[0]), u)


def known_unitary_sandwich(U0, a: int = 1) -> CircuitSandwich:
    """Sandwich that controls one specific, known ``U0``.

    ``A = 1`` and ``B = 1_a ⊗ control_u(U0) (1_2 ⊗ U0^dagger)``, so querying
    with ``U0`` itself gives ``|0>_a ⊗ control_u(U0)``.
    """
    u0 = gate_matrix(U0)
    d = u0.shape[0]
    b = control_u(u0) @ np.kron(identity(2), u0.conj().T)
    return CircuitSandwich(a, d, identity(2 * a * d), np.kron(identity(a), b))


def apply_query(A: np.ndarray, B: np.ndarray, u: np.ndarray, a: int, d: int) -> np.ndarray:
    """Isometry ``B (1_a ⊗ 1_2 ⊗ u) A (|0>_a ⊗ ·)`` for raw matrices; no validation."""
    cols = A[:, : 2 * d].reshape(2 * a, d, 2 * d)
    mid = np.einsum("ij,kjl->kil", u, cols).reshape(2 * a * d, 2 * d)
    return B @ mid


def sandwich_operator(S: CircuitSandwich, U) -> np.ndarray:
    """Return the ``(2ad) x (2d)`` isometry realized by ``S`` when queried with ``U``."""
    u = gate_matrix(U)
    if u.shape != (S.d, S.d):
        raise ValueError(f"gate has dimension {u.shape[0]}, sandwich expects {S.d}")
    return apply_query(S.A, S.B, u, S.a, S.d)


def reduced_channel_kraus(S: CircuitSandwich, U) -> list[np.ndarray]:
    """Kraus operators ``(<k|_a ⊗ 1_2d) W(U)`` obtained by tracing out the ancilla."""
    w = sandwich_operator(S, U)
    m = 2 * S.d
    return [w[k * m : (k + 1) * m, :] for k in range(S.a)]


def global_phase_equivalent(u, v, tol: float = DEFAULT_TOL) -> bool:
    return abs(state_overlap(u, v)) >= 1.0 - tol
