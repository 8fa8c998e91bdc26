"""Circuits that do control a gate: the polarization interferometer, the
``1_d' ⊕ U`` extension, eigenstate-assisted control, and the classical
permutation circuit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import BlackboxGate, control_u, gate_matrix
from .linalg import as_matrix, as_state, basis_state, direct_sum, identity

# interferometer registers: polarization (H, V) ⊗ path (r, b) ⊗ internal
POL_H, POL_V = 0, 1
PATH_R, PATH_B = 0, 1
PATH_TOL = 1e-12

_FLIP = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_P0 = np.diag([1, 0]).astype(np.complex128)
_P1 = np.diag([0, 1]).astype(np.complex128)


@dataclass(frozen=True)
class PhotonState:
    """Single-photon state on polarization ⊗ path ⊗ internal."""

    internal_dim: int
    amplitudes: np.ndarray

    def __post_init__(self):
        v = as_state(self.amplitudes)
        if v.shape[0] != 4 * self.internal_dim:
            raise ValueError("photon state must have 2 * 2 * internal_dim amplitudes")
        object.__setattr__(self, "amplitudes", v)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(2, 2, self.internal_dim)


def pbs_matrix(d: int) -> np.ndarray:
    """Polarizing beam splitter: ``|V>`` switches path, ``|H>`` keeps it."""
    return np.kron(np.kron(_P0, identity(2)) + np.kron(_P1, _FLIP), identity(d))


def blackbox_stage_matrix(U) -> np.ndarray:
    """Device acting on path ⊗ internal: identity on ``|r>``, ``U`` on ``|b>``."""
    u = gate_matrix(U)
    d = u.shape[0]
    return np.kron(_P0, identity(d)) + np.kron(_P1, u)


def propagate(U, photon: PhotonState) -> PhotonState:
    """Send a photon through PBS, blackbox stage, PBS."""
    u = gate_matrix(U)
    d = u.shape[0]
    if photon.internal_dim != d:
        raise ValueError("internal dimension does not match the gate")
    pbs = pbs_matrix(d)
    stage = np.kron(identity(2), blackbox_stage_matrix(u))
    return PhotonState(d, pbs @ (stage @ (pbs @ photon.amplitudes)))


def interferometer_apply(U, alpha: complex, beta: complex, psi) -> np.ndarray:
    """Output ``alpha|H>psi + beta|V>U psi`` on polarization ⊗ internal.

    The photon enters on the red path; the path register is checked to have
    returned to ``|r>`` before it is discarded.
    """
    u = gate_matrix(U)
    d = u.shape[0]
    psi = as_state(psi)
    if psi.shape[0] != d:
        raise ValueError(f"internal state has dim {psi.shape[0]}, gate has dim {d}")
    if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1.0) > 1e-10:
        raise ValueError("control amplitudes must satisfy |alpha|^2 + |beta|^2 = 1")
    pol = np.array([alpha, beta], dtype=np.complex128)
    photon = PhotonState(d, np.kron(np.kron(pol, basis_state(2, PATH_R)), psi))
    out = propagate(u, photon).tensor()
    leak = float(np.linalg.norm(out[:, PATH_B, :]))
    if leak > PATH_TOL:
        raise RuntimeError(f"photon left on the blue path (amplitude {leak:.3e})")
    return out[:, PATH_R, :].reshape(-1)


def interferometer_operator(U) -> tuple[np.ndarray, float]:
    """Induced map on polarization ⊗ internal and the worst path leak over a basis."""
    u = gate_matrix(U)
    d = u.shape[0]
    full = pbs_matrix(d) @ np.kron(identity(2), blackbox_stage_matrix(u)) @ pbs_matrix(d)
    t = full.reshape(2, 2, d, 2, 2, d)[:, :, :, :, PATH_R, :]
    op = t[:, PATH_R].reshape(2 * d, 2 * d)
    leak = float(np.abs(t[:, PATH_B]).max())
    return op, leak


def extend(U, d_prime: int) -> np.ndarray:
    """Subspace extension ``1_{d'} ⊕ U``."""
    u = gate_matrix(U)
    if d_prime < 0:
        raise ValueError("d_prime must be nonnegative")
    if d_prime == 0:
        return u.copy()
    return direct_sum(identity(d_prime), u)


def _swap(m: int) -> np.ndarray:
    s = np.zeros((m * m, m * m), dtype=np.complex128)
    for i in range(m):
        for j in range(m):
            s[j * m + i, i * m + j] = 1.0
    return s


def kitaev_control(V: BlackboxGate) -> np.ndarray:
    """Control a gate through a known eigenpair ``(e, lam)``.

    Returns the unitary on control ⊗ main ⊗ aux (dims ``2, m, m``) that
    swaps main and aux when the control is ``|1>``, queries ``V`` once on
    aux, swaps back, and multiplies the control-``|0>`` sector by
    ``conj(lam)``. With aux prepared in ``|e>`` it acts as ``control_u(V)``
    on control ⊗ main.
    """
    if not isinstance(V, BlackboxGate) or V.known_eigenpair is None:
        raise ValueError("kitaev_control needs a BlackboxGate with a known eigenpair")
    m = V.dim
    _, lam = V.known_eigenpair
    cswap = np.kron(_P0, identity(m * m)) + np.kron(_P1, _swap(m))
    query = np.kron(identity(2 * m), V.U)
    fix = np.kron(np.diag([np.conj(lam), 1.0]), identity(m * m))
    return fix @ cswap @ query @ cswap


def kitaev_induced(V: BlackboxGate) -> tuple[np.ndarray, float]:
    """Operator induced on control ⊗ main with aux in ``|e>``, and the aux leak.

    The leak is ``||K (1 ⊗ |e>) - induced ⊗ |e>||_F``.
    """
    k = kitaev_control(V)
    m = V.dim
    e = V.known_eigenpair[0]
    iso = k @ np.kron(identity(2 * m), e.reshape(m, 1))
    t = iso.reshape(2 * m, m, 2 * m)
    induced = np.einsum("a,iaj->ij", e.conj(), t)
    leak = float(np.linalg.norm(iso - np.kron(induced, e.reshape(m, 1))))
    return induced, leak


def map_overlap(target, op) -> float:
    """``|Tr(target^dagger op)| / dim``; 1 iff equal up to a global phase (for unitaries)."""
    target = as_matrix(target)
    return float(abs(np.trace(target.conj().T @ as_matrix(op))) / target.shape[0])


@dataclass(frozen=True)
class PermutationGate:
    U_cl: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.U_cl)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("permutation gate must be square")
        ok = np.isin(m, (0, 1)).all() and (m.sum(axis=0) == 1).all() and (m.sum(axis=1) == 1).all()
        if not ok:
            raise ValueError("not a permutation matrix")
        object.__setattr__(self, "U_cl", m.astype(np.complex128))

    @property
    def dim(self) -> int:
        return self.U_cl.shape[0]

    @classmethod
    def from_perm(cls, perm) -> "PermutationGate":
        d = len(perm)
        m = np.zeros((d, d))
        m[list(perm), range(d)] = 1
        return cls(m)

    def __call__(self, x: int) -> int:
        return int(np.argmax(self.U_cl[:, x].real))


def classical_control(U_cl: PermutationGate, c: int, x: int) -> tuple[int, int]:
    """Trace the three-wire classical circuit on basis labels.

    Wires are (control, middle, bottom) with the bottom wire starting at 0.
    Returns ``(out, garbage)`` = (bottom, middle).
    """
    if not isinstance(U_cl, PermutationGate):
        U_cl = PermutationGate(U_cl)
    d = U_cl.dim
    if c not in (0, 1) or not 0 <= x < d:
        raise ValueError("inputs must be classical basis labels")
    middle, bottom = x, 0
    if c == 0:
        bottom = (bottom + middle) % d
    middle = U_cl(middle)
    if c == 1:
        bottom = (bottom + middle) % d
    return bottom, middle


def clone_gate(d: int) -> np.ndarray:
    """Modular-addition CNOT ``|x, y> -> |x, y + x mod d>``."""
    g = np.zeros((d * d, d * d), dtype=np.complex128)
    for x in range(d):
        for y in range(d):
            g[x * d + (y + x) % d, x * d + y] = 1.0
    return g


def classical_control_circuit(U_cl: PermutationGate) -> np.ndarray:
    """Unitary of the classical control circuit on control ⊗ middle ⊗ bottom."""
    if not isinstance(U_cl, PermutationGate):
        U_cl = PermutationGate(U_cl)
    d = U_cl.dim
    dd = identity(d * d)
    clone = clone_gate(d)
    g1 = np.kron(_P0, clone) + np.kron(_P1, dd)
    g2 = np.kron(identity(2), np.kron(U_cl.U_cl, identity(d)))
    g3 = np.kron(_P0, dd) + np.kron(_P1, clone)
    return g3 @ g2 @ g1


def classical_control_quantum(U_cl: PermutationGate, state) -> np.ndarray:
    if not isinstance(U_cl, PermutationGate):
        U_cl = PermutationGate(U_cl)
    state = as_state(state)
    d = U_cl.dim
    if state.shape[0] != 2 * d * d:
        raise ValueError(f"state must have dimension {2 * d * d}")
    return classical_control_circuit(U_cl) @ state


def max_overlap_over_garbage(output, ideal, d: int) -> float:
    """``max_g |<ideal ⊗ g | output>|`` where ``g`` lives on the middle wire.

    ``output`` is ordered control ⊗ middle ⊗ bottom and ``ideal`` is a state on
    control ⊗ bottom. The maximum over unit ``g`` equals the norm of the
    partial contraction.
    """
    t = np.asarray(output).reshape(2, d, d)
    ideal = np.asarray(ideal).reshape(2, d)
    v = np.einsum("cb,cmb->m", ideal.conj(), t)
    return float(np.linalg.norm(v))


def no_cloning_witness(d: int = 2) -> float:
    """Best overlap (over garbage) between the classical circuit and ideal control-X.

    Input: control ``|+>``, middle ``|+>`` (uniform superposition), bottom
    ``|0>``, with ``U_cl`` the cyclic shift.
    """
    shift = PermutationGate.from_perm([(i + 1) % d for i in range(d)])
    plus_c = np.ones(2) / np.sqrt(2)
    psi = np.ones(d) / np.sqrt(d)
    state = np.kron(np.kron(plus_c, psi), basis_state(d, 0))
    out = classical_control_quantum(shift, state)
    ideal = control_u(shift.U_cl) @ np.kron(plus_c, psi)
    return max_overlap_over_garbage(out, ideal, d)
