"""Numerical probes of why a single-query circuit cannot control an unknown gate.

Three kinds of quantities live here:

* obstruction residuals for the X, Z, H linearity argument, with a minimizer;
* phase checks: a sandwich is covariant under ``U -> e^{i phi} U`` while the
  ideal control-U is not;
* the phase-optimized process fidelity of a sandwich against control-U, and
  an adversarial search over the sandwich unitaries ``A`` and ``B``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .circuit import (
    BlackboxGate,
    CircuitSandwich,
    apply_query,
    control_u,
    gate_matrix,
    known_unitary_sandwich,
    sandwich_operator,
)
from .linalg import (
    DEFAULT_TOL,
    as_state,
    direct_sum,
    identity,
    random_unitary,
    standard_gates,
    trace_distance_pure,
)
from .optimize import (
    MinimizerConfig,
    SearchReport,
    hermitian_to_params,
    multistart_minimize,
    params_to_hermitian,
    params_to_unitary,
    unitary_to_params,
)

_G = standard_gates()
SQRT2 = np.sqrt(2.0)


# ---------------------------------------------------------------------------
# exact realization and obstruction residuals


def exact_realization_residual(S: CircuitSandwich, U, chi, u: float) -> float:
    """``||W(U) - chi ⊗ (1_d ⊕ e^{iu} U)||_F``; zero iff the sandwich realizes
    control-U exactly with ancilla output ``chi`` and phase ``u``."""
    chi = as_state(chi)
    if chi.shape[0] != S.a:
        raise ValueError(f"ancilla state has dim {chi.shape[0]}, sandwich has a={S.a}")
    w = sandwich_operator(S, U)
    target = np.kron(chi.reshape(-1, 1), control_u(np.exp(1j * u) * gate_matrix(U)))
    return float(np.linalg.norm(w - target))


@dataclass(frozen=True)
class ObstructionPoint:
    """Ancilla states ``|X>, |Z>, |H>`` and phases ``x, z, h``."""

    a: int
    vecX: np.ndarray
    vecZ: np.ndarray
    vecH: np.ndarray
    x: float = 0.0
    z: float = 0.0
    h: float = 0.0

    def __post_init__(self):
        for name in ("vecX", "vecZ", "vecH"):
            v = as_state(getattr(self, name))
            if v.shape[0] != self.a:
                raise ValueError(f"{name} has dim {v.shape[0]}, expected {self.a}")
            object.__setattr__(self, name, v)


def _ctrl(gate: str, phase: float) -> np.ndarray:
    return control_u(np.exp(1j * phase) * _G[gate])


def vector_obstruction_residual(p: ObstructionPoint) -> float:
    col = lambda v: v.reshape(-1, 1)
    lhs = (np.kron(col(p.vecX), _ctrl("X", p.x)) + np.kron(col(p.vecZ), _ctrl("Z", p.z))) / SQRT2
    return float(np.linalg.norm(lhs - np.kron(col(p.vecH), _ctrl("H", p.h))))


def projected_obstruction_residual(cX: complex, cZ: complex, x: float, z: float, h: float) -> float:
    """Residual after projecting the ancilla onto ``|H>``; ``cX = <H|X>``, ``cZ = <H|Z>``."""
    if abs(cX) > 1 + DEFAULT_TOL or abs(cZ) > 1 + DEFAULT_TOL:
        raise ValueError("overlaps of unit vectors must have modulus <= 1")
    lhs = (cX * _ctrl("X", x) + cZ * _ctrl("Z", z)) / SQRT2
    return float(np.linalg.norm(lhs - _ctrl("H", h)))


def decode_obstruction(params, a: int = 1, projected: bool = False, cap: float = 1.0):
    """Map unconstrained coordinates to residual arguments.

    Projected: ``(sX, tX, sZ, tZ, x, z, h)`` with ``c = cap |sin s| e^{i t}``.
    Vector: real and imaginary parts of the three ancilla vectors, then
    ``x, z, h``; vectors are normalized here.
    """
    p = np.asarray(params, dtype=float)
    if projected:
        cX = cap * np.sin(p[0]) * np.exp(1j * p[1])
        cZ = cap * np.sin(p[2]) * np.exp(1j * p[3])
        return complex(cX), complex(cZ), float(p[4]), float(p[5]), float(p[6])
    vecs = []
    for k in range(3):
        v = p[2 * a * k : 2 * a * k + a] + 1j * p[2 * a * k + a : 2 * a * (k + 1)]
        n = np.linalg.norm(v)
        vecs.append(v / n if n > 0 else np.eye(a, dtype=complex)[0])
    x, z, h = p[6 * a : 6 * a + 3]
    return ObstructionPoint(a, *vecs, float(x), float(z), float(h))


def obstruction_objective(a: int = 1, projected: bool = False, cap: float = 1.0):
    if projected:
        if not 0 < cap <= 1:
            raise ValueError("cap must lie in (0, 1]")
        return (lambda th: projected_obstruction_residual(*decode_obstruction(th, projected=True, cap=cap))), 7
    return (lambda th: vector_obstruction_residual(decode_obstruction(th, a))), 6 * a + 3


def minimize_obstruction(
    a: int = 1, cfg: MinimizerConfig | None = None, projected: bool = False, cap: float = 1.0
) -> SearchReport:
    """Search for parameters that satisfy the obstruction equation.

    The report only records the minimum; it does not decide whether the
    equation is solvable.
    """
    cfg = cfg or MinimizerConfig()
    f, dim = obstruction_objective(a, projected, cap)
    return multistart_minimize(f, dim, cfg)


def obstruction_landscape(params, a: int = 1, projected: bool = False, cap: float = 1.0, n: int = 65, span: float = np.pi):
    """1-D slices of the residual through ``params``.

    Returns rows ``(param_index, sweep_value, residual)``.
    """
    f, dim = obstruction_objective(a, projected, cap)
    params = np.asarray(params, dtype=float)
    rows = []
    for i in range(dim):
        for t in np.linspace(params[i] - span, params[i] + span, n):
            q = params.copy()
            q[i] = t
            rows.append((i, float(t), f(q)))
    return rows


# ---------------------------------------------------------------------------
# phase behaviour


def phase_covariance_check(S: CircuitSandwich, U, phi: float) -> float:
    u = gate_matrix(U)
    return float(np.linalg.norm(sandwich_operator(S, np.exp(1j * phi) * u) - np.exp(1j * phi) * sandwich_operator(S, u)))


def control_phase_distinguishability(U, phi: float) -> float:
    """Trace distance between control-U and control-(e^{i phi} U) outputs.

    The probe state is ``|+> ⊗ |lam>`` with ``|lam>`` an eigenvector of ``U``;
    the result should equal ``|sin(phi / 2)|``.
    """
    u = gate_matrix(U)
    _, vecs = np.linalg.eig(u)
    lam = vecs[:, 0] / np.linalg.norm(vecs[:, 0])
    s = np.kron(np.array([1, 1]) / SQRT2, lam)
    return trace_distance_pure(control_u(u) @ s, control_u(np.exp(1j * phi) * u) @ s)


# ---------------------------------------------------------------------------
# process fidelity


def _traces(kraus, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d = u.shape[0]
    t0 = np.array([np.trace(k[:d, :d]) for k in kraus])
    t1 = np.array([np.sum(u.conj() * k[d:, d:]) for k in kraus])
    return t0, t1


def fidelity_from_kraus(kraus, U, phase: float | None = None) -> float:
    """Entanglement fidelity of a channel against ``1_d ⊕ e^{iu} U``.

    With ``phase=None`` the fidelity is maximized over ``u`` in closed form;
    otherwise ``u = phase`` is held fixed.
    """
    u = gate_matrix(U)
    d = u.shape[0]
    t0, t1 = _traces(kraus, u)
    norm = (2 * d) ** 2
    if phase is None:
        val = np.sum(np.abs(t0) ** 2 + np.abs(t1) ** 2) + 2 * abs(np.sum(t1.conj() * t0))
    else:
        val = np.sum(np.abs(t0 + np.exp(-1j * phase) * t1) ** 2)
    return float(min(1.0, max(0.0, val / norm)))


def _kraus_of(w: np.ndarray, a: int, d: int):
    return w.reshape(a, 2 * d, 2 * d)


def phase_opt_process_fidelity(S: CircuitSandwich, U, phase: float | None = None) -> float:
    w = sandwich_operator(S, U)
    return fidelity_from_kraus(_kraus_of(w, S.a, S.d), U, phase)


def grid_process_fidelity(S: CircuitSandwich, U, n: int = 1024) -> float:
    """Phase-optimized fidelity by brute force over ``n`` equally spaced phases."""
    w = sandwich_operator(S, U)
    kraus = _kraus_of(w, S.a, S.d)
    u = gate_matrix(U)
    g = [control_u(np.exp(1j * t) * u) for t in 2 * np.pi * np.arange(n) / n]
    norm = (2 * S.d) ** 2
    return max(sum(abs(np.trace(gu.conj().T @ k)) ** 2 for k in kraus) / norm for gu in g)


# ---------------------------------------------------------------------------
# gate sets and feasible sandwiches


def diagonal_family(d: int) -> list[np.ndarray]:
    """``diag(exp(i pi j / 2^m))`` for ``m = 0, 1, 2``; for ``d = 2`` these are Z, S, T."""
    return [np.diag(np.exp(1j * np.pi * np.arange(d) / 2**m)) for m in range(3)]


def gate_preset(name: str, d: int = 2, seed: int = 42) -> list[BlackboxGate]:
    """Named gate sets: ``xzh``, ``haar:<n>``, ``diagonal``, ``singleton:<gate>``."""
    if name == "xzh":
        if d != 2:
            raise ValueError("the xzh preset needs target dimension 2")
        return [BlackboxGate(_G[k], label=k) for k in ("X", "Z", "H")]
    if name == "diagonal":
        return [BlackboxGate(m, label=f"diag{k}") for k, m in enumerate(diagonal_family(d))]
    if name.startswith("haar:"):
        n = int(name.split(":", 1)[1])
        if n < 1:
            raise ValueError("haar preset needs at least one gate")
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(2**32,)))
        return [BlackboxGate(random_unitary(d, rng), label=f"haar{k}") for k in range(n)]
    if name.startswith("singleton:"):
        g = name.split(":", 1)[1]
        if g not in _G:
            raise ValueError(f"unknown gate {g!r}; choose from {sorted(_G)}")
        if d != 2:
            raise ValueError("named singleton gates need target dimension 2")
        return [BlackboxGate(_G[g], label=g)]
    raise ValueError(f"unknown gate preset {name!r}")


def common_eigenvector(gates, tol: float = 1e-9) -> np.ndarray | None:
    """An eigenvector shared by all ``gates``, if one shows up in their eigenbases."""
    mats = [gate_matrix(g) for g in gates]
    for m in mats:
        _, vecs = np.linalg.eig(m)
        for v in vecs.T:
            v = v / np.linalg.norm(v)
            if all(np.linalg.norm(g @ v - np.vdot(v, g @ v) * v) <= tol for g in mats):
                return v
    return None


def _unitary_with_first_column(e: np.ndarray, a: int) -> np.ndarray:
    seed = np.eye(a, dtype=np.complex128)
    seed[: e.shape[0], 0] = e
    seed[e.shape[0] :, 0] = 0
    q, r = np.linalg.qr(seed)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def kitaev_sandwich(e, a: int) -> CircuitSandwich:
    """Sandwich that controls any gate having ``e`` as an eigenvector.

    The ancilla is prepared in ``|e>`` (needs ``a >= d``); on the control-0
    branch the target is swapped into the ancilla so the query hits ``|e>``.
    Output is ``|e> ⊗ (lam 1 ⊕ U)``, equal to control-U up to the phase ``lam``.
    """
    e = as_state(e)
    d = e.shape[0]
    if a < d:
        raise ValueError(f"eigenstate control needs ancilla dim >= {d}")
    n = 2 * a * d
    swap = np.zeros((n, n), dtype=np.complex128)
    for k in range(a):
        for c in range(2):
            for j in range(d):
                src = (k * 2 + c) * d + j
                dst = (j * 2 + c) * d + k if (c == 0 and k < d) else src
                swap[dst, src] = 1.0
    prep = np.kron(_unitary_with_first_column(e, a), identity(2 * d))
    return CircuitSandwich(a, d, swap @ prep, swap)


def sandwich_params(S: CircuitSandwich) -> np.ndarray:
    return np.concatenate([unitary_to_params(S.A), unitary_to_params(S.B)])


def params_to_sandwich(theta, a: int, d: int) -> CircuitSandwich:
    n = 2 * a * d
    theta = np.asarray(theta, dtype=float)
    return CircuitSandwich(a, d, params_to_unitary(theta[: n * n], n), params_to_unitary(theta[n * n : 2 * n * n], n))


def embed_params(theta, a_small: int, a_big: int, d: int) -> np.ndarray:
    """Lift sandwich coordinates to a larger ancilla.

    Generators are padded with zeros, so the new ancilla levels are idle and
    every fidelity is unchanged.
    """
    n0, n1 = 2 * a_small * d, 2 * a_big * d
    theta = np.asarray(theta, dtype=float)
    pad = np.zeros((n1 - n0, n1 - n0))
    blocks = []
    for k in range(2):
        g = params_to_hermitian(theta[k * n0 * n0 : (k + 1) * n0 * n0], n0)
        blocks.append(hermitian_to_params(direct_sum(g, pad)))
    return np.concatenate(blocks + [theta[2 * n0 * n0 :]])


def feasible_starts(gate_set, a: int, d: int) -> list[tuple[str, np.ndarray]]:
    """Known constructions that fit the gate set, as sandwich coordinates."""
    starts = []
    if len(gate_set) == 1:
        starts.append(("known-unitary", sandwich_params(known_unitary_sandwich(gate_set[0], a))))
    if a >= d:
        e = common_eigenvector(gate_set)
        if e is not None:
            starts.append(("eigenstate", sandwich_params(kitaev_sandwich(e, a))))
    return starts


# ---------------------------------------------------------------------------
# adversarial search


def worst_case_objective(gate_set, a: int, d: int, fixed_phase: bool = False):
    """``theta -> (1 - min_U F(U), [F(U) ...])`` over sandwich coordinates."""
    mats = [gate_matrix(g) for g in gate_set]
    n = 2 * a * d

    def fidelities(theta):
        A = params_to_unitary(theta[: n * n], n)
        B = params_to_unitary(theta[n * n : 2 * n * n], n)
        phase = float(theta[2 * n * n]) if fixed_phase else None
        return [fidelity_from_kraus(_kraus_of(apply_query(A, B, u, a, d), a, d), u, phase) for u in mats]

    dim = 2 * n * n + (1 if fixed_phase else 0)
    return fidelities, dim


def adversarial_search(
    gate_set,
    a: int,
    d: int,
    cfg: MinimizerConfig | None = None,
    warm_start=None,
    fixed_phase: bool = False,
    use_constructions: bool = True,
) -> SearchReport:
    """Maximize the worst-case phase-optimized fidelity over sandwiches ``(A, B)``.

    ``best_value`` is ``1 - worst-case fidelity``. Known feasible
    constructions for the gate set and ``warm_start`` (coordinates, possibly
    from a smaller ancilla via :func:`embed_params`) are added as extra
    starting points after the seeded random ones.
    """
    if not gate_set:
        raise ValueError("gate set is empty")
    gate_set = [g if isinstance(g, BlackboxGate) else BlackboxGate(g) for g in gate_set]
    if any(g.dim != d for g in gate_set):
        raise ValueError(f"all gates must have dimension {d}")
    cfg = cfg or MinimizerConfig()
    t0 = time.perf_counter()
    fidelities, dim = worst_case_objective(gate_set, a, d, fixed_phase)
    f = lambda th: 1.0 - min(fidelities(th))

    starts = []
    if use_constructions:
        extra = [0.0] if fixed_phase else []
        starts += [np.concatenate([p, extra]) for _, p in feasible_starts(gate_set, a, d)]
    if warm_start is not None:
        starts.append(np.asarray(warm_start, dtype=float))
    report = multistart_minimize(f, dim, cfg, starts)
    labels = [g.label or f"gate{k}" for k, g in enumerate(gate_set)]
    report.per_gate = list(zip(labels, fidelities(report.best_params)))
    report.wall_time = time.perf_counter() - t0
    return report


def ancilla_ladder(gate_set, ancilla_dims, d: int, cfg: MinimizerConfig | None = None, **kw) -> list[SearchReport]:
    """Run :func:`adversarial_search` for increasing ancilla dimensions, each
    warm-started from the previous optimum, so best fidelities never drop."""
    reports = []
    prev_a, prev = None, None
    for a in sorted(ancilla_dims):
        warm = embed_params(prev.best_params, prev_a, a, d) if prev is not None else None
        prev = adversarial_search(gate_set, a, d, cfg, warm_start=warm, **kw)
        prev_a = a
        reports.append(prev)
    return reports
