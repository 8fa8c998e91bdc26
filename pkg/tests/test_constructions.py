import math
from itertools import permutations, product

import numpy as np
import pytest

from qcontrol.circuit import BlackboxGate, control_u
from qcontrol.constructions import (
    PermutationGate,
    PhotonState,
    blackbox_stage_matrix,
    classical_control,
    classical_control_circuit,
    classical_control_quantum,
    clone_gate,
    extend,
    interferometer_apply,
    interferometer_operator,
    kitaev_control,
    kitaev_induced,
    map_overlap,
    max_overlap_over_garbage,
    no_cloning_witness,
    pbs_matrix,
    propagate,
)
from qcontrol.linalg import basis_state, identity, is_unitary, random_state, random_unitary


def test_interferometer_matches_target_map(rng):
    for d in (2, 3, 4, 8):
        for _ in range(12):
            u = random_unitary(d, rng)
            alpha, beta = random_state(2, rng)
            psi = random_state(d, rng)
            out = interferometer_apply(u, alpha, beta, psi)
            want = np.concatenate([alpha * psi, beta * (u @ psi)])
            assert np.abs(out - want).max() < 1e-12


def test_interferometer_trivial_inputs(rng):
    u = random_unitary(3, rng)
    psi = random_state(3, rng)
    assert np.abs(interferometer_apply(u, 1, 0, psi) - np.kron(basis_state(2, 0), psi)).max() == 0
    ab = random_state(2, rng)
    out = interferometer_apply(identity(3), ab[0], ab[1], psi)
    assert np.abs(out - np.kron(ab, psi)).max() < 1e-15


def test_interferometer_operator_is_control_u(rng):
    for d in (2, 3, 4, 8):
        u = random_unitary(d, rng)
        op, leak = interferometer_operator(u)
        assert leak == 0
        assert np.abs(op - control_u(u)).max() < 1e-12


def test_path_returns_to_red(rng):
    d = 3
    u = random_unitary(d, rng)
    for _ in range(20):
        photon = PhotonState(d, np.kron(np.kron(random_state(2, rng), basis_state(2, 0)), random_state(d, rng)))
        out = propagate(u, photon).tensor()
        assert np.linalg.norm(out[:, 1, :]) <= 1e-12


def test_pbs_is_involution():
    for d in (1, 2, 5):
        assert np.array_equal(pbs_matrix(d) @ pbs_matrix(d), identity(4 * d))


def test_interferometer_rejects_bad_amplitudes(rng):
    with pytest.raises(ValueError):
        interferometer_apply(identity(2), 1, 1, basis_state(2, 0))


def test_blackbox_stage_matrix(gates, rng):
    cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    assert np.array_equal(blackbox_stage_matrix(gates["X"]), cnot)
    assert np.array_equal(blackbox_stage_matrix(identity(3)), identity(6))
    for _ in range(20):
        u = random_unitary(int(rng.integers(1, 6)), rng)
        assert np.array_equal(blackbox_stage_matrix(u), control_u(u))


def test_extend(gates, rng):
    u = random_unitary(3, rng)
    assert np.array_equal(extend(u, 0), u)
    e = extend(gates["X"], 1)
    assert np.array_equal(e, np.array([[1, 0, 0], [0, 0, 1], [0, 1, 0]]))
    v = extend(u, 1)
    assert np.array_equal(v @ basis_state(4, 0), basis_state(4, 0))
    assert extend(u, 4).shape == (7, 7)


def test_kitaev_on_extension_is_exact(rng):
    for d in range(1, 7):
        v = extend(random_unitary(d, rng), 1)
        gate = BlackboxGate(v, (basis_state(d + 1, 0), 1))
        induced, leak = kitaev_induced(gate)
        assert leak <= 1e-10
        assert np.abs(induced - control_u(v)).max() < 1e-12
        assert is_unitary(kitaev_control(gate))


def test_kitaev_z_examples(gates):
    Z = gates["Z"]
    cz = np.diag([1, 1, 1, -1])
    for e, lam in [(basis_state(2, 0), 1), (basis_state(2, 1), -1)]:
        gate = BlackboxGate(Z, (e, lam))
        k = kitaev_control(gate)
        # oracle: apply the gate sequence by hand to every control ⊗ main basis input
        for c, j in product(range(2), range(2)):
            inp = np.kron(np.kron(basis_state(2, c), basis_state(2, j)), e)
            want = np.kron(cz @ np.kron(basis_state(2, c), basis_state(2, j)), e)
            assert np.abs(k @ inp - want).max() < 1e-15
        induced, leak = kitaev_induced(gate)
        assert leak < 1e-15
        assert np.abs(induced - cz).max() < 1e-15


def test_kitaev_random_eigenpairs(rng):
    for _ in range(50):
        d = int(rng.integers(2, 6))
        u = random_unitary(d, rng)
        w, vecs = np.linalg.eig(u)
        k = int(rng.integers(d))
        gate = BlackboxGate(u, (vecs[:, k] / np.linalg.norm(vecs[:, k]), w[k] / abs(w[k])))
        induced, leak = kitaev_induced(gate)
        assert leak <= 1e-10
        assert map_overlap(control_u(u), induced) >= 1 - 1e-10


def test_kitaev_needs_eigenpair(gates):
    with pytest.raises(ValueError):
        kitaev_control(BlackboxGate(gates["X"]))


def test_permutation_gate_validation():
    with pytest.raises(ValueError):
        PermutationGate(np.array([[1, 1], [0, 0]]))
    with pytest.raises(ValueError):
        PermutationGate(np.array([[0.5, 0.5], [0.5, 0.5]]))
    g = PermutationGate.from_perm([2, 0, 1])
    assert [g(x) for x in range(3)] == [2, 0, 1]


def hand_trace(perm, c, x):
    # (control, middle, bottom) after each gate, written out longhand for d=2
    middle, bottom = x, 0
    if c == 0:
        bottom = middle
    middle = perm[middle]
    if c == 1:
        bottom = middle
    return bottom


def test_classical_control_hand_traces(gates):
    X = PermutationGate(gates["X"].real)
    assert classical_control(X, 1, 0)[0] == 1 == hand_trace([1, 0], 1, 0)
    assert classical_control(X, 0, 0)[0] == 0 == hand_trace([1, 0], 0, 0)


def test_classical_control_exhaustive():
    for d in range(1, 7):
        for perm in permutations(range(d)):
            g = PermutationGate.from_perm(perm)
            seen = set()
            for c, x in product((0, 1), range(d)):
                out, garbage = classical_control(g, c, x)
                assert out == (x if c == 0 else perm[x])
                assert garbage == perm[x]
                seen.add((c, out))
            assert len(seen) == 2 * d


def test_clone_gate_is_cnot_for_qubits():
    cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    assert np.array_equal(clone_gate(2), cnot)
    assert is_unitary(clone_gate(5))


def test_quantum_circuit_reproduces_classical_trace():
    for d in range(1, 6):
        for perm in permutations(range(d)):
            g = PermutationGate.from_perm(perm)
            for c, x in product((0, 1), range(d)):
                inp = np.kron(np.kron(basis_state(2, c), basis_state(d, x)), basis_state(d, 0))
                out = classical_control_quantum(g, inp)
                o, garbage = classical_control(g, c, x)
                want = np.kron(np.kron(basis_state(2, c), basis_state(d, garbage)), basis_state(d, o))
                assert np.array_equal(out, want)


def test_control_zero_copies_basis_input():
    d = 3
    g = PermutationGate.from_perm([1, 2, 0])
    for x in range(d):
        out = classical_control_quantum(g, np.kron(np.kron(basis_state(2, 0), basis_state(d, x)), basis_state(d, 0)))
        bottom = out.reshape(2, d, d).sum(axis=(0, 1))
        assert np.array_equal(bottom, basis_state(d, x))


def test_no_cloning_witness_against_exhaustive_garbage_search():
    d = 2
    X = PermutationGate.from_perm([1, 0])
    plus = np.array([1, 1]) / math.sqrt(2)
    inp = np.kron(np.kron(plus, plus), basis_state(2, 0))
    out = classical_control_quantum(X, inp)
    ideal = control_u(X.U_cl) @ np.kron(plus, plus)
    # grid over garbage states cos(t)|0> + e^{ip} sin(t)|1>
    best = 0.0
    for t in np.linspace(0, math.pi / 2, 257):
        for p in np.linspace(0, 2 * math.pi, 257):
            g = np.array([math.cos(t), np.exp(1j * p) * math.sin(t)])
            target = np.einsum("cb,m->cmb", ideal.reshape(2, 2), g).reshape(-1)
            best = max(best, abs(np.vdot(target, out)))
    closed = max_overlap_over_garbage(out, ideal, d)
    assert best <= closed + 1e-12
    assert closed - best < 1e-3
    assert abs(closed - 1 / math.sqrt(2)) < 1e-12
    assert no_cloning_witness(2) < 0.95
    assert abs(no_cloning_witness(2) - closed) < 1e-15


def test_classical_circuit_is_unitary():
    assert is_unitary(classical_control_circuit(PermutationGate.from_perm([2, 0, 1, 3])))
