"""
Eigenstate-assisted control.

If one eigenpair (e, lam) of V is known, swapping the target into an
auxiliary register that holds |e> on one branch turns a single query of V
into control-V. Extending U by one dimension, V = 1 ⊕ U, always supplies
such a pair: e = |0>, lam = 1.
"""
import numpy as np

from qcontrol import BlackboxGate, control_u, extend, kitaev_induced
from qcontrol.linalg import basis_state, random_unitary

rng = np.random.default_rng(1)
U = random_unitary(4, rng)
V = extend(U, 1)
gate = BlackboxGate(V, (basis_state(5, 0), 1.0))

induced, leak = kitaev_induced(gate)
print("aux leak:", leak)
print("max |induced - control_u(1 ⊕ U)| =", np.abs(induced - control_u(V)).max())

# any eigenpair works once the idle branch is phase-corrected
w, vecs = np.linalg.eig(U)
gate = BlackboxGate(U, (vecs[:, 0] / np.linalg.norm(vecs[:, 0]), w[0]))
induced, leak = kitaev_induced(gate)
print("random eigenpair, max |induced - control_u(U)| =", np.abs(induced - control_u(U)).max())
