"""
Controlling a blackbox with a polarization interferometer.

A photon's polarization picks the path; the device sits on the blue path
only, so the red path sees the identity. The induced map on
polarization ⊗ internal is exactly 1 ⊕ U.
"""
import numpy as np

from qcontrol import control_u, interferometer_apply
from qcontrol.constructions import interferometer_operator
from qcontrol.linalg import random_state, random_unitary

rng = np.random.default_rng(0)
d = 3
U = random_unitary(d, rng)

alpha, beta = 0.6, 0.8j
psi = random_state(d, rng)
out = interferometer_apply(U, alpha, beta, psi)
print("H-branch equals alpha*psi:  ", np.allclose(out[:d], alpha * psi))
print("V-branch equals beta*U psi: ", np.allclose(out[d:], beta * U @ psi))

op, leak = interferometer_operator(U)
print("max |op - control_u(U)| =", np.abs(op - control_u(U)).max())
print("amplitude left on blue path:", leak)
