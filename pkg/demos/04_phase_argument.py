"""
Global phase: invisible to a circuit, visible to control-U.

Any single-query circuit is linear in U, so U -> e^{i phi} U only rescales
its output. Control-U turns the same phase into a relative phase whose
trace-distance signature is |sin(phi/2)|.
"""
import numpy as np

from qcontrol import CircuitSandwich, control_phase_distinguishability, phase_covariance_check
from qcontrol.linalg import random_unitary

rng = np.random.default_rng(2)
S = CircuitSandwich(2, 2, random_unitary(8, rng), random_unitary(8, rng))
U = random_unitary(2, rng)

print(f"{'phi':>6} {'circuit residual':>18} {'control-U distance':>20} {'|sin(phi/2)|':>14}")
for phi in np.linspace(0, 2 * np.pi, 9):
    print(f"{phi:6.3f} {phase_covariance_check(S, U, phi):18.2e} "
          f"{control_phase_distinguishability(U, phi):20.12f} {abs(np.sin(phi / 2)):14.12f}")
