"""
Classical control of a permutation, and why it breaks on superpositions.

Copying the input before or after the permutation lets a classical circuit
control any reversible gate. Run on a superposed input, the copy entangles
with the output and the result no longer matches control-U.
"""
import numpy as np

from qcontrol import PermutationGate, classical_control
from qcontrol.constructions import no_cloning_witness

shift = PermutationGate.from_perm([1, 2, 0])
for c in (0, 1):
    print(f"c={c}:", [classical_control(shift, c, x) for x in range(3)], "(out, garbage)")

print("best overlap with ideal control-X, any garbage state:", no_cloning_witness(2))
print("1/sqrt(2) =", 1 / np.sqrt(2))
