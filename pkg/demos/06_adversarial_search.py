"""
How well can one circuit control X, Z and H at once?

Optimize A and B for the worst-case phase-optimized process fidelity.
A single known gate, or gates sharing an eigenvector, reach fidelity 1;
the X, Z, H set does not. Ladders warm-start each ancilla size from the
previous optimum.
"""
from qcontrol import MinimizerConfig, adversarial_search, ancilla_ladder
from qcontrol.nogo import gate_preset

cfg = MinimizerConfig(restarts=8, seed=42)
print("singleton X:", 1 - adversarial_search(gate_preset("singleton:X"), 1, 2, cfg).best_value)
print("Z, S, T (a=2):", 1 - adversarial_search(gate_preset("diagonal"), 2, 2, cfg).best_value)

for a, rep in zip((1, 2), ancilla_ladder(gate_preset("xzh"), [1, 2], 2, cfg)):
    print(f"X, Z, H a={a}: worst-case {1 - rep.best_value:.6f}", dict(rep.per_gate))
