"""
The X, Z, H linearity obstruction.

The projected equation is solvable when the ancilla states are parallel
(|<H|X>| = |<H|Z>| = 1). Capping the overlaps below 1 opens a gap, which
grows like sqrt(2) * (1 - cap).
"""
import numpy as np

from qcontrol import MinimizerConfig, minimize_obstruction, projected_obstruction_residual

q = np.pi / 4
print("analytic zero:", projected_obstruction_residual(np.exp(1j * q), np.exp(-1j * q), -q, q, 0))

cfg = MinimizerConfig(restarts=16)
print("projected, uncapped min:", minimize_obstruction(cfg=cfg, projected=True).best_value)
print("vector, a=2 min:        ", minimize_obstruction(2, cfg).best_value)
for cap in (0.95, 0.9, 0.8):
    r = minimize_obstruction(cfg=cfg, projected=True, cap=cap)
    print(f"cap {cap}: min {r.best_value:.6f}  sqrt(2)*(1-cap) = {np.sqrt(2) * (1 - cap):.6f}")
