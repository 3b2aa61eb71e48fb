"""
Epidemic and endemic time scales
================================

Integrate the rescaled model from a small outbreak.  The infectious
population spikes on the fast scale, then settles on the slow scale at a
fraction of order eps, as the leading-order equilibrium predicts.
"""

import numpy as np

from tssa import WORKED_POINT, solve_ede
from tssa.oracle import simulate
from tssa.system import State

eps = 1e-3
p = WORKED_POINT
(e,) = solve_ede(p)

tr = simulate(p, eps, State(0.0, 1e-2, 1.0, 1.0, 1.0), t_end=50.0)
frac = tr.infectious_fraction()
print(f"{len(tr)} accepted steps, {tr.rejected} rejected")

for t in (0.0, 0.005, 0.02, 0.1, 1.0, 5.0, 20.0, 50.0):
    i = min(np.searchsorted(tr.times, t), len(tr) - 1)
    print(f"t={tr.times[i]:8.4f}  eps*Y/N={frac[i]:.3e}  S={tr.states[i, 2]:.4f}")

print(f"\npeak fraction {frac.max():.3e}, final {frac[-1]:.4e}, predicted eps*y = {eps * e.y:.4e}")
print(f"final fraction / eps = {frac[-1] / eps:.3f}")

# plot-ready output
with open("trajectory.csv", "w") as fh:
    tr.to_csv(fh)
