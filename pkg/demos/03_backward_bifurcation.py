"""
Backward bifurcation
====================

With a strongly protective low-risk group and high disease mortality, two
endemic equilibria can coexist below R0 = 1.  The lower one is unstable.
"""

import numpy as np

from tssa.tworisk import find_backward_bifurcation, numeric_check, solve_ede, stability_conditions

p = next(find_backward_bifurcation())
print(f"m={p.m} kappa={p.kappa:g} omega={p.omega} R0={p.R0:.4f} c={p.c:.3f}")

for e in sorted(solve_ede(p), key=lambda e: e.z):
    cond = stability_conditions(p, e)
    chk = numeric_check(p, e, 1e-3)
    print(
        f"  z={e.z:8.4f}  A={cond.A:+.3f} B={cond.B:+.3f} C={cond.C:+.2f}  "
        f"{cond.verdict}  (eigenvalues: {chk.numeric}, max Re {chk.max_real:+.4f})"
    )

# following omega shows the two branches appear at c = 0 and merge at a fold
print("\n omega     c    branches")
for omega in np.linspace(13.5, 15.5, 9):
    q = p.replace(omega=float(omega))
    zs = [f"{e.z:.3f}" for e in solve_ede(q)]
    print(f"{omega:6.2f} {q.c:+6.3f}   {', '.join(zs) or '-'}")

# at m = 0.75 the grid turns up nothing
print("hits at m = 0.75:", len(list(find_backward_bifurcation(m_values=(0.75,)))))
