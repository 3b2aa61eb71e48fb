"""
Stability of the two-risk-group endemic equilibrium
===================================================

Works through one parameter point: R0, the endemic equilibrium, the
Jacobian in G = 1/eps, its leading-order characteristic polynomial and
the three conditions A, B, C, then checks the verdict with eigenvalues.
"""

from tssa import WORKED_POINT, charpoly_minors, format_gamma, jacobian_gamma, solve_ede, stability_conditions
from tssa.routh import build_routh, verdict_leading
from tssa.tworisk import leading_charpoly, numeric_check

p = WORKED_POINT
print(f"b={p.b}  sigma={p.sigma}  kappa={p.kappa}  h={p.h}  R0={p.R0}  c={p.c}")

(e,) = solve_ede(p)
print(f"equilibrium: z={e.z:g} y={e.y:g} s={e.s:g} u={e.u:g} p={e.p:g} q={e.q:g} N={e.N:g}")

# the Jacobian carries G explicitly; exact polynomial arithmetic keeps the
# cancellations (the X-Y block minor loses its G^2 terms)
J = jacobian_gamma(p, e)
for i in range(5):
    print("  [" + ", ".join(f"{format_gamma(J[i, j]):>12}" for j in range(5)) + "]")

cp = charpoly_minors(J)
for m, c in enumerate(cp.coeffs, start=1):
    print(f"c{m} = {format_gamma(c)}")

lc = leading_charpoly(p, e)
print("leading coefficients k:", lc.k, "powers of G:", lc.p)

# only leading terms of the Routh entries matter as G grows
arr = build_routh(cp)
for row in arr.leading_rows():
    print("  ", ["%g G^%d" % (t.k, t.p) for t in row])
print("leading-order verdict:", verdict_leading(arr))

cond = stability_conditions(p, e)
print(f"A={cond.A:g} B={cond.B:g} C={cond.C:g} -> {cond.verdict}")

for eps in (1e-2, 1e-3, 1e-4):
    chk = numeric_check(p, e, eps)
    print(f"eps={eps:g}: max Re(lambda) = {chk.max_real:+.4f} ({chk.numeric}), agree={chk.agree}")
