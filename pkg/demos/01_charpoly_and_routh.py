"""
Characteristic polynomials and Routh arrays
===========================================

Coefficients from sums of principal minors, checked against
Faddeev-Leverrier, then turned into a Routh array and a verdict.
"""

import numpy as np

from tssa import build_routh, charpoly_leverrier, charpoly_minors, principal_minor_sum, verdict
from tssa.oracle import poly_roots

# c_m is (-1)^m times the sum of all m x m principal minors
A = np.array([[-1.0, 2.0, 0.5], [0.0, -3.0, 1.0], [1.0, 0.0, -2.0]])
for m in (1, 2, 3):
    print(f"sum of {m}x{m} principal minors: {principal_minor_sum(A, m):+.6f}")

cp = charpoly_minors(A)
print("minors path   ", np.round(cp.coeffs, 12))
print("Leverrier path", np.round(charpoly_leverrier(A).coeffs, 12))

# the Routh array of a quartic; its first column is (1, c1, q1/c1, q2/q1, c4)
arr = build_routh([2, 3, 1, 1])
for row in arr.rows:
    print("   ".join(f"{x:8.4f}" for x in row))
print("verdict:", verdict(arr))

# sign changes in the first column count roots in the right half plane
c = [1, 1, 2]  # lambda^3 + lambda^2 + lambda + 2
print("first column:", build_routh(c).first_column, "->", verdict(c))
print("roots:", np.round(poly_roots(c).roots, 6))

# purely imaginary roots hit a zero pivot and are reported as undecided
print("lambda^2 + 1 ->", verdict([0, 1]))
