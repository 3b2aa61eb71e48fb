"""Routh arrays, stability verdicts and the named degree-4/5 quantities.

The array for ``lam^n + c1 lam^(n-1) + ... + cn`` has n+1 rows.  Row 1 is
``1, c2, c4, ...``, row 2 is ``c1, c3, ...`` and every later entry is

    R[i][j] = (R[i-1][0] * R[i-2][j+1] - R[i-2][0] * R[i-1][j+1]) / R[i-1][0]

with out-of-range entries read as zero.  All roots lie in the open left
half-plane iff the first column is strictly positive.

Real arrays carry floats.  Arrays built from GammaPoly coefficients carry
:class:`~tssa.gammapoly.GammaRatio` entries, and their verdict is read off the
signs of the leading coefficients.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from numbers import Real

from .charpoly import CharPoly, as_charpoly
from .gammapoly import GammaPoly, GammaRatio, LeadingTerm, leading

# entries within this fraction of the largest first-column magnitude count as zero
VERDICT_RTOL = 1e-9


class ZeroPivot(ArithmeticError):
    """A first-column entry used as a divisor is (numerically) zero."""

    def __init__(self, row: int, partial=None):
        super().__init__(f"zero pivot in first column of row {row}")
        self.row = row
        self.partial = partial


class Stability(enum.Enum):
    STABLE = "Stable"
    UNSTABLE = "Unstable"
    INDETERMINATE = "Indeterminate"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Verdict:
    stability: Stability
    margin: float
    reason: str = ""

    @property
    def stable(self) -> bool:
        return self.stability is Stability.STABLE

    def __str__(self) -> str:
        return self.stability.value


@dataclass
class RouthArray:
    n: int
    rows: list = field(repr=False)
    zero_pivot_row: int | None = None  # 1-based row whose pivot vanished

    @property
    def first_column(self) -> list:
        return [r[0] for r in self.rows]

    @property
    def complete(self) -> bool:
        return self.zero_pivot_row is None

    def leading_rows(self) -> list[list[LeadingTerm]]:
        return [[leading(x) for x in r] for r in self.rows]


def _is_gamma(x) -> bool:
    return isinstance(x, (GammaPoly, GammaRatio))


def _lift(x):
    if isinstance(x, GammaRatio):
        return x
    return GammaRatio(x)


def build_routh(p, *, raise_on_zero: bool = True) -> RouthArray:
    """Build the Routh array of a monic polynomial given as c_1..c_n.

    Raises :class:`ZeroPivot` when a divisor is zero (reals: within
    ``VERDICT_RTOL`` of the largest first-column magnitude so far; Gamma
    scalars: the entry's leading coefficient was pruned to zero).  With
    ``raise_on_zero=False`` the partial array is returned instead, with
    ``zero_pivot_row`` set.
    """
    p = as_charpoly(p)
    n = p.n
    if n < 2:
        raise ValueError("Routh array needs degree >= 2")
    gamma = any(_is_gamma(c) for c in p.coeffs)
    full = p.full()
    if gamma:
        full = [_lift(c) for c in full]
        zero = GammaRatio(GammaPoly())
    else:
        full = [float(c) for c in full]
        zero = 0.0
    width = n // 2 + 1
    row1 = full[0::2]
    row2 = full[1::2]
    row1 += [zero] * (width - len(row1))
    row2 += [zero] * (width - len(row2))
    rows = [row1, row2]
    scale = max(1.0, abs(row2[0])) if not gamma else None
    for i in range(2, n + 1):
        prev, prev2 = rows[i - 1], rows[i - 2]
        piv = prev[0]
        if _pivot_is_zero(piv, scale):
            arr = RouthArray(n, _trim(rows, n), zero_pivot_row=i)
            if raise_on_zero:
                raise ZeroPivot(i, arr)
            return arr
        new = []
        for j in range(width - 1):
            new.append((piv * prev2[j + 1] - prev2[0] * prev[j + 1]) / piv)
        new.append(zero)
        rows.append(new)
        if not gamma:
            scale = max(scale, abs(new[0]))
    return RouthArray(n, _trim(rows, n))


def _pivot_is_zero(piv, scale) -> bool:
    if isinstance(piv, GammaRatio):
        return piv.leading().is_zero
    return abs(piv) <= VERDICT_RTOL * scale


def _trim(rows, n):
    """Cut each row to the entries the array actually has (ceil((n+2-i)/2))."""
    out = []
    for i, r in enumerate(rows, start=1):
        keep = max(1, (n + 2 - i + 1) // 2)
        out.append(list(r[:keep]))
    return out


def verdict(a) -> Verdict:
    """Stability verdict from a real Routh array (or a CharPoly).

    Margin is the smallest first-column entry.
    """
    if not isinstance(a, RouthArray):
        try:
            a = build_routh(a)
        except ZeroPivot as exc:
            a = exc.partial
    col = [float(x) for x in a.first_column]
    scale = max(abs(x) for x in col)
    margin = min(col)
    if any(x < -VERDICT_RTOL * scale for x in col):
        return Verdict(Stability.UNSTABLE, margin, "negative first-column entry")
    if not a.complete:
        return Verdict(Stability.INDETERMINATE, margin, f"zero pivot in row {a.zero_pivot_row}")
    if all(x > VERDICT_RTOL * scale for x in col):
        return Verdict(Stability.STABLE, margin)
    return Verdict(Stability.INDETERMINATE, margin, "first-column entry within threshold of zero")


def verdict_leading(a) -> Verdict:
    """Verdict from the signs of the leading Gamma-coefficients of column 1.

    Margin is the smallest leading coefficient.
    """
    if not isinstance(a, RouthArray):
        try:
            a = build_routh(a)
        except ZeroPivot as exc:
            a = exc.partial
    ks = [leading(x).k for x in a.first_column]
    margin = min(ks)
    if any(k < 0 for k in ks):
        return Verdict(Stability.UNSTABLE, margin, "negative leading coefficient")
    if not a.complete or any(k == 0 for k in ks):
        return Verdict(Stability.INDETERMINATE, margin, "leading coefficient cancels")
    return Verdict(Stability.STABLE, margin)


# named quantities -------------------------------------------------------------


def _coeffs(c, degree: int) -> list:
    c = as_charpoly(c)
    if c.n != degree:
        raise ValueError(f"expected a degree-{degree} polynomial, got degree {c.n}")
    return list(c.coeffs)


def rh_conditions_deg4(c) -> dict:
    """``c1, c4, q1, q2`` for a quartic; stable iff all four are positive."""
    c1, c2, c3, c4 = _coeffs(c, 4)
    q1 = c1 * c2 - c3
    q2 = c3 * q1 - c1 * c1 * c4
    return {"c1": c1, "c4": c4, "q1": q1, "q2": q2}


def rh4_verdict(c) -> Verdict:
    vals = rh_conditions_deg4(c)
    m = min(vals.values())
    if any(v < 0 for v in vals.values()):
        return Verdict(Stability.UNSTABLE, m)
    if any(v == 0 for v in vals.values()):
        return Verdict(Stability.INDETERMINATE, m)
    return Verdict(Stability.STABLE, m)


def routh_quantities_deg5(c) -> dict:
    """Numerators of the quintic Routh array.

    First column is ``1, c1, q1/c1, q2/q1, q4/(c1 q2), c5`` with
    ``q1 = c1 c2 - c3``, ``q3 = c1 c4 - c5``, ``q2 = c3 q1 - c1 q3`` and
    ``q4 = q2 q3 - c5 q1^2``.
    """
    c1, c2, c3, c4, c5 = _coeffs(c, 5)
    q1 = c1 * c2 - c3
    q3 = c1 * c4 - c5
    q2 = c3 * q1 - c1 * q3
    q4 = q2 * q3 - c5 * q1 * q1
    return {"q1": q1, "q2": q2, "q3": q3, "q4": q4}


def q4_full(c) -> float:
    """Row-5 numerator of the quintic array, fully expanded."""
    c1, c2, c3, c4, c5 = _coeffs(c, 5)
    return c1 * (
        c1 * c2 * c3 * c4
        + c2 * c3 * c5
        + 2 * c1 * c4 * c5
        - c3 * c3 * c4
        - c1 * c1 * c4 * c4
        - c1 * c2 * c2 * c5
        - c5 * c5
    )


def q4_leading_collapse(c) -> float:
    """``c1 c4 (c3 q1 - c1^2 c4)``: what q4 reduces to when c1, c2 ~ G and c3..c5 ~ G^2."""
    c1, c2, c3, c4, c5 = _coeffs(c, 5)
    q1 = c1 * c2 - c3
    return c1 * c4 * (c3 * q1 - c1 * c1 * c4)


def format_entry(x) -> str | float:
    if isinstance(x, GammaRatio):
        lt = x.leading()
        return str(lt)
    if isinstance(x, Real):
        return float(x)
    return str(x)
