"""Small dense matrices and their characteristic polynomials.

Coefficients follow the monic convention

    P(lam) = lam**n + c[0]*lam**(n-1) + ... + c[n-1],

with ``c_m = (-1)**m * (sum of all m-by-m principal minors)``.  Matrices may
hold floats or :class:`~tssa.gammapoly.GammaPoly` entries; the latter never
need division, so their determinants go through cofactor expansion.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from numbers import Real
from typing import Any, Sequence

import numpy as np

from .gammapoly import GammaPoly, format_gamma, parse_gamma

MIN_DIM, MAX_DIM = 2, 8
# pivot |p| below this fraction of max|entry| counts as an exact zero
LU_PIVOT_RTOL = 1e-13


@dataclass(frozen=True)
class SquareMatrix:
    n: int
    entries: tuple  # tuple of row tuples

    def __post_init__(self):
        if not MIN_DIM <= self.n <= MAX_DIM:
            raise ValueError(f"dimension must lie in [{MIN_DIM}, {MAX_DIM}], got {self.n}")
        if len(self.entries) != self.n or any(len(r) != self.n for r in self.entries):
            raise ValueError(f"entries must be {self.n}x{self.n}")

    @classmethod
    def from_rows(cls, rows) -> SquareMatrix:
        rows = [tuple(r) for r in rows]
        return cls(len(rows), tuple(rows))

    @property
    def is_real(self) -> bool:
        return all(isinstance(x, (Real, np.floating, np.integer)) for r in self.entries for x in r)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def submatrix(self, idx: Sequence[int]) -> tuple:
        return tuple(tuple(self.entries[i][j] for j in idx) for i in idx)

    def to_array(self) -> np.ndarray:
        if not self.is_real:
            raise TypeError("only real matrices convert to numpy arrays")
        return np.array(self.entries, dtype=float)

    def transpose(self) -> SquareMatrix:
        return SquareMatrix(self.n, tuple(zip(*self.entries)))

    def map(self, fn) -> SquareMatrix:
        return SquareMatrix(self.n, tuple(tuple(fn(x) for x in r) for r in self.entries))

    def trace(self):
        out = self.entries[0][0]
        for i in range(1, self.n):
            out = out + self.entries[i][i]
        return out


@dataclass(frozen=True)
class CharPoly:
    """Monic characteristic polynomial; ``coeffs`` holds c_1..c_n."""

    coeffs: tuple

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, m: int):
        """1-based access matching the usual c_m notation."""
        if not 1 <= m <= self.n:
            raise IndexError(m)
        return self.coeffs[m - 1]

    def full(self) -> list:
        """Coefficients including the leading 1, highest power first."""
        return [1.0] + list(self.coeffs)

    def __call__(self, lam):
        out = 1.0
        for c in self.coeffs:
            out = out * lam + c
        return out


def as_matrix(m) -> SquareMatrix:
    if isinstance(m, SquareMatrix):
        return m
    if isinstance(m, np.ndarray):
        return SquareMatrix.from_rows(m.tolist())
    return SquareMatrix.from_rows(m)


def as_charpoly(c) -> CharPoly:
    if isinstance(c, CharPoly):
        return c
    return CharPoly(tuple(c))


# determinants ----------------------------------------------------------------


def _det_lu(rows) -> float:
    a = [list(map(float, r)) for r in rows]
    n = len(a)
    scale = max((abs(x) for r in a for x in r), default=0.0)
    if scale == 0.0:
        return 0.0
    tiny = LU_PIVOT_RTOL * scale
    det = 1.0
    for k in range(n):
        piv = max(range(k, n), key=lambda i: abs(a[i][k]))
        if abs(a[piv][k]) < tiny:
            return 0.0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        pk = a[k][k]
        det *= pk
        for i in range(k + 1, n):
            f = a[i][k] / pk
            if f != 0.0:
                ri, rk = a[i], a[k]
                for j in range(k + 1, n):
                    ri[j] -= f * rk[j]
    return det


def _det_cofactor(rows):
    """Laplace expansion along successive rows, memoized on the column set.

    Cost is O(n 2^n) ring multiplications, fine for n <= 8.
    """
    n = len(rows)

    @lru_cache(maxsize=None)
    def minor(row: int, cols: tuple):
        if row == n - 1:
            return rows[row][cols[0]]
        out = None
        for pos, j in enumerate(cols):
            a = rows[row][j]
            if _is_zero(a):
                continue
            term = a * minor(row + 1, cols[:pos] + cols[pos + 1 :])
            if pos % 2:
                term = -term
            out = term if out is None else out + term
        return _zero_like(rows) if out is None else out

    return minor(0, tuple(range(n)))


def _is_zero(a) -> bool:
    if isinstance(a, GammaPoly):
        return a.is_zero()
    return a == 0


def _zero_like(rows):
    for r in rows:
        for x in r:
            if isinstance(x, GammaPoly):
                return GammaPoly()
    return 0.0


def _det_rows(rows, real: bool):
    if real:
        return _det_lu(rows)
    return _det_cofactor(rows)


def det(M):
    """Determinant; LU with partial pivoting for reals, cofactors otherwise."""
    M = as_matrix(M)
    real = M.is_real
    d = _det_rows(M.entries, real)
    return float(d) if real else d


def principal_minor_sum(M, m: int):
    """Sum of the determinants of all m-by-m principal submatrices."""
    M = as_matrix(M)
    if not 1 <= m <= M.n:
        raise ValueError(f"minor order must lie in [1, {M.n}], got {m}")
    real = M.is_real
    total = None
    for idx in combinations(range(M.n), m):
        d = _det_rows(M.submatrix(idx), real) if m > 1 else M.entries[idx[0]][idx[0]]
        total = d if total is None else total + d
    return float(total) if real else total


def charpoly_minors(M) -> CharPoly:
    """Characteristic polynomial from principal-minor sums.

    ``c_m = (-1)^m * sum_{|K|=m} det(M[K, K])``; works over any scalar ring.
    """
    M = as_matrix(M)
    coeffs = []
    for m in range(1, M.n + 1):
        s = principal_minor_sum(M, m)
        coeffs.append(-s if m % 2 else s)
    return CharPoly(tuple(coeffs))


def charpoly_leverrier(M) -> CharPoly:
    """Characteristic polynomial by the Faddeev-LeVerrier recursion (reals only)."""
    M = as_matrix(M)
    A = M.to_array()
    n = M.n
    eye = np.eye(n)
    Mk = np.zeros((n, n))
    c_prev = 1.0
    coeffs = []
    for k in range(1, n + 1):
        Mk = A @ Mk + c_prev * eye
        c_prev = -np.trace(A @ Mk) / k
        coeffs.append(float(c_prev))
    return CharPoly(tuple(coeffs))


# JSON ---------------------------------------------------------------------------


def _parse_entry(x):
    if isinstance(x, str):
        g = parse_gamma(x)
        return g
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ValueError(f"matrix entry must be a number or Gamma string, got {x!r}")
    return float(x)


def matrix_from_json(obj: dict[str, Any] | str) -> SquareMatrix:
    """Read ``{"n": int, "entries": [[...], ...]}``.

    Entries are reals, or strings such as ``"-1 - 2*G^1"`` for Gamma-polynomials.
    A matrix with any string entry is lifted to GammaPoly throughout.
    """
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or "entries" not in obj:
        raise ValueError("matrix JSON needs an 'entries' field")
    extra = set(obj) - {"n", "entries"}
    if extra:
        raise ValueError(f"unknown matrix fields: {sorted(extra)}")
    rows = [[_parse_entry(x) for x in r] for r in obj["entries"]]
    n = obj.get("n", len(rows))
    if n != len(rows):
        raise ValueError(f"'n'={n} disagrees with {len(rows)} rows")
    if any(isinstance(x, GammaPoly) for r in rows for x in r):
        rows = [[x if isinstance(x, GammaPoly) else GammaPoly.const(x) for x in r] for r in rows]
    return SquareMatrix.from_rows(rows)


def matrix_to_json(M: SquareMatrix) -> dict[str, Any]:
    def enc(x):
        return format_gamma(x) if isinstance(x, GammaPoly) else float(x)

    return {"n": M.n, "entries": [[enc(x) for x in r] for r in M.entries]}
