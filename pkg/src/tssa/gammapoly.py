"""Polynomials in the large parameter ``G`` (Gamma = 1/epsilon).

A :class:`GammaPoly` carries every power of ``G`` it acquires, so subdominant
terms survive until :meth:`GammaPoly.leading` is asked for the dominant one.
Addition prunes coefficients that cancel down to float dust, which is what
makes structural cancellations (e.g. ``rho*G^2 - rho*G^2``) come out exact.

:class:`GammaRatio` is a quotient of two GammaPolys; it is the scalar used
inside Routh arrays, where division by first-column entries is unavoidable.
"""

from __future__ import annotations

import re
from numbers import Real
from typing import Iterable, Mapping, NamedTuple

# |k| <= PRUNE_RTOL * (largest contributing |k|) is treated as cancellation.
PRUNE_RTOL = 1e-10


class LeadingTerm(NamedTuple):
    """Dominant term ``k * G**p``; ``(0.0, 0)`` stands for the zero polynomial."""

    k: float
    p: int

    @property
    def is_zero(self) -> bool:
        return self.k == 0.0

    def __str__(self) -> str:
        return _format_term(self.k, self.p)


ZERO_LEADING = LeadingTerm(0.0, 0)


def _normalize(acc: Mapping[int, tuple[float, float]]) -> dict[int, float]:
    """Drop entries whose sum is dust relative to their largest contribution."""
    out = {}
    for p, (k, scale) in acc.items():
        if k == 0.0 or abs(k) <= PRUNE_RTOL * scale:
            continue
        out[p] = k
    return out


class GammaPoly:
    """Real-coefficient polynomial in ``G`` with nonnegative integer exponents."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, float] | Real | None = None):
        if terms is None:
            terms = {}
        elif isinstance(terms, Real):
            terms = {0: float(terms)}
        clean = {}
        for p, k in terms.items():
            if int(p) != p or p < 0:
                raise ValueError(f"exponent must be a nonnegative integer, got {p!r}")
            k = float(k)
            if k != 0.0:
                clean[int(p)] = k
        self._terms = clean

    @classmethod
    def _raw(cls, terms: dict[int, float]) -> GammaPoly:
        obj = cls.__new__(cls)
        obj._terms = terms
        return obj

    @classmethod
    def const(cls, k: float) -> GammaPoly:
        return cls({0: k})

    @classmethod
    def mono(cls, k: float, p: int = 1) -> GammaPoly:
        return cls({p: k})

    @property
    def terms(self) -> dict[int, float]:
        return dict(self._terms)

    @property
    def degree(self) -> int:
        """Highest surviving exponent; -1 for the zero polynomial."""
        return max(self._terms, default=-1)

    def is_zero(self) -> bool:
        return not self._terms

    def coeff(self, p: int) -> float:
        return self._terms.get(p, 0.0)

    # ring operations -------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        acc: dict[int, tuple[float, float]] = {}
        for src in (self._terms, other._terms):
            for p, k in src.items():
                s, m = acc.get(p, (0.0, 0.0))
                acc[p] = (s + k, max(m, abs(k)))
        return GammaPoly._raw(_normalize(acc))

    __radd__ = __add__

    def __neg__(self) -> GammaPoly:
        return GammaPoly._raw({p: -k for p, k in self._terms.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        acc: dict[int, tuple[float, float]] = {}
        for p, k in self._terms.items():
            for q, l in other._terms.items():
                kl = k * l
                s, m = acc.get(p + q, (0.0, 0.0))
                acc[p + q] = (s + kl, max(m, abs(kl)))
        return GammaPoly._raw(_normalize(acc))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> GammaPoly:
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers are supported")
        out = GammaPoly.const(1.0)
        for _ in range(n):
            out = out * self
        return out

    def __truediv__(self, other):
        if isinstance(other, (GammaPoly, GammaRatio)):
            return GammaRatio(self) / other
        if isinstance(other, Real):
            return GammaPoly._raw({p: k / other for p, k in self._terms.items()})
        return NotImplemented

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GammaRatio(other, self)

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(tuple(sorted(self._terms.items())))

    # evaluation & inspection ------------------------------------------------

    def __call__(self, gamma: float) -> float:
        return self.eval(gamma)

    def eval(self, gamma: float) -> float:
        out = 0.0
        for p in sorted(self._terms, reverse=True):
            out += self._terms[p] * gamma**p
        return out

    def leading(self) -> LeadingTerm:
        if not self._terms:
            return ZERO_LEADING
        p = self.degree
        return LeadingTerm(self._terms[p], p)

    def allclose(self, other, rtol: float = 1e-9, atol: float = 0.0) -> bool:
        other = _coerce(other)
        scale = max([abs(k) for k in self._terms.values()] + [abs(k) for k in other._terms.values()] + [0.0])
        for p in set(self._terms) | set(other._terms):
            if abs(self.coeff(p) - other.coeff(p)) > rtol * scale + atol:
                return False
        return True

    def __repr__(self) -> str:
        return f"GammaPoly({format_gamma(self)!r})"

    def __str__(self) -> str:
        return format_gamma(self)


class GammaRatio:
    """Quotient ``num / den`` of GammaPolys, never reduced.

    Only the leading behaviour is ever inspected, so no cancellation of common
    factors is attempted; the leading exponent may be negative.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = _coerce(num)
        den = GammaPoly.const(1.0) if den is None else _coerce(den)
        if num is NotImplemented or den is NotImplemented:
            raise TypeError("GammaRatio parts must be GammaPoly or real")
        if den.is_zero():
            raise ZeroDivisionError("GammaRatio with zero denominator")
        self.num = num
        self.den = den

    @staticmethod
    def _lift(x):
        if isinstance(x, GammaRatio):
            return x
        x = _coerce(x)
        if x is NotImplemented:
            return NotImplemented
        return GammaRatio(x)

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        if self.den == o.den:
            return GammaRatio(self.num + o.num, self.den)
        return GammaRatio(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return GammaRatio(-self.num, self.den)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return GammaRatio(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        if o.num.is_zero():
            raise ZeroDivisionError("division by a zero GammaRatio")
        return GammaRatio(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def eval(self, gamma: float) -> float:
        return self.num.eval(gamma) / self.den.eval(gamma)

    __call__ = eval

    def leading(self) -> LeadingTerm:
        ln = self.num.leading()
        if ln.is_zero:
            return ZERO_LEADING
        ld = self.den.leading()
        return LeadingTerm(ln.k / ld.k, ln.p - ld.p)

    def __repr__(self) -> str:
        return f"GammaRatio(({self.num}) / ({self.den}))"


def _coerce(x):
    if isinstance(x, GammaPoly):
        return x
    if isinstance(x, Real):
        return GammaPoly.const(float(x))
    return NotImplemented


def gp_add(a, b) -> GammaPoly:
    return _coerce(a) + _coerce(b)


def gp_mul(a, b) -> GammaPoly:
    return _coerce(a) * _coerce(b)


def leading(a) -> LeadingTerm:
    if isinstance(a, (GammaPoly, GammaRatio)):
        return a.leading()
    a = float(a)
    return ZERO_LEADING if a == 0.0 else LeadingTerm(a, 0)


def substitute(a, gamma: float) -> float:
    """Numeric value of a GammaPoly/GammaRatio (or plain real) at ``G = gamma``."""
    if isinstance(a, (GammaPoly, GammaRatio)):
        return a.eval(gamma)
    return float(a)


# text form ------------------------------------------------------------------

_TERM_RE = re.compile(
    r"""^(?P<coef>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?
         (?:\s*\*?\s*(?P<g>G)(?:\s*\^\s*(?P<p>\d+))?)?$""",
    re.VERBOSE,
)


def parse_gamma(text: str | Real) -> GammaPoly:
    """Parse ``"k*G^p + ..."`` (e.g. ``"-(1)*G + 2"`` is not accepted, ``"-G + 2"`` is).

    Accepted term shapes: ``3``, ``2.5*G``, ``G^2``, ``-1e-3*G^3``, ``4G``.
    """
    if isinstance(text, Real):
        return GammaPoly.const(float(text))
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty Gamma-polynomial string")
    # split on + / - that are not part of an exponent marker
    pieces = re.findall(r"[+-]?(?:[^+-]|(?<=[eE])[+-])+", s)
    if "".join(pieces) != s:
        raise ValueError(f"cannot parse Gamma-polynomial {text!r}")
    out = GammaPoly()
    for piece in pieces:
        sign = -1.0 if piece.startswith("-") else 1.0
        body = piece.lstrip("+-")
        m = _TERM_RE.match(body)
        if not m or (m.group("coef") is None and m.group("g") is None):
            raise ValueError(f"cannot parse term {piece!r} in {text!r}")
        k = float(m.group("coef")) if m.group("coef") is not None else 1.0
        p = 0
        if m.group("g"):
            p = int(m.group("p")) if m.group("p") is not None else 1
        out = out + GammaPoly.mono(sign * k, p)
    return out


def _format_term(k: float, p: int) -> str:
    if p == 0:
        return repr(k)
    if p == 1:
        return f"{k!r}*G"
    return f"{k!r}*G^{p}"


def format_gamma(a: GammaPoly | Real) -> str:
    """Inverse of :func:`parse_gamma`; highest power first."""
    if isinstance(a, Real):
        return repr(float(a))
    if a.is_zero():
        return "0.0"
    parts = [_format_term(a.coeff(p), p) for p in sorted(a.terms, reverse=True)]
    return " + ".join(parts).replace("+ -", "- ")


def from_terms(pairs: Iterable[tuple[float, int]]) -> GammaPoly:
    out = GammaPoly()
    for k, p in pairs:
        out = out + GammaPoly.mono(k, p)
    return out
