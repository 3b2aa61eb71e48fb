"""Equilibria and leading-order stability of the two-risk-group SEIR model.

Endemic equilibria are parametrized by ``z = b*y`` where ``y = Y/N`` is the
rescaled infectious fraction.  At leading order in epsilon ``z`` solves the
quadratic ``G(z) = a2 z^2 + a1 z + a0`` with ``a0 = -c``; the remaining
equilibrium quantities follow from z in closed form.

Stability of an endemic equilibrium as epsilon -> 0 reduces to the signs of
three combinations A, B, C of those quantities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import oracle
from .charpoly import SquareMatrix, charpoly_minors
from .gammapoly import GammaPoly
from .params import Params
from .routh import Stability, Verdict, build_routh, verdict_leading
from .system import State, jacobian

ADMISSIBLE_ATOL = 1e-9
CONDITION_RTOL = 1e-9
DFE_MARGIN = 1e-8


def r0(p: Params) -> float:
    return p.R0


def bifurcation_c(p: Params) -> float:
    return p.c


def dfe(p: Params) -> State:
    return State(X=0.0, Y=0.0, S=1.0, U=(p.psi + p.f) / p.Sigma_bar, N=1.0)


def dfe_stability(p: Params, eps: float | None = None, margin: float = DFE_MARGIN) -> Verdict:
    """Numeric verdict for the disease-free equilibrium at finite epsilon.

    Margin is the largest eigenvalue real part.
    """
    eps = p.epsilon if eps is None else eps
    s, rs = oracle.numeric_verdict(p, dfe(p), eps, margin)
    return Verdict(s, rs.max_real)


def dfe_threshold_b(p: Params, eps: float | None = None) -> float:
    """b at which the DFE loses stability at finite epsilon: b*Q0 = 1 + eps/rho."""
    eps = p.epsilon if eps is None else eps
    u0 = (p.psi + p.f) / p.Sigma_bar
    q0 = (1.0 - p.sigma) * u0 + p.sigma
    return (1.0 + eps / p.rho) / q0


# endemic equilibria ---------------------------------------------------------------


@dataclass(frozen=True)
class EdeState:
    z: float
    y: float
    s: float
    u: float
    p: float
    q: float
    v: float
    r: float
    w: float
    N: float

    @property
    def v_bar(self) -> float:
        return self.v + 1.0

    @property
    def w_bar(self) -> float:
        return self.w + 1.0

    def to_state(self, p: Params) -> State:
        """Leading-order values of the model state variables."""
        Y = self.y * self.N
        return State(X=Y / p.rho, Y=Y, S=self.s * self.N, U=self.u * self.N, N=self.N)

    def to_dict(self) -> dict[str, float]:
        return {k: getattr(self, k) for k in ("z", "y", "s", "u", "p", "q", "v", "r", "w", "N")}


def ede_quadratic(p: Params) -> tuple[float, float, float]:
    """Coefficients (a2, a1, a0) of G(z); a0 == -c."""
    m, sg, k, Sb = p.m, p.sigma, p.kappa, p.Sigma_bar
    a2 = (1 - m) * sg
    a1 = (1 - k) + (1 - m) * sg * Sb + (1 - m) * (1 - sg) * p.psi - (1 - sg) * m * p.f
    a0 = (1 - k) * Sb - p.h * (p.psi + p.f)
    return a2, a1, a0


def G(p: Params, z: float) -> float:
    a2, a1, a0 = ede_quadratic(p)
    return (a2 * z + a1) * z + a0


def _quadratic_roots(a2, a1, a0) -> list[float]:
    if a2 == 0:
        return [] if a1 == 0 else [-a0 / a1]
    disc = a1 * a1 - 4 * a2 * a0
    if disc < 0:
        return []
    sq = math.sqrt(disc)
    t = -0.5 * (a1 + math.copysign(sq, a1))
    if t == 0:
        return [0.0, 0.0]
    return sorted({t / a2, a0 / t})


def ede_from_z(p: Params, z: float) -> EdeState:
    y = z / p.b
    inv_n = 1.0 + p.m * y
    N = 1.0 / inv_n
    s = 1.0 - (1.0 - p.m) * y
    u = (p.psi * s + p.f * inv_n) / (p.Sigma_bar + z)
    q = p.sigma * s + (1.0 - p.sigma) * u
    return EdeState(z=z, y=y, s=s, u=u, p=s - u, q=q, v=p.kappa * y, r=p.h * y, w=p.Sigma + z, N=N)


def ede_roots(p: Params) -> list[float]:
    """All real roots of G, ascending."""
    return _quadratic_roots(*ede_quadratic(p))


def solve_ede(p: Params) -> list[EdeState]:
    """Admissible endemic equilibria: roots 0 < z <= z_hat (+1e-9), ascending."""
    zhat = p.z_hat
    return [ede_from_z(p, z) for z in ede_roots(p) if z > 0 and z <= zhat + ADMISSIBLE_ATOL]


def ede_invariant_errors(p: Params, e: EdeState) -> dict[str, float]:
    """Residuals of the leading-order identities an equilibrium must satisfy."""
    a2, a1, a0 = ede_quadratic(p)
    return {
        "bq-1": abs(p.b * e.q - 1.0),
        "G": abs(G(p, e.z)) / max(abs(a2), abs(a1), abs(a0)),
        "hu": abs(p.h * e.u - (1 - p.kappa + (1 - p.m) * p.sigma * e.z)),
        "hp": abs(p.h * e.p - (p.b * e.s - 1.0)),
        "1/N": abs(1.0 / e.N - (1.0 + p.m * e.y)),
    }


# leading-order stability -------------------------------------------------------------


def jacobian_gamma(p: Params, e: EdeState) -> SquareMatrix:
    """Jacobian at an endemic equilibrium with entries polynomial in G = 1/eps.

    State order (X, Y, S, U, N).
    """
    G1 = GammaPoly.mono
    c = GammaPoly.const
    rows = [
        [GammaPoly({1: -p.rho, 0: -1.0}), G1(1.0), G1(e.v), G1(e.r), G1(-e.y)],
        [G1(p.rho), G1(-1.0), c(0.0), c(0.0), c(0.0)],
        [c(0.0), c(-1.0), c(-e.v_bar), c(-e.r), c(e.y)],
        [c(0.0), c(-p.b * e.u), c(p.psi), c(-e.w_bar), c(e.u * e.z)],
        [c(0.0), c(-p.m), c(0.0), c(0.0), c(-1.0)],
    ]
    return SquareMatrix.from_rows(rows)


@dataclass(frozen=True)
class LeadingCharPoly:
    k: tuple[float, ...]
    p: tuple[int, ...]

    def at(self, gamma: float) -> tuple[float, ...]:
        """c_m = k_m * gamma**p_m."""
        return tuple(k * gamma**q for k, q in zip(self.k, self.p))

    def gamma_coeffs(self) -> tuple[GammaPoly, ...]:
        return tuple(GammaPoly.mono(k, q) for k, q in zip(self.k, self.p))


LEADING_EXPONENTS = (1, 1, 2, 2, 2)


def conditions_AB(p: Params, e: EdeState) -> tuple[float, float]:
    A = (p.kappa - p.m) + p.b * p.h * e.u
    B = A + (p.kappa - p.m) * e.w + p.m * p.h * e.u * e.z + p.h * p.psi
    return A, B


def leading_charpoly_closed(p: Params, e: EdeState) -> LeadingCharPoly:
    A, B = conditions_AB(p, e)
    k1 = p.rho_bar
    k2 = 1.0 + k1 + p.rho_bar * (e.v_bar + e.w_bar)
    k3 = p.rho * e.y * A
    k5 = p.rho * e.y * B
    k4 = k3 + k5
    return LeadingCharPoly((k1, k2, k3, k4, k5), LEADING_EXPONENTS)


def leading_charpoly_minors(p: Params, e: EdeState) -> LeadingCharPoly:
    """Leading terms of the principal-minor characteristic polynomial of the G-Jacobian."""
    cs = charpoly_minors(jacobian_gamma(p, e)).coeffs
    lts = [c.leading() for c in cs]
    return LeadingCharPoly(tuple(t.k for t in lts), tuple(t.p for t in lts))


class ConsistencyError(AssertionError):
    """Two independent routes to the same quantity disagree."""


def leading_charpoly(p: Params, e: EdeState, verify: bool = True, rtol: float = 1e-9) -> LeadingCharPoly:
    """k_1..k_5 and exponents of the leading-order characteristic polynomial.

    With ``verify`` the closed forms are checked against the principal-minor
    route over Gamma-polynomials.
    """
    closed = leading_charpoly_closed(p, e)
    if verify:
        minors = leading_charpoly_minors(p, e)
        if minors.p != closed.p or not np.allclose(minors.k, closed.k, rtol=rtol, atol=0.0):
            raise ConsistencyError(f"closed form {closed} disagrees with minors route {minors}")
    return closed


@dataclass(frozen=True)
class StabilityConditions:
    A: float
    B: float
    C: float
    k: tuple[float, ...]
    q1: float
    q2: float
    margin: float  # min of A, B, C each divided by the sum of its terms' magnitudes
    verdict: Verdict = field(compare=False)

    @property
    def k1(self):
        return self.k[0]

    @property
    def k2(self):
        return self.k[1]

    @property
    def k3(self):
        return self.k[2]

    @property
    def k4(self):
        return self.k[3]

    @property
    def k5(self):
        return self.k[4]

    def to_dict(self) -> dict:
        return {
            "A": self.A,
            "B": self.B,
            "C": self.C,
            "k": list(self.k),
            "q": [self.q1, self.q2],
            "margin": self.margin,
            "verdict": str(self.verdict),
        }


def stability_conditions(p: Params, e: EdeState) -> StabilityConditions:
    """A, B, C with k_1..k_5, q_1 = k1 k2 - k3 and q_2 = k3 q1 - k1^2 k4."""
    A, B = conditions_AB(p, e)
    rb, vb, wb = p.rho_bar, e.v_bar, e.w_bar
    C = rb * A + rb**2 * (A * vb + A * wb - B) - p.rho * e.y * A * A
    lc = leading_charpoly_closed(p, e)
    k1, k2, k3, k4, k5 = lc.k
    q1 = k1 * k2 - k3
    q2 = k3 * q1 - k1 * k1 * k4

    km = p.kappa + p.m
    sA = km + p.b * p.h * e.u
    sB = sA + km * e.w + p.m * p.h * e.u * e.z + p.h * p.psi
    sC = rb * sA + rb**2 * (sA * vb + sA * wb + sB) + p.rho * e.y * sA * sA
    margin = min(A / sA, B / sB, C / sC)

    if margin < -CONDITION_RTOL:
        v = Verdict(Stability.UNSTABLE, margin)
    elif margin > CONDITION_RTOL:
        v = Verdict(Stability.STABLE, margin)
    else:
        v = Verdict(Stability.INDETERMINATE, margin)
    return StabilityConditions(A, B, C, lc.k, q1, q2, margin, v)


def leading_routh_verdict(p: Params, e: EdeState) -> Verdict:
    """Verdict of the Routh array built from the leading-order polynomial."""
    return verdict_leading(build_routh(leading_charpoly_closed(p, e).gamma_coeffs(), raise_on_zero=False))


# numeric counterparts ---------------------------------------------------------------


@dataclass
class NumericCheck:
    eps: float
    asymptotic: Stability
    numeric: Stability | None
    max_real: float | None
    margin: float
    residual: float | None = None
    status: str = "ok"

    @property
    def agree(self) -> bool | None:
        if self.numeric is None:
            return None
        return self.asymptotic is self.numeric


def refine_ede(p: Params, e: EdeState, eps: float) -> State:
    return oracle.newton_refine(p, eps, e.to_state(p))


def numeric_check(p: Params, e: EdeState, eps: float, cond: StabilityConditions | None = None) -> NumericCheck:
    """Asymptotic verdict against eigenvalues at the Newton-refined equilibrium."""
    cond = cond or stability_conditions(p, e)
    try:
        x = refine_ede(p, e, eps)
    except (oracle.ConvergenceError, np.linalg.LinAlgError):
        return NumericCheck(eps, cond.verdict.stability, None, None, cond.margin, status="newton-failed")
    s, rs = oracle.numeric_verdict(p, x, eps)
    res = float(np.max(np.abs(_residual(p, x, eps))))
    status = "ok" if rs.converged else "roots-unconverged"
    return NumericCheck(eps, cond.verdict.stability, s, rs.max_real, cond.margin, res, status)


def _residual(p, x, eps):
    from .system import residual

    return residual(p, x.to_array(), eps)


# propositions ----------------------------------------------------------------------


def check_prop1(p: Params) -> dict:
    """Endemic equilibria with R0 <= 1 must have m > kappa and m > 0.75."""
    edes = solve_ede(p)
    report = {"R0": p.R0, "c": p.c, "m": p.m, "kappa": p.kappa, "n_ede": len(edes), "ok": True}
    if p.R0 <= 1 and edes and not (p.m > p.kappa and p.m > 0.75):
        report["ok"] = False
        report["counterexample"] = [e.z for e in edes]
    return report


def check_prop2(p: Params) -> dict:
    """With c > 0 there is exactly one admissible equilibrium and z* <= z_hat."""
    edes = solve_ede(p)
    roots_pos = [z for z in ede_roots(p) if z > 0]
    ok = True
    if p.c > 0:
        ok = len(edes) == 1 and len(roots_pos) == 1 and edes[0].p >= -ADMISSIBLE_ATOL
    return {"c": p.c, "n_ede": len(edes), "n_positive_roots": len(roots_pos), "z_hat": p.z_hat, "ok": ok}


def check_prop4(p: Params, eps: float | None = None) -> dict:
    """For each equilibrium: A, B, C, and (if eps given) the eigenvalue verdict."""
    rows = []
    ok = True
    for e in solve_ede(p):
        cond = stability_conditions(p, e)
        row = {"z": e.z, "A": cond.A, "B": cond.B, "C": cond.C, "margin": cond.margin, "asymptotic": str(cond.verdict)}
        if (p.m <= p.kappa or p.m <= 0.75) and not cond.verdict.stable:
            ok = False
        if eps is not None:
            chk = numeric_check(p, e, eps, cond)
            row.update(numeric=str(chk.numeric) if chk.numeric else None, max_real=chk.max_real, agree=chk.agree, status=chk.status)
        rows.append(row)
    return {"R0": p.R0, "m": p.m, "kappa": p.kappa, "equilibria": rows, "ok": ok}


def find_backward_bifurcation(
    m_values=(0.8, 0.85, 0.9, 0.95),
    kappa_values=(0.1, 0.3, 0.5, 0.7),
    b_values=(2.0, 4.0, 8.0),
    omega_values=tuple(np.linspace(0.0, 40.0, 81)),
    rho: float = 1.0,
    eps: float = 1e-3,
):
    """Grid search for parameters with R0 < 1 and two admissible equilibria.

    Yields every hit; psi = 0 and f = 1 make the region largest.
    """
    for m in m_values:
        for kappa in kappa_values:
            for b in b_values:
                sigma = kappa / b
                if not 0 < sigma <= 1:
                    continue
                for omega in omega_values:
                    p = Params(epsilon=eps, b=b, m=m, rho=rho, psi=0.0, omega=float(omega), sigma=sigma, f=1.0)
                    if p.c < 0 and len(solve_ede(p)) == 2:
                        yield p
