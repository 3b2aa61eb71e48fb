"""Numeric ground truth: roots, eigenvalues, equilibria and trajectories.

Everything here is deliberately independent of the asymptotic machinery:
eigenvalues come from the exact finite-epsilon Jacobian, equilibria from
Newton's method on the full rescaled system, and trajectories from an
explicit Dormand-Prince 5(4) integrator.
"""

from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .charpoly import as_charpoly, as_matrix, charpoly_minors
from .params import Params
from .system import STATE_NAMES, State, jacobian, residual, residual_jacobian, rhs, rhs_with_recovered

_U = np.finfo(float).eps / 2


class ConvergenceError(RuntimeError):
    """An iterative oracle did not reach its tolerance."""


class IntegrationError(RuntimeError):
    """Adaptive step size collapsed below representable resolution."""


# roots ---------------------------------------------------------------------------


@dataclass
class RootSet:
    roots: list[complex]
    residuals: list[float]
    backward_errors: list[float]
    converged: bool
    iterations: int

    @property
    def max_real(self) -> float:
        return max(z.real for z in self.roots)

    @property
    def min_separation(self) -> float:
        r = self.roots
        if len(r) < 2:
            return math.inf
        return min(abs(r[i] - r[j]) for i in range(len(r)) for j in range(i + 1, len(r)))

    def __len__(self) -> int:
        return len(self.roots)


def _horner(a, z):
    """p(z), p'(z) and sum |a_i||z|^i for coefficients a (highest power first)."""
    p = a[0]
    dp = 0j
    s = abs(a[0])
    az = abs(z)
    for c in a[1:]:
        dp = dp * z + p
        p = p * z + c
        s = s * az + abs(c)
    return p, dp, s


_SPLIT = 134217729.0  # 2^27 + 1


def _two_sum(a, b):
    s = a + b
    t = s - a
    return s, (a - (s - t)) + (b - t)


def _two_prod(a, b):
    p = a * b
    t = _SPLIT * a
    ah = t - (t - a)
    al = a - ah
    t = _SPLIT * b
    bh = t - (t - b)
    bl = b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _horner_comp(a, z):
    """Compensated Horner: p(z) as if evaluated in about twice the working precision."""
    x, y = z.real, z.imag
    pr, pi = float(a[0]), 0.0
    er = ei = 0.0
    for c in a[1:]:
        # (pr + i pi)(x + i y) + c, every rounding error captured exactly
        p1, e1 = _two_prod(pr, x)
        p2, e2 = _two_prod(-pi, y)
        p3, e3 = _two_prod(pr, y)
        p4, e4 = _two_prod(pi, x)
        r, e5 = _two_sum(p1, p2)
        r, e6 = _two_sum(r, float(c))
        i, e7 = _two_sum(p3, p4)
        er, ei = er * x - ei * y + (e1 + e2 + e5 + e6), er * y + ei * x + (e3 + e4 + e7)
        pr, pi = r, i
    return complex(pr + er, pi + ei)


def _initial_guesses(a) -> list[complex]:
    """Points on circles whose radii come from the Newton polygon of |a_i|."""
    n = len(a) - 1
    # coefficient of lam^i is a[n - i]
    logs = [math.log(abs(a[n - i])) if a[n - i] != 0 else -math.inf for i in range(n + 1)]
    pts = [i for i in range(n + 1) if logs[i] > -math.inf]
    hull = []
    for i in pts:
        while len(hull) >= 2:
            i1, i2 = hull[-2], hull[-1]
            # drop i2 unless it lies strictly above the chord i1 -> i
            if (logs[i2] - logs[i1]) * (i - i1) <= (logs[i] - logs[i1]) * (i2 - i1):
                hull.pop()
            else:
                break
        hull.append(i)
    guesses = []
    offset = 0.4  # breaks symmetry with real coefficients
    for i, j in zip(hull, hull[1:]):
        k = j - i
        r = math.exp((logs[i] - logs[j]) / k)
        for t in range(k):
            guesses.append(r * cmath.exp(1j * (2 * math.pi * t / k + 2 * math.pi * i / n + offset)))
    return guesses


def poly_roots(c, tol: float = 1e-12, maxiter: int = 200) -> RootSet:
    """All complex roots of the monic polynomial with coefficients c_1..c_n.

    Aberth-Ehrlich simultaneous iteration.  A root stops moving once its
    correction is below ``tol`` relative to its modulus.  Roots whose plain
    residual has reached rounding level switch to compensated evaluation,
    which lets clustered roots keep separating; they stop when that residual
    also reaches its (much lower) floor or the corrections stall.
    """
    c = as_charpoly(c)
    a = [1.0] + [float(x) for x in c.coeffs]
    zeros_at_origin = 0
    while len(a) > 1 and a[-1] == 0.0:
        a.pop()
        zeros_at_origin += 1
    n = len(a) - 1
    z = _initial_guesses(a) if n else []
    done = [False] * n
    fine = [False] * n
    last = [math.inf] * n
    floor = 4 * n * _U
    it = 0
    for it in range(1, maxiter + 1):
        for k in range(n):
            if done[k]:
                continue
            p, dp, s = _horner(a, z[k])
            if not fine[k] and abs(p) <= floor * s:
                fine[k] = True
            if fine[k]:
                p = _horner_comp(a, z[k])
                if abs(p) <= floor * floor * s:
                    done[k] = True
                    continue
            ratio = p / dp if dp != 0 else complex(1e-8 * (1 + abs(z[k])))
            acc = 0j
            for j in range(n):
                if j != k:
                    d = z[k] - z[j]
                    if d != 0:
                        acc += 1.0 / d
            corr = ratio / (1.0 - ratio * acc)
            z[k] -= corr
            if abs(corr) <= tol * max(abs(z[k]), _U) or (fine[k] and abs(corr) >= last[k]):
                done[k] = True
            last[k] = abs(corr)
        if all(done):
            break
    roots = [complex(x) for x in z] + [0j] * zeros_at_origin
    full = [1.0] + [float(x) for x in c.coeffs]
    res, bwd = [], []
    for r in roots:
        p, _, s = _horner(full, r)
        res.append(abs(p))
        bwd.append(abs(p) / s if s else 0.0)
    roots_sorted = sorted(range(len(roots)), key=lambda i: (-roots[i].real, roots[i].imag))
    return RootSet(
        roots=[roots[i] for i in roots_sorted],
        residuals=[res[i] for i in roots_sorted],
        backward_errors=[bwd[i] for i in roots_sorted],
        converged=all(done) or n == 0,
        iterations=it,
    )


def eigvals(M) -> RootSet:
    """Eigenvalues of a small real matrix as roots of its characteristic polynomial."""
    return poly_roots(charpoly_minors(as_matrix(M)))


# equilibria ------------------------------------------------------------------------


def newton_refine(p: Params, eps: float, guess, tol: float = 1e-12, maxiter: int = 50) -> State:
    """Equilibrium of the full rescaled system near ``guess`` (a State or array)."""
    x = guess.to_array() if isinstance(guess, State) else np.asarray(guess, dtype=float).copy()
    for _ in range(maxiter + 1):
        F = residual(p, x, eps)
        if np.max(np.abs(F)) <= tol:
            return State.from_array(x)
        step = np.linalg.solve(residual_jacobian(p, x, eps), F)
        x = x - step
        if not np.all(np.isfinite(x)):
            break
    raise ConvergenceError(f"Newton refinement did not reach residual {tol} in {maxiter} steps")


def numeric_verdict(p: Params, state, eps: float, margin: float = 1e-8):
    """Sign of the largest eigenvalue real part of the exact Jacobian at ``state``."""
    from .routh import Stability

    x = state.to_array() if isinstance(state, State) else np.asarray(state, dtype=float)
    rs = eigvals(jacobian(p, x, eps))
    mr = rs.max_real
    if mr < -margin:
        s = Stability.STABLE
    elif mr > margin:
        s = Stability.UNSTABLE
    else:
        s = Stability.INDETERMINATE
    return s, rs


# integration -----------------------------------------------------------------------

# Dormand-Prince 5(4)
_A = [
    np.zeros(0),
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_A = [np.array(row, dtype=float) for row in _A]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4

NEG_TOL = -1e-9
MIN_EPS_SIM = 1e-6


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (len(times), 5) columns X, Y, S, U, N
    eps: float
    recovered: np.ndarray | None = field(default=None, repr=False)
    rejected: int = 0

    def __len__(self) -> int:
        return len(self.times)

    @property
    def final(self) -> State:
        return State.from_array(self.states[-1])

    def column(self, name: str) -> np.ndarray:
        return self.states[:, STATE_NAMES.index(name)]

    def infectious_fraction(self) -> np.ndarray:
        """eps*Y/N: infectious share of the living population."""
        return self.eps * self.column("Y") / self.column("N")

    def to_csv(self, fh=None) -> str | None:
        own = fh is None
        fh = io.StringIO() if own else fh
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("t",) + STATE_NAMES)
        for t, row in zip(self.times, self.states):
            w.writerow([repr(float(t))] + [repr(float(v)) for v in row])
        return fh.getvalue() if own else None


def simulate(
    p: Params,
    eps: float,
    init,
    t_end: float,
    tol: float = 1e-8,
    h0: float | None = None,
    with_recovered: bool = False,
    max_steps: int = 10_000_000,
) -> Trajectory:
    """Integrate the rescaled system on [0, t_end] with step-size control.

    Errors are measured with ``atol = rtol = tol``.  Steps producing a
    population below -1e-9 are rejected and retried with half the step.
    """
    if eps < MIN_EPS_SIM:
        raise ValueError(f"eps must be >= {MIN_EPS_SIM} for explicit integration")
    x = init.to_array() if isinstance(init, State) else np.asarray(init, dtype=float).copy()
    if np.any(x < NEG_TOL):
        raise ValueError("initial state must be nonnegative")
    if with_recovered:
        if len(x) == 5:
            x = np.append(x, State.from_array(x).R(eps))
        f = lambda y: rhs_with_recovered(p, y, eps)  # noqa: E731
    else:
        f = lambda y: rhs(p, y, eps)  # noqa: E731
    times = [0.0]
    states = [x.copy()]
    if t_end <= 0:
        return _pack(times, states, eps, with_recovered, 0)

    t = 0.0
    h = h0 if h0 is not None else min(t_end, eps * 1e-2)
    K = np.empty((7, len(x)))
    K[0] = f(x)
    err_prev = 1.0
    rejected = 0
    for _ in range(max_steps):
        if t >= t_end:
            break
        h = min(h, t_end - t)
        if h <= 1e-14 * max(1.0, abs(t)):
            raise IntegrationError(f"step size underflow at t={t}")
        for s in range(1, 7):
            ys = x + h * (_A[s] @ K[:s])
            K[s] = f(ys)
        x_new = ys  # the last stage sits at the 5th-order solution (FSAL)
        err_vec = h * (_E @ K)
        sc = tol + tol * np.maximum(np.abs(x), np.abs(x_new))
        err = float(np.sqrt(np.mean((err_vec / sc) ** 2)))
        if not np.isfinite(err):
            h *= 0.25
            rejected += 1
            continue
        # a step may not push a population below -1e-9 (already-negative ones may not decrease)
        positive = np.all((x_new >= NEG_TOL) | (x_new >= x))
        if err <= 1.0 and positive:
            t += h
            x = x_new
            K[0] = K[6]
            times.append(t)
            states.append(x.copy())
            # PI controller (Hairer & Wanner, beta = 0.04)
            err = max(err, 1e-10)
            fac = 0.9 * err ** (-0.7 / 5) * err_prev ** (0.4 / 5)
            h *= min(5.0, max(0.2, fac))
            err_prev = err
        else:
            rejected += 1
            if err > 1.0:
                h *= max(0.2, 0.9 * err ** (-1 / 5))
            else:
                h *= 0.5
    else:
        raise IntegrationError(f"exceeded {max_steps} steps before t_end={t_end}")
    return _pack(times, states, eps, with_recovered, rejected)


def _pack(times, states, eps, with_recovered, rejected) -> Trajectory:
    arr = np.array(states)
    return Trajectory(
        times=np.array(times),
        states=arr[:, :5],
        eps=eps,
        recovered=arr[:, 5] if with_recovered else None,
        rejected=rejected,
    )
