"""The rescaled five-state system (E = eps*X, I = eps*Y) at finite epsilon.

Equations, with Q = (1 - sigma) U + sigma S::

    eps X' = -(rho + eps) X + b Q Y / N
    eps Y' = rho X - Y
        S' = 1 - S - b Q Y / N
        U' = f + psi S - (Sigma + 1) U - b U Y / N
        N' = 1 - N - m Y

R = N - S - eps X - eps Y is derived; it is integrated only on request.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import Params

STATE_NAMES = ("X", "Y", "S", "U", "N")


@dataclass(frozen=True)
class State:
    X: float
    Y: float
    S: float
    U: float
    N: float

    @classmethod
    def from_array(cls, a) -> State:
        return cls(*map(float, a[:5]))

    def to_array(self) -> np.ndarray:
        return np.array([self.X, self.Y, self.S, self.U, self.N])

    def R(self, eps: float) -> float:
        return self.N - self.S - eps * (self.X + self.Y)

    @property
    def P(self) -> float:
        return self.S - self.U

    def Q(self, sigma: float) -> float:
        return (1.0 - sigma) * self.U + sigma * self.S


def residual(p: Params, x, eps: float | None = None) -> np.ndarray:
    """Right-hand sides with the fast equations left multiplied by eps."""
    eps = p.epsilon if eps is None else eps
    X, Y, S, U, N = x
    inc = p.b * ((1.0 - p.sigma) * U + p.sigma * S) * Y / N
    return np.array(
        [
            -(p.rho + eps) * X + inc,
            p.rho * X - Y,
            1.0 - S - inc,
            p.f + p.psi * S - p.Sigma_bar * U - p.b * U * Y / N,
            1.0 - N - p.m * Y,
        ]
    )


def residual_jacobian(p: Params, x, eps: float | None = None) -> np.ndarray:
    eps = p.epsilon if eps is None else eps
    X, Y, S, U, N = x
    Q = (1.0 - p.sigma) * U + p.sigma * S
    b, sg = p.b, p.sigma
    return np.array(
        [
            [-(p.rho + eps), b * Q / N, b * sg * Y / N, b * (1 - sg) * Y / N, -b * Q * Y / N**2],
            [p.rho, -1.0, 0.0, 0.0, 0.0],
            [0.0, -b * Q / N, -1.0 - b * sg * Y / N, -b * (1 - sg) * Y / N, b * Q * Y / N**2],
            [0.0, -b * U / N, p.psi, -p.Sigma_bar - b * Y / N, b * U * Y / N**2],
            [0.0, -p.m, 0.0, 0.0, -1.0],
        ]
    )


def rhs(p: Params, x, eps: float | None = None) -> np.ndarray:
    """Time derivatives on the slow (demographic) time scale."""
    eps = p.epsilon if eps is None else eps
    F = residual(p, x, eps)
    F[:2] /= eps
    return F


def jacobian(p: Params, x, eps: float | None = None) -> np.ndarray:
    """Exact Jacobian of :func:`rhs`; rows X and Y carry the factor 1/eps."""
    eps = p.epsilon if eps is None else eps
    J = residual_jacobian(p, x, eps)
    J[:2] /= eps
    return J


def rhs_with_recovered(p: Params, x, eps: float | None = None) -> np.ndarray:
    """:func:`rhs` extended by R' = (1 - m - eps) Y - R (for conservation checks)."""
    eps = p.epsilon if eps is None else eps
    out = np.empty(6)
    out[:5] = rhs(p, x[:5], eps)
    out[5] = (1.0 - p.m - eps) * x[1] - x[5]
    return out
