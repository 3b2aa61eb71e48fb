"""Parameters of the two-risk-group SEIR model, dimensional and scaled.

Slow rates (mu, Psi, Omega) are referred to mu, fast rates to the
infectious exit rate gamma + delta + mu; ``epsilon`` is the ratio of the two.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import asdict, dataclass, fields
from typing import Any


class AsymptoticRegimeWarning(UserWarning):
    """epsilon is too large for leading-order results to be trusted."""


EPS_REGIME_MAX = 0.1


@dataclass(frozen=True)
class DimParams:
    beta: float
    gamma: float
    delta: float
    eta: float
    mu: float
    Psi: float = 0.0
    Omega: float = 0.0
    sigma: float = 1.0
    f: float = 1.0

    def __post_init__(self):
        for name in ("beta", "gamma", "delta", "eta", "mu", "Psi", "Omega"):
            if getattr(self, name) < 0:
                raise ValueError(f"rate {name} must be nonnegative")
        if self.mu <= 0:
            raise ValueError("mu must be positive")
        if not 0 <= self.sigma <= 1 or not 0 <= self.f <= 1:
            raise ValueError("sigma and f must lie in [0, 1]")


@dataclass(frozen=True)
class Params:
    epsilon: float
    b: float
    m: float
    rho: float
    psi: float
    omega: float
    sigma: float
    f: float

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if not 0 <= self.m < 1:
            raise ValueError("m must lie in [0, 1)")
        if not 0 < self.sigma <= 1:
            raise ValueError("sigma must lie in (0, 1]")
        if not 0 <= self.f <= 1:
            raise ValueError("f must lie in [0, 1]")
        if self.psi < 0 or self.omega < 0:
            raise ValueError("psi and omega must be nonnegative")
        if not (self.b > 0 and self.rho > 0):
            raise ValueError("b and rho must be positive")
        for fld in fields(self):
            if not math.isfinite(getattr(self, fld.name)):
                raise ValueError(f"{fld.name} must be finite")
        if self.epsilon > EPS_REGIME_MAX:
            warnings.warn(
                f"epsilon={self.epsilon} is outside the asymptotic regime (<= {EPS_REGIME_MAX})",
                AsymptoticRegimeWarning,
                stacklevel=3,
            )

    # derived quantities; "bar" means value + 1
    @property
    def Sigma(self) -> float:
        return self.psi + self.omega

    @property
    def Sigma_bar(self) -> float:
        return self.Sigma + 1.0

    @property
    def kappa(self) -> float:
        return self.sigma * self.b

    @property
    def h(self) -> float:
        return (1.0 - self.sigma) * self.b

    @property
    def rho_bar(self) -> float:
        return self.rho + 1.0

    @property
    def c(self) -> float:
        return self.h * (self.psi + self.f) - (1.0 - self.kappa) * self.Sigma_bar

    @property
    def R0(self) -> float:
        return (self.h * (self.psi + self.f) + self.kappa * self.Sigma_bar) / self.Sigma_bar

    @property
    def z_hat(self) -> float:
        """Largest z with p >= 0, i.e. (b - 1)/(1 - m)."""
        return (self.b - 1.0) / (1.0 - self.m)

    def replace(self, **kw) -> Params:
        d = asdict(self)
        d.update(kw)
        return Params(**d)

    def to_dict(self, derived: bool = False) -> dict[str, float]:
        d = asdict(self)
        if derived:
            d.update(
                Sigma=self.Sigma,
                kappa=self.kappa,
                h=self.h,
                c=self.c,
                R0=self.R0,
                z_hat=self.z_hat,
            )
        return d


def nondimensionalize(d: DimParams) -> Params:
    fast = d.gamma + d.delta + d.mu
    if fast <= 0:
        raise ValueError("gamma + delta + mu must be positive")
    return Params(
        epsilon=d.mu / fast,
        b=d.beta / fast,
        m=d.delta / fast,
        rho=d.eta / fast,
        psi=d.Psi / d.mu,
        omega=d.Omega / d.mu,
        sigma=d.sigma,
        f=d.f,
    )


def _strict(cls, block: dict[str, Any]):
    names = {f.name for f in fields(cls)}
    extra = set(block) - names
    if extra:
        raise ValueError(f"unknown {cls.__name__} fields: {sorted(extra)}")
    try:
        return cls(**{k: float(v) for k, v in block.items()})
    except TypeError as exc:
        raise ValueError(str(exc)) from None


def params_from_json(obj: dict[str, Any] | str) -> Params:
    """``{"dimensionless": {...}}`` or ``{"dimensional": {...}}``."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ValueError("params JSON needs exactly one of 'dimensionless' or 'dimensional'")
    (kind, block), = obj.items()
    if not isinstance(block, dict):
        raise ValueError(f"'{kind}' must be an object")
    if kind == "dimensionless":
        return _strict(Params, block)
    if kind == "dimensional":
        return nondimensionalize(_strict(DimParams, block))
    raise ValueError(f"unknown params block {kind!r}")


def params_to_json(p: Params) -> dict[str, Any]:
    return {"dimensionless": asdict(p)}


# b=2, sigma=1/2, psi=omega=0, f=1, m=0, rho=1: R0 = 2 and the EDE sits at z = 1
WORKED_POINT = Params(epsilon=1e-3, b=2.0, m=0.0, rho=1.0, psi=0.0, omega=0.0, sigma=0.5, f=1.0)
