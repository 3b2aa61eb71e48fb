"""Seeded parameter sampling and sweep evaluation.

Each sample index gets its own child generator spawned from the sweep
seed, so results do not depend on how samples are distributed over workers.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Iterable

import numpy as np

from .params import Params
from .tworisk import check_prop1, numeric_check, solve_ede, stability_conditions


@dataclass(frozen=True)
class Ranges:
    """Sampling box; ``b`` is log-uniform, everything else uniform."""

    b: tuple[float, float] = (1.1, 20.0)
    sigma: tuple[float, float] = (0.0, 1.0)
    m: tuple[float, float] = (0.0, 0.75)
    rho: tuple[float, float] = (0.1, 10.0)
    psi: tuple[float, float] = (0.0, 10.0)
    omega: tuple[float, float] = (0.0, 10.0)
    f: tuple[float, float] = (0.0, 1.0)


FILTERS = {
    "none": lambda p: True,
    "forward": lambda p: p.c > 0,
    "subthreshold": lambda p: p.c <= 0,
    "prop1": lambda p: p.c <= 0 and (p.m <= p.kappa or p.m <= 0.75),
}


def draw_params(rng: np.random.Generator, ranges: Ranges = Ranges(), eps: float = 1e-3) -> Params:
    lo, hi = ranges.b
    b = math.exp(rng.uniform(math.log(lo), math.log(hi)))
    sigma = rng.uniform(*ranges.sigma)
    while sigma <= 0.0:  # sigma = 0 is excluded
        sigma = rng.uniform(*ranges.sigma)
    return Params(
        epsilon=eps,
        b=b,
        m=rng.uniform(*ranges.m),
        rho=rng.uniform(*ranges.rho),
        psi=rng.uniform(*ranges.psi),
        omega=rng.uniform(*ranges.omega),
        sigma=sigma,
        f=rng.uniform(*ranges.f),
    )


def sample_params(
    seed: int, index: int, ranges: Ranges = Ranges(), accept: str = "none", eps: float = 1e-3, max_tries: int = 10_000
) -> Params:
    """The ``index``-th sample of a seeded sweep, redrawn until ``accept`` holds."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(index,))
    rng = np.random.default_rng(ss)
    pred = FILTERS[accept]
    for _ in range(max_tries):
        p = draw_params(rng, ranges, eps)
        if pred(p):
            return p
    raise RuntimeError(f"no sample satisfying {accept!r} in {max_tries} draws")


def iter_samples(n: int, seed: int, ranges: Ranges = Ranges(), accept: str = "none", eps: float = 1e-3) -> Iterable[Params]:
    for i in range(n):
        yield sample_params(seed, i, ranges, accept, eps)


# sweep rows ------------------------------------------------------------------------

PARAM_COLS = ("epsilon", "b", "m", "rho", "psi", "omega", "sigma", "f")


def evaluate(p: Params, eps_list: Iterable[float] = ()) -> list[dict[str, Any]]:
    """One row per admissible equilibrium (or a single row when there is none)."""
    eps_list = list(eps_list)
    base = {k: getattr(p, k) for k in PARAM_COLS}
    base.update(c=p.c, R0=p.R0, kappa=p.kappa)
    edes = solve_ede(p)
    base["n_ede"] = len(edes)
    base["prop1_ok"] = check_prop1(p)["ok"]
    if not edes:
        return [dict(base, branch="", z="", A="", B="", C="", margin="", asymptotic="", status="no-ede")]
    rows = []
    for i, e in enumerate(edes):
        cond = stability_conditions(p, e)
        row = dict(base, branch=i, z=e.z, A=cond.A, B=cond.B, C=cond.C, margin=cond.margin, asymptotic=str(cond.verdict))
        status = "ok"
        for eps in eps_list:
            chk = numeric_check(p, e, eps, cond)
            row[f"numeric@{eps:g}"] = str(chk.numeric) if chk.numeric else ""
            row[f"max_real@{eps:g}"] = chk.max_real if chk.max_real is not None else ""
            row[f"agree@{eps:g}"] = chk.agree if chk.agree is not None else ""
            if chk.status != "ok":
                status = chk.status
        row["status"] = status
        rows.append(row)
    return rows


@dataclass(frozen=True)
class SweepConfig:
    samples: int = 1000
    seed: int = 42
    accept: str = "none"
    eps: tuple[float, ...] = ()
    epsilon: float = 1e-3
    ranges: Ranges = field(default_factory=Ranges)

    def __post_init__(self):
        if self.samples < 0:
            raise ValueError("samples must be nonnegative")
        if self.accept not in FILTERS:
            raise ValueError(f"accept must be one of {sorted(FILTERS)}")

    @classmethod
    def from_json(cls, obj: dict[str, Any] | str) -> SweepConfig:
        if isinstance(obj, str):
            obj = json.loads(obj)
        names = {f.name for f in fields(cls)}
        extra = set(obj) - names
        if extra:
            raise ValueError(f"unknown sweep config fields: {sorted(extra)}")
        kw = dict(obj)
        if "ranges" in kw:
            rnames = {f.name for f in fields(Ranges)}
            bad = set(kw["ranges"]) - rnames
            if bad:
                raise ValueError(f"unknown range fields: {sorted(bad)}")
            kw["ranges"] = Ranges(**{k: tuple(map(float, v)) for k, v in kw["ranges"].items()})
        if "eps" in kw:
            kw["eps"] = tuple(float(x) for x in kw["eps"])
        return cls(**kw)


def _work(args):
    cfg, start, stop = args
    out = []
    for i in range(start, stop):
        p = sample_params(cfg.seed, i, cfg.ranges, cfg.accept, cfg.epsilon)
        for row in evaluate(p, cfg.eps):
            out.append(dict(sample=i, **row))
    return out


def run_sweep(cfg: SweepConfig, jobs: int = 1, chunk: int = 100) -> list[dict[str, Any]]:
    """Evaluate every sample; row order is by sample index regardless of ``jobs``."""
    if jobs < 1:
        raise ValueError("jobs must be >= 1")
    tasks = [(cfg, s, min(s + chunk, cfg.samples)) for s in range(0, cfg.samples, chunk)]
    if jobs == 1:
        parts = map(_work, tasks)
    else:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_work, tasks))
    return [row for part in parts for row in part]


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def rows_to_csv(rows: list[dict[str, Any]], fh=None) -> str | None:
    own = fh is None
    fh = io.StringIO() if own else fh
    cols: list[str] = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_cell(r.get(k, "")) for k in cols])
    return fh.getvalue() if own else None
