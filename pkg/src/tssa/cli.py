"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 integrator failure,
3 some verdict is Indeterminate.  Errors are also written to stderr as JSON.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from pathlib import Path

from .charpoly import charpoly_minors, matrix_from_json
from .gammapoly import GammaPoly, format_gamma, parse_gamma
from .oracle import IntegrationError, simulate
from .params import EPS_REGIME_MAX, Params, params_from_json
from .routh import Stability, ZeroPivot, build_routh, format_entry, verdict, verdict_leading
from .sweep import SweepConfig, rows_to_csv, run_sweep
from .system import State
from .tworisk import dfe, dfe_stability, numeric_check, solve_ede, stability_conditions

EXIT_OK, EXIT_INPUT, EXIT_INTEGRATOR, EXIT_INDETERMINATE = 0, 1, 2, 3


class InputError(ValueError):
    pass


def _default_seed() -> int:
    env = os.environ.get("TSSA_SEED")
    if env is None:
        return 42
    try:
        return int(env)
    except ValueError:
        raise InputError(f"TSSA_SEED must be an integer, got {env!r}") from None


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON from {path}: {exc}") from None


def _load_params(path: str) -> Params:
    try:
        return params_from_json(_read_json(path))
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from None


def _eps_list(text: str | None) -> list[float]:
    if not text:
        return []
    try:
        out = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"bad --eps list {text!r}") from None
    if any(e <= 0 for e in out):
        raise InputError("eps values must be positive")
    return out


def _emit(obj, out: str | None, fmt: str = "json"):
    text = obj if isinstance(obj, str) else json.dumps(obj, indent=2)
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _warn(msg: str):
    sys.stderr.write(json.dumps({"warning": msg}) + "\n")


# commands ----------------------------------------------------------------------------


def cmd_charpoly(args) -> int:
    try:
        M = matrix_from_json(_read_json(args.matrix))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    cp = charpoly_minors(M)
    if isinstance(cp.coeffs[0], GammaPoly):
        body = {
            "coeffs": [format_gamma(c) for c in cp.coeffs],
            "leading": [{"k": c.leading().k, "p": c.leading().p} for c in cp.coeffs],
        }
    else:
        body = {"coeffs": [float(c) for c in cp.coeffs]}
    _emit(body, args.out)
    return EXIT_OK


def cmd_routh(args) -> int:
    try:
        raw = [x.strip() for x in args.coeffs.split(",")]
        vals = [parse_gamma(x) for x in raw]
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if len(vals) < 3:
        raise InputError("need at least 1,c1,c2")
    lead = vals[0]
    if lead.degree != 0 or lead.coeff(0) == 0:
        raise InputError("leading coefficient must be a nonzero constant")
    gamma = any(v.degree > 0 for v in vals)
    coeffs = [v / lead.coeff(0) for v in vals[1:]]
    if not gamma:
        coeffs = [v.coeff(0) for v in coeffs]
    arr = build_routh(coeffs, raise_on_zero=False)
    v = verdict_leading(arr) if gamma else verdict(arr)
    body = {
        "degree": arr.n,
        "rows": [[format_entry(x) if gamma else float(x) for x in r] for r in arr.rows],
        "first_column": [format_entry(x) if gamma else float(x) for x in arr.first_column],
        "verdict": str(v),
        "margin": v.margin,
    }
    if gamma:
        body["values"] = [[x.eval(args.gamma) for x in r] for r in arr.rows] if args.gamma else None
    if arr.zero_pivot_row:
        body["zero_pivot_row"] = arr.zero_pivot_row
    _emit(body, args.out)
    return EXIT_INDETERMINATE if v.stability is Stability.INDETERMINATE else EXIT_OK


def analyze(p: Params, eps: float | None = None) -> dict:
    """Report for one parameter point: DFE, equilibria, conditions and verdicts."""
    eps = p.epsilon if eps is None else eps
    dv = dfe_stability(p, eps)
    d = dfe(p)
    report = {
        "params": p.to_dict(derived=True),
        "r0": p.R0,
        "c": p.c,
        "dfe": {"state": d.__dict__, "verdict": str(dv), "max_real": dv.margin},
        "ede": [],
    }
    verdicts = {"dfe": str(dv)}
    for i, e in enumerate(solve_ede(p)):
        cond = stability_conditions(p, e)
        chk = numeric_check(p, e, eps, cond)
        report["ede"].append(
            {
                **e.to_dict(),
                "conditions": cond.to_dict(),
                "verdict": str(cond.verdict),
                "numeric": {
                    "eps": eps,
                    "verdict": str(chk.numeric) if chk.numeric else None,
                    "max_real": chk.max_real,
                    "agree": chk.agree,
                    "status": chk.status,
                },
            }
        )
        verdicts[f"ede{i}"] = str(cond.verdict)
    if report["ede"]:
        report["conditions"] = report["ede"][0]["conditions"]
    report["verdicts"] = verdicts
    return report


def cmd_analyze(args) -> int:
    p = _load_params(args.params)
    eps = _eps_list(args.eps)
    report = analyze(p, eps[0] if eps else None)
    _emit(report, args.out)
    indeterminate = any(v == str(Stability.INDETERMINATE) for v in report["verdicts"].values())
    return EXIT_INDETERMINATE if indeterminate else EXIT_OK


NEAR_MARGIN = 0.05


def verify(p: Params, eps_list) -> list[dict]:
    rows = []
    for eps in eps_list:
        if eps > EPS_REGIME_MAX:
            _warn(f"eps={eps} is outside the asymptotic regime (<= {EPS_REGIME_MAX})")
        edes = solve_ede(p)
        if not edes:
            dv = dfe_stability(p, eps)
            asym = Stability.STABLE if p.c < 0 else Stability.UNSTABLE if p.c > 0 else Stability.INDETERMINATE
            rows.append(
                {
                    "eps": eps,
                    "equilibrium": "dfe",
                    "asymptotic": str(asym),
                    "numeric": str(dv),
                    "max_real": dv.margin,
                    "agree": asym is dv.stability,
                    "margin": p.c,
                    "flag": "",
                }
            )
        for i, e in enumerate(edes):
            chk = numeric_check(p, e, eps)
            flags = []
            if abs(chk.margin) < NEAR_MARGIN:
                flags.append("near-margin")
            if chk.status != "ok":
                flags.append(chk.status)
            rows.append(
                {
                    "eps": eps,
                    "equilibrium": f"ede{i}",
                    "asymptotic": str(chk.asymptotic),
                    "numeric": str(chk.numeric) if chk.numeric else None,
                    "max_real": chk.max_real,
                    "agree": chk.agree,
                    "margin": chk.margin,
                    "flag": ";".join(flags),
                }
            )
    return rows


def cmd_verify(args) -> int:
    p = _load_params(args.params)
    eps = _eps_list(args.eps) or [p.epsilon]
    rows = verify(p, eps)
    if args.format == "csv":
        _emit(rows_to_csv(rows), args.out)
    else:
        _emit(rows, args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    try:
        cfg_obj = _read_json(args.config) if args.config else {}
        if args.seed is not None:
            cfg_obj["seed"] = args.seed
        elif "seed" not in cfg_obj:
            cfg_obj["seed"] = _default_seed()
        if args.samples is not None:
            cfg_obj["samples"] = args.samples
        if args.eps:
            cfg_obj["eps"] = _eps_list(args.eps)
        cfg = SweepConfig.from_json(cfg_obj)
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from None
    if args.jobs < 1:
        raise InputError("--jobs must be >= 1")
    rows = run_sweep(cfg, jobs=args.jobs)
    _emit(rows_to_csv(rows), args.out)
    return EXIT_OK


def _load_state(path: str) -> State:
    obj = _read_json(path)
    try:
        extra = set(obj) - set(State.__dataclass_fields__)
        if extra:
            raise ValueError(f"unknown state fields: {sorted(extra)}")
        return State(**{k: float(v) for k, v in obj.items()})
    except (TypeError, ValueError, AttributeError) as exc:
        raise InputError(f"bad initial state: {exc}") from None


def cmd_simulate(args) -> int:
    p = _load_params(args.params)
    eps = _eps_list(args.eps)
    eps = eps[0] if eps else p.epsilon
    if args.init:
        init = _load_state(args.init)
    else:
        d = dfe(p)
        init = State(X=0.0, Y=args.y0, S=d.S, U=d.U, N=d.N)
    try:
        traj = simulate(p, eps, init, args.t_end, tol=args.tol)
    except IntegrationError as exc:
        sys.stderr.write(json.dumps({"error": str(exc), "kind": "integrator"}) + "\n")
        return EXIT_INTEGRATOR
    except ValueError as exc:
        raise InputError(str(exc)) from None
    frac = traj.infectious_fraction()
    edes = solve_ede(p)
    summary = {
        "eps": eps,
        "t_end": float(traj.times[-1]),
        "steps": len(traj) - 1,
        "rejected": traj.rejected,
        "final": traj.final.__dict__,
        "final_infectious_fraction": float(frac[-1]),
        "ratio_to_eps": float(frac[-1] / eps),
        "peak_infectious_fraction": float(frac.max()),
        "predicted_infectious_fraction": [eps * e.y for e in edes],
    }
    csv_text = traj.to_csv()
    if args.out:
        Path(args.out).write_text(csv_text)
        sys.stdout.write(json.dumps(summary, indent=2) + "\n")
    else:
        sys.stdout.write(csv_text)
        sys.stderr.write(json.dumps(summary) + "\n")
    return EXIT_OK


# parser -------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tssa", description="Two-time-scale local stability analysis.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("charpoly", help="characteristic polynomial of a matrix JSON file")
    s.add_argument("--matrix", required=True, help='JSON {"n": int, "entries": [[...]]}; "-" for stdin')
    s.add_argument("--out")
    s.set_defaults(func=cmd_charpoly)

    s = sub.add_parser("routh", help="Routh array and verdict for 1,c1,...,cn")
    s.add_argument("--coeffs", required=True, help="comma list; entries may be Gamma polynomials like 2*G^2")
    s.add_argument("--gamma", type=float, help="also evaluate Gamma entries at this value")
    s.add_argument("--out")
    s.set_defaults(func=cmd_routh)

    for name, fn, hlp in (
        ("analyze", cmd_analyze, "full report for one parameter point"),
        ("verify", cmd_verify, "asymptotic vs eigenvalue verdicts over eps values"),
    ):
        s = sub.add_parser(name, help=hlp)
        s.add_argument("--params", required=True)
        s.add_argument("--eps", help="comma list of eps values")
        s.add_argument("--format", choices=("json", "csv"), default="json")
        s.add_argument("--out")
        s.set_defaults(func=fn)

    s = sub.add_parser("sweep", help="seeded parameter sweep to CSV")
    s.add_argument("--config", help="sweep config JSON")
    s.add_argument("--samples", type=int)
    s.add_argument("--eps", help="eps values for numeric checks")
    s.add_argument("--seed", type=int)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out")
    s.add_argument("--format", choices=("csv",), default="csv")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("simulate", help="integrate the rescaled system, trajectory CSV")
    s.add_argument("--params", required=True)
    s.add_argument("--eps")
    s.add_argument("--t-end", type=float, default=50.0)
    s.add_argument("--init", help="initial State JSON {X, Y, S, U, N}; default is the DFE with Y=--y0")
    s.add_argument("--y0", type=float, default=1e-2)
    s.add_argument("--tol", type=float, default=1e-8)
    s.add_argument("--out")
    s.add_argument("--format", choices=("csv",), default="csv")
    s.set_defaults(func=cmd_simulate)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            warnings.showwarning = lambda msg, *a, **k: _warn(str(msg))
            return args.func(args)
    except InputError as exc:
        sys.stderr.write(json.dumps({"error": str(exc), "kind": "input"}) + "\n")
        return EXIT_INPUT
    except ZeroPivot as exc:
        sys.stderr.write(json.dumps({"error": str(exc), "kind": "zero-pivot"}) + "\n")
        return EXIT_INDETERMINATE


if __name__ == "__main__":
    sys.exit(main())
