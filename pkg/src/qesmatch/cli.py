"""Command-line front end.

Exit codes: 0 success, 1 invalid arguments, 2 infeasible / no root,
3 numerical non-convergence.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Dict, List, Optional

from . import oracle
from .matcher import (ConvergenceError, MatchError, SignB, feasible_window, match,
                      roundtrip_residuals, scan_N)
from .qes import QesError, QesPotentialSpec, qes_levels, qes_to_polynomial
from .reference import CASES, N9
from .report import ReportEnvelope, flatten
from .spectra import SuqSpectrumParams, suq11_level
from .wkbep import PotentialPolynomial

CONFIG_ENV = "QESMATCH_CONFIG"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_NUMERICAL = 3

DEFAULTS = {
    "oracle": {"step": oracle.DEFAULT_STEP, "margin": oracle.DEFAULT_MARGIN,
               "tol": oracle.DEFAULT_TOL},
    "matcher": {"tol": 1e-10},
}

log = logging.getLogger("qesmatch.cli")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def load_config(path: Optional[str]) -> Dict[str, Dict[str, float]]:
    cfg = {k: dict(v) for k, v in DEFAULTS.items()}
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return cfg
    try:
        with open(path) as fh:
            user = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for section, values in user.items():
        if section not in cfg or not isinstance(values, dict):
            raise UsageError(f"unknown config section {section!r}")
        for key, val in values.items():
            if key not in cfg[section]:
                raise UsageError(f"unknown config key {section}.{key}")
            cfg[section][key] = float(val)
    return cfg


def _sign(s: str) -> SignB:
    return SignB(s)


def _indices(text: str) -> List[int]:
    try:
        out = [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad index list {text!r}") from exc
    if not out:
        raise argparse.ArgumentTypeError("empty index list")
    return out


def _opt(args, name, cfg_section, cfg):
    val = getattr(args, name, None)
    return cfg[cfg_section][name] if val is None else val


# commands -------------------------------------------------------------------

def cmd_window(args, cfg) -> ReportEnvelope:
    lo, hi = feasible_window(args.sign_b)
    return ReportEnvelope(
        command="window",
        inputs={"sign_b": args.sign_b.value},
        outputs={"lower": lo, "upper": hi},
        provenance={"lower": "theta where cos^2 = 6/23" if args.sign_b is SignB.POSITIVE
                    else "theta where cos^2 = 1/3",
                    "upper": "theta where cos^2 = 1/3" if args.sign_b is SignB.POSITIVE
                    else "theta where cos^2 = 6/23"},
        rows=[{"sign_b": args.sign_b.value, "lower": lo, "upper": hi}],
    )


def _solution_body(sol) -> dict:
    c2, r4, r6 = sol.potential.factored()
    return {
        "k": sol.spec.k,
        "tau": sol.tau,
        "theta": sol.theta,
        "A": sol.A,
        "b": sol.b,
        "E0prime": sol.E0prime,
        "polynomial": sol.potential.as_dict(),
        "factored": {"prefactor": c2, "x4_ratio": r4, "x6_ratio": r6},
        "residuals": dict(zip(("x2", "x4", "x6"), sol.residuals)),
        "roundtrip": dict(zip(("c2", "c4", "c6"), roundtrip_residuals(sol))),
    }


MATCH_PROVENANCE = {
    "tau": "bisection root of the x^2 coefficient condition on the first window branch",
    "A": "x^6 coefficient condition with a = 1",
    "b": "x^4 coefficient condition",
    "E0prime": "offset placing the potential minimum at zero",
    "polynomial": "u-series of the WKB equivalent potential truncated at x^6",
    "residuals": "relative mismatch of the three coefficient equations",
}


def cmd_match(args, cfg) -> ReportEnvelope:
    sol = match(args.n, args.r, args.N, args.sign_b, tol=_opt(args, "tol", "matcher", cfg))
    body = _solution_body(sol)
    return ReportEnvelope(
        command="match",
        inputs={"n": args.n, "r": args.r, "N": args.N, "sign_b": args.sign_b.value},
        outputs=body,
        provenance=MATCH_PROVENANCE,
        rows=[{"quantity": k, "value": v} for k, v in flatten(body).items()],
    )


def cmd_scan(args, cfg) -> ReportEnvelope:
    if args.N_max < args.N_min:
        raise UsageError("--N-max must be >= --N-min")
    sols = scan_N(args.n, args.r, args.sign_b, range(args.N_min, args.N_max + 1))
    rows = [{"N": s.N, "tau": s.tau, "theta": s.theta, "A": s.A, "b": s.b,
             "E0prime": s.E0prime} for s in sols]
    return ReportEnvelope(
        command="scan",
        inputs={"n": args.n, "r": args.r, "sign_b": args.sign_b.value,
                "N_min": args.N_min, "N_max": args.N_max},
        outputs={"solutions": rows},
        provenance={"solutions": "one match per admissible N, first window branch"},
        rows=rows,
    )


def _oracle_polynomial(args) -> PotentialPolynomial:
    if args.b is not None:
        return qes_to_polynomial(QesPotentialSpec(a=args.a, b=args.b, n=args.n, r=args.r))
    if args.c2 is None and args.c4 is None and args.c6 is None:
        raise UsageError("oracle source needs --c2/--c4/--c6 or --b")
    return PotentialPolynomial(vmin=args.vmin, c2=args.c2 or 0.0, c4=args.c4 or 0.0,
                               c6=args.c6 or 0.0)


def cmd_levels(args, cfg) -> ReportEnvelope:
    src = args.source
    if src == "qes":
        if args.b is None:
            raise UsageError("qes source needs --b")
        spec = QesPotentialSpec(a=args.a, b=args.b, n=args.n, r=args.r)
        rows = [{"index": j, "label": 2 * j + spec.r, "energy": e}
                for j, e in enumerate(qes_levels(spec))]
        inputs = {"source": src, "a": spec.a, "b": spec.b, "n": spec.n, "r": spec.r}
        prov = {"levels": "eigenvalues of the quasi-exact sector matrix"}
    elif src == "suq":
        missing = [f for f in ("A", "tau", "N", "E0") if getattr(args, f) is None]
        if missing:
            raise UsageError(f"suq source needs --{', --'.join(missing)}")
        p = SuqSpectrumParams(E0prime=args.E0, A=args.A, tau=args.tau, N=args.N)
        idx = args.indices if args.indices is not None else list(range(args.count))
        rows = [{"index": i, "energy": suq11_level(i, p)} for i in idx]
        inputs = {"source": src, "A": p.A, "tau": p.tau, "N": p.N, "E0prime": p.E0prime,
                  "indices": idx}
        prov = {"levels": "SU_q(1,1) anharmonic oscillator spectrum"}
    else:
        poly = _oracle_polynomial(args)
        step = _opt(args, "step", "oracle", cfg)
        margin = _opt(args, "margin", "oracle", cfg)
        tol = _opt(args, "tol", "oracle", cfg)
        if args.half_width is not None:
            g = oracle.GridSpec(half_width=args.half_width, step=step, count=args.count)
        else:
            g = oracle.auto_grid(poly, args.count, step=step, margin=margin)
        solve = oracle.solve_bound_states if args.no_extrapolate else oracle.refine
        rep = solve(poly, g, tol=tol, margin=margin)
        rows = [{"index": i, "energy": e, "parity": p.value, "convergence_estimate": c}
                for i, (e, p, c) in enumerate(zip(rep.energies, rep.parities,
                                                  rep.convergence_estimate))]
        inputs = {"source": src, "polynomial": poly.as_dict(), "count": args.count,
                  "grid": {"half_width": g.half_width, "step": g.step},
                  "extrapolate": not args.no_extrapolate}
        prov = {"levels": "finite-difference bound states, Richardson-extrapolated"
                if not args.no_extrapolate else "finite-difference bound states"}
        return ReportEnvelope("levels", inputs,
                              {"levels": rows, "near_degenerate": rep.near_degenerate},
                              prov, rows)
    return ReportEnvelope("levels", inputs, {"levels": rows}, prov, rows)


def table1_rows(params: str = "reference"):
    """Ten (approx, exact) even-level pairs for the n = 9 correspondence."""
    if params == "reference":
        suq_p, spec = N9.suq_params, N9.qes_spec
        used = {"N": N9.N, "tau": N9.tau, "A": N9.A, "E0prime": N9.E0prime, "b": N9.b}
    elif params == "solved":
        sol = match(N9.n, N9.r, N9.N, N9.sign_b)
        suq_p, spec = sol.suq_params, sol.spec
        used = {"N": sol.N, "tau": sol.tau, "A": sol.A, "E0prime": sol.E0prime, "b": sol.b}
    else:
        raise UsageError(f"unknown parameter set {params!r}")
    exact = qes_levels(spec)
    rows = []
    for j, e_exact in enumerate(exact):
        label = 2 * j + spec.r
        e_approx = suq11_level(label, suq_p)
        rows.append({"n": label, "E_approx": e_approx, "E_exact": e_exact,
                     "abs_diff": abs(e_approx - e_exact)})
    return used, rows


def cmd_table1(args, cfg) -> ReportEnvelope:
    used, rows = table1_rows(args.params)
    worst = max(rows, key=lambda r: r["abs_diff"])
    return ReportEnvelope(
        command="table1",
        inputs={"params": args.params, "parameters": used, "a": 1.0, "n": 9, "r": 0},
        outputs={"rows": rows, "max_abs_diff": worst["abs_diff"], "max_row": worst["n"]},
        provenance={"E_approx": "SU_q(1,1) spectrum at the matched parameters",
                    "E_exact": "eigenvalues of the quasi-exact sector matrix"},
        rows=rows,
    )


def cmd_failure_demo(args, cfg) -> ReportEnvelope:
    rep = oracle.failure_demo(count=args.count, step=_opt(args, "step", "oracle", cfg),
                              margin=_opt(args, "margin", "oracle", cfg))
    levels = [{"index": i, "energy": e, "parity": p.value}
              for i, (e, p) in enumerate(zip(rep.oracle.energies, rep.oracle.parities))]
    outputs = {
        "qes_levels": rep.qes,
        "suq_levels": rep.suq,
        "oracle_even_levels": rep.oracle_even,
        "oracle_levels": levels,
        "central_well_even_levels": rep.central_well_even,
        "qes_agreement": rep.qes_agreement,
        "suq_gaps": rep.suq_gaps,
        "oracle_matches_qes": rep.oracle_matches_qes,
        "discrepancy_detected": rep.discrepancy_detected,
        "near_degenerate": rep.oracle.near_degenerate,
    }
    rows = ([{"source": "qes", "index": i, "energy": e} for i, e in enumerate(rep.qes)]
            + [{"source": "suq", "index": 2 * i, "energy": e} for i, e in enumerate(rep.suq)]
            + [{"source": "oracle_even", "index": i, "energy": e}
               for i, e in enumerate(rep.oracle_even)])
    return ReportEnvelope(
        command="failure-demo",
        inputs={"case": "double_well", "b": CASES["double_well"].b, "count": args.count},
        outputs=outputs,
        provenance={"qes_levels": "quasi-exact sector, side-well ground pair",
                    "suq_levels": "SU_q(1,1) spectrum at the b < 0 matched parameters",
                    "oracle_even_levels": "lowest even finite-difference levels",
                    "discrepancy_detected": "every SU_q(1,1) level misses the true level by > 20"},
        rows=rows,
    )


# parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--config", help=f"JSON config file (default: ${CONFIG_ENV})")

    p = _Parser(prog="qesmatch", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    w = sub.add_parser("window", parents=[common], help="feasible theta = N tau window")
    w.add_argument("--sign-b", type=_sign, default=SignB.POSITIVE, choices=list(SignB),
                   metavar="{pos,neg}")
    w.set_defaults(func=cmd_window)

    m = sub.add_parser("match", parents=[common], help="solve the coefficient matching")
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--r", type=int, default=0, choices=(0, 1))
    m.add_argument("--N", type=int, required=True)
    m.add_argument("--sign-b", type=_sign, default=SignB.POSITIVE, choices=list(SignB),
                   metavar="{pos,neg}")
    m.add_argument("--tol", type=float)
    m.set_defaults(func=cmd_match)

    s = sub.add_parser("scan", parents=[common], help="match over a range of N")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--r", type=int, default=0, choices=(0, 1))
    s.add_argument("--N-min", type=int, required=True)
    s.add_argument("--N-max", type=int, required=True)
    s.add_argument("--sign-b", type=_sign, default=SignB.POSITIVE, choices=list(SignB),
                   metavar="{pos,neg}")
    s.set_defaults(func=cmd_scan)

    lv = sub.add_parser("levels", parents=[common], help="energy levels from one source")
    lv.add_argument("--source", choices=("qes", "suq", "oracle"), required=True)
    lv.add_argument("--a", type=float, default=1.0)
    lv.add_argument("--b", type=float)
    lv.add_argument("--n", type=int, default=0)
    lv.add_argument("--r", type=int, default=0, choices=(0, 1))
    lv.add_argument("--A", type=float)
    lv.add_argument("--tau", type=float)
    lv.add_argument("--N", type=int)
    lv.add_argument("--E0", type=float)
    lv.add_argument("--indices", type=_indices)
    lv.add_argument("--vmin", type=float, default=0.0)
    lv.add_argument("--c2", type=float)
    lv.add_argument("--c4", type=float)
    lv.add_argument("--c6", type=float)
    lv.add_argument("--count", type=int, default=4)
    lv.add_argument("--half-width", type=float)
    lv.add_argument("--step", type=float)
    lv.add_argument("--margin", type=float)
    lv.add_argument("--tol", type=float)
    lv.add_argument("--no-extrapolate", action="store_true")
    lv.set_defaults(func=cmd_levels)

    t = sub.add_parser("table1", parents=[common], help="n = 9 approximate vs exact levels")
    t.add_argument("--params", choices=("reference", "solved"), default="reference",
                   help="published parameter set (default) or freshly solved match")
    t.set_defaults(func=cmd_table1)

    f = sub.add_parser("failure-demo", parents=[common], help="b < 0 double-well comparison")
    f.add_argument("--count", type=int, default=8)
    f.add_argument("--step", type=float)
    f.add_argument("--margin", type=float)
    f.set_defaults(func=cmd_failure_demo)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse: --help (0) or bad usage (1)
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        cfg = load_config(args.config)
        env = args.func(args, cfg)
    except UsageError as exc:
        print(f"qesmatch: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MatchError as exc:
        print(f"qesmatch: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ConvergenceError, QesError, oracle.OracleConvergenceError) as exc:
        print(f"qesmatch: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"qesmatch: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(env.render(args.format))
    return EXIT_OK
