"""Command-line front end.  Every command prints JSON on stdout.

Exit codes: 0 success, 1 a verification suite failed, 2 bad input or
parameters, 3 a divergent series or integral.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

from . import norms
from .constants import constants_report
from .errors import DivergenceError, ParameterError, UnsupportedRepresentationError
from .operators import commutator_apply, hausdorff_apply, output_window_for
from .oracle import SampleConfig, check_shift_invariance, mc_integral, radial_integrand, \
    sample_lipschitz_ratios
from .padic import PVector
from .params import SpaceParams
from .radial import (KernelSpec, RadialFunction, RadialSymbol, kernel_from_dict,
                     lipschitz_seminorm, parse_kernel)
from .verify import SUITES, SuiteConfig, _jsonable, report_csv, report_json, run_suites

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DIVERGENCE = 0, 1, 2, 3


def _load_json(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def load_kernel(text: str) -> KernelSpec:
    """A kernel JSON file, or the shorthand ``family:param[,param]``."""
    if Path(text).is_file():
        return kernel_from_dict(_load_json(text))
    return parse_kernel(text)


def _emit(obj) -> None:
    print(json.dumps(_jsonable(obj), sort_keys=True, allow_nan=False))


def _window(text: str | None) -> tuple[int, int] | None:
    if text is None:
        return None
    lo, _, hi = text.partition(",")
    return int(lo), int(hi)


def cmd_apply(args) -> int:
    psi = load_kernel(args.kernel)
    f = RadialFunction.from_dict(_load_json(args.fn))
    window = _window(args.window) or output_window_for(psi, f, args.critical, args.bits)
    if args.commutator:
        if not args.symbol:
            raise ParameterError("--commutator needs --symbol")
        b = RadialSymbol.from_dict(_load_json(args.symbol))
        out = commutator_apply(b, psi, args.beta, f, window)
    else:
        out = hausdorff_apply(psi, args.beta, f, window)
    _emit(out.to_dict())
    return EXIT_OK


def cmd_norm(args) -> int:
    kind = args.kind
    if kind == "seminorm":
        b = RadialSymbol.from_dict(_load_json(args.symbol or args.fn))
        value = lipschitz_seminorm(b, args.delta)
    else:
        f = RadialFunction.from_dict(_load_json(args.fn))
        if kind == "lebesgue":
            value = norms.lebesgue_norm(f, args.q, args.alpha)
        elif kind == "weak":
            value = norms.weak_norm(f, args.q, args.alpha)
        elif kind == "lorentz":
            value = norms.lorentz_norm(f, args.q, args.s, args.alpha)
        elif kind == "morrey":
            value = norms.central_morrey_norm(f, args.q, args.lam)
        elif kind == "weak-morrey":
            value = norms.weak_central_morrey_norm(f, args.q, args.lam)
        elif kind == "haar":
            value = norms.haar_integral(f, args.alpha)
        else:  # distribution
            value = norms.distribution(f, args.level, args.alpha)
    _emit({"kind": kind, "value": value})
    return EXIT_OK


def cmd_constants(args) -> int:
    psi = load_kernel(args.kernel)
    params = SpaceParams(args.p, args.n, q=args.q, r=args.r, alpha=args.alpha, gamma=args.gamma,
                         beta=args.beta, delta=args.delta, lam=args.lam)
    b_norm = args.b_seminorm
    if args.symbol:
        b_norm = lipschitz_seminorm(RadialSymbol.from_dict(_load_json(args.symbol)), args.delta)
    report = constants_report(args.thm, psi, params, b_norm)
    report.update(params=params.to_dict(), kernel=psi.to_dict())
    if args.thm in ("5", "thm5"):
        report["b_seminorm"] = b_norm
    _emit(report)
    return EXIT_OK


def _suite_config(args) -> SuiteConfig:
    cfg = SuiteConfig.from_dict(_load_json(args.config)) if args.config else SuiteConfig()
    changes = {}
    if args.suite is not None:
        names = SUITES if args.suite == "all" else tuple(s.strip() for s in args.suite.split(","))
        changes["suites"] = names
    for key in ("trials", "strong_trials", "seed"):
        if getattr(args, key) is not None:
            changes[key] = getattr(args, key)
    out_dir = Path(args.out_dir)
    changes["json_path"] = args.out_json or cfg.json_path or str(out_dir / "verify_report.json")
    changes["csv_path"] = args.out_csv or cfg.csv_path or str(out_dir / "verify_report.csv")
    return replace(cfg, **changes)


def cmd_verify(args) -> int:
    cfg = _suite_config(args)
    results = run_suites(cfg, jobs=args.jobs)
    text = report_json(cfg, results)
    Path(cfg.json_path).parent.mkdir(parents=True, exist_ok=True)
    Path(cfg.json_path).write_text(text, encoding="utf-8")
    Path(cfg.csv_path).parent.mkdir(parents=True, exist_ok=True)
    Path(cfg.csv_path).write_text(report_csv(results), encoding="utf-8")
    ok = all(r.summary["passed"] for r in results.values())
    _emit({"passed": ok, "json": cfg.json_path, "csv": cfg.csv_path,
           "suites": {k: v.summary for k, v in sorted(results.items())}})
    return EXIT_OK if ok else EXIT_FAIL


def _parse_vector(text: str, p: int, depth: int) -> PVector:
    return PVector.from_rationals([Fraction(t.strip()) for t in text.split(",")], p, depth)


def cmd_oracle(args) -> int:
    out: dict = {}
    cfg = SampleConfig(args.ball, args.depth, args.samples, args.seed)
    if args.fn:
        f = RadialFunction.from_dict(_load_json(args.fn))
        est, se = mc_integral(radial_integrand(f), cfg, f.p, f.n, args.alpha)
        exact = norms.haar_integral(f.restricted_to_ball(args.ball), args.alpha)
        out["integral"] = {"estimate": est, "stderr": se, "exact": exact,
                           "z": 0.0 if se == 0 and est == exact else (est - exact) / se}
        if args.shift:
            a = _parse_vector(args.shift, f.p, args.depth)
            rep = check_shift_invariance(radial_integrand(f), a, cfg)
            out["shift"] = {"estimate": rep.estimate, "shifted_estimate": rep.shifted_estimate,
                            "stderr": rep.stderr, "z": rep.z}
    if args.symbol:
        b = RadialSymbol.from_dict(_load_json(args.symbol))
        ratios = sample_lipschitz_ratios(b, args.delta, args.pairs, args.seed, min(args.depth, 16))
        closed = lipschitz_seminorm(b, args.delta)
        out["lipschitz"] = {"sampled_max": float(ratios.max()), "closed_form": closed,
                            "pairs": args.pairs, "exceeds": bool(ratios.max() > closed * (1 + 1e-12))}
    if not out:
        raise ParameterError("oracle needs --fn and/or --symbol")
    _emit(out)
    return EXIT_OK


def _jobs_default() -> int:
    try:
        return max(1, int(os.environ.get("PADIC_JOBS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="padic-hausdorff",
                                 description="Hausdorff operators on radial functions over Q_p^n")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("apply", help="apply the operator or its commutator")
    a.add_argument("--kernel", required=True, help="kernel JSON file or family:params")
    a.add_argument("--fn", required=True, help="radial function JSON")
    a.add_argument("--beta", type=float, default=0.0)
    a.add_argument("--commutator", action="store_true")
    a.add_argument("--symbol", help="symbol JSON (with --commutator)")
    a.add_argument("--window", help="output window lo,hi")
    a.add_argument("--critical", type=float, default=None,
                   help="exponent the output will be measured against; sizes the window")
    a.add_argument("--bits", type=float, default=44.0)
    a.set_defaults(func=cmd_apply)

    nm = sub.add_parser("norm", help="evaluate a norm functional")
    nm.add_argument("--kind", required=True, choices=["lebesgue", "weak", "lorentz", "morrey",
                                                      "weak-morrey", "haar", "distribution",
                                                      "seminorm"])
    nm.add_argument("--fn")
    nm.add_argument("--symbol")
    nm.add_argument("--q", type=float, default=2.0)
    nm.add_argument("--s", type=float, default=math.inf)
    nm.add_argument("--alpha", type=float, default=0.0)
    nm.add_argument("--lam", type=float, default=-0.5)
    nm.add_argument("--delta", type=float, default=0.5)
    nm.add_argument("--level", type=float, default=0.0)
    nm.set_defaults(func=cmd_norm)

    c = sub.add_parser("constants", help="discrete and integral-form constants")
    c.add_argument("--thm", required=True, choices=["3", "4", "5"])
    c.add_argument("--kernel", required=True)
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--n", type=int, required=True)
    for name, default in (("q", 2.0), ("r", 2.0), ("alpha", 0.0), ("gamma", 0.0), ("beta", 0.0),
                          ("delta", 0.5), ("lam", -0.5)):
        c.add_argument(f"--{name}", type=float, default=default)
    c.add_argument("--b-seminorm", type=float, default=1.0)
    c.add_argument("--symbol", help="symbol JSON; overrides --b-seminorm")
    c.set_defaults(func=cmd_constants)

    v = sub.add_parser("verify", help="run randomised verification suites")
    v.add_argument("--suite", default=None, help="all or a comma list of " + ", ".join(SUITES))
    v.add_argument("--trials", type=int)
    v.add_argument("--strong-trials", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--config", help="SuiteConfig JSON")
    v.add_argument("--out-dir", default=".")
    v.add_argument("--out-json")
    v.add_argument("--out-csv")
    v.add_argument("--jobs", type=int, default=_jobs_default())
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", help="Monte-Carlo cross-checks")
    o.add_argument("--fn")
    o.add_argument("--symbol")
    o.add_argument("--alpha", type=float, default=0.0)
    o.add_argument("--ball", type=int, default=0)
    o.add_argument("--depth", type=int, default=24)
    o.add_argument("--samples", type=int, default=100_000)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--shift", help="comma list of rationals")
    o.add_argument("--delta", type=float, default=0.5)
    o.add_argument("--pairs", type=int, default=10_000)
    o.set_defaults(func=cmd_oracle)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DivergenceError as exc:
        print(f"divergence: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except (ParameterError, UnsupportedRepresentationError, ValueError, KeyError, TypeError,
            OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
