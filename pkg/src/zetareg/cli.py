"""Command line front-end: ``zetareg <command> [options]``."""

from __future__ import annotations

import argparse
import math
import sys
import warnings

from . import __version__
from .asymptotics import FORMULAS, compare_table, fit_constants, inverse_rvm
from .domain import (
    DEFAULT_ALPHA,
    DEFAULT_DELTA,
    DEFAULT_EPS_POLE,
    DEFAULT_N0,
    DEFAULT_SEED,
    build_domain,
    excised_area,
    total_excised_bound,
)
from .errors import ZetaRegError
from .integrator import (
    DomainParams,
    WeightParams,
    bound_check,
    divergence_probe,
    integrate_w,
    wr_sweep,
)
from .io import ZERO_HEADER, RunManifest, dumps_csv, dumps_json, write_csv, write_json
from .zeros import Base, InjectionSpec, inject_zeros, scan_zeros, verify_count
from .zeta_engine import EvalConfig, eta_eval, mellin_eval, zeta_eval

EVALUATORS = {"eta": eta_eval, "mellin": mellin_eval, "auto": zeta_eval}
BASES = {"zeta": Base.ZETA, "const1": Base.CONSTANT_ONE}


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _walls(text: str):
    if text in ("centered", "inner"):
        return text
    vals = _float_list(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError("walls must be 'centered', 'inner' or 'lo,hi'")
    return tuple(vals)


def _emit_json(args, payload: dict, manifest: RunManifest):
    if args.out:
        write_json(args.out, payload, manifest)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(dumps_json(payload, manifest))


def _emit_csv(args, header, rows, manifest: RunManifest):
    if args.out:
        write_csv(args.out, header, rows, manifest)
        print(f"wrote {args.out} ({len(rows)} rows)")
    else:
        sys.stdout.write(dumps_csv(header, rows))


def _params(args) -> dict:
    skip = {"func", "out"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def _scan_to_height(T: float, step: float, refine_tol: float, cfg: EvalConfig):
    return scan_zeros(1.0, T, step, refine_tol, cfg) if T > 1.0 else []


def _domain_params(args) -> DomainParams:
    return DomainParams(args.delta, args.n0, args.alpha, args.eps_pole, args.walls, args.scan_step)


def _build(args, R: float, f, cfg):
    zeros = _scan_to_height(R + 1.0, args.scan_step, 1e-10, cfg) if f.base is Base.ZETA else []
    injected = [r for r, _ in f.injected_zeros()]
    return build_domain(R, args.delta, zeros, args.n0, args.alpha, args.eps_pole, cfg=cfg,
                        walls=args.walls, extra_zeros=injected)


def _test_function(args, cfg):
    specs = []
    if getattr(args, "inject", None):
        for item in args.inject:
            b, g, *m = item
            specs.append(InjectionSpec(b, g, int(m[0]) if m else 1))
    return inject_zeros(specs, BASES[args.base], cfg)


# ----------------------------------------------------------------------------
# commands


def cmd_eval(args) -> int:
    cfg = EvalConfig(tol=args.tol)
    v = EVALUATORS[args.method](complex(args.sigma, args.t), cfg)
    payload = {"s": complex(args.sigma, args.t), "value": v.value, "abs_err": v.abs_err,
               "method": v.method, "terms_used": v.terms_used}
    if args.out:
        _emit_json(args, payload, RunManifest.create("eval", _params(args)))
    print(f"value    {v.value.real:.15g} {'+' if v.value.imag >= 0 else '-'} {abs(v.value.imag):.15g}i")
    print(f"abs_err  {v.abs_err:.3g}")
    print(f"method   {v.method.value}")
    print(f"terms    {v.terms_used}")
    return 0


def cmd_zeros(args) -> int:
    cfg = EvalConfig(tol=args.tol)
    zeros = scan_zeros(args.t_min, args.t_max, args.step, args.refine_tol, cfg)
    manifest = RunManifest.create("zeros", _params(args))
    rows = [(z.index, z.gamma, z.bracket_width) for z in zeros]
    _emit_csv(args, ZERO_HEADER, rows, manifest)
    if args.t_min == 1.0 and args.t_max >= 2.0:
        rep = verify_count(args.t_max, zeros)
        status = "pass" if rep.passed else "FAIL"
        print(f"N({rep.T:g}): scan {rep.scan_count}, formula {rep.formula:.4f}, "
              f"|diff| {rep.difference:.4f}, band {rep.band:.4f}: {status}", file=sys.stderr)
    return 0


def cmd_domain(args) -> int:
    cfg = EvalConfig()
    f = inject_zeros([], Base.ZETA, cfg)
    dom = _build(args, args.R, f, cfg)
    area = excised_area(dom, seed=args.seed)
    payload = {
        "domain": dom,
        "area": {"rectangle": dom.area, "naive_sum": area.naive_sum,
                 "clipped_estimate": area.clipped_estimate, "clipped_err": area.clipped_err},
        "total_excised_bound": total_excised_bound(args.n0, args.alpha),
    }
    _emit_json(args, payload, RunManifest.create("domain", _params(args)))
    return 0


def cmd_wr(args) -> int:
    cfg = EvalConfig()
    w = WeightParams(args.lam, args.p)
    f = _test_function(args, cfg)
    dom = _build(args, args.R, f, cfg)
    res = integrate_w(f, dom, w, args.quad_tol, rtol=args.rtol, seed=args.seed)
    payload = {"result": res, "test_function": f.describe(), "domain": dom}
    if dom.disks:
        step = args.grid_step or min(0.5 * min(d.radius for d in dom.disks), 0.05)
    else:
        step = args.grid_step or 0.05
    payload["bound_check"] = bound_check(f, dom, w, res, step, args.quad_tol)
    _emit_json(args, payload, RunManifest.create("wr", _params(args)))
    if not res.converged:
        warnings.warn("W(R) quadrature stopped at the minimum cell size before reaching quad_tol")
    print(f"W({args.R:g}) = {res.value:.12g} +- {res.abs_err:.3g} "
          f"(bound check {'pass' if payload['bound_check']['passed'] else 'FAIL'})", file=sys.stderr)
    return 0


def cmd_sweep(args) -> int:
    cfg = EvalConfig()
    w = WeightParams(args.lam, args.p)
    f = _test_function(args, cfg)
    rep = wr_sweep(f, args.R_list, _domain_params(args), w, args.quad_tol, rtol=args.rtol,
                   cfg=cfg, seed=args.seed)
    header = ("R", "value", "abs_err", "evals", "cells", "converged", "finite")
    rows = [(R, r.value, r.abs_err, r.evals, r.cells, r.converged, math.isfinite(r.value))
            for R, r in rep.rows]
    manifest = RunManifest.create("sweep", {**_params(args), "loglog_slope": rep.loglog_slope,
                                            "all_finite": rep.all_finite})
    _emit_csv(args, header, rows, manifest)
    slope = "n/a" if rep.loglog_slope is None else f"{rep.loglog_slope:.4f}"
    print(f"all finite: {rep.all_finite}; log-log slope {slope}; "
          f"monotone decreasing: {rep.monotone_decreasing}", file=sys.stderr)
    return 0


def cmd_probe(args) -> int:
    cfg = EvalConfig()
    w = WeightParams(args.lam, args.p)
    f = inject_zeros([InjectionSpec(args.beta, args.gamma, args.m)], BASES[args.base], cfg)
    res = divergence_probe(f, w, args.eps_list, args.outer)
    _emit_json(args, {"probe": res, "test_function": f.describe()},
               RunManifest.create("probe", _params(args)))
    print(f"{res.fit_kind.value}: exponent {res.exponent:.6g} (predicted "
          f"{res.predicted_exponent:.6g}), r^2 {res.fit_r2:.6f}", file=sys.stderr)
    return 0


def _zeros_through_rank(n_max: int, step: float, cfg: EvalConfig):
    T = 1.02 * inverse_rvm(n_max) + 10.0
    while True:
        zeros = scan_zeros(1.0, T, step, 1e-10, cfg)
        if len(zeros) >= n_max:
            return zeros
        T *= 1.1


def cmd_fit(args) -> int:
    cfg = EvalConfig()
    zeros = _zeros_through_rank(args.n_max, args.scan_step, cfg)
    params = fit_constants(zeros, args.n_min, args.n_max)
    _emit_json(args, {"params": params}, RunManifest.create("fit", _params(args)))
    return 0


def cmd_compare(args) -> int:
    cfg = EvalConfig()
    zeros = _zeros_through_rank(args.n_max, args.scan_step, cfg)
    summary = compare_table(zeros, args.n_min, args.n_max, FORMULAS)
    names = list(summary.rms)
    header = ["n", "gamma_true"] + names + [f"rel_error_{k}" for k in names]
    rows = [[r.n, r.gamma_true] + [r.estimates[k] for k in names] + [r.rel_errors[k] for k in names]
            for r in summary.rows]
    manifest = RunManifest.create("compare", {**_params(args), "rms": summary.rms,
                                              "max_rel": summary.max_rel,
                                              "fitted_params": summary.params.to_dict()})
    _emit_csv(args, header, rows, manifest)
    for k in names:
        print(f"{k:12s} rms {summary.rms[k]:.4e}  max {summary.max_rel[k]:.4e}", file=sys.stderr)
    return 0


# ----------------------------------------------------------------------------
# parser


def _add_domain_args(p, R_default=None):
    p.add_argument("--delta", type=float, default=DEFAULT_DELTA, help="strip wall offset")
    p.add_argument("--walls", type=_walls, default="centered",
                   help="'centered' [1/2-delta, 1/2+delta], 'inner' [delta, 1-delta] or 'lo,hi'")
    p.add_argument("--n0", type=float, default=DEFAULT_N0, help="radius offset N0")
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA, help="radius decay exponent")
    p.add_argument("--eps-pole", type=float, default=DEFAULT_EPS_POLE, help="pole disk radius")
    p.add_argument("--scan-step", type=float, default=0.1, help="zero scan step")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="area sampling seed")


def _add_weight_args(p):
    p.add_argument("--lambda", dest="lam", type=float, default=2.0, help="zero exponent (>= 2)")
    p.add_argument("--p", type=float, default=0.5, help="line exponent in (0, 1)")


def _add_function_args(p):
    p.add_argument("--base", choices=sorted(BASES), default="zeta")
    p.add_argument("--inject", type=_float_list, action="append", metavar="BETA,GAMMA[,M]",
                   help="add a synthetic zero quadruple (repeatable)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zetareg", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate zeta(sigma + i t)")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--method", choices=sorted(EVALUATORS), default="auto")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--out", help="also write a JSON record")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("zeros", help="locate critical-line zeros on [t-min, t-max]")
    p.add_argument("--t-max", type=float, required=True)
    p.add_argument("--t-min", type=float, default=1.0)
    p.add_argument("--step", type=float, default=0.1)
    p.add_argument("--refine-tol", type=float, default=1e-10)
    p.add_argument("--tol", type=float, default=1e-10, help="zeta evaluation tolerance")
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("domain", help="build the regulated domain and its area account")
    p.add_argument("--R", type=float, required=True)
    _add_domain_args(p)
    p.add_argument("--out", help="JSON path (default: stdout)")
    p.set_defaults(func=cmd_domain)

    p = sub.add_parser("wr", help="normalised area integral W(R)")
    p.add_argument("--R", type=float, default=30.0)
    _add_weight_args(p)
    _add_domain_args(p)
    _add_function_args(p)
    p.add_argument("--quad-tol", type=float, default=1e-6)
    p.add_argument("--rtol", type=float, default=0.0)
    p.add_argument("--grid-step", type=float, default=None, help="grid step for the m_R estimate")
    p.add_argument("--out", help="JSON path (default: stdout)")
    p.set_defaults(func=cmd_wr)

    p = sub.add_parser("sweep", help="W(R) over a list of heights")
    p.add_argument("--R-list", type=_float_list, default=[10.0, 20.0, 40.0, 80.0])
    _add_weight_args(p)
    _add_domain_args(p)
    _add_function_args(p)
    p.add_argument("--quad-tol", type=float, default=1e-6)
    p.add_argument("--rtol", type=float, default=0.0)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("probe", help="annulus divergence probe around an injected zero")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--m", type=int, default=1)
    _add_weight_args(p)
    p.add_argument("--eps-list", type=_float_list,
                   default=[5e-3, 2.5e-3, 1.25e-3, 6.25e-4, 3.125e-4, 1.5625e-4, 7.8125e-5])
    p.add_argument("--outer", type=float, default=0.02, help="outer annulus radius")
    p.add_argument("--base", choices=sorted(BASES), default="zeta")
    p.add_argument("--out", help="JSON path (default: stdout)")
    p.set_defaults(func=cmd_probe)

    for name, fn, helptext in (("fit", cmd_fit, "fit the zero-ordinate correction constants"),
                               ("compare", cmd_compare, "compare ordinate approximations")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--n-min", type=int, default=10)
        p.add_argument("--n-max", type=int, default=300)
        p.add_argument("--scan-step", type=float, default=0.1)
        p.add_argument("--out", help=("JSON" if name == "fit" else "CSV") + " path (default: stdout)")
        p.set_defaults(func=fn)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            code = args.func(args)
        except (ZetaRegError, ValueError, OSError) as exc:
            print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
            code = 1
    for w in caught:
        print(f"warning: {w.category.__name__}: {w.message}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
