"""Command-line interface: kernel tables, multipliers, norms and MC reports.

All numeric output is CSV or JSON with explicit error columns; identical
arguments and seed give byte-identical output.  Exit codes: 0 success,
1 numerical failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import pi

import numpy as np

from . import kernels as K
from . import mc, multipliers, transforms
from .poisson import periodic_h_closed_1d, poisson_const
from .quadrature import DEFAULT_CONFIG, QuadConfig, QuadratureError

_KINDS = {"cz": "cz_riesz", "prob": "prob_riesz", "rot": "rotation"}


def _emit(lines, path):
    text = "\n".join(lines) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cfg(args):
    if getattr(args, "rel_tol", None) is None:
        return None
    return QuadConfig(args.rel_tol, args.abs_tol or args.rel_tol * 1e-2)


def _box(radius, d, positive_first=False):
    lo = 1 if positive_first else -radius
    out = []
    for n1 in range(lo, radius + 1):
        if d == 1:
            out.append((n1,))
        else:
            for rest in _box(radius, d - 1):
                out.append((n1,) + rest)
    return out


def cmd_kernel(args):
    tag = _KINDS.get(args.kind)
    if tag is None or args.d not in (1, 2, 3):
        print(f"unknown kind {args.kind!r} or d {args.d}", file=sys.stderr)
        return 2
    kind = K.KernelKind(tag, args.d, args.k)
    cfg = _cfg(args)
    lines = [",".join([f"n{j + 1}" for j in range(args.d)]
                      + ["value", "abs_err"])]
    for n in _box(args.radius, args.d):
        v, err = transforms.kernel_entry(kind, n, cfg)
        lines.append(",".join([*map(str, n), f"{v:.10g}", f"{err:.3g}"]))
    _emit(lines, args.output)
    return 0


def cmd_table(args):
    if args.which not in (1, 2, 3):
        print("table must be 1, 2 or 3", file=sys.stderr)
        return 2
    cfg = _cfg(args)
    kinds = {t: K.KernelKind(t, 2, 1) for t in
             ("cz_riesz", "prob_riesz", "rotation")}
    header = {1: "n1,n2,K_H,K_cz,K_rot,abs_err",
              2: "n1,n2,ratio_H_cz,abs_err",
              3: "n1,n2,ratio_rot_cz,abs_err"}[args.which]
    lines = [header]
    failures = 0
    n1lo = 0 if args.which in (2, 3) else 1
    for n1 in range(n1lo, args.radius + 1):
        for n2 in range(0, args.radius + 1):
            if n1 == 0 and n2 == 0:
                continue
            n = (n1, n2)
            try:
                kcz = transforms.kernel_value(kinds["cz_riesz"], n)
                kh, err = transforms.kernel_entry(kinds["prob_riesz"], n, cfg)
                krot = transforms.kernel_value(kinds["rotation"], n)
            except QuadratureError:
                failures += 1
                continue
            if args.which == 1:
                lines.append(f"{n1},{n2},{kh:.6g},{kcz:.6g},{krot:.6g},"
                             f"{err:.3g}")
            else:
                num = kh if args.which == 2 else krot
                if n1 == 0:
                    ratio, rerr = 1.0, 0.0  # 0/0 on the n1 = 0 axis
                else:
                    ratio = num / kcz
                    rerr = err / abs(kcz)
                lines.append(f"{n1},{n2},{ratio:.6g},{rerr:.3g}")
    _emit(lines, args.output)
    return 1 if failures else 0


def cmd_multiplier(args):
    xi = np.linspace(0.0, 0.5, args.points)
    lines = ["xi,hilbert,hdis,mtilde,pmult,abs_err"]
    mt = multipliers.multiplier_Mtilde(xi)
    pm = multipliers.pkernel_multiplier(xi)
    for x, m, p in zip(xi, mt, pm):
        lines.append(f"{x:.10g},1,{1 - 2 * x:.10g},{m:.10g},{p:.10g},1e-12")
    _emit(lines, args.output)
    return 0


def cmd_pkernel(args):
    n, p = multipliers.pkernel_coefficients(args.grid)
    chk = multipliers.convolution_factorization_check(
        radius=args.radius, nmax=10)
    rep = {"grid": args.grid, "sum": float(p.sum()),
           "min_coeff": float(p.min()),
           "factorization_radius": args.radius,
           "max_abs_deviation": chk["max_abs_deviation"]}
    _emit([json.dumps(rep, indent=2, sort_keys=True)], args.output)
    return 0 if abs(p.sum() - 1.0) < 1e-8 and p.min() > -1e-8 else 1


def cmd_norms(args):
    tag = {"hilbert-dis": "hilbert_dis", "prob-hilbert": "prob_hilbert",
           "cz": "cz_riesz", "prob": "prob_riesz"}.get(args.kernel)
    if tag is None:
        print(f"unknown kernel {args.kernel!r}", file=sys.stderr)
        return 2
    kind = K.KernelKind(tag, args.d, args.k)
    rng = np.random.default_rng(args.seed)
    report = {"kernel": args.kernel, "d": args.d, "p": args.p,
              "seed": args.seed, "trials": args.trials, "ratios": []}
    ok = True
    for p in args.p:
        bound = transforms.cot_bound(p)
        worst = 0.0
        for _ in range(args.trials):
            pts = rng.integers(-8, 9, size=(6, args.d))
            f = transforms.Sequence(
                {tuple(int(c) for c in r): float(rng.standard_normal())
                 for r in pts}, args.d)
            if not f.support:
                continue
            worst = max(worst, transforms.norm_ratio(f, kind, p))
        report["ratios"].append({"p": p, "max_ratio": worst,
                                 "cot_bound": bound})
        ok = ok and worst <= bound * 1.01
    if 2 in args.p or args.trials == 0:
        lb, _ = transforms.norm_lower_bound_search(kind, 2, box=args.box)
        report["p2_lower_bound"] = lb
    _emit([json.dumps(report, indent=2, sort_keys=True)], args.output)
    return 0 if ok else 1


def cmd_mc(args):
    cfg = mc.SdeConfig(dt_base=args.dt_base, y_dt_factor=args.y_dt_factor,
                       w_start=args.w, paths=args.paths, seed=args.seed,
                       max_steps=args.max_steps)
    counts, res = mc.exit_distribution(cfg, d=args.d)
    rep = {"d": args.d, "w": args.w, "paths": args.paths, "seed": args.seed,
           "capped": res["capped"],
           "counts": {str(n[0] if args.d == 1 else n): c
                      for n, c in sorted(counts.items())}}
    if args.d == 1:
        from scipy import stats
        h0 = periodic_h_closed_1d(np.array([0.0]), np.array([args.w]))[0]
        c1 = poisson_const(1)
        ns = np.arange(-30, 31)
        exp = c1 * args.w / (ns ** 2 + args.w ** 2) / h0 * args.paths
        obs = np.array([counts.get((int(n),), 0) for n in ns], float)
        obs = np.append(obs, args.paths - obs.sum())
        exp = np.append(exp, args.paths - exp.sum())
        chi2 = float(((obs - exp) ** 2 / exp).sum())
        rep["chi2"] = {"statistic": chi2, "dof": len(obs) - 1,
                       "p_value": float(stats.chi2.sf(chi2, len(obs) - 1))}
    _emit([json.dumps(rep, indent=2, sort_keys=True)], args.output)
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="rieszlat",
        description="Kernels, multipliers and norms of discrete Riesz "
                    "transforms and their probabilistic counterparts.")
    ap.add_argument("--jobs", type=int, default=1,
                    help="worker cap for parallel table computation")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", default=None, help="output path (default stdout)")
        p.add_argument("--rel-tol", type=float, default=None, dest="rel_tol")
        p.add_argument("--abs-tol", type=float, default=None, dest="abs_tol")

    p = sub.add_parser("kernel", help="kernel values on a box (CSV)")
    p.add_argument("--kind", required=True, choices=sorted(_KINDS))
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--radius", type=int, default=5)
    common(p)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("table", help="reproduce a paper table (CSV)")
    p.add_argument("--which", type=int, required=True, choices=(1, 2, 3))
    p.add_argument("--radius", type=int, default=5)
    common(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("multiplier", help="multiplier comparison (CSV)")
    p.add_argument("--points", type=int, default=101)
    common(p)
    p.set_defaults(func=cmd_multiplier)

    p = sub.add_parser("pkernel", help="probability-kernel report (JSON)")
    p.add_argument("--grid", type=int, default=65536)
    p.add_argument("--radius", type=int, default=500)
    common(p)
    p.set_defaults(func=cmd_pkernel)

    p = sub.add_parser("norms", help="operator-norm report (JSON)")
    p.add_argument("--kernel", required=True)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--p", type=float, nargs="+", default=[2.0])
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--box", type=int, default=256)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_norms)

    p = sub.add_parser("mc", help="Monte Carlo exit-law report (JSON)")
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--w", type=float, default=2.0)
    p.add_argument("--paths", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dt-base", type=float, default=0.25, dest="dt_base")
    p.add_argument("--y-dt-factor", type=float, default=0.02,
                   dest="y_dt_factor")
    p.add_argument("--max-steps", type=int, default=40000, dest="max_steps")
    common(p)
    p.set_defaults(func=cmd_mc)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ValueError, QuadratureError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
