"""Command-line surface: one subcommand per report family.

Exit codes: 0 success, 2 parse error, 3 unsupported input (small
characteristic, isotrivial curve, out-of-range limits), 4 internal
consistency failure (Hasse violation, functional-equation violation).
Diagnostics go to stderr; results go to stdout and to files under
``<outdir>/<subcommand>/``.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import bias as bias_mod
from . import classic as classic_mod
from . import drh as drh_mod
from .algebra import make_extension_field, parse_poly, poly_str
from .config import RunConfig
from .curve import CurveSpec, curve_from_text, load_curve, local_data
from .errors import EcbiasError, ParseError
from .lseries import delta_invariant, l_polynomial
from .output import write_csv, write_json
from .places import Place, place_count, finite_places
from .scan import scan_curve


def _add_common(p: argparse.ArgumentParser, needs_curve: bool = True) -> None:
    if needs_curve:
        p.add_argument("--curve", required=True,
                       help="curve file path, or inline 'q = 5; a = [...]'")
    p.add_argument("--dmax", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int,
                   default=int(os.environ.get("ECBIAS_THREADS", "1")))
    p.add_argument("--threshold", type=int, default=1 << 16,
                   help="largest residue field counted exhaustively")
    p.add_argument("--outdir", default="out")
    p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    p.add_argument("--no-infinite-place", dest="infinite", action="store_false",
                   help="exclude the infinite place from sums and products")


def _config(args) -> RunConfig:
    return RunConfig(d_max=args.dmax, include_infinite=args.infinite,
                     threshold=args.threshold, threads=args.threads,
                     seed=args.seed, out_dir=args.outdir, fmt=args.fmt)


def _curve(args) -> CurveSpec:
    text = args.curve
    if "=" in text:
        return curve_from_text(text)
    return load_curve(text)


def _out(args, sub: str, name: str) -> str:
    return os.path.join(args.outdir, sub, name)


def cmd_places(args) -> int:
    field = make_extension_field(args.p, args.k) if args.p else \
        make_extension_field(*_prime_power(args.q))
    if args.count:
        print(place_count(field, args.deg))
        return 0
    pls = finite_places(field, args.deg)
    write_csv(_out(args, "places", f"degree_{args.deg}.csv"),
              ["index", "place (monic irreducible)"],
              [list(range(len(pls))), [pl.label() for pl in pls]])
    print(f"{len(pls)} places of degree {args.deg} written")
    return 0


def _prime_power(q: int):
    from .curve import _prime_power as pp

    return pp(q)


def cmd_curve_info(args) -> int:
    c = _curve(args)
    cfg = _config(args)
    scan = scan_curve(c, 1, cfg)
    bad = [{"place": ld.place.label(), "degree": ld.place.d, "red": ld.red,
            "a": ld.a, "f": ld.f} for ld in scan.finite_bad]
    inf = scan.infinite
    info = {
        "q": c.field.q,
        "a": [poly_str(p) for p in c.coefficients()],
        "c4": poly_str(c.c4),
        "c6": poly_str(c.c6),
        "disc": poly_str(c.disc),
        "j_num": poly_str(c.j_num),
        "j_den": poly_str(c.j_den),
        "conductor_degree": scan.conductor_degree,
        "bad_places": bad,
        "infinite_place": {"red": inf.red, "a": inf.a, "f": inf.f},
    }
    path = write_json(_out(args, "curve-info", "info.json"), info)
    print(f"conductor degree {scan.conductor_degree}; report at {path}")
    return 0


def cmd_local(args) -> int:
    c = _curve(args)
    if args.place in ("infinity", "inf", "oo"):
        place = Place.infinite(c.field)
        name = "infinity"
    else:
        pi = parse_poly(args.place, c.field)
        place = Place.finite(pi.monic())
        name = "".join(ch if ch.isalnum() else "_" for ch in args.place)
    ld = local_data(c, place, threshold=args.threshold, seed=args.seed)
    obj = {"place": place.label(), "degree": place.d, "qv": place.qv,
           "red": ld.red, "a": ld.a, "f": ld.f}
    if ld.theta is not None:
        obj["theta"] = ld.theta
    path = write_json(_out(args, "local", f"{name}.json"), obj)
    print(f"{place.label()}: {ld.red}, a = {ld.a}, f = {ld.f} ({path})")
    return 0


def cmd_lpoly(args) -> int:
    c = _curve(args)
    cfg = _config(args)
    ns = (1, 2) if args.sym == "both" else (int(args.sym),)
    for n in ns:
        L = l_polynomial(c, n, args.trunc, config=cfg,
                         include_infinite=cfg.include_infinite)
        obj = {"n": n, "q": L.base_q, "coeffs": [str(x) for x in L.coeffs],
               "degree": L.degree, "epsilon": L.epsilon, "rank": L.rank,
               "trunc": L.trunc}
        if n == 2:
            obj["delta"] = delta_invariant(L)
        path = write_json(_out(args, "lpoly", f"sym{n}.json"), obj)
        print(f"sym^{n}: degree {L.degree}, epsilon {L.epsilon}, "
              f"rank {L.rank} ({path})")
    return 0


def cmd_bias(args) -> int:
    c = _curve(args)
    cfg = _config(args)
    scan = scan_curve(c, cfg.d_max, cfg)
    if args.kind == "t_e":
        return cmd_te(args)
    series = bias_mod.bias_series(scan, args.kind, cfg.d_max, cfg)
    pred = series.predicted_slope * series.loglog_x()
    resid = series.values - pred
    path = write_csv(
        _out(args, "bias", f"{args.kind}.csv"),
        ["d", "x", _KIND_HEADERS[args.kind], "predicted_slope*loglog(x)",
         "residual"],
        [series.degrees.tolist(), series.x.tolist(), series.values.tolist(),
         pred.tolist(), resid.tolist()])
    summary = {"kind": args.kind, "predicted_slope": series.predicted_slope,
               "final_value": float(series.values[-1])}
    if cfg.d_max >= 6:
        fit = bias_mod.fit_loglog(series)
        summary.update(fitted_slope=fit.slope, residual_range=fit.residual_range,
                       classification=bias_mod.classify_bias(series))
    write_json(_out(args, "bias", f"{args.kind}.json"), summary)
    print(f"{args.kind}: final {summary['final_value']:.6f}"
          + (f", fitted slope {summary['fitted_slope']:.4f}"
             if "fitted_slope" in summary else "") + f" ({path})")
    return 0


_KIND_HEADERS = {
    "a_weighted": "sum a_v/q_v",
    "sym2_plus": "sum (1+2cos(theta)+2cos(2theta))/sqrt(q_v)",
    "sym2_minus": "sum (1-2cos(theta)+2cos(2theta))/sqrt(q_v)",
    "mertens_II": "(1/2) sum tr(M(v)^2)/q_v",
    "tail_III": "sum_{k>=3} (1/k) tr(M(v)^k)/q_v^{k/2}",
    "log_euler": "log of partial Euler product at the centre",
    "t_e": "-(d/q^{d/2}) sum a_v q^{-deg(v)/2} (good places)",
}


def cmd_drh(args) -> int:
    c = _curve(args)
    cfg = _config(args)
    scan = scan_curve(c, cfg.d_max, cfg)
    rep = drh_mod.drh_check(scan, cfg.d_max, cfg)
    path = write_csv(
        _out(args, "drh", "ratio.csv"),
        ["d", "x", "lhs (log x)^m * partial product", "rhs", "ratio"],
        [rep.degrees.tolist(), rep.x.tolist(), rep.lhs.tolist(),
         [rep.rhs] * len(rep.degrees), rep.ratio.tolist()])
    write_json(_out(args, "drh", "report.json"),
               {"m": rep.m, "delta": rep.delta, "gamma": rep.gamma,
                "rhs": rep.rhs, "final_ratio": rep.final_ratio})
    print(f"m = {rep.m}, rhs = {rep.rhs:.6f}, final ratio {rep.final_ratio:.6f} ({path})")
    return 0


def cmd_bsd(args) -> int:
    c = _curve(args)
    cfg = _config(args)
    scan = scan_curve(c, cfg.d_max, cfg)
    rep = drh_mod.bsd_series(scan, cfg.d_max, cfg)
    path = write_csv(_out(args, "bsd", "series.csv"),
                     ["d", "x", "product #E(k_v)/q_v (good places)"],
                     [rep.degrees.tolist(), rep.x.tolist(), rep.values.tolist()])
    write_json(_out(args, "bsd", "report.json"),
               {"m1": rep.m1, "fitted_r": rep.fitted_r,
                "final_product": rep.final_product})
    r = "n/a" if rep.fitted_r is None else f"{rep.fitted_r:.4f}"
    print(f"final product {rep.final_product:.6f}, fitted growth {r} ({path})")
    return 0


def cmd_te(args) -> int:
    c = _curve(args)
    cfg = _config(args)
    scan = scan_curve(c, cfg.d_max, cfg)
    series, density = bias_mod.t_e_series(scan, cfg.d_max, cfg)
    path = write_csv(_out(args, "te", "series.csv"),
                     ["d", "x", _KIND_HEADERS["t_e"]],
                     [series.degrees.tolist(), series.x.tolist(),
                      series.values.tolist()])
    write_json(_out(args, "te", "report.json"),
               {"positive_density": density})
    print(f"positive density {density:.4f} ({path})")
    return 0


def cmd_classic(args) -> int:
    if args.mode == "chi4":
        s = classic_mod.chi4_bias_series(int(float(args.x)), args.grid)
        path = write_csv(_out(args, "classic", "chi4.csv"),
                         ["x", "pi_1/2(x;4,3) - pi_1/2(x;4,1)",
                          "(1/2) loglog x"],
                         [s.x.tolist(), s.values.tolist(), s.companion.tolist()])
        write_json(_out(args, "classic", "chi4.json"),
                   {"empirical": True, "x_max": int(float(args.x)),
                    "final_value": float(s.values[-1]),
                    "all_positive_from_5": bool(np.all(s.values[s.x >= 5] > 0))})
        print(f"final difference {s.values[-1]:.5f} ({path})")
    elif args.mode == "tau":
        s = classic_mod.tau_bias_series(int(float(args.x)), args.grid)
        path = write_csv(_out(args, "classic", "tau_race.csv"),
                         ["x", "sum tau(p)/p^6", "(1/2) loglog x"],
                         [s.x.tolist(), s.values.tolist(), s.companion.tolist()])
        write_json(_out(args, "classic", "tau_race.json"),
                   {"empirical": True, "x_max": int(float(args.x)),
                    "final_value": float(s.values[-1])})
        print(f"final sum {s.values[-1]:.5f} ({path})")
    else:
        v = classic_mod.pi_weighted(int(float(args.x)), args.q, args.a, args.s)
        write_json(_out(args, "classic", "pis.json"),
                   {"empirical": True, "x": int(float(args.x)), "q": args.q,
                    "a": args.a, "s": args.s, "value": v})
        print(repr(v))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ecbias",
        description="Local data, L-polynomials and Chebyshev-bias series "
                    "for elliptic curves over rational function fields")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("places", help="enumerate or count places")
    p.add_argument("--q", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--deg", type=int, required=True)
    p.add_argument("--count", action="store_true")
    p.add_argument("--outdir", default="out")
    p.set_defaults(func=cmd_places)

    p = sub.add_parser("curve-info", help="invariants and bad-reduction table")
    _add_common(p)
    p.set_defaults(func=cmd_curve_info)

    p = sub.add_parser("local", help="local data at one place")
    _add_common(p)
    p.add_argument("--place", required=True,
                   help="monic irreducible in T, or 'infinity'")
    p.set_defaults(func=cmd_local)

    p = sub.add_parser("lpoly", help="exact L-polynomial(s)")
    _add_common(p)
    p.add_argument("--sym", choices=("1", "2", "both"), default="1")
    p.add_argument("--trunc", type=int, default=None)
    p.set_defaults(func=cmd_lpoly)

    p = sub.add_parser("bias", help="cumulative bias series")
    _add_common(p)
    p.add_argument("--kind", choices=bias_mod.KINDS, default="a_weighted")
    p.set_defaults(func=cmd_bias)

    p = sub.add_parser("drh", help="partial Euler product vs central value")
    _add_common(p)
    p.set_defaults(func=cmd_drh)

    p = sub.add_parser("bsd", help="point-count product and growth exponent")
    _add_common(p)
    p.set_defaults(func=cmd_bsd)

    p = sub.add_parser("te", help="rescaled trace sums and sign density")
    _add_common(p)
    p.set_defaults(func=cmd_te)

    p = sub.add_parser("classic", help="rational-prime races")
    p.add_argument("mode", choices=("chi4", "tau", "pis"))
    p.add_argument("--x", default="1e6")
    p.add_argument("--grid", type=float, default=1.25)
    p.add_argument("--q", type=int, default=4)
    p.add_argument("--a", type=int, default=3)
    p.add_argument("--s", type=float, default=0.5)
    p.add_argument("--outdir", default="out")
    p.set_defaults(func=cmd_classic)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        return args.func(args)
    except EcbiasError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
