"""Command-line front end.

    willmore-tori energy   --surface ejiri --grid 256
    willmore-tori classify --left small.crv --right great.crv
    willmore-tori sweep    --family inf_family --param-range 0.1:1:10
    willmore-tori probe    --family theta --param 0.785
    willmore-tori elastica --a0 1 --k1 1.42 --length 3.7 --shoot
    willmore-tori verify   --suite acceptance

Exit status: 0 success, 1 input or computation error, 2 an acceptance
criterion failed.  Errors go to standard error as ``code: <code>: <message>``.
Numbers are printed with 17 significant digits; a fixed configuration
produces byte-identical output.
"""
from __future__ import annotations

import argparse
import csv
import io
import re
import sys
from pathlib import Path

import numpy as np

from .elastica import ElasticaParams, classify_tensor_cw, closure_error, homogeneous_curve, reconstruct_curve_s3, \
    shoot_closed, solve_elastica
from .energy import clifford_torus, willmore_flat_conformal, willmore_parametric, willmore_tensor
from .errors import WillmoreError
from .families import FAMILY_NAMES, FamilySpec, energy_sweep, make_surface, stability_probe, sweep_to_csv, \
    theta_conformal_map
from .formats import atomic_write, dumps, fmt, read_curve, read_torus, write_curve, write_torus
from .sphere_curves import ejiri_curve, great_circle, small_circle
from .tensor_surfaces import TensorTorus, build_tensor_torus

ALIASES = {"theta": "theta_family", "inf": "inf_family", "tilde": "tilde_family", "scaled": "scaled_deform",
           "clifford_double_cover": "clifford_double"}
TOLERANCES = {"cw": 1e-6, "closure": 1e-7, "conformal": 1e-9}
MIN_GRID = 16


class InputError(WillmoreError):
    code = "input"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


# -- argument helpers ---------------------------------------------------------


def _param_range(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise InputError(f"--param-range expects lo:hi:n, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise InputError(f"bad --param-range {text!r}: {exc}") from exc
    if n < 1:
        raise InputError("--param-range needs n >= 1")
    return [float(x) for x in np.linspace(lo, hi, n)] if n > 1 else [lo]


def _tolerances(items):
    tol = dict(TOLERANCES)
    for item in items or ():
        name, sep, val = item.partition("=")
        if not sep or name not in TOLERANCES:
            raise InputError(f"--tol expects name=value with name in {sorted(TOLERANCES)}, got {item!r}")
        try:
            v = float(val)
        except ValueError as exc:
            raise InputError(f"tolerance {name}: {exc}") from exc
        if not (v > 0 and np.isfinite(v)):
            raise InputError(f"tolerance {name} must be positive")
        tol[name] = v
    return tol


def _family(name):
    name = ALIASES.get(name, name)
    if name not in FAMILY_NAMES:
        raise InputError(f"unknown family {name!r}; choose from {', '.join(FAMILY_NAMES)}")
    return name


_BUILTIN = re.compile(r"^(great_circle|ejiri|small_circle:(?P<k>[^:]+)|homogeneous:(?P<h>[^:]+))$")


def _curve(text, n):
    """A curve file, or a builtin: great_circle, ejiri, small_circle:K, homogeneous:A,B,LAMBDA."""
    if Path(text).exists():
        return read_curve(text)
    m = _BUILTIN.match(text)
    if not m:
        raise InputError(f"{text!r} is neither a readable curve file nor a builtin curve")
    try:
        if text == "great_circle":
            return great_circle(2, n)
        if text == "ejiri":
            return ejiri_curve(n)
        if m.group("k") is not None:
            return small_circle(float(m.group("k")), 3, n)
        a, b, lam = (float(v) for v in m.group("h").split(","))
    except ValueError as exc:
        raise InputError(f"bad builtin curve {text!r}: {exc}") from exc
    return homogeneous_curve(a, b, lam, n).curve


def _surface(args):
    """Resolve --surface/--family/--param, --torus or --left/--right."""
    n = args.grid
    if getattr(args, "torus", None):
        return read_torus(args.torus)
    if getattr(args, "left", None) or getattr(args, "right", None):
        if not (args.left and args.right):
            raise InputError("--left and --right must be given together")
        return build_tensor_torus(_curve(args.left, n), _curve(args.right, n), name=f"{args.left}x{args.right}")
    name = args.surface
    if name is None:
        raise InputError("no surface given (use --surface, --torus or --left/--right)")
    if name == "clifford":
        return clifford_torus()
    return make_surface(FamilySpec(_family(name), sample_count=n), args.param)


def _emit(args, text):
    if args.out:
        atomic_write(args.out, text)
    else:
        sys.stdout.write(text)


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow(["" if v is None else fmt(v) if isinstance(v, (float, np.floating)) else v for v in r])
    return buf.getvalue()


# -- commands -----------------------------------------------------------------


def cmd_energy(args, tol):
    surf = _surface(args)
    method = args.method
    if method == "auto":
        method = "tensor" if isinstance(surf, TensorTorus) else "parametric"
    grid = (args.grid, args.grid)
    if method == "tensor":
        if not isinstance(surf, TensorTorus):
            raise InputError("the tensor route needs a tensor product torus")
        rep = willmore_tensor(surf, grid)
    elif method == "parametric":
        rep = willmore_parametric(surf, grid)
    else:
        theta = args.surface and _family(args.surface) == "theta_family"
        cmap = theta_conformal_map(args.param) if theta else None
        rep = willmore_flat_conformal(surf, grid, cmap, tol["conformal"])
    if args.save_torus:
        _save_torus(surf, args)
    d = rep.to_dict()
    d["surface"] = getattr(surf, "name", "")
    if args.emit == "csv":
        _emit(args, _csv(["surface", "value", "grid", "method", "estimated_error"],
                         [[d["surface"], rep.value, "x".join(map(str, rep.grid)), rep.method, rep.estimated_error]]))
    else:
        _emit(args, dumps(d) + "\n")
    return 0


def _save_torus(surf, args):
    if not isinstance(surf, TensorTorus):
        raise InputError("--save-torus needs a tensor product torus")
    write_torus(surf, args.save_torus, provenance=" ".join(args.argv))


def cmd_classify(args, tol):
    surf = _surface(args)
    if not isinstance(surf, TensorTorus):
        raise InputError("classification needs a tensor product torus")
    res = classify_tensor_cw(surf, tol["cw"])
    if args.save_torus:
        _save_torus(surf, args)
    if args.emit == "csv":
        keys = sorted(res.obstructions)
        _emit(args, _csv(["verdict", "fitted_a0", "factor"] + keys,
                         [[res.verdict, res.fitted_a0, res.factor] + [res.obstructions[k] for k in keys]]))
    else:
        _emit(args, dumps(res.to_dict()) + "\n")
    return 0


def _params(args):
    if args.param_range:
        return _param_range(args.param_range)
    if args.param is not None:
        return [args.param]
    raise InputError("give --param-range lo:hi:n or --param")


def cmd_sweep(args, tol):
    spec = FamilySpec(_family(args.surface or _missing("--family")), sample_count=args.grid)
    rows = energy_sweep(spec, _params(args), (args.grid, args.grid), args.method)
    if args.emit == "json":
        _emit(args, dumps([{"param": r.param, "value": r.value, "reference": r.reference, "abs_err": r.abs_err}
                           for r in rows]) + "\n")
    else:
        _emit(args, sweep_to_csv(rows))
    return 0


def _missing(flag):
    raise InputError(f"{flag} is required")


def cmd_probe(args, tol):
    spec = FamilySpec(_family(args.surface or _missing("--family")), sample_count=args.grid)
    if args.param is None:
        _missing("--param")
    if not args.step > 0:
        raise InputError("--step must be positive")
    p = stability_probe(spec, args.param, args.step, (args.grid, args.grid), args.method)
    d = {"family": spec.name, "at": p.at, "h": p.h, "first_derivative": p.first_derivative,
         "second_derivative": p.second_derivative, "conformal_class_drift": p.conformal_class_drift,
         "sign_stable": p.sign_stable, "stencil": p.stencil}
    if args.emit == "csv":
        keys = sorted(d)
        _emit(args, _csv(keys, [[d[k] for k in keys]]))
    else:
        _emit(args, dumps(d) + "\n")
    return 0


def cmd_elastica(args, tol):
    if (args.a0 is None) == (args.q1 is None):
        raise InputError("give exactly one of --a0 and --q1")
    params = ElasticaParams(args.a0, args.J) if args.a0 is not None else ElasticaParams.from_multiplier(args.q1, args.J)
    if args.k1 is None or args.length is None:
        raise InputError("--k1 and --length are required")
    if args.shoot:
        prof = shoot_closed(params, (args.k1, args.length), tol=tol["closure"])
    else:
        prof = solve_elastica(params, args.k1, args.k1p, args.length, args.nodes)
    gaps = None
    if args.save_curve or args.emit == "json":
        arc = reconstruct_curve_s3(prof)
        gaps = closure_error(arc)
        if args.save_curve:
            write_curve(arc.to_closed_curve(args.grid, tol["closure"]), args.save_curve)
    if args.emit == "json":
        _emit(args, dumps({"a0": params.a0, "q1": params.q1, "J": params.J, "k1_0": float(prof.k1[0]),
                           "k1_prime_0": float(prof.k1_prime[0]), "length": prof.length,
                           "first_integral_drift": prof.first_integral_drift(), "closure": gaps}) + "\n")
    else:
        _emit(args, prof.to_csv())
    return 0


def cmd_verify(args, tol):
    from .verification import CRITERIA

    if args.suite != "acceptance":
        raise InputError(f"unknown suite {args.suite!r}")
    only = None
    if args.only:
        try:
            only = {int(x) for x in args.only.split(",")}
        except ValueError as exc:
            raise InputError(f"--only expects comma-separated criterion numbers: {exc}") from exc
        if not only <= set(range(1, len(CRITERIA) + 1)):
            raise InputError(f"criteria are numbered 1..{len(CRITERIA)}")
    results = []
    for i, crit in enumerate(CRITERIA, 1):
        if only is None or i in only:
            r = crit()
            results.append(r)
            if not args.out:
                print(r.line(), file=sys.stderr if args.emit != "table" else sys.stdout, flush=True)
    if args.emit == "json":
        _emit(args, dumps([{"number": r.number, "name": r.name, "passed": r.passed, "values": r.values}
                           for r in results]) + "\n")
    elif args.emit == "csv":
        _emit(args, _csv(["number", "name", "passed"], [[r.number, r.name, str(r.passed).lower()] for r in results]))
    elif args.out:
        atomic_write(args.out, "".join(r.line() + "\n" for r in results))
    return 0 if all(r.passed for r in results) else 2


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="willmore-tori", description="Willmore energy of tensor product tori in spheres.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, emit="json", choices=("csv", "json")):
        sp.add_argument("--grid", type=int, default=256, help="samples per axis (>= 16)")
        sp.add_argument("--tol", action="append", metavar="NAME=VAL",
                        help=f"override a tolerance; names: {', '.join(sorted(TOLERANCES))}")
        sp.add_argument("--emit", choices=choices, default=emit)
        sp.add_argument("--out", help="write the artifact here (atomically) instead of standard output")

    def surface(sp):
        sp.add_argument("--surface", "--family", dest="surface", help="named surface or family")
        sp.add_argument("--param", type=float, help="family parameter")
        sp.add_argument("--torus", help="torus descriptor (JSON)")
        sp.add_argument("--left", help="left factor: .crv file or builtin curve")
        sp.add_argument("--right", help="right factor: .crv file or builtin curve")
        sp.add_argument("--save-torus", help="also write the tensor torus to this descriptor path")

    methods = ("auto", "tensor", "parametric", "conformal")

    sp = sub.add_parser("energy", help="Willmore energy report")
    common(sp)
    surface(sp)
    sp.add_argument("--method", choices=methods, default="auto")

    sp = sub.add_parser("classify", help="constrained-Willmore verdict for a tensor torus")
    common(sp)
    surface(sp)

    sp = sub.add_parser("sweep", help="energy over a family parameter range")
    common(sp, emit="csv")
    sp.add_argument("--family", "--surface", dest="surface")
    sp.add_argument("--param", type=float)
    sp.add_argument("--param-range", metavar="LO:HI:N")
    sp.add_argument("--method", choices=methods, default="auto")

    sp = sub.add_parser("probe", help="finite-difference derivatives of the energy along a family")
    common(sp)
    sp.add_argument("--family", "--surface", dest="surface")
    sp.add_argument("--param", type=float, help="probe location")
    sp.add_argument("--step", type=float, default=1e-3)
    sp.add_argument("--method", choices=methods, default="auto")

    sp = sub.add_parser("elastica", help="solve or shoot the elastica equation")
    common(sp, emit="csv")
    sp.add_argument("--a0", type=float)
    sp.add_argument("--q1", type=float, help="multiplier constant, a0 = 1 + q1/4")
    sp.add_argument("--J", type=float, default=0.0, help="first integral k1^2 k2")
    sp.add_argument("--k1", type=float, help="initial k1 (initial guess with --shoot)")
    sp.add_argument("--k1p", type=float, default=0.0, help="initial k1'")
    sp.add_argument("--length", type=float, help="arc length (initial guess with --shoot)")
    sp.add_argument("--nodes", type=int, default=1025)
    sp.add_argument("--shoot", action="store_true", help="search (k1, length) for a closed curve")
    sp.add_argument("--save-curve", help="write the reconstructed closed curve (.crv)")

    sp = sub.add_parser("verify", help="run the acceptance criteria")
    common(sp, emit="table", choices=("table", "csv", "json"))
    sp.add_argument("--suite", default="acceptance")
    sp.add_argument("--only", help="comma-separated criterion numbers")
    return p


COMMANDS = {"energy": cmd_energy, "classify": cmd_classify, "sweep": cmd_sweep, "probe": cmd_probe,
            "elastica": cmd_elastica, "verify": cmd_verify}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise InputError("a command is required: " + ", ".join(COMMANDS))
        if args.grid < MIN_GRID:
            raise InputError(f"--grid must be at least {MIN_GRID}")
        args.argv = argv
        return COMMANDS[args.command](args, _tolerances(args.tol))
    except WillmoreError as exc:
        print(f"code: {exc.code}: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, FloatingPointError) as exc:
        print(f"code: {type(exc).__name__.lower()}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
