import argparse
import datetime
import json
import os
import sys
import traceback

import pandas as pd

from algebra import FieldConfig, critical_values
from config import DEFAULT_CURVE_BOUND, REPORT_DIR, WRITE_REPORT, log
from decomp import Decomposition, complete_decomposition, enumerate_D_f, normalize
from errors import DomainError, InternalError, ParseError
from frob import ZqContext, lift_sharp_points, periodic_capture_check
from orbits import (EXACT, MODULAR, construct_dense_point, density_test, orbit,
                    subsample)
from polytext import parse_poly
from product_invariants import invariant_skeleton
from ritty import classify, type_c_hat_polynomial, type_w_polynomial
from skew import (Correspondence, apply_bword, enumerate_invariant_curves,
                  verify_correspondence)
from swaps import apply_word, chebyclumps, try_ritt_swap
from words import (M_K, bword_action, bword_normal_form, border_guard_form,
                   first_canonical_form, parse_word, permutation_of,
                   second_canonical_form, split_gword)

# --- Input helpers ---
def _field(args):
    return FieldConfig(args.d, args.sigma)


def _decomposition(text, field):
    """'f_k; ...; f_1', outermost first."""
    pieces = [p for p in text.split(";") if p.strip()]
    if not pieces:
        raise ParseError("empty decomposition", text, 0)
    return normalize(Decomposition([parse_poly(p, field) for p in pieces]))


def _constant(text, field):
    c = parse_poly(text, field)
    if c.degree > 0:
        raise ParseError("expected a constant", text, 0)
    return c.constant_term


def _blocks(text):
    try:
        return [int(part) for part in text.split(",")]
    except ValueError:
        raise ParseError("blocks are comma-separated integers", text, 0) from None


# --- Subcommands ---
def cmd_decompose(args):
    field = _field(args)
    f = parse_poly(args.poly, field)
    d = complete_decomposition(f)
    report = {"input": str(f), "decomposition": d.to_json(), "degrees": list(d.degrees)}
    rows = [{"i": d.k - idx, "factor": str(g), "degree": g.degree}
            for idx, g in enumerate(d.factors)]
    if args.all:
        found = enumerate_D_f(d)
        report["classes"] = found.to_json()
        report["diameter_bound"] = found.diameter_bound
        rows = [{"class": idx, "depth": depth, "factors": "; ".join(c.to_json())}
                for idx, (c, depth) in enumerate(zip(found.classes, found.distances()))]
    return report, rows


def cmd_classify(args):
    if args.type_w or args.type_c_hat:
        s = args.type_w or args.type_c_hat
        solver = type_w_polynomial if args.type_w else type_c_hat_polynomial
        u, B, u2 = solver(s)
        report = {"solver": "type_w" if args.type_w else "type_c_hat", "s": s,
                  "u": str(u), "B": str(B), "u2": str(u2)}
        return report, [report]
    if not args.poly:
        raise ParseError("classify needs a polynomial", "", 0)
    f = parse_poly(args.poly, _field(args))
    verdict = classify(f)
    report = {"input": str(f), **verdict.to_json()}
    report["critical_values"] = [[str(p), m] for p, m in critical_values(f)]
    rows = [r.to_json() for r in verdict.presentations]
    return report, rows


def cmd_swap(args):
    field = _field(args)
    d = _decomposition(args.decomp, field)
    report = {"input": d.to_json()}
    if args.clumps:
        clumps = chebyclumps(d)
        report.update(clumps.to_json())
        return report, [c.to_json() for c in clumps.intervals]
    if args.at is not None:
        result = try_ritt_swap(d, args.at)
        report["result"] = result.to_json()
    else:
        word = parse_word(args.word, d.k)
        if word.alphabet == M_K:
            result = apply_word(d, word.letters)
            report["result"] = result.to_json()
        else:
            trace = apply_bword(d, word)
            result = trace.result
            report["trace"] = trace.to_json()
    rows = []
    if result.defined:
        rows = [{"i": result.decomposition.k - idx, "factor": str(g)}
                for idx, g in enumerate(result.decomposition.factors)]
    return report, rows


def cmd_canon(args):
    k = args.k
    if args.first:
        word = parse_word(args.first, k)
        canonical = first_canonical_form(word)
        report = {"word": str(word), "canonical": str(canonical),
                  "permutation": list(permutation_of(word))}
    elif args.second:
        word = parse_word(args.second, k)
        if not args.blocks:
            raise ParseError("--second needs --blocks", "", 0)
        outer, inner = second_canonical_form(word, _blocks(args.blocks))
        report = {"word": str(word), "outer": str(outer), "inner": [str(w) for w in inner]}
    elif args.bword:
        word = parse_word(args.bword, k)
        nf = bword_normal_form(word)
        report = {"word": str(word), "normal_form": str(nf), "power": nf.power,
                  "action": [list(slot) for slot in bword_action(word)]}
    else:
        word = parse_word(args.border, k)
        N, guarded = border_guard_form(word)
        w2, w1 = split_gword(guarded)
        report = {"word": str(word), "N": N, "guarded": str(guarded),
                  "w2": str(w2), "w1": str(w1)}
    return report, [report]


def cmd_curves(args):
    field = _field(args)
    f, g = parse_poly(args.f, field), parse_poly(args.g, field)
    bound = args.bound or DEFAULT_CURVE_BOUND
    found = enumerate_invariant_curves(f, g, bound)
    curves = [c.to_json() for c in found]
    report = {"f": str(f), "g": str(g), "bound": bound, "curves": curves}
    rows = [{k: c[k] for k in ("pi", "rho", "h", "implicit")} for c in curves]
    return report, rows


def cmd_verify(args):
    field = _field(args)
    c = Correspondence(*(parse_poly(t, field) for t in (args.f, args.g, args.h, args.pi, args.rho)))
    ok = verify_correspondence(c)
    report = {"verified": ok, **c.to_json(implicit=ok)}
    return report, [report]


def cmd_skeleton(args):
    field = _field(args)
    maps = [parse_poly(p, field) for p in args.polys]
    skeleton = invariant_skeleton(maps, args.bound)
    rows = [{"coordinate": i, **cls.to_json()} for i, cls in enumerate(skeleton.classes, start=1)]
    return skeleton.to_json(), rows


def _orbit_inputs(args):
    field = _field(args)
    maps = [parse_poly(p, field) for p in args.maps]
    start = [_constant(a, field) for a in args.start]
    return maps, start


def cmd_density(args):
    maps, start = _orbit_inputs(args)
    sample = orbit(maps, start, args.n, args.mode, args.prime)
    if args.step > 1 or args.offset:
        sample = subsample(sample, args.step, args.offset)
    verdict = density_test(sample, args.degree)
    report = {"sample": {"mode": sample.mode, "prime": sample.prime, "points": len(sample.points),
                         "step": sample.step, "offset": sample.offset},
              "verdict": verdict.to_json()}
    rows = [{"index": i, "point": ", ".join(str(c) for c in pt)}
            for i, pt in enumerate(sample.points)]
    return report, rows


def cmd_dense_point(args):
    field = _field(args)
    maps = [parse_poly(p, field) for p in args.maps]
    found = construct_dense_point(maps)
    report = found.to_json()
    if args.check:
        sample = orbit(maps, found.point, args.points, MODULAR)
        report["check"] = density_test(sample, args.check).to_json()
    rows = [{"coordinate": i, "value": str(c)} for i, c in enumerate(found.point, start=1)]
    return report, rows


def cmd_frob_lift(args):
    f = parse_poly(args.poly)
    if args.capture:
        capture = periodic_capture_check(args.p, f, args.capture, args.prec)
        report = capture.to_json()
        rows = [{"point": str(x.to_json()), "periodic": x not in capture.violations}
                for x in capture.points]
        return report, rows
    ctx = ZqContext(args.p, args.ext, args.prec)
    points = lift_sharp_points(ctx, f)
    report = {"context": ctx.to_json(), "count": len(points),
              "points": [x.to_json() for x in points]}
    rows = [{"residue": str(x.reduce().to_json()), "point": str(x.to_json())} for x in points]
    return report, rows


# --- Parser ---
def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--d", type=int, default=1, help="K = Q(sqrt d); 1 means Q")
    common.add_argument("--sigma", choices=["id", "conj"], default="id")
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--csv", help="also write the table part of the report to this CSV file")

    parser = argparse.ArgumentParser(description="Ritt swaps, skew-invariant curves and orbit density.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", parents=[common], help="complete decomposition of a polynomial")
    p.add_argument("poly")
    p.add_argument("--all", action="store_true", help="enumerate every class reachable by swaps")
    p.set_defaults(handler=cmd_decompose)

    p = sub.add_parser("classify", parents=[common], help="swap taxonomy of an indecomposable")
    p.add_argument("poly", nargs="?")
    p.add_argument("--type-w", type=int, metavar="S")
    p.add_argument("--type-c-hat", type=int, metavar="S")
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("swap", parents=[common], help="Ritt swaps and word actions")
    p.add_argument("--decomp", required=True, help="'f_k; ...; f_1', outermost first")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--at", type=int)
    group.add_argument("--word")
    group.add_argument("--clumps", action="store_true")
    p.set_defaults(handler=cmd_swap)

    p = sub.add_parser("canon", parents=[common], help="canonical and normal forms of words")
    p.add_argument("--k", type=int, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--first")
    group.add_argument("--second")
    group.add_argument("--bword")
    group.add_argument("--border")
    p.add_argument("--blocks", help="block sizes for --second, e.g. 2,2")
    p.set_defaults(handler=cmd_canon)

    p = sub.add_parser("curves", parents=[common], help="certified invariant curves between f and g")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--bound", type=int)
    p.set_defaults(handler=cmd_curves)

    p = sub.add_parser("verify", parents=[common], help="check a correspondence (h, pi, rho)")
    for name in ("f", "g", "h", "pi", "rho"):
        p.add_argument(f"--{name}", required=True)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("skeleton", parents=[common], help="invariant skeleton of (f_1, ..., f_n)")
    p.add_argument("polys", nargs="+")
    p.add_argument("--bound", type=int)
    p.set_defaults(handler=cmd_skeleton)

    p = sub.add_parser("density", parents=[common], help="monomial rank test on an orbit")
    p.add_argument("--maps", nargs="+", required=True)
    p.add_argument("--start", nargs="+", required=True)
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--mode", choices=[EXACT, MODULAR], help="default: modular for nonlinear maps")
    p.add_argument("--prime", type=int)
    p.add_argument("--step", type=int, default=1)
    p.add_argument("--offset", type=int, default=0)
    p.set_defaults(handler=cmd_density)

    p = sub.add_parser("dense-point", parents=[common], help="a point with a dense orbit")
    p.add_argument("--maps", nargs="+", required=True)
    p.add_argument("--check", type=int, metavar="DEGREE", help="run the density test too")
    p.add_argument("--points", type=int, default=30)
    p.set_defaults(handler=cmd_dense_point)

    p = sub.add_parser("frob-lift", parents=[common], help="sharp points of a Frobenius lift")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--ext", type=int, default=1)
    p.add_argument("--prec", type=int, required=True)
    p.add_argument("--poly", required=True)
    p.add_argument("--capture", type=int, metavar="M", help="periodic capture check with period M")
    p.set_defaults(handler=cmd_frob_lift)
    return parser


# --- Output ---
def _write_report(command, report):
    os.makedirs(REPORT_DIR, exist_ok=True)
    stamp = datetime.datetime.now(datetime.timezone.utc).strftime("%Y%m%dT%H%M%SZ")
    path = os.path.join(REPORT_DIR, f"{command}_{stamp}.json")
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(report, fh, sort_keys=True, indent=2, default=str)
        log("INFO", f"report saved to {path}")
    except IOError as e:
        log("ERROR", f"failed to write report {path}: {e}")


def emit(report, rows, fmt="json", csv_path=None):
    if fmt == "text":
        for key in sorted(report):
            value = report[key]
            if not isinstance(value, (dict, list)):
                print(f"{key}: {value}")
        if rows:
            print(pd.DataFrame(rows).to_string(index=False))
    else:
        print(json.dumps(report, sort_keys=True, indent=2, default=str))
    if csv_path and rows:
        pd.DataFrame(rows).to_csv(csv_path, index=False, encoding="utf-8-sig")
        log("INFO", f"table saved to {csv_path}")


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    fmt = args.format
    try:
        report, rows = args.handler(args)
    except ParseError as e:
        log("ERROR", str(e))
        emit({"status": "ERROR_PARSE", "message": e.reason, "position": e.position,
              "text": e.text}, [], fmt)
        return 2
    except DomainError as e:
        log("ERROR", str(e))
        emit({"status": f"ERROR_DOMAIN:{e.code}", "message": str(e)}, [], fmt)
        return 1
    except InternalError as e:
        log("ERROR", f"internal failure: {e}")
        traceback.print_exc()
        emit({"status": "ERROR_INTERNAL", "message": str(e)}, [], fmt)
        return 1
    except Exception as e:
        log("ERROR", f"unexpected {type(e).__name__}: {e}")
        traceback.print_exc()
        emit({"status": "ERROR_INTERNAL", "message": str(e)}, [], fmt)
        return 1

    report["status"] = "SUCCESS"
    report["command"] = args.command
    emit(report, rows, fmt, args.csv)
    if WRITE_REPORT:
        _write_report(args.command, report)
    return 0


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
