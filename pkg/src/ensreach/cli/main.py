"""``ensreach`` command line: check, synthesize and simulate."""

import argparse
import json
import sys

import numpy as np

from ..ensemble import (
    PiecewiseConstantInput,
    check_N1,
    check_N2,
    check_S1,
    check_S2,
    eigendecompose_continuous,
    error_profile,
    simulate_continuous_pwc,
    simulate_discrete,
)
from ..errors import (
    ArcClassificationError,
    ConditionError,
    DegreeCapError,
    GridError,
    ToleranceError,
)
from ..synthesis import method_s1, method_s2, method_s2_continuous
from .spec import SpecError, load_system, load_target, read_input, write_input

EXIT_OK = 0
EXIT_CONDITION = 1
EXIT_PARSE = 2
EXIT_CAP = 3
EXIT_ARC = 4
EXIT_TOLERANCE = 5


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _eps(value):
    if value is None:
        return None
    if not value > 0:
        raise SpecError("eps must be positive: exact reachability of an ensemble from a "
                        "single input is never possible, only eps-approximate reachability")
    return value


def _finite(obj):
    """Replace non-finite floats by ``None`` so the JSON stays standard."""
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    if isinstance(obj, float) and not np.isfinite(obj):
        return None
    return obj


def cmd_check(args):
    spec = load_system(args.system)
    sys_ = spec.system(spec.grid(args.grid))
    results = {"N1": check_N1(sys_), "N2": check_N2(sys_)}
    if sys_.m == 1:
        results["S1"] = check_S1(sys_)
    results["S2"] = check_S2(sys_)
    s1 = results.get("S1")
    ok = results["N1"].passed and results["N2"].passed and (
        (s1 is not None and s1.passed) or results["S2"].passed)
    report = {"system": args.system, "time": spec.time, "samples": sys_.M,
              "checks": {k: r.to_dict() for k, r in results.items()}, "passed": bool(ok)}
    _emit(json.dumps(_finite(report), indent=2) + "\n", args.out)
    for k, r in results.items():
        sys.stderr.write(f"check_{k}: {'pass' if r.passed else 'FAIL'} (margin {r.margin:.3g})\n")
    return EXIT_OK if ok else EXIT_CONDITION


def _choose_method(method, spec, sys_):
    if method != "auto":
        return method
    if spec.time == "continuous":
        return "s2ct"
    if sys_.m == 1 and check_S1(sys_).passed:
        return "s1"
    return "s2"


def cmd_synthesize(args):
    eps = _eps(args.eps)
    spec = load_system(args.system)
    tspec = load_target(args.target)
    grid = spec.grid(args.grid)
    vgrid = grid if tspec.tabulated else spec.validation(grid)
    sys_, sys_v = spec.system(grid), spec.system(vgrid)
    f, f_v = tspec.target(grid, spec.n), tspec.target(vgrid, spec.n)
    method = _choose_method(args.method, spec, sys_)
    if (method == "s2ct") != (spec.time == "continuous"):
        raise SpecError(f"method {method} does not apply to a {spec.time}-time system")
    fn = {"s1": method_s1, "s2": method_s2, "s2ct": method_s2_continuous}[method]
    inp, report = fn(sys_, f, eps, mode=args.mode, validation=(sys_v, f_v))
    out = args.out or "input.csv"
    write_input(out, inp)
    rep = report.to_dict()
    rep["input_file"] = out
    with open(out + ".report.json", "w") as fh:
        json.dump(_finite(rep), fh, indent=2)
        fh.write("\n")
    sys.stderr.write(report.summary() + "\n")
    return EXIT_OK if report.within_budget else EXIT_TOLERANCE


def cmd_simulate(args):
    eps = _eps(args.eps)
    spec = load_system(args.system)
    tspec = load_target(args.target)
    inp = read_input(args.input)
    grid = spec.grid(args.grid)
    vgrid = grid if tspec.tabulated else spec.validation(grid)
    sys_v = spec.system(vgrid)
    f_v = tspec.target(vgrid, spec.n)
    continuous = isinstance(inp, PiecewiseConstantInput)
    if continuous != (spec.time == "continuous"):
        raise SpecError(f"input file kind does not match the {spec.time}-time system")
    if continuous:
        x = simulate_continuous_pwc(eigendecompose_continuous(sys_v), inp)
    else:
        if sys_v.m != 1:
            raise SpecError("input files carry a single input channel")
        x = simulate_discrete(sys_v, inp)
    err = error_profile(x, f_v)
    lines = ["theta_index,err"] + [f"{i},{float(e)!r}" for i, e in enumerate(err)]
    sup = float(np.max(err))
    _emit("\n".join(lines) + "\n", args.out)
    print(f"sup_error={sup!r} samples={len(err)}")
    if eps is not None and sup > eps:
        return EXIT_TOLERANCE
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="ensreach", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="run the reachability and structure checks")
    c.add_argument("system")
    c.add_argument("--grid", type=int, help="number of samples for interval parameters")
    c.add_argument("--out", help="report path (default: stdout)")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("synthesize", help="construct an input for a target family")
    s.add_argument("system")
    s.add_argument("target")
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--method", choices=["auto", "s1", "s2", "s2ct"], default="auto")
    s.add_argument("--mode", choices=["certified", "adaptive"], default="adaptive")
    s.add_argument("--grid", type=int)
    s.add_argument("--out", help="input CSV path; the report goes to <out>.report.json")
    s.set_defaults(func=cmd_synthesize)

    m = sub.add_parser("simulate", help="replay an input and report the error profile")
    m.add_argument("system")
    m.add_argument("input")
    m.add_argument("target")
    m.add_argument("--eps", type=float)
    m.add_argument("--grid", type=int)
    m.add_argument("--out", help="error profile CSV path (default: stdout)")
    m.set_defaults(func=cmd_simulate)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except SpecError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    except ConditionError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONDITION
    except DegreeCapError as exc:
        sys.stderr.write(f"error: degree cap: {exc}\n")
        return EXIT_CAP
    except ArcClassificationError as exc:
        sys.stderr.write(f"error: arc classification: {exc}\n")
        return EXIT_ARC
    except (ToleranceError, GridError) as exc:
        sys.stderr.write(f"error: tolerance: {exc}\n")
        return EXIT_TOLERANCE
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
