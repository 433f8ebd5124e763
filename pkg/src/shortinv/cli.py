"""Command-line harness.

Every subcommand writes one report (JSON by default, or CSV) to stdout or
``--output``.  Exit status: 0 when every check passed, 1 when a check
failed, 2 on invalid input.  Progress goes to stderr only.

The default seed is ``0xC0FFEE`` and the default worker count is read from
``SHORTINV_JOBS``.  Wall-clock runtime is only written with
``--record-runtime`` so that repeated runs produce identical files.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys

from . import existence_lab as lab
from .gaussian_smoothing import scales
from .kloosterman import kloosterman, mean_value_check, weil_margin, weil_scan
from .modular_core import get_modulus, is_prime
from .poisson_engine import KINDS, IntervalFamily, s_decompose

log = logging.getLogger("shortinv")

EXPERIMENT_COLUMNS = ["p", "H", "K", "epsilon", "kind", "X", "Y", "threshold",
                      "empirical_min_J", "c_emp", "seed", "runtime_s"]


class UsageError(ValueError):
    pass


def _interval(s: str):
    try:
        a, b = s.split(":")
        return (float(a), float(b))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {s!r}") from None


def _jobs_default() -> int:
    try:
        return max(1, int(os.environ.get("SHORTINV_JOBS", "1")))
    except ValueError:
        return 1


def _prime(args):
    if not is_prime(args.p) or args.p == 2:
        raise UsageError(f"--p must be an odd prime, got {args.p}")
    return get_modulus(args.p)


def _spacing(args):
    return lab.SpacingParams(float(args.X or 0.0), int(args.Y or 0))


# -- subcommands: each returns (report, rows_for_csv, ok) -------------------

def cmd_kloosterman(args):
    pm = _prime(args)
    kv = kloosterman(args.a, args.b, pm, reduce=args.reduce)
    rep = {"p": pm.p, "a": kv.a, "b": kv.b, "value": kv.value.real,
           "imag": kv.value.imag, "reduced": kv.reduced}
    ok = abs(kv.value.imag) < args.imag_tol
    if kv.b != 0:
        rep["weil_margin"] = weil_margin(kv.a, kv.b, pm)
        ok = ok and rep["weil_margin"] <= 1.0
    return rep, [rep], ok


def cmd_weil_scan(args):
    primes = [q for q in range(max(3, args.p_min), args.p_max) if is_prime(q)]
    if not primes:
        raise UsageError("no odd primes in the requested range")
    res = weil_scan(primes)
    rep = {"p_min": args.p_min, "p_max": args.p_max, "primes_checked": len(primes),
           "max_margin": res["max_margin"], "max_imag": res["max_imag"]}
    ok = res["max_margin"] <= 1.0 and res["max_imag"] < args.imag_tol
    return rep, res["primes"], ok


def cmd_meanvalue(args):
    pm = _prime(args)
    if args.intervals:
        ivs = [_interval(s) for s in args.intervals.split(",")]
    else:
        J = args.J if args.J is not None else (pm.p - 2) // (math.floor(args.H) + 1)
        ivs = lab.disjoint_intervals(pm.p, args.H, J, args.seed)
    r = mean_value_check(ivs, args.l, pm, args.H)
    rep = {"p": pm.p, "H": args.H, "l": args.l, "J": len(ivs), "seed": args.seed,
           "lhs": r.lhs, "rhs": r.rhs, "holds": r.holds}
    return rep, [rep], r.holds


def _family_from_args(args):
    if args.family:
        with open(args.family, encoding="utf-8") as fh:
            return IntervalFamily.from_dict(json.load(fh))
    _prime(args)
    if args.H is None or args.J is None:
        raise UsageError("--H and --J are required unless --family is given")
    K = args.K if args.K is not None else args.H
    return lab.generate_family(args.kind, args.p, args.H, K, args.J, _spacing(args), args.seed)


def cmd_poisson_check(args):
    fam = _family_from_args(args)
    sc = scales(fam.H, fam.K, fam.p, args.epsilon)
    d = s_decompose(fam, sc, method=args.method)
    rep = {"p": fam.p, "H": fam.H, "K": fam.K, "J": fam.J, "kind": fam.kind,
           "epsilon": args.epsilon, "seed": args.seed, "tolerance": args.tol, **d.as_dict()}
    ok = d.residual < args.tol
    return rep, [rep], ok


def cmd_exists(args):
    pm = _prime(args)
    r = lab.solution_exists(args.i1, args.i2, pm)
    rep = {"p": pm.p, "i1": list(args.i1), "i2": list(args.i2), "exists": r.exists,
           "witness": list(r.witness) if r.witness else None}
    return rep, [rep], True


def cmd_thresholds(args):
    pm = _prime(args)
    K = args.K if args.K is not None else args.H
    t4 = lab.thm4_thresholds(pm.p, args.H, K, args.epsilon)
    rep = {"p": pm.p, "H": args.H, "K": K, "epsilon": args.epsilon,
           "thm1": lab.thm1_threshold(pm.p, args.H, K),
           "X": args.X,
           "thm3": lab.thm3_threshold(pm.p, args.H, K, args.X, args.epsilon) if args.X else None,
           "thm4_X_max": t4["X_max"], "thm4_J_min": t4["J_min"]}
    return rep, [rep], True


def _experiment_row(r: lab.ExperimentReport, record_runtime: bool) -> dict:
    return {"p": r.p, "H": r.H, "K": r.K, "epsilon": r.epsilon, "kind": r.kind, "X": r.X,
            "Y": r.Y, "threshold": r.threshold_value, "empirical_min_J": r.empirical_min_J,
            "c_emp": r.c_emp, "seed": r.seed,
            "runtime_s": r.runtime if record_runtime else None}


def cmd_experiment(args):
    _prime(args)
    K = args.K if args.K is not None else args.H
    r = lab.minimal_J_search(args.kind, args.p, args.H, K, _spacing(args), args.epsilon,
                             args.trials, args.seed, args.jobs)
    if not args.record_runtime:
        r.runtime = None
    rep = r.to_dict()
    ok = (not r.saturated) and r.c_emp <= args.c_max
    return rep, [_experiment_row(r, args.record_runtime)], ok


def cmd_audit(args):
    _prime(args)
    if args.kind not in ("x_spaced", "arithmetic"):
        raise UsageError("audit needs --kind x_spaced or arithmetic")
    fam = _family_from_args(args)
    sc = scales(fam.H, fam.K, fam.p, args.epsilon)
    rows = []
    for a in lab.bound_audit(fam, sc):
        rows.append({"p": fam.p, "H": fam.H, "K": fam.K, "J": fam.J, "kind": fam.kind,
                     "epsilon": args.epsilon, "seed": args.seed, "shape": a.shape,
                     "actual": a.actual, "predicted": a.predicted, "ratio": a.ratio})
    ok = all(math.isfinite(r["ratio"]) and r["ratio"] < args.ratio_max for r in rows)
    return {"audits": rows}, rows, ok


def cmd_verify(args):
    with open(args.report, encoding="utf-8") as fh:
        rep = lab.ExperimentReport.from_dict(json.load(fh))
    ok = lab.verify_report(rep)
    return {"report": args.report, "verified": ok}, [{"report": args.report, "verified": ok}], ok


# -- wiring -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="shortinv", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true", help="progress on stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, seed=True):
        sp.add_argument("--output", "-o", help="write the report here instead of stdout")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        if seed:
            sp.add_argument("--seed", type=int, default=lab.DEFAULT_SEED)
        return sp

    def family_opts(sp):
        sp.add_argument("--p", type=int)
        sp.add_argument("--H", type=float)
        sp.add_argument("--K", type=float)
        sp.add_argument("--J", type=int)
        sp.add_argument("--kind", choices=KINDS, default="general")
        sp.add_argument("--X", type=float, default=0.0)
        sp.add_argument("--Y", type=int, default=0)
        sp.add_argument("--epsilon", type=float, default=0.5)
        sp.add_argument("--family", help="JSON file {p, H, K, centers: [[M, N], ...]}")

    sp = common(sub.add_parser("kloosterman", help="one Kloosterman sum"), seed=False)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.add_argument("--reduce", action="store_true", help="use S(a,b)=S(1,ab)")
    sp.add_argument("--imag-tol", type=float, default=1e-9)
    sp.set_defaults(func=cmd_kloosterman)

    sp = common(sub.add_parser("weil-scan", help="exhaustive Weil-bound scan"), seed=False)
    sp.add_argument("--p-min", type=int, default=3)
    sp.add_argument("--p-max", type=int, default=500, help="exclusive upper limit")
    sp.add_argument("--imag-tol", type=float, default=1e-9)
    sp.set_defaults(func=cmd_weil_scan)

    sp = common(sub.add_parser("meanvalue", help="mean value inequality for short Kloosterman sums"))
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--H", type=float, required=True)
    sp.add_argument("--J", type=int)
    sp.add_argument("--l", type=int, default=1)
    sp.add_argument("--intervals", help="comma separated LO:HI list")
    sp.set_defaults(func=cmd_meanvalue)

    sp = common(sub.add_parser("poisson-check", help="direct vs spectral complete sum"))
    family_opts(sp)
    sp.add_argument("--method", choices=("naive", "chirp"), default="naive")
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.set_defaults(func=cmd_poisson_check)

    sp = common(sub.add_parser("exists", help="oracle on one interval pair"), seed=False)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--i1", type=_interval, required=True)
    sp.add_argument("--i2", type=_interval, required=True)
    sp.set_defaults(func=cmd_exists)

    sp = common(sub.add_parser("thresholds", help="existence thresholds"), seed=False)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--H", type=float, required=True)
    sp.add_argument("--K", type=float)
    sp.add_argument("--X", type=float)
    sp.add_argument("--epsilon", type=float, default=0.5)
    sp.set_defaults(func=cmd_thresholds)

    sp = common(sub.add_parser("experiment", help="empirical minimal J search"))
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--H", type=float, required=True)
    sp.add_argument("--K", type=float)
    sp.add_argument("--kind", choices=KINDS, default="disjoint")
    sp.add_argument("--X", type=float, default=0.0)
    sp.add_argument("--Y", type=int, default=0)
    sp.add_argument("--epsilon", type=float, default=0.5)
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--jobs", type=int, default=_jobs_default())
    sp.add_argument("--c-max", type=float, default=10.0)
    sp.add_argument("--record-runtime", action="store_true")
    sp.set_defaults(func=cmd_experiment)

    sp = common(sub.add_parser("audit", help="error term against predicted shape"))
    family_opts(sp)
    sp.add_argument("--ratio-max", type=float, default=100.0)
    sp.set_defaults(func=cmd_audit)

    sp = common(sub.add_parser("verify", help="re-verify a saved experiment report"), seed=False)
    sp.add_argument("--report", required=True)
    sp.set_defaults(func=cmd_verify)
    return ap


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if hasattr(v, "item"):
        return v.item()
    return v


def render(report, rows, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, default=_jsonable) + "\n"
    buf = io.StringIO()
    if rows:
        cols = EXPERIMENT_COLUMNS if set(rows[0]) == set(EXPERIMENT_COLUMNS) else list(rows[0])
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        for r in rows:
            w.writerow({k: ("" if r.get(k) is None else r.get(k)) for k in cols})
    return buf.getvalue()


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(name)s: %(message)s")
    try:
        report, rows, ok = args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"shortinv {args.command}: error: {msg}", file=sys.stderr)
        return 2
    text = render(report, rows, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
