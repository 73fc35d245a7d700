"""
Command-line front end.

Exit codes: 0 success or target passed, 2 target failed, 64 usage error or
unknown target, 65 invalid input data, 70 estimator failure.
"""

import argparse
import csv
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import esf as esf_mod
from .constants import paper_constants
from .criteria import KINDS, CriterionSpec, vad
from .linalg import as_spectrum
from .measures import (
    MeasureSpec,
    RegionSpec,
    area_to_volume,
    classify_scan,
    estimate_probability,
    estimate_probability_two_stage,
    sample_sorted_spectrum,
)
from .registry import TARGETS, config_hash, passes, run_target

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DATA, EXIT_SOFTWARE = 0, 2, 64, 65, 70
CACHE_ENV = "EIGSEP_CACHE_DIR"


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


def count(text):
    """Sample counts in decimal or scientific notation: 1e7, 10000000."""
    v = float(text)
    if not v.is_integer() or v < 1:
        raise argparse.ArgumentTypeError(f"not a positive integer: {text!r}")
    return int(v)


def spectrum(text):
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad eigenvalue list: {text!r}")


def flag(text):
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off", ""):
        return False
    raise argparse.ArgumentTypeError(f"not a boolean: {text!r}")


# --- cache ledger ---------------------------------------------------------------

def cache_dir(args):
    d = args.cache_dir or os.environ.get(CACHE_ENV) or Path.home() / ".cache" / "eigsep"
    return Path(d)


def cache_lookup(args, key):
    path = cache_dir(args) / "ledger.jsonl"
    if not path.exists():
        return None
    found = None
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            try:
                rec = json.loads(line)
            except json.JSONDecodeError:
                continue
            if rec.get("config_hash") == key:
                found = rec
    return found


def cache_append(args, record):
    d = cache_dir(args)
    d.mkdir(parents=True, exist_ok=True)
    line = (json.dumps(record, sort_keys=True) + "\n").encode("utf-8")
    # one write on an O_APPEND descriptor keeps lines whole
    fd = os.open(d / "ledger.jsonl", os.O_WRONLY | os.O_APPEND | os.O_CREAT, 0o644)
    try:
        os.write(fd, line)
    finally:
        os.close(fd)


# --- output ---------------------------------------------------------------------

def emit(args, record, text):
    if args.json:
        print(json.dumps(record, sort_keys=True))
    else:
        print(text)


def fmt_record(rec):
    status = "PASS" if rec["pass"] else "FAIL"
    return (
        f"{rec['target']}: {rec['value']:.10g} +- {rec['stderr']:.3g} "
        f"(reference {rec['reference']:.10g}, rel err {rec['rel_err']:.3g}) {status}\n"
        f"  source: {rec['ref_source']}"
    )


# --- subcommands ------------------------------------------------------------------

def cmd_constants(args):
    table = paper_constants()
    if args.format == "json":
        out = [
            {"id": c.id, "value": c.value[:32] if c.value else None, "printed": c.printed,
             "formula": c.formula, "source": c.source, "matches_printed": c.matches_printed()}
            for c in table.values()
        ]
        print(json.dumps(out, indent=1))
    else:
        for c in table.values():
            val = c.value[:32] if c.value else "(numeric only)"
            print(f"{c.id:28s} {val:34s} printed {c.printed or '-':22s} {c.formula}")
    return EXIT_OK


def cmd_reproduce(args):
    if args.list:
        for t in TARGETS.values():
            print(f"{t.id:28s} {t.reference:.10g}  {t.source}")
        return EXIT_OK
    if not args.target:
        raise UsageError("--target is required (or --list)")
    if args.target not in TARGETS:
        raise UsageError(f"unknown target {args.target!r}; see --list")
    n = args.n or TARGETS[args.target].n
    key = config_hash({"command": "reproduce", "target": args.target, "n": n, "seed": args.seed})
    rec = cache_lookup(args, key) if args.cached else None
    if rec is None:
        rec = run_target(args.target, n, args.seed, args.threads).to_json()
        cache_append(args, rec)
    emit(args, rec, fmt_record(rec))
    return EXIT_OK if rec["pass"] else EXIT_FAIL


def _lambda(args):
    lam = np.asarray(args.lam, dtype=float)
    if np.any(np.diff(lam) > 0):
        print("warning: eigenvalues were not sorted; sorting them", file=sys.stderr)
        lam = -np.sort(-lam)
    try:
        return as_spectrum(lam, 4, tol=1e-9)
    except ValueError as exc:
        raise DataError(str(exc))


def cmd_esf(args):
    lam = _lambda(args)
    scen = esf_mod.scenario(args.scenario)
    if scen.kind == "ex1":
        exact, indicator = float(esf_mod.esf_ex1(lam)), "ppt"
    elif scen.kind == "ex2":
        exact, indicator = float(esf_mod.esf_ex2(lam)), "ppt"
    elif args.full_ppt:
        exact, indicator = esf_mod.esf_two_angle_ppt(lam), "ppt"
    else:
        exact, indicator = esf_mod.esf_two_angle(lam), "formula"
    out = {"scenario": scen.kind, "lambda": lam.tolist(), "value": exact}
    text = f"{scen.kind} ESF at {lam.tolist()}: {exact:.12g}"
    if args.mc:
        est = esf_mod.esf_mc(scen, lam, args.n, args.seed, indicator=indicator, threads=args.threads)
        z = est.z(exact)
        out.update(mc_value=est.value, mc_stderr=est.stderr, n=est.n, seed=est.seed, z=z)
        text += f"\nMonte Carlo ({indicator}): {est.value:.6g} +- {est.stderr:.2g}, z = {z:.2f}"
    emit(args, out, text)
    return EXIT_OK


def _write_csv(path, header, rows):
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            for row in rows:
                w.writerow([f"{v:.15g}" if isinstance(v, float) else v for v in row])
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}")


def cmd_scan(args):
    kind = args.kind
    if kind == "fig6":
        grid = np.linspace(0.0, 1.0, args.grid)
        rows = [(float(v), float(esf_mod.esf_ex2_of_v(v)), float(2 / np.pi * np.arcsin(np.sqrt(v)))) for v in grid]
        _write_csv(args.out, ["V", "esf_ex2", "arcsin_comparison"], rows)
    elif kind in ("fig1", "fig2", "fig3"):
        lam = sample_sorted_spectrum(4, np.random.default_rng(args.seed), args.n)
        vals = vad(lam)
        rows = ((float(a), float(b), float(c), float(f)) for (a, b, c, _), f in zip(lam, vals))
        _write_csv(args.out, ["lambda1", "lambda2", "lambda3", "vad"], rows)
    elif kind in ("fig4", "fig5", "fig8"):
        dim = 6 if kind == "fig8" else 4
        crit = "vad_tilde" if kind == "fig5" else "vad"
        scan = classify_scan(dim, args.n, args.seed, crit)
        header = [f"x{k + 1}" for k in range(dim)] + ["level", "purity", "class"]
        rows = (
            [*map(float, p), float(f), float(q), str(c)]
            for p, f, q, c in zip(scan["points"], scan["level"], scan["purity"], scan["cls"])
        )
        _write_csv(args.out, header, rows)
    else:
        raise UsageError(f"unknown scan {kind!r}")
    if not args.json:
        print(f"wrote {args.out}")
    else:
        print(json.dumps({"kind": kind, "out": str(args.out)}))
    return EXIT_OK


def _measure_region(args):
    try:
        m = MeasureSpec.parse(args.measure, args.dim)
        r = RegionSpec(CriterionSpec(args.criterion, args.dim), args.condition_l1)
    except ValueError as exc:
        raise DataError(str(exc))
    if m.dim != r.dim:
        raise DataError("measure and criterion dimensions differ")
    return m, r


def _record(args, cfg, value, stderr, elapsed):
    rec = {"target": None, "value": value, "stderr": stderr, "n": args.n, "seed": args.seed,
           "reference": args.reference, "ref_source": None, "abs_err": None, "rel_err": None,
           "pass": None, "elapsed_seconds": elapsed, "config_hash": config_hash(cfg), "timestamp": time.time()}
    if args.reference is not None:
        rec["abs_err"] = abs(value - args.reference)
        rec["rel_err"] = rec["abs_err"] / abs(args.reference) if args.reference else math.inf
        rec["pass"] = passes(value, stderr, args.reference, 0.0, args.tol_rel)
        rec["ref_source"] = "user"
    return rec


def _config(args, command, keys):
    return {"command": command, **{k: getattr(args, k) for k in keys}}


def _cached_or(args, cfg, compute):
    if args.cached:
        rec = cache_lookup(args, config_hash(cfg))
        if rec is not None:
            return rec
    rec = compute()
    cache_append(args, rec)
    return rec


def _finish(args, rec, label):
    text = f"{label}: {rec['value']:.10g} +- {rec['stderr']:.3g} (n={rec['n']}, seed={rec['seed']})"
    if rec.get("gamma") is not None:
        text += f"\ngamma: {rec['gamma']:.8g} +- {rec['gamma_stderr']:.3g}"
    if rec["pass"] is not None:
        text += f"\nreference {rec['reference']:.10g}: {'PASS' if rec['pass'] else 'FAIL'}"
    emit(args, rec, text)
    return EXIT_FAIL if rec["pass"] is False else EXIT_OK


def cmd_prob(args):
    m, r = _measure_region(args)
    cfg = _config(args, "prob", ["measure", "criterion", "dim", "n", "seed", "qmc", "two_stage", "condition_l1", "reference"])

    def compute():
        if args.two_stage:
            est = estimate_probability_two_stage(m, r, max(args.n // 500, 2000), args.n, args.seed, threads=args.threads)
        else:
            est = estimate_probability(m, r, args.n, args.seed, qmc=args.qmc, threads=args.threads)
        return _record(args, cfg, est.value, est.stderr, est.elapsed_seconds)

    return _finish(args, _cached_or(args, cfg, compute), f"P[{r.criterion.kind} | {m.label}, dim {m.dim}]")


def cmd_area(args):
    m, r = _measure_region(args)
    cfg = _config(args, "area", ["measure", "criterion", "dim", "n", "seed", "epsilon", "mode", "condition_l1", "reference"])

    def compute():
        res = area_to_volume(m, r, args.n, args.seed, epsilon=args.epsilon, mode=args.mode, threads=args.threads)
        rec = _record(args, cfg, res.ratio.value, res.ratio.stderr, res.ratio.elapsed_seconds)
        rec.update(gamma=res.gamma, gamma_stderr=res.gamma_stderr, volume=res.volume.value,
                   area=res.area.value, excluded_fraction=res.excluded_fraction)
        return rec

    return _finish(args, _cached_or(args, cfg, compute), f"area/volume [{r.criterion.kind} | {m.label}, dim {m.dim}]")


# --- parser ---------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file supplying defaults for any flag")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--json", action="store_true")
    common.add_argument("--cache-dir", default=None, help=f"result ledger directory (default ${CACHE_ENV})")
    common.add_argument("--cached", action="store_true", help="reuse a stored record for the same configuration")

    p = argparse.ArgumentParser(prog="eigsep", description=__doc__.strip().splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("constants", parents=[common], help="list closed-form constants")
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.set_defaults(func=cmd_constants)

    s = sub.add_parser("reproduce", parents=[common], help="recompute a registered target")
    s.add_argument("--target")
    s.add_argument("--list", action="store_true")
    s.add_argument("--n", type=count, default=None)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_reproduce)

    s = sub.add_parser("esf", parents=[common], help="separability function at a spectrum")
    s.add_argument("--scenario", required=True, choices=("ex1", "ex2", "two-angle", "two_angle"))
    s.add_argument("--lambda", dest="lam", type=spectrum, required=True)
    s.add_argument("--mc", action="store_true")
    s.add_argument("--full-ppt", action="store_true", help="two-angle: use both partial-transpose blocks")
    s.add_argument("--n", type=count, default=1_000_000)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_esf)

    s = sub.add_parser("scan", parents=[common], help="write plotting data as CSV")
    s.add_argument("--kind", required=True, choices=("fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig8"))
    s.add_argument("--out", required=True)
    s.add_argument("--n", type=count, default=100_000)
    s.add_argument("--grid", type=count, default=1001)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_scan)

    for name, func, helptext in (("prob", cmd_prob, "probability of a region"), ("area", cmd_area, "area-to-volume ratio")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--measure", default="uniform", help="uniform, hs:1, hs:2, hs:4, bures[:beta]")
        s.add_argument("--criterion", required=True, choices=KINDS)
        s.add_argument("--dim", type=int, default=4, choices=(4, 6))
        s.add_argument("--n", type=count, default=10_000_000)
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--condition-l1", type=float, default=None)
        s.add_argument("--reference", type=float, default=None)
        s.add_argument("--tol-rel", type=float, default=0.005)
        if name == "prob":
            s.add_argument("--qmc", action="store_true")
            s.add_argument("--two-stage", action="store_true")
        else:
            s.add_argument("--epsilon", type=float, default=1e-2)
            s.add_argument("--mode", choices=("level", "geometric"), default="level")
        s.set_defaults(func=func)
    return p


def read_config(path):
    cfg = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                key, sep, value = line.partition("=")
                if not sep:
                    raise UsageError(f"{path}:{lineno}: expected key=value")
                cfg[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}")
    return cfg


def _apply_config(parser, argv):
    """Re-parse with config-file values as defaults, so explicit flags win."""
    args = parser.parse_args(argv)
    if not args.config:
        return args
    cfg = read_config(args.config)
    sub = parser._subparsers._group_actions[0].choices[args.command]
    known = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, value in cfg.items():
        if key not in known:
            raise UsageError(f"unknown config key {key!r} for {args.command}")
        action = known[key]
        if action.nargs == 0:  # store_true flags
            defaults[key] = flag(value)
        else:
            defaults[key] = action.type(value) if action.type else value
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv=None):
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    except (UsageError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ArithmeticError, RuntimeError, ValueError) as exc:
        print(f"error: estimator failed: {exc}", file=sys.stderr)
        return EXIT_SOFTWARE


if __name__ == "__main__":
    sys.exit(main())
