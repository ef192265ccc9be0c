"""Command-line entry point: ``gapshift <command> [--config PATH] [--out DIR] [--seed N] [--threads N]``.

Exit codes: 0 success, 1 a checked property failed, 2 bad configuration or
request, 3 a resource cap was hit. Result files are deterministic; timestamps
and the config hash go to ``run_record.json`` only.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import json
import math
import os
import sys
import time
from typing import Dict, List, Optional

from . import formats
from .config import ConfigError, ExperimentConfig, describe, load_config
from .counting import entropy_profile, periodic_points
from .gapped import (
    InadmissibleSchedule,
    InfeasibleRequest,
    build_oscillating_point,
    gap_function,
    glue,
    min_gap_witness_search,
)
from .measures import birkhoff_average, empirical_measure, ergodic_optimum, oscillation
from .suite import DEFAULT_SEED, run_all
from .symbolic import ResourceLimitExceeded, format_word

EXIT_OK, EXIT_PROPERTY, EXIT_CONFIG, EXIT_CAP = 0, 1, 2, 3


class Run:
    """Collects written files and summary fields for the run record."""

    def __init__(self, cfg: ExperimentConfig, args: argparse.Namespace):
        self.cfg = cfg
        self.args = args
        self.out = args.out or cfg.out_dir
        self.files: List[str] = []
        self.summary: Dict[str, object] = {}
        self.started = _dt.datetime.now(_dt.timezone.utc).isoformat()
        os.makedirs(self.out, exist_ok=True)

    def write(self, name: str, text: str) -> str:
        path = os.path.join(self.out, name)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        self.files.append(name)
        return path

    def record(self, status: int) -> None:
        rec = {
            "command": self.args.command,
            "config_path": self.args.config,
            "config_sha256": self.cfg.digest,
            "spec": describe(self.cfg),
            "seed": self.args.seed,
            "threads": self.args.threads,
            "started": self.started,
            "finished": _dt.datetime.now(_dt.timezone.utc).isoformat(),
            "files": self.files,
            "exit_code": status,
            "summary": self.summary,
        }
        with open(os.path.join(self.out, "run_record.json"), "w", encoding="utf-8") as fh:
            json.dump(rec, fh, indent=2, sort_keys=True, default=str)
            fh.write("\n")


# ---------------------------------------------------------------------------
# commands


def cmd_entropy(run: Run) -> int:
    cfg = run.cfg
    spec = cfg.subshift()
    prof = entropy_profile(spec, cfg.ranges.n_max, cfg.caps.max_states)
    run.write("entropy.csv", formats.entropy_csv(prof))
    n, c, h = prof.rows[-1]
    run.summary = {"n_max": n, "count": c, "h_n": h, "ref_logA": prof.ref_log_a, "ref_thmB5": prof.ref_thm_b5}
    print(f"h_{n} = {h:.6f}  (ln A = {prof.ref_log_a:.6f}, ln 2 + ln A/(1+tau) = {prof.ref_thm_b5:.6f})")
    return EXIT_OK


def cmd_periodic(run: Run) -> int:
    cfg = run.cfg
    spec = cfg.subshift()
    N = cfg.ranges.period_max
    ref = entropy_profile(spec, N, cfg.caps.max_states).h(N) / (1 + float(spec.tau))
    rows, orbit_records = [], []
    for n in range(1, N + 1):
        census = periodic_points(spec, n, None, cfg.caps.max_words, run.args.threads)
        rows.append((n, census.count, math.log(census.count) / n, ref))
        for o in census.orbits:
            if o.length == n:
                orbit_records.append({"n": n, "orbit": format_word(o.rep.symbols, cfg.compact),
                                      "zero_density": o.zero_density})
    run.write("periodic.csv", formats.census_csv(rows))
    run.write("orbits.jsonl", formats.jsonl(orbit_records))
    run.summary = {"period_max": N, "count": rows[-1][1], "growth": rows[-1][2], "ref_growth_bound": ref}
    print(f"|Per_{N}| = {rows[-1][1]}, growth {rows[-1][2]:.6f}, reference h_{N}/(1+tau) = {ref:.6f}")
    return EXIT_OK


def _glue_once(run: Run) -> int:
    cfg = run.cfg
    spec = cfg.subshift()
    req = cfg.glue.request(spec)
    res = glue(spec, req)
    if res.cyclic is not None:
        text = "cyclic " + format_word(res.word, cfg.compact) + "\n"
    else:
        text = format_word(res.word, cfg.compact) + "\n"
    run.write("glue_witness.txt", text)
    run.write("glue_report.jsonl", formats.jsonl(res.report))
    run.summary = {"admissible": res.admissible, "certified": res.certified, "length": len(res.word),
                   "periodic": res.cyclic is not None, "checks": len(res.report)}
    print(text.rstrip())
    print(f"admissible={res.admissible} certified={res.certified} ({len(res.report)} bounds <= 2^-{req.m})")
    return EXIT_OK if res.certified else EXIT_PROPERTY


def _glue_sweep(run: Run) -> int:
    cfg = run.cfg
    g = cfg.glue
    spec = cfg.subshift()
    M = gap_function(spec, len(g.sweep_u), g.m)
    top = g.sweep_max_gap or M
    rows = []
    first_found = None
    for gap in range(1, top + 1):
        w = min_gap_witness_search(spec, g.sweep_u, g.sweep_v, g.m, gap, cfg.caps.max_words)
        rows.append((gap, M, "no witness" if w is None else format_word(w, cfg.compact)))
        if w is not None and first_found is None:
            first_found = gap
    run.write("glue_sweep.csv", formats.sweep_csv(rows))
    run.summary = {"M": M, "first_gap_with_witness": first_found, "gaps_searched": top}
    print(f"M = {M}; first gap with a witness: {first_found}")
    return EXIT_OK


def cmd_glue(run: Run) -> int:
    return _glue_sweep(run) if run.cfg.glue.mode == "sweep" else _glue_once(run)


def cmd_optimize(run: Run) -> int:
    cfg = run.cfg
    spec = cfg.subshift()
    phi = cfg.observable.build(spec.size)
    res = ergodic_optimum(spec, phi, cfg.ranges.period_max, cfg.caps.max_words, run.args.threads)
    run.write("optimize.csv", formats.optimize_csv(res, cfg.compact))
    gamma = 1 / (1 + spec.tau)
    inside = sorted(c for c, v in res.averages.items() if gamma < v < 1)

    def part(p):
        return None if p is None else {"value": p[0], "orbit": format_word(p[1].symbols, cfg.compact)}

    summary = {
        "label": "periodic lower bound",
        "best": res.best,
        "argmax": format_word(res.argmax.symbols, cfg.compact),
        "zero_free": part(res.best_zero_free),
        "with_zero": part(res.best_with_zero),
        "open_interval": f"({formats.frac_str(gamma)}, 1)",
        "orbits_in_open_interval": len(inside),
        "orbits": len(res.averages),
    }
    run.write("optimize_summary.json", json.dumps(summary, sort_keys=True, default=formats.frac_str, indent=2) + "\n")
    run.summary = {k: summary[k] for k in ("best", "orbits", "orbits_in_open_interval")}
    print(f"periodic lower bound {res.best} at {format_word(res.argmax.symbols)}")
    for name, p in (("zero-free", res.best_zero_free), ("zero-containing", res.best_with_zero)):
        if p is not None:
            print(f"  {name} best {p[0]} at {format_word(p[1].symbols)}")
    print(f"  orbits with average in ({gamma}, 1): {len(inside)}")
    return EXIT_OK


def cmd_irregular(run: Run) -> int:
    cfg = run.cfg
    spec = cfg.subshift()
    sched = cfg.irregular.schedule()
    phi = cfg.observable.build(spec.size)
    x = build_oscillating_point(spec, sched, sched.total)
    # averages need phi.depth - 1 symbols of look-ahead; the point continues with zeros
    ext = x + (0,) * (phi.depth - 1)
    checkpoints = sched.checkpoints
    rows = [(c, birkhoff_average(ext, phi, c)) for c in checkpoints]
    lo, hi, gap = oscillation(ext, phi, checkpoints)
    k = cfg.irregular.depth
    mu = empirical_measure(x + (0,) * (k - 1), len(x), k)
    run.write("irregular_point.txt", format_word(x, cfg.compact) + "\n")
    run.write("irregular.csv", formats.oscillation_csv(rows))
    run.write("measure.json", formats.measure_json(mu))
    run.summary = {"checkpoints": checkpoints, "min": lo, "max": hi, "gap": gap}
    for c, v in rows:
        print(f"  n={c:>8}  average {float(v):.6f}")
    print(f"oscillation gap {gap} ({float(gap):.4f})")
    return EXIT_OK


def cmd_verify(run: Run) -> int:
    seed = run.args.seed
    deadline = time.monotonic() + run.cfg.caps.budget_seconds
    start = time.perf_counter()
    lines = []

    def show(number, res):
        line = f"[{'PASS' if res.passed else 'FAIL'}] criterion {number:>2} {res.name:<26} {res.seconds:7.1f}s  {res.detail}"
        print(line, flush=True)
        lines.append({"criterion": number, "name": res.name, "passed": res.passed})

    results = run_all(seed, deadline, show, run.cfg.caps.max_states)
    took = time.perf_counter() - start
    run.write("verify.jsonl", formats.jsonl(lines))
    failed = [r.name for r in results if not r.passed]
    run.summary = {"passed": len(results) - len(failed), "failed": failed, "seconds": round(took, 1),
                   "seconds_by_check": {r.name: round(r.seconds, 2) for r in results}}
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed in {took:.1f}s")
    if failed:
        first = next(r for r in results if not r.passed)
        print(f"first failure: {first.name}: {first.detail}", file=sys.stderr)
        return EXIT_PROPERTY
    return EXIT_OK


COMMANDS = {
    "entropy": cmd_entropy,
    "periodic": cmd_periodic,
    "glue": cmd_glue,
    "optimize": cmd_optimize,
    "irregular": cmd_irregular,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gapshift", description="Tau-gapped subshifts: counts, gluing and certificates.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", help="INI experiment config (defaults are used when omitted)")
    p.add_argument("--out", help="output directory (overrides [output] dir)")
    p.add_argument("--seed", type=int, help=f"seed for randomized checks (default {DEFAULT_SEED})")
    p.add_argument("--threads", type=int, default=1, help="worker processes for periodic enumeration")
    return p


def _fail(code: int, kind: str, message: str) -> int:
    print(json.dumps({"error": kind, "reason": message}), file=sys.stderr)
    return code


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads < 1:
        return _fail(EXIT_CONFIG, "config", "--threads must be >= 1")
    if args.seed is not None and not 0 <= args.seed < 2**64:
        return _fail(EXIT_CONFIG, "config", "--seed must fit in an unsigned 64-bit integer")
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, "config", str(exc))
    if args.seed is None:
        args.seed = cfg.seed if cfg.seed is not None else DEFAULT_SEED
    run = Run(cfg, args)
    try:
        status = COMMANDS[args.command](run)
    except ResourceLimitExceeded as exc:
        status = _fail(EXIT_CAP, "resource_cap", str(exc))
    except InfeasibleRequest as exc:
        status = _fail(EXIT_CONFIG, "infeasible_request", str(exc))
    except InadmissibleSchedule as exc:
        status = _fail(EXIT_CONFIG, "inadmissible_schedule", str(exc))
    except (ConfigError, NotImplementedError) as exc:
        status = _fail(EXIT_CONFIG, "config", str(exc))
    run.record(status)
    return status


if __name__ == "__main__":
    sys.exit(main())
