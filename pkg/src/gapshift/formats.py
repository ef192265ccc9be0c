"""CSV / JSON emitters and their parsers.

Writers return text so callers decide where it goes; every writer is
deterministic (no timestamps, sorted keys) and every format parses back.
Fractions travel as separate ``num``/``den`` columns or as ``"p/q"`` strings.
"""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from .counting import EntropyProfile
from .measures import EmpiricalMeasure, FiniteMeasure, OptimizationResult
from .symbolic import CyclicWord, format_word, parse_word

ENTROPY_HEADER = ["n", "count", "h_n", "ref_logA", "ref_thmB5"]
CENSUS_HEADER = ["n", "count", "growth", "ref_growth_bound"]
OPTIMIZE_HEADER = ["period", "best_num", "best_den", "orbit"]
OSCILLATION_HEADER = ["checkpoint", "num", "den", "average"]


def _csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def _read(text: str, header: Sequence[str]) -> List[dict]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != list(header):
        raise ValueError(f"expected columns {header}, got {reader.fieldnames}")
    return list(reader)


def _float(x: float) -> str:
    return repr(float(x))  # shortest round-tripping form


def frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(s: str) -> Fraction:
    num, _, den = s.partition("/")
    return Fraction(int(num), int(den or 1))


# entropy -------------------------------------------------------------------

def entropy_csv(profile: EntropyProfile) -> str:
    return _csv(ENTROPY_HEADER, ((n, c, _float(h), _float(profile.ref_log_a), _float(profile.ref_thm_b5))
                                 for n, c, h in profile.rows))


def parse_entropy_csv(text: str) -> EntropyProfile:
    rows = _read(text, ENTROPY_HEADER)
    if not rows:
        raise ValueError("no rows")
    return EntropyProfile([(int(r["n"]), int(r["count"]), float(r["h_n"])) for r in rows],
                          float(rows[0]["ref_logA"]), float(rows[0]["ref_thmB5"]))


# periodic census -------------------------------------------------------------

def census_csv(rows: Sequence[Tuple[int, int, float, float]]) -> str:
    return _csv(CENSUS_HEADER, ((n, c, _float(g), _float(ref)) for n, c, g, ref in rows))


def parse_census_csv(text: str) -> List[Tuple[int, int, float, float]]:
    return [(int(r["n"]), int(r["count"]), float(r["growth"]), float(r["ref_growth_bound"]))
            for r in _read(text, CENSUS_HEADER)]


# optimization ----------------------------------------------------------------

def optimize_csv(result: OptimizationResult, compact: bool = False) -> str:
    return _csv(OPTIMIZE_HEADER, ((p, v.numerator, v.denominator, format_word(c.symbols, compact))
                                  for p, v, c in result.table))


def parse_optimize_csv(text: str, compact: bool = False) -> List[Tuple[int, Fraction, CyclicWord]]:
    return [(int(r["period"]), Fraction(int(r["best_num"]), int(r["best_den"])),
             CyclicWord(parse_word(r["orbit"], compact)))
            for r in _read(text, OPTIMIZE_HEADER)]


# oscillation -----------------------------------------------------------------

def oscillation_csv(rows: Sequence[Tuple[int, Fraction]]) -> str:
    return _csv(OSCILLATION_HEADER, ((c, v.numerator, v.denominator, _float(v)) for c, v in rows))


def parse_oscillation_csv(text: str) -> List[Tuple[int, Fraction]]:
    return [(int(r["checkpoint"]), Fraction(int(r["num"]), int(r["den"])))
            for r in _read(text, OSCILLATION_HEADER)]


# gap sweep -------------------------------------------------------------------

SWEEP_HEADER = ["gap", "M", "witness"]


def sweep_csv(rows: Sequence[Tuple[int, int, str]]) -> str:
    return _csv(SWEEP_HEADER, rows)


def parse_sweep_csv(text: str) -> List[Tuple[int, int, str]]:
    return [(int(r["gap"]), int(r["M"]), r["witness"]) for r in _read(text, SWEEP_HEADER)]


# measures --------------------------------------------------------------------

def measure_json(mu) -> str:
    """``{depth, atoms: [{word, num, den}]}`` for an empirical or finite measure."""
    if isinstance(mu, EmpiricalMeasure):
        depth, atoms = mu.depth, mu.weights
    elif isinstance(mu, FiniteMeasure):
        depth, atoms = mu.length, mu.atoms
    else:
        raise TypeError(f"not a measure: {type(mu).__name__}")
    body = {"depth": depth,
            "atoms": [{"word": format_word(w), "num": p.numerator, "den": p.denominator}
                      for w, p in sorted(atoms.items())]}
    return json.dumps(body, sort_keys=True) + "\n"


def parse_measure_json(text: str) -> EmpiricalMeasure:
    data = json.loads(text)
    weights = {parse_word(a["word"]): Fraction(a["num"], a["den"]) for a in data["atoms"]}
    if sum(weights.values()) != 1:
        raise ValueError("weights do not sum to 1")
    if any(len(w) != data["depth"] for w in weights):
        raise ValueError("atom length differs from depth")
    return EmpiricalMeasure(int(data["depth"]), weights)


# newline-delimited JSON records ----------------------------------------------

def _jsonable(v):
    if isinstance(v, Fraction):
        return frac_str(v)
    if isinstance(v, tuple):
        return format_word(v)
    return v


def jsonl(records: Iterable[dict]) -> str:
    return "".join(json.dumps({k: _jsonable(v) for k, v in r.items()}, sort_keys=True) + "\n" for r in records)


def parse_glue_report(text: str) -> List[dict]:
    out = []
    for line in text.splitlines():
        if not line.strip():
            continue
        r = json.loads(line)
        for key in ("bound", "lo", "hi"):
            r[key] = parse_frac(r[key])
        out.append(r)
    return out
