"""Experiment configuration: an INI file read with :mod:`configparser`.

Example::

    [spec]
    base = full          # full | sft | substitution
    alphabet = 2         # base alphabet size (the gap symbol is added on top)
    forbidden = 1 1      # sft only, words separated by ';'
    rules = 0 1; 1 0     # substitution only, image of each symbol in order
    copies = 1           # > 1 wraps the base into disjoint relabeled copies
    tau = 1/1

Every section is optional; missing keys take the defaults of the dataclasses
below. Anything malformed raises :class:`ConfigError`.
"""
from __future__ import annotations

import configparser
import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .gapped import GappedSubshift, GlueRequest, OscillationSchedule, parse_fraction
from .symbolic import (
    DEFAULT_MAX_STATES,
    SFT,
    FullShift,
    Observable,
    Substitution,
    UnionOfCopies,
    Word,
    parse_word,
)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SpecConfig:
    base: str = "full"
    alphabet: int = 1
    forbidden: Tuple[Word, ...] = ()
    rules: Tuple[Word, ...] = ()
    seed: int = 0
    copies: int = 1
    tau: Fraction = Fraction(1)

    def build(self) -> GappedSubshift:
        if self.base == "full":
            base = FullShift(self.alphabet)
        elif self.base == "sft":
            base = SFT(self.alphabet, self.forbidden)
        elif self.base == "substitution":
            base = Substitution(self.alphabet, self.rules, self.seed)
        else:
            raise ConfigError(f"unknown base {self.base!r}")
        if self.copies > 1:
            base = UnionOfCopies(base, self.copies)
        return GappedSubshift(base, self.tau)


@dataclass(frozen=True)
class Ranges:
    n_max: int = 12
    period_max: int = 10
    m: int = 1


@dataclass(frozen=True)
class ObservableConfig:
    """``scale * chi_[word] + offset``, or a full ``table`` of depth-k values."""

    kind: str = "indicator"
    word: Word = (0,)
    scale: Fraction = Fraction(1)
    offset: Fraction = Fraction(0)
    depth: int = 1
    table: Tuple[Tuple[Word, Fraction], ...] = ()

    def build(self, alphabet_size: int) -> Observable:
        if self.kind == "indicator":
            chi = Observable.indicator(self.word, alphabet_size)
            return chi.map(lambda v: self.scale * v + self.offset)
        if self.kind == "constant":
            return Observable.constant(self.offset, alphabet_size)
        if self.kind == "table":
            entries = dict(self.table)
            if any(len(w) != self.depth for w in entries):
                raise ConfigError("table words must have length depth")
            return Observable.from_function(self.depth, alphabet_size, lambda w: entries.get(w, Fraction(0)))
        raise ConfigError(f"unknown observable kind {self.kind!r}")


@dataclass(frozen=True)
class GlueConfig:
    """Segments as ``word @ start``; without any ``@`` the default layout is used."""

    segments: Tuple[Tuple[Word, Optional[int]], ...] = (((1, 1), 0), ((1,), 6))
    m: int = 1
    period: Optional[int] = None
    mode: str = "glue"  # or "sweep"
    sweep_u: Word = (1, 1)
    sweep_v: Word = (0, 1)
    sweep_max_gap: Optional[int] = None

    def request(self, spec: GappedSubshift) -> GlueRequest:
        starts = [a for _, a in self.segments]
        if all(a is None for a in starts):
            return GlueRequest.layout(spec, [u for u, _ in self.segments], self.m, self.period)
        if any(a is None for a in starts):
            raise ConfigError("give a start for every segment or for none")
        return GlueRequest(tuple(self.segments), self.m, self.period)


@dataclass(frozen=True)
class IrregularConfig:
    word: Word = (1,)
    factor: int = 4
    phases: int = 4
    first: str = "word"  # or "zeros"
    depth: int = 1

    def schedule(self) -> OscillationSchedule:
        return OscillationSchedule.geometric(self.word, self.factor, self.phases, 0 if self.first == "word" else 1)


@dataclass(frozen=True)
class Caps:
    max_states: int = DEFAULT_MAX_STATES
    max_words: int = DEFAULT_MAX_STATES
    budget_seconds: float = 900.0


@dataclass(frozen=True)
class ExperimentConfig:
    spec: SpecConfig = field(default_factory=SpecConfig)
    ranges: Ranges = field(default_factory=Ranges)
    observable: ObservableConfig = field(default_factory=ObservableConfig)
    glue: GlueConfig = field(default_factory=GlueConfig)
    irregular: IrregularConfig = field(default_factory=IrregularConfig)
    caps: Caps = field(default_factory=Caps)
    out_dir: str = "out"
    compact: bool = False
    seed: Optional[int] = None
    source: str = ""

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.source.encode()).hexdigest()

    def subshift(self) -> GappedSubshift:
        return self.spec.build()


# ---------------------------------------------------------------------------
# parsing


_SECTIONS = {"spec", "ranges", "observable", "glue", "irregular", "output", "caps", "verify"}


def _words(text: str) -> Tuple[Word, ...]:
    return tuple(parse_word(part) for part in text.split(";") if part.strip())


def _segments(text: str) -> Tuple[Tuple[Word, Optional[int]], ...]:
    out = []
    for part in text.split(";"):
        if not part.strip():
            continue
        word, at, start = part.partition("@")
        out.append((parse_word(word), int(start) if at else None))
    return tuple(out)


def _table(text: str) -> Tuple[Tuple[Word, Fraction], ...]:
    out = []
    for part in text.split(";"):
        if part.strip():
            word, _, value = part.partition(":")
            out.append((parse_word(word), parse_fraction(value.strip())))
    return tuple(out)


def _positive(name: str, v, allow_zero: bool = False):
    if v < 0 or (v == 0 and not allow_zero):
        raise ConfigError(f"{name} must be {'non-negative' if allow_zero else 'positive'}, got {v}")
    return v


def parse_config(text: str) -> ExperimentConfig:
    # ';' separates words, so only '#' may start an inline comment
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",), comment_prefixes=("#",))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc).splitlines()[0]) from None
    unknown = set(cp.sections()) - _SECTIONS
    if unknown:
        raise ConfigError(f"unknown section(s) {sorted(unknown)}")

    def get(section: str, key: str, conv, default):
        if not cp.has_option(section, key):
            return default
        raw = cp.get(section, key).strip()
        try:
            return conv(raw)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"[{section}] {key} = {raw!r}: {exc}") from None

    def opt_int(raw: str) -> Optional[int]:
        return int(raw) if raw else None

    try:
        d = SpecConfig()
        spec = SpecConfig(
            base=get("spec", "base", str.lower, d.base),
            alphabet=_positive("alphabet", get("spec", "alphabet", int, d.alphabet)),
            forbidden=get("spec", "forbidden", _words, d.forbidden),
            rules=get("spec", "rules", _words, d.rules),
            seed=get("spec", "seed", int, d.seed),
            copies=_positive("copies", get("spec", "copies", int, d.copies)),
            tau=get("spec", "tau", parse_fraction, d.tau),
        )
        built = spec.build()  # surfaces bad forbidden words, rules, tau

        r = Ranges()
        ranges = Ranges(
            n_max=_positive("n_max", get("ranges", "n_max", int, r.n_max)),
            period_max=_positive("period_max", get("ranges", "period_max", int, r.period_max)),
            m=get("ranges", "m", int, r.m),
        )
        if ranges.m < -1:
            raise ConfigError("m must be >= -1")

        o = ObservableConfig()
        observable = ObservableConfig(
            kind=get("observable", "kind", str.lower, o.kind),
            word=get("observable", "word", parse_word, o.word),
            scale=get("observable", "scale", parse_fraction, o.scale),
            offset=get("observable", "offset", parse_fraction, o.offset),
            depth=_positive("depth", get("observable", "depth", int, o.depth)),
            table=get("observable", "table", _table, o.table),
        )
        observable.build(built.size)

        g = GlueConfig()
        glue = GlueConfig(
            segments=get("glue", "segments", _segments, g.segments),
            m=get("glue", "m", int, g.m),
            period=get("glue", "period", opt_int, g.period),
            mode=get("glue", "mode", str.lower, g.mode),
            sweep_u=get("glue", "sweep_u", parse_word, g.sweep_u),
            sweep_v=get("glue", "sweep_v", parse_word, g.sweep_v),
            sweep_max_gap=get("glue", "sweep_max_gap", opt_int, g.sweep_max_gap),
        )
        if glue.mode not in ("glue", "sweep"):
            raise ConfigError(f"glue mode must be 'glue' or 'sweep', got {glue.mode!r}")
        if not glue.segments:
            raise ConfigError("glue needs at least one segment")

        i = IrregularConfig()
        irregular = IrregularConfig(
            word=get("irregular", "word", parse_word, i.word),
            factor=_positive("factor", get("irregular", "factor", int, i.factor)),
            phases=_positive("phases", get("irregular", "phases", int, i.phases)),
            first=get("irregular", "first", str.lower, i.first),
            depth=_positive("depth", get("irregular", "depth", int, i.depth)),
        )
        if irregular.first not in ("word", "zeros"):
            raise ConfigError("irregular first must be 'word' or 'zeros'")
        if irregular.factor < 2:
            raise ConfigError("irregular factor must be >= 2")

        c = Caps()
        caps = Caps(
            max_states=_positive("max_states", get("caps", "max_states", int, c.max_states)),
            max_words=_positive("max_words", get("caps", "max_words", int, c.max_words)),
            budget_seconds=_positive("budget_seconds", get("caps", "budget_seconds", float, c.budget_seconds)),
        )
        compact = cp.getboolean("output", "compact", fallback=False)
    except ConfigError:
        raise
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ConfigError(str(exc)) from None

    return ExperimentConfig(
        spec=spec, ranges=ranges, observable=observable, glue=glue, irregular=irregular, caps=caps,
        out_dir=get("output", "dir", str, "out"), compact=compact,
        seed=get("verify", "seed", int, None), source=text,
    )


def load_config(path: Optional[str]) -> ExperimentConfig:
    if path is None:
        return parse_config("")
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None


def describe(cfg: ExperimentConfig) -> Dict[str, object]:
    """Small summary for the run record."""
    s = cfg.spec
    return {"base": s.base, "alphabet": s.alphabet, "copies": s.copies, "tau": f"{s.tau.numerator}/{s.tau.denominator}"}
