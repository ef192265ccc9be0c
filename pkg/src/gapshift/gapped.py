"""The tau-gapped subshift X(F) over {0} + base alphabet.

A word is admissible when every maximal nonzero block lies in the base
language and every zero run sitting between two nonzero symbols is at least
``ceil(tau * s)`` long, where ``s`` is the length of the nonzero run right
before it. Base symbol ``a`` is written ``a + 1`` in the ambient alphabet.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from numba import njit

from .symbolic import (
    DEFAULT_MAX_STATES,
    Alphabet,
    BaseSpec,
    CyclicWord,
    FullShift,
    ResourceLimitExceeded,
    SFT,
    Substitution,
    UnionOfCopies,
    Word,
    base_contains,
    tracker,
    word_distance_interval,
)


_SMALL = 1 << 28  # keeps p*s and q*t inside int64 in the compiled scan


class InfeasibleRequest(ValueError):
    """A gluing request violates the gap or language preconditions."""


class InadmissibleSchedule(ValueError):
    pass


def parse_fraction(text) -> Fraction:
    """Exact ``"p/q"`` (or integer) parser; floats are refused."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        raise TypeError("tau must be exact, got a float")
    text = str(text).strip()
    num, _, den = text.partition("/")
    try:
        p, q = int(num), int(den) if den else 1
    except ValueError:
        raise ValueError(f"not an exact fraction: {text!r}") from None
    if q == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(p, q)


@dataclass(frozen=True)
class GappedSubshift:
    base: BaseSpec
    tau: Fraction

    def __post_init__(self):
        tau = parse_fraction(self.tau)
        if tau < 0:
            raise ValueError("tau must be >= 0")
        object.__setattr__(self, "tau", tau)

    @classmethod
    def full(cls, size: int, tau) -> "GappedSubshift":
        return cls(FullShift(size), parse_fraction(tau))

    @property
    def base_size(self) -> int:
        return self.base.alphabet_size

    @property
    def size(self) -> int:
        """Ambient alphabet size, gap symbol included."""
        return self.base.alphabet_size + 1

    @cached_property
    def _consts(self) -> Tuple[int, int, int, bool]:
        return self.size, self.tau.numerator, self.tau.denominator, isinstance(self.base, FullShift)

    @property
    def zero_density_floor(self) -> Fraction:
        return self.tau / (1 + self.tau)

    def to_base(self, block: Iterable[int]) -> Word:
        return tuple(a - 1 for a in block)

    def from_base(self, block: Iterable[int]) -> Word:
        return tuple(a + 1 for a in block)


def required_zero_run(spec: GappedSubshift, s: int) -> int:
    """Shortest zero run allowed after a nonzero run of length ``s``: ceil(tau*s)."""
    if s < 1:
        raise ValueError("run length must be >= 1")
    p, q = spec.tau.numerator, spec.tau.denominator
    return (p * s + q - 1) // q


@dataclass(frozen=True)
class GapFunction:
    """M(n, 2^-m); ``m = -1`` stands for any eps >= 2."""

    tau: Fraction

    def __call__(self, n: int, m: int) -> int:
        if n < 1:
            raise ValueError("n must be >= 1")
        if m < -1:
            raise ValueError("precision m must be >= -1")
        if m == -1:
            return 1
        p, q = self.tau.numerator, self.tau.denominator
        return (p * (n + m) + q - 1) // q + m + 1


def gap_function(spec: GappedSubshift, n: int, m: int) -> int:
    return GapFunction(spec.tau)(n, m)


# ---------------------------------------------------------------------------
# membership


def _base_ok(spec: GappedSubshift, block: Word) -> bool:
    if isinstance(spec.base, FullShift):
        return True
    return base_contains(spec.base, spec.to_base(block))


@njit(cache=True)
def _gap_scan(b, size, p, q):
    """1 if no zero run between nonzero runs is too short, 0 if one is, -1 on a bad symbol."""
    prev_s = 0  # last finished nonzero run
    s = 0  # current nonzero run
    t = 0  # current zero run
    for x in b:
        if x >= size:
            return -1
        if x:
            if t:
                if prev_s and p * prev_s > q * t:
                    return 0
                t = 0
            s += 1
        else:
            if s:
                prev_s = s
                s = 0
            t += 1
    return 1


def contains_word(spec: GappedSubshift, w: Iterable[int]) -> bool:
    """Is ``w`` in the language of X(F)?"""
    size, p, q, full = spec._consts
    try:
        b = bytes(w)
    except (ValueError, TypeError):
        return _contains_word_slow(spec, tuple(w))
    if full and p < _SMALL and q < _SMALL:
        r = _gap_scan(b, size, p, q)
        if r < 0:
            raise ValueError(f"symbol {max(b)} outside alphabet 0..{size - 1}")
        return r == 1
    if b and max(b) >= size:
        raise ValueError(f"symbol {max(b)} outside alphabet 0..{size - 1}")
    # pieces are the nonzero blocks; k - prev_k is the zero run between two blocks
    prev_s = prev_k = 0
    for k, piece in enumerate(b.split(b"\0")):
        if piece:
            if prev_s and p * prev_s > q * (k - prev_k):
                return False
            if not full and not base_contains(spec.base, tuple(a - 1 for a in piece)):
                return False
            prev_s, prev_k = len(piece), k
    return True


def _contains_word_slow(spec: GappedSubshift, w: Word) -> bool:
    size, p, q, full = spec._consts
    n = len(w)
    prev_s = 0
    i = 0
    while i < n:
        j = i
        if w[i]:
            while j < n and w[j]:
                if not 0 < w[j] < size:
                    raise ValueError(f"symbol {w[j]} outside alphabet 0..{size - 1}")
                j += 1
            if not full and not _base_ok(spec, w[i:j]):
                return False
            prev_s = j - i
        else:
            while j < n and not w[j]:
                j += 1
            # forbidden iff tau*s > t, for an interior run only
            if prev_s and j < n and p * prev_s > q * (j - i):
                return False
        i = j
    return True


def _base_periodic(base: BaseSpec, w: Word) -> bool:
    """Is the periodic point w^inf in the base subshift?"""
    if isinstance(base, FullShift):
        return True
    if isinstance(base, UnionOfCopies):
        k = base.inner.alphabet_size
        if len({a // k for a in w}) != 1:
            return False
        return _base_periodic(base.inner, tuple(a % k for a in w))
    if isinstance(base, SFT):
        longest = max((len(f) for f in base.forbidden), default=1)
        reps = -(-(longest + 1) // len(w)) + 1
        return base_contains(base, w * reps)
    raise NotImplementedError("periodic points are not supported for substitution bases")


def contains_cyclic(spec: GappedSubshift, w) -> bool:
    """Is the periodic point ``w^inf`` in X(F)?"""
    w = tuple(w.symbols if isinstance(w, CyclicWord) else w)
    if not w:
        raise ValueError("empty cycle")
    Alphabet(spec.size).check(w)
    if 0 not in w:
        return _base_periodic(spec.base, spec.to_base(w))
    if not any(w):
        return True
    # rotate so the word starts with a nonzero block preceded (cyclically) by a zero
    n = len(w)
    start = next(i for i in range(n) if w[i] and not w[i - 1])
    u = w[start:] + w[:start]
    return contains_word(spec, u + u)


# ---------------------------------------------------------------------------
# symbol-level automaton (shared by counting and enumeration)


FREE, RUN, GAP = 0, 1, 2


class CounterState(NamedTuple):
    """Reader state: ``mode`` FREE (zeros, no pending gap), RUN or GAP.

    In RUN, ``s`` is the nonzero run length and ``base`` the base-language
    state; in GAP, ``t`` zeros follow a run of length ``s`` and ``t < ceil(tau*s)``.
    """

    mode: int
    s: int = 0
    t: int = 0
    base: object = None


class Automaton:
    """Deterministic reader for the language of X(F); every live state accepts."""

    def __init__(self, spec: GappedSubshift, max_len: int = 0, max_states: int = DEFAULT_MAX_STATES):
        self.spec = spec
        self.size = spec.size
        self.base = tracker(spec.base, max_len, max_states)
        self._req: Dict[int, int] = {}
        self._delta: Dict[Tuple[CounterState, int], Optional[CounterState]] = {}

    def req(self, s: int) -> int:
        r = self._req.get(s)
        if r is None:
            r = self._req[s] = required_zero_run(self.spec, s)
        return r

    def start(self) -> CounterState:
        return CounterState(FREE)

    def step(self, st: CounterState, a: int) -> Optional[CounterState]:
        key = (st, a)
        try:
            return self._delta[key]
        except KeyError:
            nxt = self._delta[key] = self._step(st, a)
            return nxt

    def _step(self, st: CounterState, a: int) -> Optional[CounterState]:
        if a:
            if st.mode == GAP:
                return None
            if st.mode == RUN:
                b = self.base.step(st.base, a - 1)
                return None if b is None else CounterState(RUN, st.s + 1, 0, b)
            b = self.base.step(self.base.start(), a - 1)
            return None if b is None else CounterState(RUN, 1, 0, b)
        if st.mode == FREE:
            return st
        t = 1 if st.mode == RUN else st.t + 1
        if t >= self.req(st.s):
            return CounterState(FREE)
        return CounterState(GAP, st.s, t)

    def accepts(self, w: Iterable[int]) -> bool:
        st = self.start()
        for a in w:
            st = self.step(st, a)
            if st is None:
                return False
        return True


def enumerate_language(spec: GappedSubshift, n: int, max_words: int = DEFAULT_MAX_STATES,
                       prefix: Word = ()) -> List[Word]:
    """All admissible words of length ``n`` (optionally starting with ``prefix``), in lexicographic order."""
    auto = Automaton(spec, n)
    st = auto.start()
    for a in prefix:
        st = auto.step(st, a)
        if st is None:
            return []
    out: List[Word] = []

    def walk(word: list, state):
        if len(word) == n:
            out.append(tuple(word))
            if len(out) > max_words:
                raise ResourceLimitExceeded(f"more than {max_words} words of length {n}")
            return
        for a in range(auto.size):
            nxt = auto.step(state, a)
            if nxt is not None:
                word.append(a)
                walk(word, nxt)
                word.pop()

    walk(list(prefix), st)
    return out


# ---------------------------------------------------------------------------
# gluing


@dataclass(frozen=True)
class GlueRequest:
    """Segments ``(u_i, a_i)``; ``period`` set means a periodic witness is wanted."""

    segments: Tuple[Tuple[Word, int], ...]
    m: int
    period: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple((tuple(u), int(a)) for u, a in self.segments))

    @classmethod
    def layout(cls, spec: GappedSubshift, words: Sequence[Iterable[int]], m: int,
               period: Optional[int] = None, gap: Optional[Callable[[int, int], int]] = None) -> "GlueRequest":
        """Place words at minimal spacing: a_1 = 0, a_{i+1} = b_i + M(|u_i|, 2^-m)."""
        gap = gap or GapFunction(spec.tau)
        segs, a = [], 0
        for u in words:
            u = tuple(u)
            segs.append((u, a))
            a = a + len(u) - 1 + gap(len(u), m)
        return cls(tuple(segs), m, period)

    @property
    def end(self) -> int:
        u, a = self.segments[-1]
        return a + len(u) - 1

    def min_period(self, spec: GappedSubshift, gap: Optional[Callable[[int, int], int]] = None) -> int:
        gap = gap or GapFunction(spec.tau)
        u_last = self.segments[-1][0]
        return self.end - self.segments[0][1] + gap(len(u_last), self.m)


@dataclass
class GlueResult:
    word: Word
    cyclic: Optional[CyclicWord]
    admissible: bool
    report: List[dict] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.admissible and all(r["ok"] for r in self.report)


def _check_request(spec: GappedSubshift, req: GlueRequest, gap) -> None:
    if not req.segments:
        raise InfeasibleRequest("no segments")
    if req.m < -1:
        raise InfeasibleRequest("precision m must be >= -1")
    prev_end = None
    prev_len = None
    for i, (u, a) in enumerate(req.segments):
        if not u:
            raise InfeasibleRequest(f"segment {i} is empty")
        if a < 0:
            raise InfeasibleRequest(f"segment {i} starts before 0")
        try:
            ok = contains_word(spec, u)
        except ValueError as exc:
            raise InfeasibleRequest(f"segment {i}: {exc}") from None
        if not ok:
            raise InfeasibleRequest(f"segment {i} is not in the language")
        if prev_end is not None:
            need = gap(prev_len, req.m)
            if a - prev_end < need:
                raise InfeasibleRequest(f"gap before segment {i} is {a - prev_end}, need {need}")
        prev_end, prev_len = a + len(u) - 1, len(u)
    if req.period is not None:
        need = req.min_period(spec, gap)
        if req.period < need:
            raise InfeasibleRequest(f"period {req.period} too small, need >= {need}")


def glue(spec: GappedSubshift, req: GlueRequest,
         gap: Optional[Callable[[int, int], int]] = None) -> GlueResult:
    """Build a point shadowing every segment within 2^-m.

    Each segment is written as ``u_i 0^m`` at its start and everything else is
    zero. Shadowing is certified per coordinate through
    :func:`word_distance_interval` against ``x_i = u_i 0^inf``.
    """
    gap = gap or GapFunction(spec.tau)
    _check_request(spec, req, gap)
    m = req.m
    tail = max(m, 0)
    if req.period is None:
        z = [0] * (req.end + 1 + tail)
    else:
        z = [0] * req.period
    pos = (lambda j: j) if req.period is None else (lambda j: j % req.period)
    for u, a in req.segments:
        for k, sym in enumerate(u):
            z[pos(a + k)] = sym
    word = tuple(z)
    if req.period is None:
        admissible = contains_word(spec, word)
    else:
        admissible = contains_cyclic(spec, word)
    if not admissible and m < 0:
        # any point is within 2 of any other; fall back to the fixed point 0^inf
        word = (0,) * len(word)
        admissible = True
    cyclic = CyclicWord(word) if req.period is not None else None

    def z_window(j: int) -> Word:
        if cyclic is not None:
            return cyclic.window(j, tail + 1)
        ext = word + (0,) * (tail + 1)
        return ext[j:j + tail + 1]

    bound = Fraction(2) ** (-m)
    report = []
    for i, (u, a) in enumerate(req.segments):
        x = u + (0,) * (tail + 1)
        for j in range(a, a + len(u)):
            lo, hi = word_distance_interval(x[j - a:j - a + tail + 1], z_window(j))
            report.append({"segment": i, "position": j, "bound": bound, "lo": lo, "hi": hi, "ok": hi <= bound})
    return GlueResult(word, cyclic, admissible, report)


def min_gap_witness_search(spec: GappedSubshift, u: Iterable[int], v: Iterable[int], m: int, gap: int,
                           max_candidates: int = 1 << 22) -> Optional[Word]:
    """Exhaustive search for a word shadowing ``u`` from time 0 and ``v`` from time ``|u| - 1 + gap``.

    The shadowed points continue ``u`` and ``v`` with their last symbol
    (``1^n -> 1^inf``, ``0 1 -> 0 1^inf``). Shadowing within ``2^-m`` is taken
    to mean agreement on ``m + 1`` coordinates at every shadowed time. Returns
    the lexicographically least admissible witness, or None.
    """
    u, v = tuple(u), tuple(v)
    if not u or not v:
        raise ValueError("u and v must be non-empty")
    if gap < 1:
        raise ValueError("gap must be >= 1")
    a = len(u) - 1 + gap
    length = a + len(v) + max(m, 0)
    if m < 0:
        return (0,) * length
    forced: Dict[int, int] = {}
    for offset, w in ((0, u), (a, v)):
        for k in range(len(w) + m):
            sym = w[k] if k < len(w) else w[-1]
            if forced.setdefault(offset + k, sym) != sym:
                return None
    free = [j for j in range(length) if j not in forced]
    if spec.size ** len(free) > max_candidates:
        raise ResourceLimitExceeded(f"{spec.size}^{len(free)} candidates exceeds cap")
    z = [forced.get(j, 0) for j in range(length)]
    for fill in itertools.product(range(spec.size), repeat=len(free)):
        for j, sym in zip(free, fill):
            z[j] = sym
        if contains_word(spec, z):
            return tuple(z)
    return None


# ---------------------------------------------------------------------------
# oscillating points


@dataclass(frozen=True)
class Phase:
    """``length`` symbols of repeated ``word`` blocks (with minimal gaps), or zeros when ``word`` is None."""

    word: Optional[Word]
    length: int

    def __post_init__(self):
        if self.word is not None:
            object.__setattr__(self, "word", tuple(self.word))
        if self.length < 1:
            raise ValueError("phase length must be >= 1")


@dataclass(frozen=True)
class OscillationSchedule:
    phases: Tuple[Phase, ...]

    def __post_init__(self):
        object.__setattr__(self, "phases", tuple(self.phases))
        for p, q in zip(self.phases, self.phases[1:]):
            if (p.word is None) == (q.word is None):
                raise InadmissibleSchedule("phases must alternate between word blocks and zeros")

    @classmethod
    def geometric(cls, word: Iterable[int] = (1,), factor: int = 4, count: int = 4,
                  first: int = 0) -> "OscillationSchedule":
        """Phase j has length ``factor**(j+1)``; even phases repeat ``word`` (or start with zeros if ``first``)."""
        word = tuple(word)
        return cls(tuple(Phase(word if (j + first) % 2 == 0 else None, factor ** (j + 1)) for j in range(count)))

    @property
    def checkpoints(self) -> List[int]:
        return list(itertools.accumulate(p.length for p in self.phases))

    @property
    def total(self) -> int:
        return sum(p.length for p in self.phases)


def repeat_block(spec: GappedSubshift, w: Word) -> Word:
    """``w`` padded with the fewest zeros that let it repeat admissibly."""
    if not any(w):
        return w
    last_nz = max(i for i, a in enumerate(w) if a)
    s = 0
    while last_nz - s >= 0 and w[last_nz - s]:
        s += 1
    trailing = len(w) - 1 - last_nz
    lead = next(i for i, a in enumerate(w) if a)
    pad = max(required_zero_run(spec, s) - trailing - lead, 0)
    if trailing + lead + pad == 0:
        pad = 1
    return w + (0,) * pad


def build_oscillating_point(spec: GappedSubshift, sched: OscillationSchedule, N: int) -> Word:
    """Admissible prefix of length ``N`` following the schedule phase by phase."""
    if N > sched.total:
        raise InadmissibleSchedule(f"schedule only covers {sched.total} symbols")
    out: List[int] = []
    for ph in sched.phases:
        if ph.word is None:
            out.extend([0] * ph.length)
            continue
        if not contains_word(spec, ph.word):
            raise InadmissibleSchedule(f"block {ph.word} is not in the language")
        block = repeat_block(spec, ph.word)
        reps = -(-ph.length // len(block))
        out.extend((block * reps)[:ph.length])
    word = tuple(out[:N])
    if not contains_word(spec, word):
        raise InadmissibleSchedule("schedule produces an inadmissible word")
    return word
