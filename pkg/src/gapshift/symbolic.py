"""Words, base subshifts and their languages, the shift metric, cylinder observables.

Words are plain tuples of non-negative ints. A base subshift is one of
:class:`FullShift`, :class:`SFT`, :class:`Substitution` or :class:`UnionOfCopies`;
all are frozen dataclasses so they can key caches.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, Iterator, Mapping, Optional, Tuple, Union

Word = Tuple[int, ...]

DEFAULT_MAX_STATES = 2_000_000


class ResourceLimitExceeded(RuntimeError):
    """A configured cap on states, words or search nodes was hit."""


@dataclass(frozen=True)
class Alphabet:
    size: int
    labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("alphabet size must be >= 1")
        if self.labels is not None and len(self.labels) != self.size:
            raise ValueError("need one label per symbol")

    @property
    def symbols(self) -> range:
        return range(self.size)

    def check(self, w: Iterable[int]) -> Word:
        w = tuple(w)
        for a in w:
            if not 0 <= a < self.size:
                raise ValueError(f"symbol {a} outside alphabet 0..{self.size - 1}")
        return w


@dataclass(frozen=True, order=True)
class CyclicWord:
    """One period of the periodic point ``w^inf``."""

    symbols: Word

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if not self.symbols:
            raise ValueError("a cyclic word needs at least one symbol")

    def __len__(self):
        return len(self.symbols)

    def rotations(self) -> Iterator[Word]:
        w = self.symbols
        for i in range(len(w)):
            yield w[i:] + w[:i]

    @property
    def primitive_period(self) -> int:
        """Length of the shift orbit of ``w^inf``."""
        w, n = self.symbols, len(self.symbols)
        for d in range(1, n + 1):
            if n % d == 0 and w == w[d:] + w[:d]:
                return d
        return n  # unreachable

    def canonical(self) -> "CyclicWord":
        """Representative of the orbit: the lexicographically greatest rotation of the primitive root."""
        root = self.symbols[: self.primitive_period]
        return CyclicWord(max(CyclicWord(root).rotations()))

    def window(self, i: int, k: int) -> Word:
        """Depth-``k`` window of ``w^inf`` at position ``i`` (wraps around)."""
        w, n = self.symbols, len(self.symbols)
        return tuple(w[(i + j) % n] for j in range(k))

    def unrolled(self, length: int) -> Word:
        return self.window(0, length)


# ---------------------------------------------------------------------------
# word text format


def parse_word(text: str, compact: bool = False) -> Word:
    """Parse ``"1 0 2"`` (or ``"102"`` with ``compact``, base-36 digits)."""
    text = text.strip()
    if not text:
        return ()
    if compact:
        return tuple(int(c, 36) for c in text if not c.isspace())
    return tuple(int(tok) for tok in text.split())


def format_word(w: Iterable[int], compact: bool = False) -> str:
    w = tuple(w)
    if compact:
        if any(a >= 36 for a in w):
            raise ValueError("compact form needs symbols < 36")
        return "".join("0123456789abcdefghijklmnopqrstuvwxyz"[a] for a in w)
    return " ".join(str(a) for a in w)


# ---------------------------------------------------------------------------
# base subshifts


@dataclass(frozen=True)
class FullShift:
    size: int

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("alphabet size must be >= 1")

    @property
    def alphabet_size(self) -> int:
        return self.size


@dataclass(frozen=True)
class SFT:
    size: int
    forbidden: Tuple[Word, ...]

    def __post_init__(self):
        object.__setattr__(self, "forbidden", tuple(sorted({tuple(f) for f in self.forbidden})))
        if self.size < 1:
            raise ValueError("alphabet size must be >= 1")
        for f in self.forbidden:
            if not f:
                raise ValueError("forbidden words must be non-empty")
            Alphabet(self.size).check(f)

    @property
    def alphabet_size(self) -> int:
        return self.size


@dataclass(frozen=True)
class Substitution:
    size: int
    rules: Tuple[Word, ...]  # rules[a] is the image of symbol a
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(tuple(r) for r in self.rules))
        if len(self.rules) != self.size:
            raise ValueError("need exactly one rule per symbol")
        for r in self.rules:
            if not r:
                raise ValueError("substitution rules must be non-erasing")
            Alphabet(self.size).check(r)
        if not 0 <= self.seed < self.size:
            raise ValueError("seed symbol outside alphabet")
        if all(len(r) == 1 for r in self.rules):
            raise ValueError("substitution never grows; its orbit closure is finite")

    @property
    def alphabet_size(self) -> int:
        return self.size


@dataclass(frozen=True)
class UnionOfCopies:
    """``copies`` disjoint copies of ``inner``; copy k uses symbols offset by k*inner size."""

    inner: "BaseSpec"
    copies: int

    def __post_init__(self):
        if self.copies < 1:
            raise ValueError("need at least one copy")

    @property
    def alphabet_size(self) -> int:
        return self.copies * self.inner.alphabet_size


BaseSpec = Union[FullShift, SFT, Substitution, UnionOfCopies]

THUE_MORSE = Substitution(2, ((0, 1), (1, 0)), 0)
GOLDEN_MEAN = SFT(2, ((1, 1),))


# ---------------------------------------------------------------------------
# language trackers
#
# A tracker reads a word symbol by symbol; ``step`` returns the next state or
# None once the word read so far has left the language. States are hashable.


class _Tracker:
    size: int

    def start(self):
        raise NotImplementedError

    def step(self, state, a: int):
        raise NotImplementedError


class _FullTracker(_Tracker):
    def __init__(self, size: int):
        self.size = size

    def start(self):
        return ()

    def step(self, state, a):
        return ()


class _SFTTracker(_Tracker):
    """Higher-block graph of V-blocks, trimmed to vertices on bi-infinite paths."""

    def __init__(self, spec: SFT, max_states: int):
        self.size = spec.size
        k = max(len(f) for f in spec.forbidden) if spec.forbidden else 1
        self.v = v = max(k - 1, 1)
        if spec.size**v > max_states:
            raise ResourceLimitExceeded(f"SFT block graph needs {spec.size ** v} vertices")
        forb = set(spec.forbidden)

        def clean(block: Word) -> bool:
            return not any(block[i:j] in forb for i in range(len(block)) for j in range(i + 1, len(block) + 1))

        verts = {b for b in itertools.product(range(self.size), repeat=v) if clean(b)}
        out: Dict[Word, set] = {b: set() for b in verts}
        inc: Dict[Word, set] = {b: set() for b in verts}
        for b in verts:
            for a in range(self.size):
                ext = b + (a,)
                if ext[1:] in verts and not any(ext[i:] in forb for i in range(len(ext))):
                    out[b].add(ext[1:])
                    inc[ext[1:]].add(b)
        # trim stranded vertices until stable
        alive = set(verts)
        changed = True
        while changed:
            changed = False
            for b in list(alive):
                if not (out[b] & alive) or not (inc[b] & alive):
                    alive.discard(b)
                    changed = True
        self.vertices = frozenset(alive)
        self.short = frozenset(b[i:j] for b in alive for i in range(v + 1) for j in range(i, v + 1))
        self.edges = {b: frozenset(a for a in range(self.size) if (b + (a,))[1:] in out[b] and (b + (a,))[1:] in alive)
                      for b in alive}

    def start(self):
        return ()

    def step(self, state, a):
        if len(state) < self.v:
            nxt = state + (a,)
            return nxt if nxt in self.short else None
        if a in self.edges[state]:
            return state[1:] + (a,)
        return None


class _FactorTracker(_Tracker):
    """Tracks the whole block; valid while the block is a known factor."""

    def __init__(self, size: int, factors: frozenset):
        self.size = size
        self.factors = factors

    def start(self):
        return ()

    def step(self, state, a):
        nxt = state + (a,)
        return nxt if nxt in self.factors else None


class _UnionTracker(_Tracker):
    def __init__(self, inner: _Tracker, copies: int):
        self.inner = inner
        self.copies = copies
        self.size = inner.size * copies

    def start(self):
        return None

    def step(self, state, a):
        k, local = divmod(a, self.inner.size)
        if state is None:
            nxt = self.inner.step(self.inner.start(), local)
        else:
            if state[0] != k:
                return None
            nxt = self.inner.step(state[1], local)
        return None if nxt is None else (k, nxt)


def substitution_factors(spec: Substitution, n: int, max_words: int = DEFAULT_MAX_STATES) -> frozenset:
    """All factors of length <= n of the substitution's iterates of the seed.

    Iterates until the factor set has been stable for two rounds and the
    iterate is long enough to contain every length-n factor twice over.
    """
    word: Word = (spec.seed,)
    seen: set = set()
    stable = 0
    while stable < 2:
        nxt = tuple(b for a in word for b in spec.rules[a])
        fresh = {nxt[i:i + k] for k in range(n + 1) for i in range(len(nxt) - k + 1)}
        if len(nxt) > max_words:
            raise ResourceLimitExceeded("substitution iterate exceeded word cap")
        if fresh <= seen and len(nxt) >= 2 * n:
            stable += 1
        else:
            stable = 0
        seen |= fresh
        word = nxt
    return frozenset(seen)


def _has_substitution(spec: BaseSpec) -> bool:
    if isinstance(spec, UnionOfCopies):
        return _has_substitution(spec.inner)
    return isinstance(spec, Substitution)


def tracker(spec: BaseSpec, max_len: int = 0, max_states: int = DEFAULT_MAX_STATES) -> _Tracker:
    """Language tracker for ``spec``; ``max_len`` bounds word length for substitution bases."""
    return _tracker(spec, max_len if _has_substitution(spec) else 0, max_states)


@lru_cache(maxsize=256)
def _tracker(spec: BaseSpec, max_len: int, max_states: int) -> _Tracker:
    if isinstance(spec, FullShift):
        return _FullTracker(spec.size)
    if isinstance(spec, SFT):
        return _SFTTracker(spec, max_states)
    if isinstance(spec, Substitution):
        return _FactorTracker(spec.size, substitution_factors(spec, max(max_len, 1), max_states))
    if isinstance(spec, UnionOfCopies):
        return _UnionTracker(tracker(spec.inner, max_len, max_states), spec.copies)
    raise TypeError(f"unknown base spec {spec!r}")


def base_contains(spec: BaseSpec, w: Iterable[int]) -> bool:
    """Is ``w`` a factor of some point of the base subshift?"""
    w = Alphabet(spec.alphabet_size).check(w)
    if isinstance(spec, FullShift) or not w:
        return True
    t = tracker(spec, len(w))
    state = t.start()
    for a in w:
        state = t.step(state, a)
        if state is None:
            return False
    return True


def base_language_count(spec: BaseSpec, n: int, max_states: int = DEFAULT_MAX_STATES) -> int:
    """Exact number of length-``n`` words in the base language."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return 1
    if isinstance(spec, FullShift):
        return spec.size**n
    if isinstance(spec, UnionOfCopies):
        return spec.copies * base_language_count(spec.inner, n, max_states)
    t = tracker(spec, n, max_states)
    layer = {t.start(): 1}
    for _ in range(n):
        nxt: Dict = {}
        for state, c in layer.items():
            for a in range(t.size):
                s = t.step(state, a)
                if s is not None:
                    nxt[s] = nxt.get(s, 0) + c
        if len(nxt) > max_states:
            raise ResourceLimitExceeded(f"{len(nxt)} counting states")
        layer = nxt
    return sum(layer.values())


# ---------------------------------------------------------------------------
# metric


def word_distance_interval(u: Iterable[int], v: Iterable[int]) -> Tuple[Fraction, Fraction]:
    """Bounds on ``d(x, y) = sum 2^-k [x_k != y_k]`` over all x, y extending u, v."""
    u, v = tuple(u), tuple(v)
    if len(u) != len(v) or not u:
        raise ValueError("need equal, non-zero lengths")
    lo = sum((Fraction(1, 2**k) for k, (a, b) in enumerate(zip(u, v)) if a != b), Fraction(0))
    return lo, lo + Fraction(1, 2 ** (len(u) - 1))


def truncated_distance(x: Iterable[int], y: Iterable[int]) -> Fraction:
    """Exact metric sum over the common finite prefix."""
    return sum((Fraction(1, 2**k) for k, (a, b) in enumerate(zip(x, y)) if a != b), Fraction(0))


DIAMETER = 2  # sum_k 2^-k with the discrete metric on symbols


# ---------------------------------------------------------------------------
# observables


@dataclass(frozen=True)
class Observable:
    """Locally constant function given by its values on depth-``k`` cylinders."""

    depth: int
    alphabet_size: int
    table: Mapping[Word, Fraction] = field(hash=False, compare=True)

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        table = {tuple(k): Fraction(v) for k, v in self.table.items()}
        expected = self.alphabet_size**self.depth
        if len(table) != expected or any(len(k) != self.depth for k in table):
            raise ValueError("table must be total on all depth-k words")
        Alphabet(self.alphabet_size).check(itertools.chain.from_iterable(table))
        object.__setattr__(self, "table", table)

    @classmethod
    def from_function(cls, depth: int, alphabet_size: int, fn: Callable[[Word], object]) -> "Observable":
        words = itertools.product(range(alphabet_size), repeat=depth)
        return cls(depth, alphabet_size, {w: Fraction(fn(w)) for w in words})

    @classmethod
    def indicator(cls, w: Iterable[int], alphabet_size: int) -> "Observable":
        """chi_[w]: 1 on points starting with w."""
        w = Alphabet(alphabet_size).check(w)
        if not w:
            raise ValueError("indicator needs a non-empty word")
        return cls.from_function(len(w), alphabet_size, lambda u: int(u == w))

    @classmethod
    def constant(cls, c, alphabet_size: int) -> "Observable":
        return cls.from_function(1, alphabet_size, lambda u: c)

    def map(self, fn: Callable[[Fraction], object]) -> "Observable":
        return Observable(self.depth, self.alphabet_size, {k: Fraction(fn(v)) for k, v in self.table.items()})

    def __add__(self, c) -> "Observable":
        return self.map(lambda v: v + Fraction(c))

    def __neg__(self) -> "Observable":
        return self.map(lambda v: -v)

    def __call__(self, window: Word) -> Fraction:
        return self.table[tuple(window)]


def evaluate_observable(phi: Observable, w: Iterable[int], i: int) -> Fraction:
    w = tuple(w)
    if i < 0 or i + phi.depth > len(w):
        raise ValueError("observable window exceeds word")
    return phi.table[w[i:i + phi.depth]]
