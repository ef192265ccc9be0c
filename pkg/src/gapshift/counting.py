"""Language counts, entropy profiles, word-class counts and periodic-point censuses."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Tuple

from .gapped import Automaton, GappedSubshift, contains_cyclic, enumerate_language
from .symbolic import (
    DEFAULT_MAX_STATES,
    CyclicWord,
    Observable,
    ResourceLimitExceeded,
    Substitution,
    UnionOfCopies,
    Word,
)


def _step_layer(auto: Automaton, layer: Dict, max_states: int) -> Dict:
    nxt: Dict = {}
    for state, c in layer.items():
        for a in range(auto.size):
            s = auto.step(state, a)
            if s is not None:
                nxt[s] = nxt.get(s, 0) + c
    if len(nxt) > max_states:
        raise ResourceLimitExceeded(f"{len(nxt)} counting states exceeds cap {max_states}")
    return nxt


@lru_cache(maxsize=128)
def language_counts(spec: GappedSubshift, n_max: int, max_states: int = DEFAULT_MAX_STATES) -> Tuple[int, ...]:
    """``(|L_0|, ..., |L_n_max|)`` from one forward pass of the counting DP."""
    if n_max < 0:
        raise ValueError("n must be >= 0")
    auto = Automaton(spec, n_max, max_states)
    layer = {auto.start(): 1}
    counts = [1]
    for _ in range(n_max):
        layer = _step_layer(auto, layer, max_states)
        counts.append(sum(layer.values()))
    return tuple(counts)


def language_count(spec: GappedSubshift, n: int, max_states: int = DEFAULT_MAX_STATES) -> int:
    return language_counts(spec, n, max_states)[n]


@dataclass
class EntropyProfile:
    rows: List[Tuple[int, int, float]]
    ref_log_a: float
    ref_thm_b5: float

    def h(self, n: int) -> float:
        return self.rows[n - 1][2]


def entropy_profile(spec: GappedSubshift, n_max: int, max_states: int = DEFAULT_MAX_STATES) -> EntropyProfile:
    """Rows ``(n, |L_n|, ln|L_n| / n)`` with the ``ln A`` and ``ln 2 + ln A/(1+tau)`` reference levels."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    counts = language_counts(spec, n_max, max_states)
    rows = [(n, counts[n], math.log(counts[n]) / n) for n in range(1, n_max + 1)]
    log_a = math.log(spec.base_size)
    return EntropyProfile(rows, log_a, math.log(2) + log_a / (1 + float(spec.tau)))


def _kmp_table(w: Word, size: int) -> List[List[int]]:
    """Transition table of the prefix automaton for occurrences of ``w``."""
    k = len(w)
    fail = [0] * (k + 1)
    delta = [[0] * size for _ in range(k + 1)]
    for state in range(k + 1):
        for a in range(size):
            if state < k and w[state] == a:
                delta[state][a] = state + 1
            elif state == 0:
                delta[state][a] = 0
            else:
                delta[state][a] = delta[fail[state]][a]
        if 0 < state < k:
            fail[state + 1] = delta[fail[state]][w[state]]
    return delta


def count_word_class(spec: GappedSubshift, n: int, w: Iterable[int], lo: int, hi: int,
                     max_states: int = DEFAULT_MAX_STATES) -> int:
    """Number of ``u`` in ``L_n`` with between ``lo`` and ``hi`` occurrences of ``w`` (overlaps counted)."""
    w = tuple(w)
    if not 0 <= lo <= hi <= n:
        raise ValueError("need 0 <= lo <= hi <= n")
    if not 1 <= len(w) <= n:
        raise ValueError("need 1 <= |w| <= n")
    auto = Automaton(spec, n, max_states)
    delta = _kmp_table(w, spec.size)
    k = len(w)
    layer: Dict = {(auto.start(), 0, 0): 1}
    for _ in range(n):
        nxt: Dict = {}
        for (st, kmp, occ), c in layer.items():
            for a in range(auto.size):
                s = auto.step(st, a)
                if s is None:
                    continue
                j = delta[kmp][a]
                o = min(occ + (j == k), hi + 1)
                key = (s, j, o)
                nxt[key] = nxt.get(key, 0) + c
        if len(nxt) > max_states:
            raise ResourceLimitExceeded(f"{len(nxt)} word-class states exceeds cap {max_states}")
        layer = nxt
    return sum(c for (_, _, occ), c in layer.items() if lo <= occ <= hi)


def _ceil_root_of(x: int, k: int) -> int:
    """Smallest integer ``r >= 0`` with ``r**k >= x``."""
    if x <= 1:
        return max(x, 0)
    r = 1 << -(-x.bit_length() // k)  # r**k >= x
    while True:
        # Newton step for floor root, from above
        s = ((k - 1) * r + x // r ** (k - 1)) // k
        if s >= r:
            break
        r = s
    return r if r**k >= x else r + 1


def binomial_bound(n: int, A: int, beta, kappa) -> Tuple[int, int]:
    """``(sum_{k <= n(1-(1-kappa)beta)} C(n,k) A^k,  ceil((2 A^(1-(1-kappa)beta))^n))``.

    The first is an exact count of words with at most that many nonzero
    letters; the second is the closed-form bound, computed as an exact integer
    ceiling. The first never exceeds the second.
    """
    beta, kappa = Fraction(beta), Fraction(kappa)
    if not 0 <= kappa <= 1 or not 0 <= beta <= 1:
        raise ValueError("need 0 <= kappa <= 1 and 0 <= beta <= 1")
    if n < 0 or A < 1:
        raise ValueError("need n >= 0 and A >= 1")
    e = 1 - (1 - kappa) * beta
    top = math.floor(n * e)
    total = sum(math.comb(n, k) * A**k for k in range(top + 1))
    # (2 A^e)^n = 2^n A^(P/Q) with P/Q = n e
    ne = n * e
    P, Q = ne.numerator, ne.denominator
    bound = _ceil_root_of(2 ** (n * Q) * A**P, Q)
    return total, bound


def separated_count_bounds(spec: GappedSubshift, n: int, m: int,
                           max_states: int = DEFAULT_MAX_STATES) -> Tuple[int, int]:
    """``|L_n| <= s_n(2^-m) <= |L_{n+m+1}|``."""
    if n < 1 or m < 0:
        raise ValueError("need n >= 1 and m >= 0")
    counts = language_counts(spec, n + m + 1, max_states)
    return counts[n], counts[n + m + 1]


# ---------------------------------------------------------------------------
# periodic points


@dataclass(frozen=True)
class OrbitRecord:
    rep: CyclicWord
    zero_density: Fraction
    average: Optional[Fraction] = None

    @property
    def length(self) -> int:
        return len(self.rep)


@dataclass
class PeriodicCensus:
    n: int
    count: int
    orbits: List[OrbitRecord] = field(default_factory=list)


def _check_periodic_support(spec: GappedSubshift) -> None:
    base = spec.base
    while isinstance(base, UnionOfCopies):
        base = base.inner
    if isinstance(base, Substitution):
        raise NotImplementedError("periodic points are not supported for substitution bases")


def _census_shard(spec: GappedSubshift, n: int, first: int, max_words: int) -> List[Word]:
    return [w for w in enumerate_language(spec, n, max_words, prefix=(first,)) if contains_cyclic(spec, w)]


def periodic_words(spec: GappedSubshift, n: int, max_words: int = DEFAULT_MAX_STATES,
                   threads: int = 1) -> List[Word]:
    """Every length-``n`` word whose periodization is admissible, sorted."""
    if n < 1:
        raise ValueError("period must be >= 1")
    _check_periodic_support(spec)
    firsts = range(spec.size)
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_census_shard, [spec] * spec.size, [n] * spec.size, firsts,
                                  [max_words] * spec.size))
    else:
        parts = [_census_shard(spec, n, a, max_words) for a in firsts]
    return sorted(w for part in parts for w in part)


def cycle_average(phi: Observable, cycle: CyclicWord) -> Fraction:
    """Average of ``phi`` over one period of ``cycle^inf``, windows wrapping around."""
    n = len(cycle)
    return sum((phi.table[cycle.window(i, phi.depth)] for i in range(n)), Fraction(0)) / n


def periodic_points(spec: GappedSubshift, n: int, phi: Optional[Observable] = None,
                    max_words: int = DEFAULT_MAX_STATES, threads: int = 1) -> PeriodicCensus:
    """Census of ``Per_n``: the count and one record per shift orbit."""
    words = periodic_words(spec, n, max_words, threads)
    reps = sorted({CyclicWord(w).canonical() for w in words}, key=lambda c: (len(c), c.symbols))
    orbits = []
    for rep in reps:
        zd = Fraction(rep.symbols.count(0), len(rep))
        orbits.append(OrbitRecord(rep, zd, cycle_average(phi, rep) if phi is not None else None))
    return PeriodicCensus(n, len(words), orbits)


def growth_profile(spec: GappedSubshift, n_max: int, max_words: int = DEFAULT_MAX_STATES,
                   threads: int = 1) -> List[Tuple[int, int, float, float]]:
    """Rows ``(n, |Per_n|, ln|Per_n| / n, h_{n_max} / (1 + tau))``."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    ref = entropy_profile(spec, n_max).h(n_max) / (1 + float(spec.tau))
    rows = []
    for n in range(1, n_max + 1):
        count = len(periodic_words(spec, n, max_words, threads))
        rows.append((n, count, math.log(count) / n, ref))
    return rows
