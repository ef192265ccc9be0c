"""Brute-force reference implementations used by the tests and the ``verify`` suite.

These deliberately share no logic with the fast paths: the forbidden set is
materialized word by word and every factor is looked up in it.
"""
from __future__ import annotations

import itertools
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Tuple

from .gapped import GappedSubshift
from .symbolic import SFT, FullShift, UnionOfCopies, Word, base_contains


def forbidden_words(spec: GappedSubshift, max_len: int) -> FrozenSet[Word]:
    """Every word of F up to ``max_len``: gap patterns and nonzero words outside the base language."""
    nonzero = range(1, spec.size)
    out = set()
    for s in range(1, max_len):
        for t in range(1, max_len - s):
            if spec.tau * s <= t:
                continue
            for xs in itertools.product(nonzero, repeat=s + 1):
                out.add(xs[:s] + (0,) * t + xs[s:])
    if not isinstance(spec.base, FullShift):
        for n in range(1, max_len + 1):
            for xs in itertools.product(nonzero, repeat=n):
                if not base_contains(spec.base, tuple(a - 1 for a in xs)):
                    out.add(xs)
    return frozenset(out)


def is_forbidden(spec: GappedSubshift, f: Word) -> bool:
    """Is ``f`` itself a word of F (not merely containing one)?"""
    if not f:
        return False
    if 0 not in f:
        return not base_contains(spec.base, tuple(a - 1 for a in f))
    s = 0
    while s < len(f) and f[s]:
        s += 1
    t = 0
    while s + t < len(f) and not f[s + t]:
        t += 1
    return s >= 1 and t >= 1 and s + t + 1 == len(f) and spec.tau * s > t


def naive_contains(spec: GappedSubshift, w: Iterable[int], forbidden: Optional[FrozenSet[Word]] = None) -> bool:
    """No factor of ``w`` lies in F (looked up in ``forbidden`` when given, else tested one by one)."""
    w = tuple(w)
    factors = (w[i:j] for i in range(len(w)) for j in range(i + 1, len(w) + 1))
    if forbidden is None:
        return not any(is_forbidden(spec, f) for f in factors)
    return not any(f in forbidden for f in factors)


def membership_sweep(spec: GappedSubshift, max_len: int, predicate: Callable[[GappedSubshift, Word], bool],
                     ) -> Tuple[List[Word], List[int]]:
    """Compare ``predicate`` with the naive scanner on every word of length 1..max_len.

    Returns the mismatching words and, per length, how many words the naive
    scanner accepts. Words are visited depth-first so the scanner only looks
    up factors ending at the newest symbol; once a forbidden factor is found
    the flag is inherited by every extension. Words travel as ``bytes``
    (symbols < 256), which the predicate receives as an iterable of ints.
    """
    if spec.size > 256:
        raise ValueError("sweep packs symbols into bytes")
    forbidden = {bytes(f) for f in forbidden_words(spec, max_len)}
    enders = {f[-1] for f in forbidden}
    starters = {f[0] for f in forbidden}
    symbols = [bytes((a,)) for a in range(spec.size)]
    mismatches: List[Word] = []
    accepted = [1] + [0] * max_len

    def visit(w: bytes, ok: bool, n: int) -> None:
        # n = len(w) + 1 is the length of the children
        for a in symbols:
            c = w + a
            c_ok = ok
            if ok and a[0] in enders:
                for i in range(n):
                    if c[i] in starters and c[i:] in forbidden:
                        c_ok = False
                        break
            if predicate(spec, c) != c_ok:
                mismatches.append(tuple(c))
            if c_ok:
                accepted[n] += 1
            if n < max_len:
                visit(c, c_ok, n + 1)

    visit(b"", True, 1)
    return mismatches, accepted


def brute_language_count(spec: GappedSubshift, n: int) -> int:
    forbidden = forbidden_words(spec, n)
    return sum(naive_contains(spec, w, forbidden) for w in itertools.product(range(spec.size), repeat=n))


def _longest_base_constraint(spec: GappedSubshift) -> int:
    base = spec.base
    while isinstance(base, UnionOfCopies):
        base = base.inner
    if isinstance(base, SFT):
        return max((len(f) for f in base.forbidden), default=1)
    return 1


def brute_periodic_words(spec: GappedSubshift, n: int) -> List[Word]:
    """Length-``n`` words whose periodization has no factor in F, by scanning ``w^r``."""
    reps = 3 + -(-_longest_base_constraint(spec) // n)
    forbidden = forbidden_words(spec, 2 * n + 1)
    out = []
    for w in itertools.product(range(spec.size), repeat=n):
        long = w * reps
        # factors up to 2n+1 at every phase cover all gap patterns of the cycle
        if all(long[i:i + k] not in forbidden for i in range(n) for k in range(1, 2 * n + 2)):
            if 0 in w or base_contains(spec.base, tuple(a - 1 for a in long)):
                out.append(w)
    return out


def thue_morse_prefix(n: int) -> Word:
    """First ``n`` terms of the Thue-Morse sequence via binary digit sums."""
    return tuple(bin(i).count("1") % 2 for i in range(n))


def word_class_brute(spec: GappedSubshift, n: int, w: Word, lo: int, hi: int) -> int:
    forbidden = forbidden_words(spec, n)
    k = len(w)
    total = 0
    for u in itertools.product(range(spec.size), repeat=n):
        if naive_contains(spec, u, forbidden):
            occ = sum(u[i:i + k] == w for i in range(n - k + 1))
            total += lo <= occ <= hi
    return total


def exhaustive_cycles(spec: GappedSubshift, n_max: int, predicate) -> Dict[int, List[Word]]:
    """All length-n cycles (n <= n_max) accepted by ``predicate``; a plain product scan."""
    return {n: [w for w in itertools.product(range(spec.size), repeat=n) if predicate(spec, w)]
            for n in range(1, n_max + 1)}
