"""Empirical measures, Birkhoff averages, finite transport distances, periodic ergodic optimization.

Everything is exact: weights and averages are Fractions, transport costs are
dyadic rationals scaled to integers before the network-simplex solve.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from .counting import cycle_average, periodic_words
from .gapped import GappedSubshift
from .symbolic import DEFAULT_MAX_STATES, DIAMETER, CyclicWord, Observable, Word, word_distance_interval


@dataclass(frozen=True)
class EmpiricalMeasure:
    depth: int
    weights: Mapping[Word, Fraction] = field(hash=False)

    def __getitem__(self, w) -> Fraction:
        return self.weights.get(tuple(w), Fraction(0))


def empirical_measure(x: Iterable[int], n: int, k: int) -> EmpiricalMeasure:
    """Cylinder weights of ``(1/n) sum_{i<n} delta_{f^i x}`` at depth ``k``."""
    x = tuple(x)
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    if len(x) < n + k - 1:
        raise ValueError(f"prefix of length {len(x)} too short for n={n}, k={k}")
    counts = Counter(x[i:i + k] for i in range(n))
    return EmpiricalMeasure(k, {w: Fraction(c, n) for w, c in sorted(counts.items())})


def birkhoff_average(x: Iterable[int], phi: Observable, n: int) -> Fraction:
    x = tuple(x)
    if n < 1:
        raise ValueError("n must be >= 1")
    if len(x) < n + phi.depth - 1:
        raise ValueError(f"prefix of length {len(x)} too short for n={n}")
    k = phi.depth
    return sum((phi.table[x[i:i + k]] for i in range(n)), Fraction(0)) / n


def oscillation(x: Iterable[int], phi: Observable, checkpoints: Sequence[int]) -> Tuple[Fraction, Fraction, Fraction]:
    """``(min, max, max - min)`` of the Birkhoff averages at the checkpoints."""
    x = tuple(x)
    if not checkpoints:
        raise ValueError("need at least one checkpoint")
    # one running sum instead of re-averaging every prefix
    k, last = phi.depth, max(checkpoints)
    if len(x) < last + k - 1:
        raise ValueError("checkpoint beyond prefix")
    wanted = set(checkpoints)
    avgs = []
    total = Fraction(0)
    for i in range(last):
        total += phi.table[x[i:i + k]]
        if i + 1 in wanted:
            avgs.append(total / (i + 1))
    lo, hi = min(avgs), max(avgs)
    return lo, hi, hi - lo


def zero_density(orbit) -> Fraction:
    """Fraction of zeros in one period."""
    w = orbit.symbols if isinstance(orbit, CyclicWord) else tuple(orbit)
    if not w:
        raise ValueError("empty orbit")
    return Fraction(w.count(0), len(w))


# ---------------------------------------------------------------------------
# transport


@dataclass(frozen=True)
class FiniteMeasure:
    """Atoms are cylinder prefixes of one common length carrying exact weights."""

    atoms: Mapping[Word, Fraction] = field(hash=False)

    def __post_init__(self):
        atoms: Dict[Word, Fraction] = {}
        for w, p in dict(self.atoms).items():
            w, p = tuple(w), Fraction(p)
            if p < 0:
                raise ValueError("negative weight")
            if p:
                atoms[w] = atoms.get(w, Fraction(0)) + p
        if sum(atoms.values()) != 1:
            raise ValueError("weights must sum to 1")
        if len({len(w) for w in atoms}) != 1 or not next(iter(atoms)):
            raise ValueError("atoms need one common, non-zero prefix length")
        object.__setattr__(self, "atoms", dict(sorted(atoms.items())))

    @classmethod
    def dirac(cls, w: Iterable[int]) -> "FiniteMeasure":
        return cls({tuple(w): Fraction(1)})

    @classmethod
    def uniform(cls, words: Sequence[Iterable[int]]) -> "FiniteMeasure":
        """``(1/n) sum delta_{x_i}``; repeated words merge their mass."""
        words = [tuple(w) for w in words]
        if not words:
            raise ValueError("no words")
        counts = Counter(words)
        return cls({w: Fraction(c, len(words)) for w, c in counts.items()})

    @property
    def length(self) -> int:
        return len(next(iter(self.atoms)))


def _transport_cost(mu: FiniteMeasure, nu: FiniteMeasure) -> Fraction:
    """Optimal transport cost with ground cost = lower metric bound per atom pair."""
    L = mu.length
    scale_cost = 2 ** (L - 1)
    den = math.lcm(*(p.denominator for p in list(mu.atoms.values()) + list(nu.atoms.values())))
    g = nx.DiGraph()
    for i, (u, p) in enumerate(mu.atoms.items()):
        g.add_node(("s", i), demand=-int(p * den))
    for j, (v, q) in enumerate(nu.atoms.items()):
        g.add_node(("t", j), demand=int(q * den))
    for i, u in enumerate(mu.atoms):
        for j, v in enumerate(nu.atoms):
            lo, _ = word_distance_interval(u, v)
            g.add_edge(("s", i), ("t", j), weight=int(lo * scale_cost))
    cost, _ = nx.network_simplex(g)
    return Fraction(cost, den * scale_cost)


def wasserstein(mu: FiniteMeasure, nu: FiniteMeasure) -> Tuple[Fraction, Fraction]:
    """Certified ``[lo, hi]`` for the first Wasserstein distance between the measures.

    Upper ground costs exceed lower ones by the same tail ``2^-(L-1)`` for every
    pair and every coupling has mass 1, so ``hi = lo + 2^-(L-1)`` exactly.
    """
    if mu.length != nu.length:
        raise ValueError("atoms of both measures must share one prefix length")
    lo = _transport_cost(mu, nu)
    return lo, lo + Fraction(1, 2 ** (mu.length - 1))


def perturbation_bound_check(xs: Sequence[Iterable[int]], ys: Sequence[Iterable[int]], m: int, delta) -> bool:
    """Check ``rho(mean delta_x, mean delta_y) <= 2^-m + delta * diam + tail``.

    Raises ValueError when fewer than ``(1 - delta) n`` pairs are certified
    within ``2^-m`` (the hypothesis of the bound).
    """
    xs, ys = [tuple(x) for x in xs], [tuple(y) for y in ys]
    delta = Fraction(delta)
    if len(xs) != len(ys) or not xs:
        raise ValueError("need two non-empty lists of equal length")
    eps = Fraction(2) ** (-m)
    close = sum(1 for x, y in zip(xs, ys) if word_distance_interval(x, y)[1] <= eps)
    if close < (1 - delta) * len(xs):
        raise ValueError(f"only {close} of {len(xs)} pairs certified within 2^-{m}; delta={delta} too small")
    mu, nu = FiniteMeasure.uniform(xs), FiniteMeasure.uniform(ys)
    _, hi = wasserstein(mu, nu)
    tail = Fraction(1, 2 ** (mu.length - 1))
    return hi <= eps + delta * DIAMETER + tail


# ---------------------------------------------------------------------------
# ergodic optimization over periodic orbits


@dataclass
class OptimizationResult:
    """Best periodic average (a lower bound for the maximal ergodic average)."""

    best: Fraction
    argmax: CyclicWord
    table: List[Tuple[int, Fraction, CyclicWord]]
    best_zero_free: Optional[Tuple[Fraction, CyclicWord]]
    best_with_zero: Optional[Tuple[Fraction, CyclicWord]]
    averages: Dict[CyclicWord, Fraction] = field(repr=False, default_factory=dict)

    def argmax_set(self, within: Optional[str] = None) -> List[CyclicWord]:
        """All orbits attaining the best value (optionally only ``"zero_free"`` / ``"with_zero"``)."""
        pool = self.averages
        if within == "zero_free":
            pool = {c: v for c, v in pool.items() if 0 not in c.symbols}
        elif within == "with_zero":
            pool = {c: v for c, v in pool.items() if 0 in c.symbols}
        if not pool:
            return []
        top = max(pool.values())
        return sorted(c for c, v in pool.items() if v == top)


def _better(v: Fraction, c: CyclicWord, cur) -> bool:
    # ties go to the shorter, then lexicographically smaller, representative
    return cur is None or v > cur[0] or (v == cur[0] and (len(c), c.symbols) < (len(cur[1]), cur[1].symbols))


def ergodic_optimum(spec: GappedSubshift, phi: Observable, N: int,
                    max_words: int = DEFAULT_MAX_STATES, threads: int = 1) -> OptimizationResult:
    """Maximize the ``phi`` average over all periodic orbits of period <= N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if phi.alphabet_size != spec.size:
        raise ValueError("observable alphabet does not match the subshift")
    averages: Dict[CyclicWord, Fraction] = {}
    table = []
    for p in range(1, N + 1):
        best_p = None
        for w in periodic_words(spec, p, max_words, threads):
            c = CyclicWord(w).canonical()
            v = averages.get(c)
            if v is None:
                v = averages[c] = cycle_average(phi, c)
            if _better(v, c, best_p):
                best_p = (v, c)
        table.append((p, best_p[0], best_p[1]))
    overall = zero_free = with_zero = None
    for c, v in averages.items():
        if _better(v, c, overall):
            overall = (v, c)
        if 0 in c.symbols:
            if _better(v, c, with_zero):
                with_zero = (v, c)
        elif _better(v, c, zero_free):
            zero_free = (v, c)
    return OptimizationResult(overall[0], overall[1], table, zero_free, with_zero, averages)
