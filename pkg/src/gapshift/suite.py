"""The end-to-end verification suite behind ``gapshift verify`` and ``tests/test_acceptance.py``.

Each check returns a :class:`Check`; none of them raise on a failed property.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, List, Optional, Tuple

from .counting import (
    binomial_bound,
    count_word_class,
    entropy_profile,
    language_counts,
    periodic_words,
)
from .gapped import (
    Automaton,
    GappedSubshift,
    GlueRequest,
    OscillationSchedule,
    build_oscillating_point,
    contains_cyclic,
    contains_word,
    enumerate_language,
    gap_function,
    glue,
    min_gap_witness_search,
)
from .measures import (
    FiniteMeasure,
    ergodic_optimum,
    oscillation,
    perturbation_bound_check,
    wasserstein,
    zero_density,
)
from .oracles import brute_periodic_words, membership_sweep
from .symbolic import DEFAULT_MAX_STATES, GOLDEN_MEAN, SFT, CyclicWord, FullShift, Observable, UnionOfCopies, truncated_distance

DEFAULT_SEED = 20261019

# cap on DP states / enumerated words for the counting checks; run_all may lower it
_cap = [DEFAULT_MAX_STATES]

TAUS = (Fraction(1, 2), Fraction(1), Fraction(2))
SWEEP_SPECS = tuple(GappedSubshift.full(a, t) for t in TAUS for a in (1, 2))


@dataclass
class Check:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


@lru_cache(maxsize=None)
def _sweep(spec: GappedSubshift, max_len: int):
    return membership_sweep(spec, max_len, contains_word)


def membership_equivalence(seed: int = DEFAULT_SEED, max_len: int = 14, budget: float = 60.0) -> Check:
    t0 = time.perf_counter()
    bad = []
    for spec in SWEEP_SPECS:
        mismatches, _ = _sweep(spec, max_len)
        if mismatches:
            bad.append((spec.size, str(spec.tau), mismatches[0]))
    took = time.perf_counter() - t0
    ok = not bad and took < budget
    return Check("membership_equivalence", ok,
                 f"{len(SWEEP_SPECS)} specs, words <= {max_len}, mismatches {bad[:3]}, {took:.1f}s (< {budget:.0f}s)")


def counting_equivalence(seed: int = DEFAULT_SEED, n_max: int = 12) -> Check:
    bad = []
    for spec in SWEEP_SPECS:
        _, brute = _sweep(spec, max(n_max, 14))
        dp = language_counts(spec, n_max, _cap[0])
        for n in range(n_max + 1):
            if dp[n] != brute[n]:
                bad.append((spec.size, str(spec.tau), n, dp[n], brute[n]))
    anchors = language_counts(GappedSubshift.full(1, 1), 5)
    ok = not bad and anchors[4] == 15 and anchors[5] == 28
    return Check("counting_equivalence", ok, f"n <= {n_max}, mismatches {bad[:3]}, |L4|={anchors[4]}, |L5|={anchors[5]}")


def subadditivity(seed: int = DEFAULT_SEED, total: int = 16) -> Check:
    bad = []
    specs = SWEEP_SPECS + (GappedSubshift.full(5, 1), GappedSubshift(GOLDEN_MEAN, Fraction(1)))
    for spec in specs:
        c = language_counts(spec, total, _cap[0])
        for m in range(1, total):
            for n in range(1, total - m + 1):
                if c[m + n] > c[m] * c[n]:
                    bad.append((spec.size, str(spec.tau), m, n))
    return Check("subadditivity", not bad, f"{len(specs)} specs, m+n <= {total}, violations {bad[:3]}")


def entropy_sandwich(seed: int = DEFAULT_SEED, n_max: int = 14, budget: float = 300.0) -> Check:
    t0 = time.perf_counter()
    spec = GappedSubshift.full(5, 1)
    c = language_counts(spec, n_max, _cap[0])
    below = [n for n in range(1, n_max + 1) if c[n] < 5**n]
    # h_14 < h_6  <=>  |L_14|^6 < |L_6|^14
    improving = c[14] ** 6 < c[6] ** 14
    took = time.perf_counter() - t0
    prof = entropy_profile(spec, n_max, _cap[0])
    ok = not below and improving and took < budget
    return Check("entropy_sandwich", ok,
                 f"h_n - ln5: n=6 {prof.h(6) - math.log(5):.5f}, n=14 {prof.h(14) - math.log(5):.5f}; "
                 f"below ln5 at {below}")


def _zero_density_specs():
    return [(GappedSubshift.full(1, t), 14, True) for t in TAUS + (Fraction(3),)] + \
           [(GappedSubshift.full(2, t), 14, False) for t in TAUS]


def zero_density_certificate(seed: int = DEFAULT_SEED) -> Check:
    import itertools

    bad, checked = [], 0
    for spec, n_max, exhaustive in _zero_density_specs():
        floor = spec.tau / (1 + spec.tau)
        for n in range(1, n_max + 1):
            if exhaustive:
                words = [w for w in itertools.product(range(spec.size), repeat=n) if contains_cyclic(spec, w)]
            else:
                words = periodic_words(spec, n, _cap[0])
            for w in words:
                if 0 in w and any(w):
                    checked += 1
                    if zero_density(w) < floor:
                        bad.append((str(spec.tau), w))
        if spec.tau.denominator == 1:
            tight = (1,) + (0,) * int(spec.tau)
            if not contains_cyclic(spec, tight) or zero_density(tight) != floor:
                bad.append((str(spec.tau), "equality", tight))
    return Check("zero_density_certificate", not bad, f"{checked} mixed cycles checked, violations {bad[:3]}")


def periodic_census(seed: int = DEFAULT_SEED) -> Check:
    spec = GappedSubshift.full(1, 1)
    counts = [len(periodic_words(spec, n, _cap[0])) for n in (1, 2, 3)]
    brute = [len(brute_periodic_words(spec, n)) for n in (1, 2, 3)]
    per12 = len(periodic_words(spec, 12, _cap[0]))
    growth = math.log(per12) / 12
    ref = entropy_profile(spec, 12, _cap[0]).h(12) / 2
    ok = counts == [2, 4, 5] and brute == counts and growth >= ref - 0.2
    return Check("periodic_census", ok,
                 f"|Per_1..3| = {counts} (brute {brute}); n=12 growth {growth:.4f} vs h_12/2 - 0.2 = {ref - 0.2:.4f}")


def _glue_specs():
    return [
        GappedSubshift.full(1, 1),
        GappedSubshift.full(2, Fraction(1, 2)),
        GappedSubshift.full(2, 2),
        GappedSubshift.full(1, Fraction(3, 2)),
        GappedSubshift(GOLDEN_MEAN, Fraction(1)),
        GappedSubshift(UnionOfCopies(FullShift(1), 2), Fraction(2, 3)),
    ]


def random_glue_request(rng: random.Random, spec: GappedSubshift) -> GlueRequest:
    m = rng.randint(0, 3)
    k = rng.randint(1, 4)
    segs, a = [], rng.randint(0, 3)
    for _ in range(k):
        length = rng.randint(1, 5)
        u = rng.choice(enumerate_language(spec, length))
        segs.append((u, a))
        a = a + length - 1 + gap_function(spec, length, m) + rng.randint(0, 3)
    req = GlueRequest(tuple(segs), m)
    if rng.random() < 0.5:
        req = GlueRequest(tuple(segs), m, req.min_period(spec) + rng.randint(0, 3))
    return req


def glue_soundness(seed: int = DEFAULT_SEED, trials: int = 200) -> Check:
    rng = random.Random(seed)
    specs = _glue_specs()
    failures = []
    periodic = 0
    for i in range(trials):
        spec = rng.choice(specs)
        req = random_glue_request(rng, spec)
        res = glue(spec, req)
        bound = Fraction(2) ** (-req.m)
        ok = res.admissible and res.report and all(r["hi"] <= bound for r in res.report)
        # independent re-checks of what the witness carries
        auto = Automaton(spec)
        if req.period is None:
            ok = ok and auto.accepts(res.word)
        else:
            periodic += 1
            ok = ok and contains_cyclic(spec, res.word) and len(res.word) == req.period
            ok = ok and auto.accepts(res.word * 3)
        z = res.cyclic.unrolled(req.end + req.m + 2) if res.cyclic else res.word
        for u, a in req.segments:
            ok = ok and tuple(z[a:a + len(u)]) == u
        if not ok:
            failures.append((i, req))
    return Check("glue_soundness", not failures,
                 f"{trials} requests ({periodic} periodic), failures {len(failures)} {failures[:1]}")


def gap_minimality(seed: int = DEFAULT_SEED, budget: float = 120.0) -> Check:
    t0 = time.perf_counter()
    bad = []
    cases = 0
    for tau in (Fraction(1), Fraction(2)):
        spec = GappedSubshift.full(1, tau)
        for n in (1, 2, 3):
            u, v = (1,) * n, (0, 1)
            for m in (0, 1, 2):
                M = gap_function(spec, n, m)
                for g in range(1, M - 1):
                    cases += 1
                    if min_gap_witness_search(spec, u, v, m, g) is not None:
                        bad.append((str(tau), n, m, g, "unexpected witness"))
                cases += 1
                w = min_gap_witness_search(spec, u, v, m, M)
                if w is None or not contains_word(spec, w):
                    bad.append((str(tau), n, m, M, "no witness at M"))
    took = time.perf_counter() - t0
    return Check("gap_minimality", not bad and took < budget,
                 f"{cases} searches, failures {bad[:3]}, {took:.1f}s")


def word_class_bound(seed: int = DEFAULT_SEED, n_max: int = 10) -> Check:
    bad, checked = [], 0
    for spec in SWEEP_SPECS:
        beta = spec.tau / (1 + spec.tau)
        for kappa in (Fraction(1, 4), Fraction(1, 2)):
            for n in range(1, n_max + 1):
                lo = math.ceil((1 - kappa) * n * beta)
                hi = min(n, math.floor((1 + kappa) * n * beta))
                words = enumerate_language(spec, n)
                enumerated = sum(lo <= w.count(0) <= hi for w in words)
                at_least = sum(w.count(0) >= lo for w in words)
                total, bound = binomial_bound(n, spec.base_size, beta, kappa)
                dp = count_word_class(spec, n, (0,), lo, hi) if lo <= hi else 0
                checked += 1
                if not (enumerated == dp and enumerated <= at_least <= total <= bound):
                    bad.append((spec.size, str(spec.tau), str(kappa), n, enumerated, total, bound))
    return Check("word_class_bound", not bad, f"{checked} cases, violations {bad[:3]}")


def _random_word(rng: random.Random, length: int, size: int = 3) -> Tuple[int, ...]:
    return tuple(rng.randrange(size) for _ in range(length))


def wasserstein_properties(seed: int = DEFAULT_SEED, pairs: int = 100) -> Check:
    rng = random.Random(seed)
    bad = []
    for i in range(pairs):
        L = rng.randint(1, 12)
        x, y = _random_word(rng, L + 20), _random_word(rng, L + 20)
        lo, hi = wasserstein(FiniteMeasure.dirac(x[:L]), FiniteMeasure.dirac(y[:L]))
        d = truncated_distance(x, y)
        if not lo <= d <= hi:
            bad.append(("dirac", i))
        mu = FiniteMeasure.uniform([_random_word(rng, L) for _ in range(rng.randint(1, 6))])
        nu = FiniteMeasure.uniform([_random_word(rng, L) for _ in range(rng.randint(1, 6))])
        if wasserstein(mu, nu) != wasserstein(nu, mu):
            bad.append(("symmetry", i))
    for i in range(pairs):
        n, L = rng.randint(1, 32), rng.randint(1, 12)
        m = rng.randint(0, L - 1)
        xs = [_random_word(rng, L) for _ in range(n)]
        close = rng.randint(0, n)
        ys = []
        for j, x in enumerate(xs):
            if j < close:
                ys.append(x[:m + 1] + _random_word(rng, L - m - 1))
            else:
                ys.append(_random_word(rng, L))
        delta = Fraction(n - close, n)
        if not perturbation_bound_check(xs, ys, m, delta):
            bad.append(("lemma", i))
    return Check("wasserstein_properties", not bad, f"{pairs} dirac/symmetry pairs, {pairs} lemma pairs, failures {bad[:3]}")


def level_set_gap(seed: int = DEFAULT_SEED, n_max: int = 14) -> Check:
    import itertools

    bad, orbits = [], 0
    for tau in (Fraction(1), Fraction(2)):
        spec = GappedSubshift.full(1, tau)
        low = 1 / (1 + tau)
        for n in range(1, n_max + 1):
            for w in itertools.product(range(2), repeat=n):
                if contains_cyclic(spec, w):
                    orbits += 1
                    avg = 1 - zero_density(w)
                    if low < avg < 1:
                        bad.append((str(tau), w))
    return Check("level_set_gap", not bad, f"{orbits} periodic words, averages inside (1/(1+tau), 1): {bad[:3]}")


def optimization_separation(seed: int = DEFAULT_SEED, N: int = 12) -> Check:
    spec = GappedSubshift.full(1, 1)
    phi = -Observable.indicator((0,), spec.size)
    res = ergodic_optimum(spec, phi, N)
    zf = res.best_zero_free
    wz = res.best_with_zero
    ten = CyclicWord((1, 0)).canonical()
    ok = zf is not None and zf[0] == 0 and wz is not None and wz[0] == Fraction(-1, 2)
    ok = ok and ten in res.argmax_set("with_zero")
    invariant = True
    for c in (Fraction(7, 3), Fraction(-5)):
        shifted = ergodic_optimum(spec, phi + c, N)
        for part in (None, "zero_free", "with_zero"):
            invariant = invariant and shifted.argmax_set(part) == res.argmax_set(part)
    ok = ok and invariant
    return Check("optimization_separation", ok,
                 f"zero-free best {zf[0] if zf else None}, zero-containing best {wz[0] if wz else None} "
                 f"at {wz[1].symbols if wz else None}, argmax invariant {invariant}")


def default_schedule() -> OscillationSchedule:
    return OscillationSchedule.geometric((1,), factor=4, count=4)


def oscillation_certificate(seed: int = DEFAULT_SEED) -> Check:
    spec = GappedSubshift.full(1, 1)
    sched = default_schedule()
    x = build_oscillating_point(spec, sched, sched.total)
    again = build_oscillating_point(spec, sched, sched.total)
    lo, hi, gap = oscillation(x, Observable.indicator((0,), spec.size), sched.checkpoints)
    ok = gap >= Fraction(3, 10) and x == again
    return Check("oscillation_certificate", ok,
                 f"checkpoints {sched.checkpoints}, averages in [{float(lo):.4f}, {float(hi):.4f}], gap {float(gap):.4f}")


CHECKS: List[Tuple[int, Callable[..., Check]]] = [
    (1, membership_equivalence),
    (2, counting_equivalence),
    (3, subadditivity),
    (4, entropy_sandwich),
    (5, zero_density_certificate),
    (6, periodic_census),
    (7, glue_soundness),
    (8, gap_minimality),
    (9, word_class_bound),
    (10, wasserstein_properties),
    (11, level_set_gap),
    (12, optimization_separation),
    (13, oscillation_certificate),
]


def run_all(seed: int = DEFAULT_SEED, deadline: Optional[float] = None,
            on_result: Optional[Callable[[int, Check], None]] = None,
            max_states: int = DEFAULT_MAX_STATES) -> List[Check]:
    """Run every check in order; ``deadline`` is a ``time.monotonic()`` instant.

    Raises ResourceLimitExceeded when the deadline passes or a counting check
    needs more than ``max_states`` states.
    """
    from .symbolic import ResourceLimitExceeded

    results = []
    saved, _cap[0] = _cap[0], max_states
    try:
        for number, fn in CHECKS:
            if deadline is not None and time.monotonic() > deadline:
                raise ResourceLimitExceeded(f"wall-clock budget exhausted before criterion {number}")
            t0 = time.perf_counter()
            res = fn(seed)
            res.seconds = time.perf_counter() - t0
            results.append(res)
            if on_result:
                on_result(number, res)
    finally:
        _cap[0] = saved
    return results
