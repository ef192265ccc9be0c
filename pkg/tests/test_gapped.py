import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gapshift.counting import language_counts
from gapshift.gapped import (
    Automaton,
    GappedSubshift,
    GapFunction,
    GlueRequest,
    InadmissibleSchedule,
    InfeasibleRequest,
    OscillationSchedule,
    Phase,
    _contains_word_slow,
    build_oscillating_point,
    contains_cyclic,
    contains_word,
    enumerate_language,
    gap_function,
    glue,
    min_gap_witness_search,
    parse_fraction,
    repeat_block,
    required_zero_run,
)
from gapshift.measures import birkhoff_average, oscillation
from gapshift.oracles import forbidden_words, is_forbidden, membership_sweep, naive_contains
from gapshift.suite import _glue_specs, random_glue_request
from gapshift.symbolic import (
    GOLDEN_MEAN,
    SFT,
    THUE_MORSE,
    FullShift,
    Observable,
    ResourceLimitExceeded,
    UnionOfCopies,
    base_contains,
    word_distance_interval,
)

W = lambda s: tuple(int(c) for c in s.split())  # noqa: E731

SPECS = [
    GappedSubshift.full(1, 1),
    GappedSubshift.full(2, Fraction(1, 2)),
    GappedSubshift.full(1, Fraction(2, 3)),
    GappedSubshift(GOLDEN_MEAN, 1),
    GappedSubshift(THUE_MORSE, Fraction(1, 2)),
    GappedSubshift(UnionOfCopies(FullShift(1), 2), 2),
]


# tau and the gap function ----------------------------------------------------

def test_parse_fraction():
    assert parse_fraction("3/6") == Fraction(1, 2)
    assert parse_fraction("2") == 2
    with pytest.raises(ValueError):
        parse_fraction("2/0")
    with pytest.raises(ValueError):
        parse_fraction("0.5")
    with pytest.raises(TypeError):
        parse_fraction(0.5)
    with pytest.raises(ValueError):
        GappedSubshift.full(1, "-1/2")


@pytest.mark.parametrize("tau,s,t", [("1", 1, 1), ("3/2", 2, 3), ("2/3", 4, 3), ("0", 5, 0), ("2", 3, 6)])
def test_required_zero_run(tau, s, t):
    spec = GappedSubshift.full(1, tau)
    assert required_zero_run(spec, s) == t
    # the boundary is strict: t zeros are allowed, t - 1 are not (t - 1 = 0 just merges the runs)
    run = (1,) * s
    assert contains_word(spec, run + (0,) * t + (1,))
    if t >= 2:
        assert not contains_word(spec, run + (0,) * (t - 1) + (1,))


def test_gap_function_examples():
    assert gap_function(GappedSubshift.full(1, 1), 2, 1) == 5
    assert gap_function(GappedSubshift.full(1, "1/2"), 4, 2) == 6
    for tau in ("1/3", "1", "5/2"):
        assert gap_function(GappedSubshift.full(2, tau), 7, -1) == 1
    with pytest.raises(ValueError):
        gap_function(GappedSubshift.full(1, 1), 0, 1)


@given(st.integers(0, 7), st.integers(1, 5), st.integers(1, 30), st.integers(-1, 8))
def test_gap_function_monotone(p, q, n, m):
    M = GapFunction(Fraction(p, q))
    assert M(n + 1, m) >= M(n, m)
    assert M(n, m + 1) >= M(n, m)
    assert M(n, m) >= 1


# membership --------------------------------------------------------------------

def test_membership_examples():
    one = GappedSubshift.full(1, 1)
    assert not contains_word(one, W("1 1 0 1"))
    assert contains_word(one, W("1 0 1"))
    assert contains_word(GappedSubshift.full(1, "1/2"), W("1 1 0 1 1"))
    # edge runs are judged on their in-word length only
    assert contains_word(one, W("0 1 1 0 0 1"))
    assert contains_word(one, W("1 1 0"))


def test_symbol_out_of_range():
    with pytest.raises(ValueError):
        contains_word(GappedSubshift.full(1, 1), (0, 2))
    with pytest.raises(ValueError):
        contains_word(GappedSubshift.full(1, 1), [0, 1, 7])
    with pytest.raises(ValueError):
        contains_cyclic(GappedSubshift.full(1, 1), (3,))


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: f"{s.base}-{s.tau}")
def test_membership_matches_naive_scanner(spec):
    mismatches, _ = membership_sweep(spec, 9, contains_word)
    assert mismatches == []


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: f"{s.base}-{s.tau}")
def test_automaton_agrees_with_membership(spec):
    auto = Automaton(spec, 8)
    for n in range(0, 8):
        for w in itertools.product(range(spec.size), repeat=n):
            assert auto.accepts(w) == contains_word(spec, w)


@given(st.lists(st.integers(0, 2), max_size=30), st.sampled_from(["1/2", "1", "2", "3/4"]))
def test_fast_and_slow_membership_agree(w, tau):
    spec = GappedSubshift.full(2, tau)
    assert contains_word(spec, w) == _contains_word_slow(spec, tuple(w)) == naive_contains(spec, w)


def test_forbidden_set_members_are_forbidden():
    spec = GappedSubshift(GOLDEN_MEAN, "3/2")
    for f in forbidden_words(spec, 7):
        assert is_forbidden(spec, f)
        assert not contains_word(spec, f)


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: f"{s.base}-{s.tau}")
def test_base_language_embeds(spec):
    k = spec.base_size
    for n in range(1, 7):
        for w in itertools.product(range(k), repeat=n):
            if base_contains(spec.base, w):
                assert contains_word(spec, spec.from_base(w))


@given(st.lists(st.integers(0, 2), min_size=1, max_size=16), st.sampled_from(["1/2", "1", "2"]))
def test_factor_closure(w, tau):
    spec = GappedSubshift.full(2, tau)
    if contains_word(spec, w):
        for i in range(len(w)):
            for j in range(i, len(w) + 1):
                assert contains_word(spec, w[i:j])


def test_enumeration_matches_counts():
    for spec in SPECS[:4]:
        c = language_counts(spec, 7)
        for n in range(8):
            words = enumerate_language(spec, n)
            assert len(words) == c[n]
            assert words == sorted(words)
    with pytest.raises(ResourceLimitExceeded):
        enumerate_language(GappedSubshift.full(2, 1), 8, max_words=10)


# cyclic admissibility ------------------------------------------------------------

def test_cyclic_examples():
    one = GappedSubshift.full(1, 1)
    assert contains_cyclic(one, (1, 0))
    assert not contains_cyclic(one, (1, 1, 0))
    assert contains_cyclic(one, (0, 1, 1, 0))
    assert contains_cyclic(one, (1,)) and contains_cyclic(one, (0,))
    gm = GappedSubshift(GOLDEN_MEAN, 1)
    # ambient 2 is base symbol 1, so "2 2" is the forbidden "11"
    assert contains_cyclic(gm, (1, 1)) and contains_cyclic(gm, (1,))
    assert not contains_cyclic(gm, (2,)) and not contains_cyclic(gm, (2, 2, 1))
    assert contains_cyclic(gm, (1, 2))
    assert not contains_cyclic(gm, (2, 2, 0, 0))


@given(st.lists(st.integers(0, 2), min_size=1, max_size=8), st.sampled_from(["1/2", "1", "2"]))
def test_cyclic_matches_long_repetition(w, tau):
    spec = GappedSubshift.full(2, tau)
    assert contains_cyclic(spec, w) == contains_word(spec, tuple(w) * 6)


# glue -----------------------------------------------------------------------------

def test_glue_two_segments():
    spec = GappedSubshift.full(1, 1)
    res = glue(spec, GlueRequest((((1, 1), 0), ((1,), 6)), 1))
    assert res.word == W("1 1 0 0 0 0 1 0")
    assert res.admissible and res.certified
    assert all(r["hi"] <= Fraction(1, 2) for r in res.report)
    assert [r["position"] for r in res.report] == [0, 1, 6]


def test_glue_single_segment():
    spec = GappedSubshift.full(2, "1/2")
    res = glue(spec, GlueRequest((((2, 1, 2), 0),), 3))
    assert res.word == (2, 1, 2, 0, 0, 0)
    assert res.certified


def test_glue_periodic():
    spec = GappedSubshift.full(1, 1)
    req = GlueRequest((((1,), 0), ((1,), 4)), 1, period=8)
    assert req.min_period(spec) == 8  # b_k - a_1 + M(1, 1/2) = 4 + 4
    res = glue(spec, req)
    assert res.cyclic is not None and res.word == W("1 0 0 0 1 0 0 0")
    assert contains_cyclic(spec, res.word) and res.certified


def test_glue_layout_default_spacing():
    spec = GappedSubshift.full(1, 1)
    req = GlueRequest.layout(spec, [(1, 1), (1,)], 1)
    assert req.segments == (((1, 1), 0), ((1,), 6))


def test_glue_infeasible():
    spec = GappedSubshift.full(1, 1)
    with pytest.raises(InfeasibleRequest):
        glue(spec, GlueRequest((((1, 1), 0), ((1,), 5)), 1))  # gap 4 < M = 5
    with pytest.raises(InfeasibleRequest):
        glue(spec, GlueRequest((((1, 1, 0, 1), 0),), 1))  # not in the language
    with pytest.raises(InfeasibleRequest):
        glue(spec, GlueRequest((((1,), 0), ((1,), 4)), 1, period=6))
    with pytest.raises(InfeasibleRequest):
        glue(spec, GlueRequest((), 1))


def test_glue_coarse_precision():
    spec = GappedSubshift.full(1, 2)
    # m = -1: every pair of points is within 2, the gap function is 1
    res = glue(spec, GlueRequest((((1, 1), 0), ((1,), 2)), -1))
    assert res.admissible and res.certified
    assert contains_word(spec, res.word)


@pytest.mark.parametrize("seed", range(8))
def test_glue_random_requests(seed):
    rng = random.Random(seed)
    for _ in range(25):
        spec = rng.choice(_glue_specs())
        req = random_glue_request(rng, spec)
        res = glue(spec, req)
        assert res.certified
        for u, a in req.segments:
            z = res.cyclic.unrolled(req.end + req.m + 1) if res.cyclic else res.word
            assert z[a:a + len(u) + req.m] == u + (0,) * req.m
            # independent recheck of one shadowing bound
            x = u + (0,) * (req.m + 1)
            ext = z + (0,) * (req.m + 1)
            _, hi = word_distance_interval(x[:req.m + 1], ext[a:a + req.m + 1])
            assert hi <= Fraction(2) ** -req.m
        if res.cyclic:
            assert len(res.word) == req.period
            assert Automaton(spec).accepts(res.word * 4)
        else:
            assert naive_contains(spec, res.word)


def test_glue_custom_gap_function():
    spec = GappedSubshift.full(1, 1)
    loose = lambda n, m: gap_function(spec, n, m) + 2  # noqa: E731
    req = GlueRequest.layout(spec, [(1,), (1, 1)], 0, gap=loose)
    assert req.segments[1][1] == gap_function(spec, 1, 0) + 2
    assert glue(spec, req, gap=loose).certified


# gap minimality ---------------------------------------------------------------------

def test_witness_examples():
    spec = GappedSubshift.full(1, 1)
    assert min_gap_witness_search(spec, (1, 1), (0, 1), 1, 2) is None
    w = min_gap_witness_search(spec, (1, 1), (0, 1), 1, gap_function(spec, 2, 1))
    assert w is not None and contains_word(spec, w)
    assert min_gap_witness_search(spec, (1,), (1,), -1, 1) is not None


@pytest.mark.parametrize("tau", ["1", "2", "1/2"])
@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("m", [0, 1, 2])
def test_minimal_gap_is_one_below_formula(tau, n, m):
    spec = GappedSubshift.full(1, tau)
    M = gap_function(spec, n, m)
    found = [g for g in range(1, M + 1) if min_gap_witness_search(spec, (1,) * n, (0, 1), m, g) is not None]
    assert found and found[0] >= M - 1
    assert M in found


def test_witness_search_cap():
    with pytest.raises(ResourceLimitExceeded):
        min_gap_witness_search(GappedSubshift.full(2, 1), (1,), (1,), 0, 30, max_candidates=100)


# oscillating points -------------------------------------------------------------------

def test_schedule_must_alternate():
    with pytest.raises(InadmissibleSchedule):
        OscillationSchedule((Phase((1,), 4), Phase((1,), 4)))
    with pytest.raises(ValueError):
        Phase(None, 0)


def test_default_schedule_oscillates():
    spec = GappedSubshift.full(1, 1)
    sched = OscillationSchedule.geometric((1,), 4, 4)
    assert sched.checkpoints == [4, 20, 84, 340]
    x = build_oscillating_point(spec, sched, 340)
    assert len(x) == 340 and contains_word(spec, x)
    chi0 = Observable.indicator((0,), 2)
    avgs = [birkhoff_average(x, chi0, c) for c in sched.checkpoints]
    assert avgs[0] <= Fraction(1, 2) < avgs[1]
    assert avgs[2] < avgs[1] and avgs[3] > avgs[2]
    _, _, gap = oscillation(x, chi0, sched.checkpoints)
    assert gap >= Fraction(3, 10)


def test_all_zero_schedule():
    spec = GappedSubshift.full(1, 1)
    x = build_oscillating_point(spec, OscillationSchedule((Phase(None, 50),)), 50)
    assert x == (0,) * 50


@pytest.mark.parametrize("tau", ["1", "2", "1/3", "3/2"])
def test_single_word_phase_density(tau):
    spec = GappedSubshift.full(1, tau)
    block = repeat_block(spec, (1,))
    assert len(block) == 1 + max(required_zero_run(spec, 1), 1)
    x = build_oscillating_point(spec, OscillationSchedule((Phase((1,), 10 * len(block)),)), 10 * len(block))
    density = Fraction(x.count(0), len(x))
    if spec.tau.denominator == 1 and spec.tau >= 1:
        assert density == spec.zero_density_floor
    assert density >= spec.zero_density_floor


def test_bad_schedule_word():
    spec = GappedSubshift.full(1, 1)
    with pytest.raises(InadmissibleSchedule):
        build_oscillating_point(spec, OscillationSchedule((Phase((1, 1, 0, 1), 8),)), 8)
    with pytest.raises(InadmissibleSchedule):
        build_oscillating_point(spec, OscillationSchedule((Phase((1,), 8),)), 9)
