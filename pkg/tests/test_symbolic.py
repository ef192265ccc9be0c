import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gapshift.oracles import thue_morse_prefix
from gapshift.symbolic import (
    GOLDEN_MEAN,
    SFT,
    THUE_MORSE,
    Alphabet,
    CyclicWord,
    FullShift,
    Observable,
    ResourceLimitExceeded,
    Substitution,
    UnionOfCopies,
    base_contains,
    base_language_count,
    evaluate_observable,
    format_word,
    parse_word,
    substitution_factors,
    truncated_distance,
    word_distance_interval,
)

BASES = [
    FullShift(3),
    GOLDEN_MEAN,
    SFT(2, ((0, 0, 0), (1, 1))),
    SFT(3, ((0, 1), (2, 2), (1, 0, 2))),
    THUE_MORSE,
    Substitution(2, ((0, 1), (0,)), 0),  # Fibonacci
    UnionOfCopies(GOLDEN_MEAN, 2),
    UnionOfCopies(THUE_MORSE, 2),
]


def brute_sft(spec, w):
    """Avoids forbidden factors and extends by K symbols on both sides (K = longest forbidden word)."""
    K = max(len(f) for f in spec.forbidden)

    def clean(u):
        return not any(u[i:i + len(f)] == f for f in spec.forbidden for i in range(len(u) - len(f) + 1))

    if not clean(w):
        return False
    # bi-extendable by 2K symbols is enough for a bounded-memory shift at these sizes
    pads = list(itertools.product(range(spec.size), repeat=2 * K))
    lefts = [p for p in pads if clean(p + w)]
    return any(clean(l + w + r) for l in lefts for r in pads)


def tm_factors(n):
    x = thue_morse_prefix(4096)
    return {x[i:i + n] for i in range(len(x) - n + 1)}


# examples -------------------------------------------------------------------

def test_full_shift_contains_everything():
    assert base_contains(FullShift(3), (0, 2, 1))


def test_golden_mean_rejects_11():
    assert not base_contains(GOLDEN_MEAN, (0, 1, 1, 0))
    assert base_contains(GOLDEN_MEAN, (0, 1, 0, 1))


def test_thue_morse_has_no_cube_of_zero():
    assert not base_contains(THUE_MORSE, (0, 0, 0))
    assert base_contains(THUE_MORSE, (0, 0, 1, 0, 1, 1))


def test_counts_examples():
    assert base_language_count(FullShift(3), 2) == 9
    assert base_language_count(GOLDEN_MEAN, 4) == 8
    assert base_language_count(THUE_MORSE, 3) == 6
    assert base_language_count(FullShift(2), 0) == 1


def test_out_of_range_symbol():
    with pytest.raises(ValueError):
        base_contains(FullShift(2), (0, 2))
    with pytest.raises(ValueError):
        Alphabet(2).check((3,))


def test_spec_validation():
    with pytest.raises(ValueError):
        SFT(2, ((),))
    with pytest.raises(ValueError):
        Substitution(2, ((0, 1), ()), 0)
    with pytest.raises(ValueError):
        Substitution(2, ((0,), (1,)), 0)
    with pytest.raises(ValueError):
        UnionOfCopies(FullShift(2), 0)


def test_sft_dead_ends_are_excluded():
    # two interacting constraints; compare against the extension oracle
    spec = SFT(2, ((0, 0), (1, 1, 1)))
    for n in range(1, 8):
        for w in itertools.product(range(2), repeat=n):
            assert base_contains(spec, w) == brute_sft(spec, w), w


def test_substitution_cap():
    with pytest.raises(ResourceLimitExceeded):
        substitution_factors(THUE_MORSE, 40, max_words=16)


# oracles --------------------------------------------------------------------

@pytest.mark.parametrize("spec", [b for b in BASES if isinstance(b, SFT)], ids=str)
def test_sft_membership_matches_extension_oracle(spec):
    for n in range(1, 7):
        for w in itertools.product(range(spec.size), repeat=n):
            assert base_contains(spec, w) == brute_sft(spec, w), w


@pytest.mark.parametrize("n", range(1, 11))
def test_thue_morse_matches_digit_sum_sequence(n):
    expected = tm_factors(n)
    got = {w for w in itertools.product(range(2), repeat=n) if base_contains(THUE_MORSE, w)}
    assert got == expected
    assert base_language_count(THUE_MORSE, n) == len(expected)


@pytest.mark.parametrize("spec", BASES, ids=str)
def test_count_matches_enumeration(spec):
    for n in range(0, 9):
        brute = sum(base_contains(spec, w) for w in itertools.product(range(spec.alphabet_size), repeat=n))
        assert base_language_count(spec, n) == brute


@pytest.mark.parametrize("spec", BASES, ids=str)
def test_factor_closure(spec):
    for n in range(1, 9):
        for w in itertools.product(range(spec.alphabet_size), repeat=n):
            if base_contains(spec, w):
                assert base_contains(spec, w[1:]) and base_contains(spec, w[:-1])


@pytest.mark.parametrize("inner", [FullShift(2), GOLDEN_MEAN, THUE_MORSE], ids=str)
def test_union_counts_and_disjointness(inner):
    spec = UnionOfCopies(inner, 3)
    for n in range(1, 7):
        assert base_language_count(spec, n) == 3 * base_language_count(inner, n)
    k = inner.alphabet_size
    # a word mixing two copies is never in the language
    assert not base_contains(spec, (0, k))
    assert base_contains(spec, (k, k + 1)) == base_contains(inner, (0, 1))


# words ----------------------------------------------------------------------

def test_word_text_format():
    assert parse_word("1 0 2") == (1, 0, 2)
    assert parse_word("") == ()
    assert parse_word("1a0", compact=True) == (1, 10, 0)
    assert format_word((1, 10, 0), compact=True) == "1a0"
    with pytest.raises(ValueError):
        format_word((36,), compact=True)


@given(st.lists(st.integers(0, 35), max_size=20), st.booleans())
def test_word_format_round_trip(w, compact):
    assert parse_word(format_word(w, compact), compact) == tuple(w)


@given(st.lists(st.integers(0, 2), min_size=1, max_size=12))
def test_canonical_is_rotation_invariant(w):
    c = CyclicWord(w)
    reps = {CyclicWord(r).canonical() for r in c.rotations()}
    assert len(reps) == 1
    rep = reps.pop()
    assert len(rep) == c.primitive_period
    assert rep.symbols in {r[:len(rep)] for r in c.rotations()}


def test_cyclic_word_basics():
    c = CyclicWord((1, 0, 1, 0))
    assert c.primitive_period == 2
    assert c.canonical().symbols == (1, 0)
    assert c.window(3, 3) == (0, 1, 0)
    assert CyclicWord((0, 1)).unrolled(5) == (0, 1, 0, 1, 0)
    with pytest.raises(ValueError):
        CyclicWord(())


# metric ---------------------------------------------------------------------

def test_distance_examples():
    assert word_distance_interval((1, 1, 0), (1, 1, 0)) == (0, Fraction(1, 4))
    assert word_distance_interval((1, 0), (1, 1)) == (Fraction(1, 2), 1)
    lo, _ = word_distance_interval((0, 1, 1), (1, 1, 1))
    assert lo >= 1
    with pytest.raises(ValueError):
        word_distance_interval((1,), (1, 0))


@given(st.lists(st.integers(0, 2), min_size=1, max_size=12), st.data())
def test_truncated_metric_inside_interval(u, data):
    v = data.draw(st.lists(st.integers(0, 2), min_size=len(u), max_size=len(u)))
    ext = st.lists(st.integers(0, 2), min_size=20, max_size=20)
    x, y = tuple(u) + tuple(data.draw(ext)), tuple(v) + tuple(data.draw(ext))
    lo, hi = word_distance_interval(u, v)
    assert lo <= truncated_distance(x, y) <= hi
    assert hi - lo == Fraction(1, 2 ** (len(u) - 1))


# observables ----------------------------------------------------------------

def test_observable_examples():
    chi0 = Observable.indicator((0,), 2)
    assert evaluate_observable(chi0, (0, 1, 0), 0) == 1
    assert evaluate_observable(chi0, (0, 1, 0), 1) == 0
    table = {(0, 0): 1, (0, 1): 2, (1, 0): 3, (1, 1): 4}
    phi = Observable(2, 2, table)
    assert evaluate_observable(phi, (0, 1, 1), 1) == 4
    with pytest.raises(ValueError):
        evaluate_observable(phi, (0, 1, 1), 2)


def test_observable_arithmetic():
    chi = Observable.indicator((1, 0), 2)
    assert chi((1, 0)) == 1 and chi((0, 0)) == 0
    assert (-chi + 3)((1, 0)) == 2
    assert Observable.constant(Fraction(1, 3), 3)((2,)) == Fraction(1, 3)
    with pytest.raises(ValueError):
        Observable(1, 2, {(0,): 1})
