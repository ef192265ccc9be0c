from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gapshift import formats
from gapshift.config import ConfigError, parse_config
from gapshift.counting import entropy_profile, growth_profile
from gapshift.gapped import GappedSubshift, GlueRequest, glue
from gapshift.measures import FiniteMeasure, empirical_measure, ergodic_optimum
from gapshift.symbolic import GOLDEN_MEAN, SFT, THUE_MORSE, FullShift, Observable, UnionOfCopies


# formats ------------------------------------------------------------------------

def test_entropy_csv_round_trip():
    prof = entropy_profile(GappedSubshift.full(1, 1), 6)
    text = formats.entropy_csv(prof)
    assert text.splitlines()[0] == "n,count,h_n,ref_logA,ref_thmB5"
    assert "4,15," in text and "5,28," in text
    back = formats.parse_entropy_csv(text)
    assert back.rows == prof.rows and back.ref_thm_b5 == prof.ref_thm_b5


def test_census_csv_round_trip():
    rows = growth_profile(GappedSubshift.full(1, 1), 5)
    text = formats.census_csv(rows)
    assert text.startswith("n,count,growth,ref_growth_bound\n")
    assert formats.parse_census_csv(text) == rows


def test_optimize_csv_round_trip():
    res = ergodic_optimum(GappedSubshift.full(1, 1), -Observable.indicator((0,), 2), 6)
    for compact in (False, True):
        text = formats.optimize_csv(res, compact)
        assert text.startswith("period,best_num,best_den,orbit\n")
        assert formats.parse_optimize_csv(text, compact) == res.table


def test_measure_json_round_trip():
    mu = empirical_measure((1, 0, 0, 0) * 4, 12, 2)
    assert formats.parse_measure_json(formats.measure_json(mu)) == mu
    nu = FiniteMeasure({(1, 2): Fraction(1, 3), (0, 0): Fraction(2, 3)})
    assert formats.parse_measure_json(formats.measure_json(nu)).weights == nu.atoms
    with pytest.raises(ValueError):
        formats.parse_measure_json('{"depth": 1, "atoms": [{"word": "0", "num": 1, "den": 2}]}')


def test_glue_report_round_trip():
    res = glue(GappedSubshift.full(1, 1), GlueRequest((((1, 1), 0), ((1,), 6)), 1))
    text = formats.jsonl(res.report)
    assert len(text.splitlines()) == len(res.report)
    assert formats.parse_glue_report(text) == res.report


@given(st.lists(st.tuples(st.integers(1, 10**6), st.fractions(0, 1))))
def test_oscillation_csv_round_trip(rows):
    assert formats.parse_oscillation_csv(formats.oscillation_csv(rows)) == rows


def test_sweep_csv_round_trip():
    rows = [(1, 5, "no witness"), (4, 5, "1 1 1 0 0 0 1 1")]
    assert formats.parse_sweep_csv(formats.sweep_csv(rows)) == rows


def test_wrong_header_rejected():
    with pytest.raises(ValueError):
        formats.parse_census_csv("n,count\n1,2\n")


# config --------------------------------------------------------------------------

def test_defaults():
    cfg = parse_config("")
    spec = cfg.subshift()
    assert spec == GappedSubshift.full(1, 1)
    assert cfg.glue.request(spec).segments == (((1, 1), 0), ((1,), 6))


def test_full_config():
    cfg = parse_config("""
[spec]
base = sft
alphabet = 2
forbidden = 1 1; 0 0 0   # golden mean plus no three zeros
copies = 2
tau = 3/2
[ranges]
n_max = 9
period_max = 7
m = 2
[observable]
kind = table
depth = 2
table = 0 1: 1/2; 1 1: -3
[glue]
segments = 1 2; 2
m = 0
period = 12
[irregular]
word = 1 2
factor = 3
phases = 5
first = zeros
[output]
dir = results
compact = yes
[caps]
max_states = 1000
[verify]
seed = 7
""")
    spec = cfg.subshift()
    assert spec.base == UnionOfCopies(SFT(2, ((0, 0, 0), (1, 1))), 2)
    assert spec.tau == Fraction(3, 2)
    assert (cfg.ranges.n_max, cfg.ranges.period_max, cfg.ranges.m) == (9, 7, 2)
    phi = cfg.observable.build(spec.size)
    assert phi((0, 1)) == Fraction(1, 2) and phi((1, 1)) == -3 and phi((2, 2)) == 0
    req = cfg.glue.request(spec)
    assert req.period == 12 and req.segments[0] == ((1, 2), 0)
    assert cfg.irregular.schedule().phases[0].word is None
    assert cfg.out_dir == "results" and cfg.compact and cfg.seed == 7 and cfg.caps.max_states == 1000


def test_substitution_config():
    cfg = parse_config("[spec]\nbase = substitution\nalphabet = 2\nrules = 0 1; 1 0\ntau = 1/2\n")
    assert cfg.subshift().base == THUE_MORSE


@pytest.mark.parametrize("text", [
    "[spec]\ntau = 2/0\n",
    "[spec]\ntau = 0.5\n",
    "[spec]\ntau = -1/2\n",
    "[spec]\nbase = sofic\n",
    "[spec]\nalphabet = 0\n",
    "[spec]\nbase = sft\nforbidden = 5\n",
    "[spec]\nbase = substitution\nalphabet = 2\nrules = 0 1\n",
    "[ranges]\nn_max = -3\n",
    "[ranges]\nn_max = ten\n",
    "[caps]\nmax_states = 0\n",
    "[observable]\nkind = wavelet\n",
    "[observable]\nword = 4\n",
    "[glue]\nmode = fold\n",
    "[glue]\nsegments = 1 @ 0; 1\n",
    "[irregular]\nfactor = 1\n",
    "[mystery]\nx = 1\n",
    "not an ini file",
])
def test_invalid_configs(text):
    with pytest.raises(ConfigError):
        cfg = parse_config(text)
        cfg.glue.request(cfg.subshift())


def test_config_hash_tracks_text():
    assert parse_config("[spec]\ntau = 1\n").digest != parse_config("[spec]\ntau = 2\n").digest
    assert parse_config("").digest == parse_config("").digest


def test_full_shift_copies():
    cfg = parse_config("[spec]\nalphabet = 1\ncopies = 3\ntau = 1\n")
    assert cfg.subshift().base == UnionOfCopies(FullShift(1), 3)
    assert cfg.subshift().size == 4
    assert GappedSubshift(GOLDEN_MEAN, 1).size == 3
