import math
import random

import pytest

from helpers import explicit_chain_alphabets, random_model, table_masses
from netag import fixtures
from netag.corpus import UNKNOWN, ClassLabel, build_vocabulary, read_transcripts
from netag.estimation import DiscountScheme, EstimationError, Regime, SchemeKind
from netag.explicit import END, START, MixtureSetting, train_explicit

C = ClassLabel
ALL_CLASSES = ('AT THE <ENAMEX TYPE="ORGANIZATION">RONALD REAGAN CENTER</ENAMEX> IN '
               '<ENAMEX TYPE="LOCATION">SIMI VALLEY</ENAMEX> <ENAMEX TYPE="LOCATION">CALIFORNIA</ENAMEX>\n'
               '<ENAMEX TYPE="PERSON">A</ENAMEX> <TIMEX TYPE="DATE">B</TIMEX> <TIMEX TYPE="TIME">C</TIMEX> '
               '<NUMEX TYPE="MONEY">D</NUMEX> <NUMEX TYPE="PERCENT">E</NUMEX>\n')


def test_worked_example_counts():
    docs = read_transcripts(ALL_CLASSES)
    model = train_explicit(docs, build_vocabulary(docs, cutoff=0))
    stored = model.class_a.levels[0].logp[(C.ORGANIZATION, "RONALD")]
    assert C.PLUS in stored
    unigram = model.class_a.terminal.probs
    assert math.fsum(unigram.values()) == pytest.approx(1.0, abs=1e-9)
    assert all(p > 0 for p in unigram.values()) and len(unigram) == 9


def test_unknown_is_a_conditioning_word():
    docs = read_transcripts(fixtures.SYNTHETIC_CORPUS.read_text())
    model = train_explicit(docs, build_vocabulary(docs, cutoff=1))
    assert any(wp == UNKNOWN for _, wp in model.class_a.levels[0].logp)
    assert any(wp == UNKNOWN for _, _, wp in model.word_a.levels[0].logp)


def test_absent_class_rejected():
    docs = read_transcripts('<ENAMEX TYPE="PERSON">A</ENAMEX> B C\n')
    with pytest.raises(EstimationError, match="absent"):
        train_explicit(docs)
    train_explicit(docs, classes=[C.OTHER, C.PERSON, C.PLUS])


@pytest.mark.parametrize("regime", list(Regime))
def test_joint_normalization(regime):
    rng = random.Random(20)
    for _ in range(50):
        model, _ = random_model(rng, "explicit", regime, SchemeKind.GT_ABS_COMBINED)
        words = sorted(model.event_words())
        novel = model.vocab.possible_size - len(words)
        prevs = [START] + [(rng.choice(model.classes), rng.choice(words)) for _ in range(3)]
        for prev in prevs:
            for score in (model.transition_score_A, model.transition_score_B):
                total = 0.0
                for c in model.classes:
                    total += math.fsum(10 ** score(prev, (c, w)) for w in words)
                    if novel:
                        total += novel * 10 ** score(prev, (c, "novel-word"))
                assert total == pytest.approx(1.0, abs=1e-6)


def test_chain_context_masses():
    rng = random.Random(21)
    model, _ = random_model(rng, "explicit", Regime.BACKOFF, SchemeKind.ABSOLUTE)
    for name, (events, size) in explicit_chain_alphabets(model).items():
        for _, _, mass in table_masses(model.chains[name], events, size):
            assert mass == pytest.approx(1.0, abs=1e-6)


def test_single_class_factor_is_certain():
    # with one class the class unigram is a delta and every class context is degenerate
    docs = read_transcripts("A B\n" * 5)
    model = train_explicit(docs, build_vocabulary(docs, cutoff=0, possible_size=3), classes=[C.OTHER, C.PLUS])
    assert model.class_a.logprob((C.OTHER, "A"), C.PLUS) < 0
    docs = read_transcripts("A\n" * 5)
    model = train_explicit(docs, build_vocabulary(docs, cutoff=0, possible_size=2), classes=[C.OTHER])
    assert model.class_a.logprob(START, C.OTHER) == 0.0
    assert model.class_b.logprob(("A", C.OTHER), C.OTHER) == 0.0
    assert model.transition_score_A(START, (C.OTHER, "A")) == model.word_a.logprob((C.OTHER,) + START, "A")


def test_mixture_endpoints_and_midpoint():
    rng = random.Random(22)
    model, _ = random_model(rng, "explicit", Regime.BACKOFF, SchemeKind.GT_ABS_COMBINED)
    words = sorted(model.event_words())
    for _ in range(200):
        prev = (rng.choice(model.classes), rng.choice(words))
        cur = (rng.choice(model.classes), rng.choice(words))
        a, b = model.transition_score_A(prev, cur), model.transition_score_B(prev, cur)
        assert model.transition_score_mixture(0.0, prev, cur) == a
        assert model.transition_score_mixture(MixtureSetting(1.0), prev, cur) == b
        assert model.transition_score_mixture(0.5, prev, cur) == pytest.approx((a + b) / 2)
    with pytest.raises(ValueError):
        MixtureSetting(1.5)
    with pytest.raises(ValueError):
        model.scorer(-0.1)


def test_uniform_toy_model_decompositions_agree():
    # a single class makes both class factors 1 and both word chains see the same counts
    docs = read_transcripts("A\nB\nA\nB\n" * 3)
    model = train_explicit(docs, build_vocabulary(docs, cutoff=0, possible_size=10), classes=[C.OTHER])
    for prev in [START, (C.OTHER, "A"), (C.OTHER, "B")]:
        for w in ["A", "B", END[1], "Z"]:
            assert model.transition_score_A(prev, (C.OTHER, w)) == model.transition_score_B(prev, (C.OTHER, w))


def test_frequent_single_class_word_is_confident_under_b():
    docs = read_transcripts(fixtures.SYNTHETIC_CORPUS.read_text())
    model = train_explicit(docs, build_vocabulary(docs, cutoff=1))
    p = 10 ** model.class_b.logprob(("SAYS", C.PERSON), C.OTHER)
    assert p > 0.9


def test_deterministic_training():
    rng = random.Random(23)
    m1, corpus = random_model(rng, "explicit", Regime.INTERPOLATION, SchemeKind.ABSOLUTE)
    m2 = train_explicit(corpus, m1.vocab, m1.scheme, m1.regime, classes=m1.classes)
    for name in m1.chains:
        for a, b in zip(m1.chains[name].levels, m2.chains[name].levels):
            assert a.logp == b.logp and a.logw == b.logw
