import random

import pytest

from helpers import random_model
from netag import fixtures
from netag.corpus import ClassLabel, read_transcripts
from netag.decoder import (
    DecodeTooLarge,
    brute_force_decode,
    decode,
    sequence_score,
    tag_transcript,
    viterbi,
)
from netag.estimation import Regime, SchemeKind
from netag.implicit import train_implicit
from netag.serialize import read_model

C = ClassLabel


class TableScorer:
    """Bigram scorer over classes with a fixed score table (integers make ties common)."""

    history_length = 1

    def __init__(self, rng, classes, levels=3):
        self.classes = classes
        states = [None] + list(classes)
        self.t = {(a, b): float(rng.randrange(levels)) for a in states for b in classes + [None]}

    def start(self):
        return ((None, "<s>"),)

    def candidates(self, word):
        return [(c, word) for c in self.classes]

    def transition(self, h, tok):
        return self.t[(h[-1][0], tok[0])]

    def final(self, h):
        return self.t[(h[-1][0], None)]


def test_integer_scores_with_ties_match_brute_force():
    rng = random.Random(30)
    for _ in range(300):
        classes = sorted(rng.sample(list(C), rng.randint(2, 4)))
        if C.PLUS not in classes:
            classes.append(C.PLUS)
        s = TableScorer(rng, classes)
        words = ["w"] * rng.randint(1, 6)
        order = rng.sample(list(C), len(C)) if rng.random() < 0.5 else None
        assert decode(s, words, tie_order=order) == brute_force_decode(s, words, tie_order=order)


def test_all_equal_scores_pick_first_in_tie_order():
    rng = random.Random(31)
    s = TableScorer(rng, [C.OTHER, C.PERSON, C.PLUS], levels=1)
    assert decode(s, ["a", "b", "c"]) == [C.OTHER] * 3
    order = [C.PLUS, C.PERSON] + [c for c in C if c not in (C.PLUS, C.PERSON)]
    assert decode(s, ["a", "b", "c"], tie_order=order) == [C.PERSON, C.PLUS, C.PLUS]
    with pytest.raises(ValueError):
        decode(s, ["a"], tie_order=[C.OTHER])


def test_degenerate_other_mass():
    s = TableScorer(random.Random(0), [C.OTHER, C.PERSON, C.PLUS])
    s.t = {k: (0.0 if C.PERSON not in k and C.PLUS not in k else -100.0) for k in s.t}
    assert decode(s, ["x"] * 5) == [C.OTHER] * 5


@pytest.mark.parametrize("kind", ["implicit", "explicit"])
def test_model_decodes_match_brute_force(kind):
    rng = random.Random(32)
    for _ in range(40):
        model, corpus = random_model(rng, kind, rng.choice(list(Regime)), SchemeKind.GT_ABS_COMBINED,
                                     n_classes=rng.randint(1, 2))
        words = [f"W{rng.randrange(14)}" for _ in range(rng.randint(1, 5))]
        mix = rng.choice([0.0, 0.3, 1.0]) if kind == "explicit" else None
        path, score = viterbi(model, words, mix)
        assert path == brute_force_decode(model, words, mix)
        assert score == pytest.approx(sequence_score(model, words, path, mix), abs=1e-9)
        assert len(path) == len(words) and path[0] != C.PLUS


def test_single_word_is_best_single_candidate():
    rng = random.Random(33)
    model, _ = random_model(rng, "explicit", Regime.BACKOFF, SchemeKind.ABSOLUTE)
    best = max((c for c in model.classes if c != C.PLUS),
               key=lambda c: (sequence_score(model, ["W1"], [c]), -int(c)))
    assert decode(model, ["W1"]) == [best]


def test_prefix_optimality():
    rng = random.Random(34)
    model, _ = random_model(rng, "implicit", Regime.BACKOFF, SchemeKind.GT_ABS_COMBINED)
    words = ["W1", "W2", "W3", "W4", "W5"]
    path, score = viterbi(model, words)
    for other in [[c] + path[1:] for c in model.classes if c != C.PLUS]:
        assert sequence_score(model, words, other) <= score


def test_errors():
    rng = random.Random(35)
    model, _ = random_model(rng, "explicit", Regime.BACKOFF, SchemeKind.ABSOLUTE)
    with pytest.raises(ValueError):
        decode(model, [])
    with pytest.raises(DecodeTooLarge):
        brute_force_decode(model, ["W1"] * 20)


def test_lajous_fixture():
    test = read_transcripts(fixtures.LAJOUS_TEST.read_text())[0]
    words = test.tokens
    explicit = read_model(fixtures.LAJOUS_MODEL)
    implicit = train_implicit(fixtures.load_lajous())
    assert "LAJOUS" not in explicit.vocab
    assert decode(implicit, words) == [C.OTHER] + [C.PLUS] * 7
    assert decode(explicit, words) == [C.OTHER, C.PERSON, C.PLUS] + [C.OTHER] + [C.PLUS] * 4
    tagged = tag_transcript(explicit, test.without_annotation())
    assert [(s.start, s.length, s.cls) for s in tagged.spans] == [(1, 2, C.PERSON)]
    assert tag_transcript(implicit, test.without_annotation()).spans == ()
