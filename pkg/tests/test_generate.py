import math
import random
from collections import Counter

import pytest

from netag import fixtures
from netag.corpus import ClassLabel, read_transcripts, write_transcripts
from netag.explicit import END, START
from netag.generate import _LineSampler, novel_word, sample_corpus, sample_line

C = ClassLabel


@pytest.fixture(scope="module")
def generator():
    return fixtures.load_generator()


def test_deterministic_per_seed(generator):
    a = write_transcripts(sample_corpus(generator, 3000, seed=4))
    b = write_transcripts(sample_corpus(generator, 3000, seed=4))
    c = write_transcripts(sample_corpus(generator, 3000, seed=5))
    assert a == b and a != c


def test_output_parses_and_has_every_class(generator):
    docs = sample_corpus(generator, 10000, seed=1)
    back = read_transcripts(write_transcripts(docs))
    assert back == docs
    assert sum(len(d.tokens) for d in docs) >= 10000
    labels = {s.cls for d in docs for s in d.spans}
    assert labels == set(C) - {C.OTHER, C.PLUS}
    # the generator gives every class at least 1% of the unigram mass
    assert min(generator.class_a.terminal.probs.values()) >= 0.01


def _within(observed: Counter, visits: Counter, prob):
    checked = bad = 0
    for ctx, n in visits.items():
        for e, p in prob(ctx).items():
            mean = n * p
            if mean < 30 or p >= 1.0:
                continue
            checked += 1
            se = math.sqrt(n * p * (1 - p))
            bad += abs(observed[(ctx, e)] - mean) > 3 * se
    return checked, bad


def test_sampled_frequencies_match_generator(generator):
    rng = random.Random(7)
    s = _LineSampler(generator)
    lines, total = [], 0
    while total < 10000:
        words, classes = s.line(rng, 200)
        if words and len(words) < 200:
            lines.append(list(zip(classes, words)))
            total += len(words)
    # a state is followed by a recorded (class, word) or by the end of the line
    nxt_obs, nxt_visits = Counter(), Counter()
    word_obs, word_visits = Counter(), Counter()
    for line in lines:
        prev = START
        for c, w in line:
            if prev != START:
                # the first class is redrawn when it is a continuation
                nxt_obs[(prev, c)] += 1
                nxt_visits[prev] += 1
            word_obs[((c,) + prev, w)] += 1
            word_visits[(c,) + prev] += 1
            prev = (c, w)
        nxt_obs[(prev, "end")] += 1
        nxt_visits[prev] += 1

    g = generator
    eos = END[1]

    def next_probs(prev):
        if prev not in g.class_a.levels[0].logp:
            return {}
        pc = {c: 10 ** g.class_a.logprob(prev, c) for c in g.classes}
        stop = {c: 10 ** g.word_a.logprob((c,) + prev, eos) for c in g.classes}
        out = {c: pc[c] * (1 - stop[c]) for c in g.classes}
        out["end"] = sum(pc[c] * stop[c] for c in g.classes)
        return out

    def word_probs(ctx):
        dist = g.word_a.levels[0].logp.get(ctx, {})
        keep = 1 - 10 ** g.word_a.logprob(ctx, eos)
        return {w: 10 ** lp / keep for w, lp in dist.items() if w != eos}

    n1, bad1 = _within(nxt_obs, nxt_visits, next_probs)
    n2, bad2 = _within(word_obs, word_visits, word_probs)
    assert n1 > 20 and n2 > 20
    # each check has a 0.27% false-alarm rate, so allow the expected handful over many events
    assert bad1 + bad2 <= max(1, 0.01 * (n1 + n2)), (n1, bad1, n2, bad2)


def test_novel_words_and_lines(generator):
    assert novel_word(12) == "X00012"
    rng = random.Random(3)
    for _ in range(50):
        line = sample_line(generator, rng, max_length=30)
        assert 1 <= len(line.tokens) <= 30
    with pytest.raises(ValueError):
        sample_corpus(generator, 0)
