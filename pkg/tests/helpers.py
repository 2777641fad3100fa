"""Random corpora and small models shared by the tests."""
from __future__ import annotations

import random

from netag.corpus import EOS, AnnotatedTranscript, ClassLabel, EntitySpan, build_vocabulary
from netag.estimation import DiscountScheme, Regime, SchemeKind, distribution_mass
from netag.explicit import train_explicit
from netag.implicit import train_implicit

NAME_CLASSES = [c for c in ClassLabel if c not in (ClassLabel.OTHER, ClassLabel.PLUS)]


def random_line(rng: random.Random, words, classes=NAME_CLASSES, max_len: int = 8) -> AnnotatedTranscript:
    n = rng.randint(1, max_len)
    tokens = tuple(rng.choice(words) for _ in range(n))
    spans, i = [], 0
    while i < n:
        if rng.random() < 0.35:
            length = rng.randint(1, min(3, n - i))
            spans.append(EntitySpan(i, length, rng.choice(classes)))
            i += length
        else:
            i += 1
    return AnnotatedTranscript(tokens, tuple(spans))


def random_corpus(rng: random.Random, n_lines: int = 30, n_words: int = 12, classes=NAME_CLASSES,
                  max_len: int = 8) -> list[AnnotatedTranscript]:
    words = [f"W{i}" for i in range(n_words)]
    lines = [random_line(rng, words, classes, max_len) for _ in range(n_lines)]
    # make sure every class occurs at least once
    for k, c in enumerate(classes):
        lines.append(AnnotatedTranscript((words[k % n_words], words[(k + 1) % n_words]),
                                         (EntitySpan(0, 1, c),)))
    return [AnnotatedTranscript.from_lines(lines, "doc")]


def model_classes(classes) -> tuple[ClassLabel, ...]:
    return tuple(sorted({ClassLabel.OTHER, ClassLabel.PLUS, *classes}))


def random_model(rng: random.Random, kind: str, regime: Regime, scheme: SchemeKind, *, n_classes: int = 2,
                 cutoff: int | None = None, possible: int = 200, **kw):
    classes = rng.sample(NAME_CLASSES, n_classes)
    corpus = random_corpus(rng, classes=classes, **kw)
    cutoff = rng.choice([0, 1]) if cutoff is None else cutoff
    vocab = build_vocabulary(corpus, cutoff, possible)
    s = DiscountScheme(scheme)
    train = train_explicit if kind == "explicit" else train_implicit
    return train(corpus, vocab, s, regime, classes=model_classes(classes)), corpus


def table_masses(table, events, alphabet_size=None):
    """Yield (level, key, total mass) for every stored context of every level."""
    for j, lvl in enumerate(table.levels):
        for key in lvl.logp:
            yield j, key, distribution_mass(table, j, key, events, alphabet_size)


def explicit_chain_alphabets(model):
    words = sorted(model.event_words())
    size = model.vocab.possible_size
    return {
        "word_a": (words, size),
        "word_b": (words, size),
        "class_a": (list(model.classes), None),
        "class_b": (list(model.classes), None),
    }


def model_tables(model):
    return model.chains if hasattr(model, "chains") else {"tokens": model.table}


def max_table_deviation(a, b) -> float:
    """Largest absolute log10 difference over every stored entry; inf on a layout mismatch."""
    ta, tb = model_tables(a), model_tables(b)
    if set(ta) != set(tb):
        return float("inf")
    worst = 0.0
    for name in ta:
        la, lb = ta[name].levels, tb[name].levels
        if len(la) != len(lb) or ta[name].terminal != tb[name].terminal:
            return float("inf")
        for x, y in zip(la, lb):
            if x.projection != y.projection or x.logp.keys() != y.logp.keys() or x.logw.keys() != y.logw.keys():
                return float("inf")
            for key, dist in x.logp.items():
                if dist.keys() != y.logp[key].keys():
                    return float("inf")
                worst = max([worst] + [abs(v - y.logp[key][e]) for e, v in dist.items()])
            worst = max([worst] + [abs(v - y.logw[key]) for key, v in x.logw.items()])
    return worst
