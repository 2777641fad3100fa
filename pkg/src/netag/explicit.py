"""Flat state machine with explicit class and word transitions (bigram).

Two factorizations of ``p(c, w | c', w')`` are estimated:

* A: ``p(w | c, c', w') * p(c | c', w')``
* B: ``p(c | w, c') * p(w | c', w')``

They can be combined geometrically, ``pA^(1-k) * pB^k``. The combined
score is not renormalized; it is only used to rank equal-length paths.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .corpus import (
    BOS,
    EOS,
    AnnotatedTranscript,
    ClassLabel,
    Vocabulary,
    build_vocabulary,
    corpus_lines,
    to_class_sequence,
)
from .estimation import (
    BackoffTable,
    DiscountScheme,
    EstimationError,
    Regime,
    UniformTerminal,
    UnigramTerminal,
    build_chain,
)

__all__ = ["MixtureSetting", "ExplicitNEModel", "train_explicit", "CHAIN_LAYOUT"]

START = (ClassLabel.OTHER, BOS)
END = (ClassLabel.OTHER, EOS)

# name -> (context description, level projections, terminal kind)
CHAIN_LAYOUT = {
    "word_a": (("class", "prev_class", "prev_word"), ((0, 1, 2), (0, 1), (0,), ()), "uniform"),
    "class_a": (("prev_class", "prev_word"), ((0, 1), (0,)), "unigram"),
    "word_b": (("prev_class", "prev_word"), ((0, 1), (0,), ()), "uniform"),
    "class_b": (("word", "prev_class"), ((0, 1), (0,)), "unigram"),
}


@dataclass(frozen=True)
class MixtureSetting:
    k: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.k <= 1.0:
            raise ValueError("mixture weight k must lie in [0, 1]")


class ExplicitNEModel:
    kind = "EXPLICIT"
    history_length = 1

    def __init__(self, chains: dict[str, BackoffTable], vocab: Vocabulary,
                 classes: Sequence[ClassLabel], scheme: DiscountScheme, regime: Regime):
        missing = set(CHAIN_LAYOUT) - set(chains)
        if missing:
            raise ValueError(f"missing chains: {sorted(missing)}")
        self.chains = chains
        self.word_a = chains["word_a"]
        self.class_a = chains["class_a"]
        self.word_b = chains["word_b"]
        self.class_b = chains["class_b"]
        self.vocab = vocab
        self.classes = tuple(sorted(ClassLabel(c) for c in classes))
        self.scheme = scheme
        self.regime = regime

    def map_word(self, word: str) -> str:
        return self.vocab.map(word)

    def transition_score_A(self, prev: tuple[ClassLabel, str], cur: tuple[ClassLabel, str]) -> float:
        (cp, wp), (c, w) = prev, cur
        return self.word_a.logprob((c, cp, wp), w) + self.class_a.logprob((cp, wp), c)

    def transition_score_B(self, prev: tuple[ClassLabel, str], cur: tuple[ClassLabel, str]) -> float:
        (cp, wp), (c, w) = prev, cur
        return self.class_b.logprob((w, cp), c) + self.word_b.logprob((cp, wp), w)

    def transition_score_mixture(self, setting: MixtureSetting | float, prev, cur) -> float:
        k = setting.k if isinstance(setting, MixtureSetting) else float(setting)
        if k == 0.0:
            return self.transition_score_A(prev, cur)
        if k == 1.0:
            return self.transition_score_B(prev, cur)
        return (1.0 - k) * self.transition_score_A(prev, cur) + k * self.transition_score_B(prev, cur)

    def scorer(self, mixture: MixtureSetting | float | None = None) -> "_ExplicitScorer":
        k = 0.0 if mixture is None else (mixture.k if isinstance(mixture, MixtureSetting) else float(mixture))
        MixtureSetting(k)
        return _ExplicitScorer(self, k)

    def event_words(self) -> set[str]:
        return set(self.vocab.words) | {EOS}


class _ExplicitScorer:
    history_length = 1

    def __init__(self, model: ExplicitNEModel, k: float):
        self.model = model
        self.classes = model.classes
        self.k = k
        if k == 0.0:
            self._score = model.transition_score_A
        elif k == 1.0:
            self._score = model.transition_score_B
        else:
            self._score = lambda p, c: model.transition_score_mixture(k, p, c)

    def start(self) -> tuple:
        return (START,)

    def candidates(self, word: str) -> list[tuple[ClassLabel, str]]:
        w = self.model.map_word(word)
        return [(c, w) for c in self.classes]

    def transition(self, history: tuple, token: tuple[ClassLabel, str]) -> float:
        return self._score(history[-1], token)

    def final(self, history: tuple) -> float:
        return self._score(history[-1], END)


def line_events(lines: Sequence[AnnotatedTranscript], vocab: Vocabulary):
    """(previous, current) state pairs, with a start state and end event per line."""
    pairs = []
    for line in lines:
        prev = START
        for c, w in zip(to_class_sequence(line), line.tokens):
            cur = (c, vocab.map(w))
            pairs.append((prev, cur))
            prev = cur
        pairs.append((prev, END))
    return pairs


def train_explicit(corpus: Sequence[AnnotatedTranscript], vocab: Vocabulary | None = None,
                   scheme: DiscountScheme | None = None, regime: Regime = Regime.BACKOFF,
                   classes: Sequence[ClassLabel] = tuple(ClassLabel)) -> ExplicitNEModel:
    scheme = scheme or DiscountScheme()
    lines = corpus_lines(corpus)
    if not lines:
        raise EstimationError("training corpus is empty")
    if vocab is None:
        vocab = build_vocabulary(corpus, cutoff=1)
    if vocab.possible_size < len(vocab.words | {EOS}):
        raise ValueError("possible vocabulary must cover the vocabulary plus the end token")
    classes = tuple(sorted(ClassLabel(c) for c in classes))
    pairs = line_events(lines, vocab)

    class_counts = Counter(cur[0] for _, cur in pairs)
    stray = set(class_counts) - set(classes)
    if stray:
        raise EstimationError(f"training data uses classes outside the model: {sorted(c.name for c in stray)}")
    absent = [c.name for c in classes if class_counts[c] == 0]
    if absent:
        raise EstimationError(f"classes absent from training data: {absent}")
    total = sum(class_counts.values())
    class_unigram = UnigramTerminal({c: class_counts[c] / total for c in classes})
    word_floor = UniformTerminal(vocab.possible_size)
    alphabet = frozenset(classes)

    streams = {
        "word_a": [((c, cp, wp), w) for (cp, wp), (c, w) in pairs],
        "class_a": [((cp, wp), c) for (cp, wp), (c, w) in pairs],
        "word_b": [((cp, wp), w) for (cp, wp), (c, w) in pairs],
        "class_b": [((w, cp), c) for (cp, wp), (c, w) in pairs],
    }
    chains = {}
    for name, (_, projections, term) in CHAIN_LAYOUT.items():
        if term == "uniform":
            chain = build_chain(streams[name], projections, word_floor, scheme, regime)
        else:
            chain = build_chain(streams[name], projections, class_unigram, scheme, regime, alphabet)
        chains[name] = chain.compiled
    return ExplicitNEModel(chains, vocab, classes, scheme, regime)
