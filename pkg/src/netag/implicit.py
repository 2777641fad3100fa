"""Back-off n-gram model over fused class-word tokens.

Each token is a ``(class, word)`` pair, so ``(DATE, MAY)`` and
``(PERSON, MAY)`` are unrelated members of the token inventory and
class transitions are only captured through token n-grams.

The inventory is kept per token: when the vocabulary has an unknown
word, a token seen no more than ``cutoff`` times is replaced by
``(class, <UNK>)`` in training and in decoding, even if its word is in
the vocabulary under another class.
"""
from __future__ import annotations

from collections import Counter

from typing import Iterable, Sequence

from .corpus import (
    BOS,
    EOS,
    UNKNOWN,
    AnnotatedTranscript,
    ClassLabel,
    Vocabulary,
    build_vocabulary,
    corpus_lines,
    to_class_sequence,
)
from .estimation import BackoffTable, DiscountScheme, EstimationError, Regime, UniformTerminal, build_chain

__all__ = ["ImplicitNEModel", "train_implicit", "projections_for_order", "BOUNDARY", "END"]

BOUNDARY = (ClassLabel.OTHER, BOS)
END = (ClassLabel.OTHER, EOS)


def projections_for_order(order: int) -> tuple[tuple[int, ...], ...]:
    """Level contexts over the two-token history ``(e[i-2], e[i-1])``."""
    if order == 3:
        return ((0, 1), (1,), ())
    if order == 2:
        return ((1,), ())
    if order == 1:
        return ((),)
    raise ValueError("order must be 1, 2 or 3")


class ImplicitNEModel:
    kind = "IMPLICIT"

    def __init__(self, table: BackoffTable, vocab: Vocabulary, classes: Sequence[ClassLabel],
                 scheme: DiscountScheme, order: int = 3,
                 inventory: Iterable[tuple[ClassLabel, str]] | None = None):
        self.table = table
        self.vocab = vocab
        self.classes = tuple(sorted(ClassLabel(c) for c in classes))
        self.scheme = scheme
        self.order = order
        self.history_length = max(order - 1, 1)
        # None: every (class, word) pair is its own token
        self.inventory = None if inventory is None else frozenset(inventory)
        self._index: dict[str, dict[ClassLabel, str]] = {}
        if self.inventory is not None:
            for c, w in self.inventory:
                self._index.setdefault(w, {})[c] = w

    def map_token(self, token: tuple[ClassLabel, str]) -> tuple[ClassLabel, str]:
        c, w = token
        w = self.vocab.map(w)
        if self.inventory is None or w == EOS:
            return (c, w)
        return (c, self._index.get(w, {}).get(c, UNKNOWN))

    @property
    def regime(self) -> Regime:
        return self.table.regime

    def token_score(self, history: Sequence[tuple[ClassLabel, str]], current: tuple[ClassLabel, str]) -> float:
        """log10 p(current | last two tokens)."""
        if len(history) < 2:
            history = (BOUNDARY,) * (2 - len(history)) + tuple(history)
        return self.table.logprob((history[-2], history[-1]), current)

    def candidate_tokens(self, word: str) -> list[tuple[ClassLabel, str]]:
        return [self.map_token((c, word)) for c in self.classes]

    def scorer(self, mixture=None) -> "ImplicitNEModel":
        if mixture is not None:
            raise ValueError("the implicit model has no mixture setting")
        return self

    # decoder protocol
    def start(self) -> tuple:
        return (BOUNDARY,) * self.history_length

    def candidates(self, word: str) -> list[tuple[ClassLabel, str]]:
        return self.candidate_tokens(word)

    def transition(self, history: tuple, token: tuple[ClassLabel, str]) -> float:
        if self.history_length == 2:
            return self.table.logprob(history, token)
        return self.table.logprob((BOUNDARY, history[-1]), token)

    def final(self, history: tuple) -> float:
        return self.transition(history, END)

    def event_tokens(self) -> list[tuple[ClassLabel, str]]:
        words = sorted(self.vocab.words | {EOS})
        if self.inventory is None:
            return [(c, w) for c in self.classes for w in words]
        unk = {(c, UNKNOWN) for c in self.classes}
        return sorted(self.inventory | unk | {END})


def token_inventory(lines: Sequence[AnnotatedTranscript], vocab: Vocabulary):
    """Tokens seen more than ``vocab.cutoff`` times; None without an unknown word."""
    if not vocab.has_unknown:
        return None
    counts = Counter((c, vocab.map(w)) for line in lines for c, w in zip(to_class_sequence(line), line.tokens))
    return frozenset(t for t, n in counts.items() if n > vocab.cutoff and t[1] != UNKNOWN)


def token_events(lines: Sequence[AnnotatedTranscript], vocab: Vocabulary, inventory=None):
    events = []
    for line in lines:
        h2, h1 = BOUNDARY, BOUNDARY
        for c, w in zip(to_class_sequence(line), line.tokens):
            e = (c, vocab.map(w))
            if inventory is not None and e not in inventory:
                e = (c, UNKNOWN)
            events.append(((h2, h1), e))
            h2, h1 = h1, e
        events.append(((h2, h1), END))
    return events


def train_implicit(corpus: Sequence[AnnotatedTranscript], vocab: Vocabulary | None = None,
                   scheme: DiscountScheme | None = None, regime: Regime = Regime.BACKOFF,
                   classes: Sequence[ClassLabel] = tuple(ClassLabel), order: int = 3) -> ImplicitNEModel:
    scheme = scheme or DiscountScheme()
    lines = corpus_lines(corpus)
    if not lines:
        raise EstimationError("training corpus is empty")
    if vocab is None:
        vocab = build_vocabulary(corpus, cutoff=1)
    if vocab.possible_size < len(vocab.words | {EOS}):
        raise ValueError("possible vocabulary must cover the vocabulary plus the end token")
    classes = tuple(sorted(ClassLabel(c) for c in classes))
    inventory = token_inventory(lines, vocab)
    events = token_events(lines, vocab, inventory)
    stray = {e[0] for _, e in events} - set(classes)
    if stray:
        raise EstimationError(f"training data uses classes outside the model: {sorted(c.name for c in stray)}")
    floor = UniformTerminal(len(classes) * vocab.possible_size)
    chain = build_chain(events, projections_for_order(order), floor, scheme, regime)
    return ImplicitNEModel(chain.compiled, vocab, classes, scheme, order, inventory)
