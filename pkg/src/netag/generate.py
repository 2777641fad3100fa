"""Sampling annotated transcripts from an explicit model.

Lines are drawn state by state through decomposition A: a class from
``p(c | c', w')`` and then a word from ``p(w | c, c', w')``. Each back-off
table is sampled exactly: a seen event at the first matching level with
its stored probability, otherwise a draw from the weaker level that
excludes the events seen above.

Words outside the vocabulary are drawn as one of the ``|W| - |V|``
unnamed slots of the possible vocabulary and written as ``X<slot>``.
"""
from __future__ import annotations

import bisect
import random
from typing import Hashable, Sequence

from .corpus import EOS, UNKNOWN, AnnotatedTranscript, ClassLabel, extract_entities
from .estimation import BackoffTable, UniformTerminal
from .explicit import END, START, ExplicitNEModel

__all__ = ["TableSampler", "sample_line", "sample_corpus", "novel_word"]

_MAX_REJECTIONS = 2000


def novel_word(slot: int) -> str:
    return f"X{slot:05d}"


class TableSampler:
    """Exact sampler for one compiled table.

    ``known`` lists the named events the uniform terminal covers; the rest
    of its size are unnamed slots.
    """

    def __init__(self, table: BackoffTable, known: Sequence[Hashable] = ()):
        self.table = table
        self.known = sorted(known)
        self._cache: dict[tuple[int, tuple], tuple[list, list[float], float]] = {}
        term = table.terminal
        if not isinstance(term, UniformTerminal):
            items = sorted(term.probs.items())
            self._term_events = [e for e, _ in items]
            self._term_cum = _cumulate([p for _, p in items])

    def _seen(self, j: int, key: tuple):
        ck = (j, key)
        hit = self._cache.get(ck)
        if hit is None:
            dist = self.table.levels[j].logp[key]
            events = sorted(dist, key=repr)
            cum = _cumulate([10.0 ** dist[e] for e in events])
            hit = (events, cum, cum[-1] if cum else 0.0)
            self._cache[ck] = hit
        return hit

    def _terminal(self, rng: random.Random) -> Hashable:
        term = self.table.terminal
        if isinstance(term, UniformTerminal):
            slot = rng.randrange(term.size)
            return self.known[slot] if slot < len(self.known) else novel_word(slot)
        u = rng.random() * self._term_cum[-1]
        return self._term_events[min(bisect.bisect_right(self._term_cum, u), len(self._term_events) - 1)]

    def _from(self, j: int, key: tuple, rng: random.Random) -> Hashable:
        levels = self.table.levels
        if j == len(levels):
            return self._terminal(rng)
        nxt = levels[j + 1]._get(key) if j + 1 < len(levels) else None
        dist = levels[j].logp.get(key)
        if dist is None:
            return self._from(j + 1, nxt, rng)
        events, cum, total = self._seen(j, key)
        u = rng.random()
        if u < total:
            return events[min(bisect.bisect_right(cum, u), len(events) - 1)]
        for _ in range(_MAX_REJECTIONS):
            e = self._from(j + 1, nxt, rng)
            if e not in dist:
                return e
        return self._exhaustive(j, key, dist, rng)

    def _exhaustive(self, j, key, dist, rng):
        # unseen mass concentrated on few events; enumerate named candidates
        pool = [e for e in (self.table.alphabet or self.known) if e not in dist]
        weights = [10.0 ** self.table.logprob_from(j, key, e) for e in pool]
        named = sum(weights)
        if isinstance(self.table.terminal, UniformTerminal):
            rest = 1.0 - sum(10.0 ** v for v in dist.values()) - named
            if rng.random() * (named + max(rest, 0.0)) >= named:
                return novel_word(rng.randrange(len(self.known), self.table.terminal.size))
        return rng.choices(pool, weights)[0]

    def sample(self, context: Sequence, rng: random.Random) -> Hashable:
        return self._from(0, self.table.levels[0]._get(context), rng)


def _cumulate(ps: Sequence[float]) -> list[float]:
    out, s = [], 0.0
    for p in ps:
        s += p
        out.append(s)
    return out


class _LineSampler:
    def __init__(self, model: ExplicitNEModel):
        self.model = model
        words = sorted(model.event_words())
        self.words = _WordSampler(TableSampler(model.word_a, words), model)
        self.classes = TableSampler(model.class_a)

    def line(self, rng: random.Random, max_length: int) -> tuple[list[str], list[ClassLabel]]:
        words, classes = [], []
        prev = START
        while len(words) < max_length:
            c = self.classes.sample(prev, rng)
            if not words and c == ClassLabel.PLUS:
                continue
            w = self.words.sample((c, prev[0], prev[1]), rng)
            if w == EOS:
                break
            words.append(w)
            classes.append(c)
            prev = (c, w)
        return words, classes


class _WordSampler:
    def __init__(self, sampler: TableSampler, model: ExplicitNEModel):
        self.sampler = sampler
        self.size = model.vocab.possible_size
        self.n_known = len(sampler.known)

    def sample(self, context, rng):
        w = self.sampler.sample(context, rng)
        if w == UNKNOWN:
            return novel_word(rng.randrange(self.n_known, self.size))
        return w


def sample_line(model: ExplicitNEModel, rng: random.Random, max_length: int = 200) -> AnnotatedTranscript:
    """One non-empty annotated line."""
    s = _LineSampler(model)
    while True:
        words, classes = s.line(rng, max_length)
        if words:
            return AnnotatedTranscript(tuple(words), tuple(extract_entities(words, classes)))


def sample_corpus(model: ExplicitNEModel, n_tokens: int, seed: int = 0, lines_per_doc: int = 20,
                  max_length: int = 200, prefix: str = "syn") -> list[AnnotatedTranscript]:
    """Documents of sampled lines totalling at least ``n_tokens`` words."""
    if n_tokens < 1:
        raise ValueError("n_tokens must be positive")
    rng = random.Random(seed)
    s = _LineSampler(model)
    docs, lines, total = [], [], 0
    while total < n_tokens:
        words, classes = s.line(rng, max_length)
        if not words:
            continue
        lines.append(AnnotatedTranscript(tuple(words), tuple(extract_entities(words, classes))))
        total += len(words)
        if len(lines) == lines_per_doc:
            docs.append(AnnotatedTranscript.from_lines(lines, f"{prefix}{len(docs):04d}"))
            lines = []
    if lines:
        docs.append(AnnotatedTranscript.from_lines(lines, f"{prefix}{len(docs):04d}"))
    return docs
