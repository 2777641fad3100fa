"""Viterbi search over the class trellis, and an exhaustive reference.

A scorer supplies ``history_length``, ``start()``, ``candidates(word)``,
``transition(history, token)`` and ``final(history)``; tokens are
``(class, word)`` pairs. Both models provide one through ``.scorer()``.

Ties are broken towards the lexicographically first class sequence under
the tie order (``ClassLabel`` value order by default).
"""
from __future__ import annotations

import itertools
import math
from typing import Sequence

from .corpus import AnnotatedTranscript, ClassLabel, extract_entities

__all__ = ["decode", "viterbi", "brute_force_decode", "sequence_score", "tag_transcript",
           "DecodeTooLarge", "BRUTE_FORCE_LIMIT"]

BRUTE_FORCE_LIMIT = 10**6


class DecodeTooLarge(ValueError):
    pass


def _as_scorer(model, mixture=None):
    if hasattr(model, "scorer"):
        return model.scorer(mixture) if mixture is not None else model.scorer()
    return model


def _ranks(tie_order: Sequence[ClassLabel] | None) -> dict[ClassLabel, int]:
    if tie_order is None:
        return {c: int(c) for c in ClassLabel}
    ranks = {ClassLabel(c): i for i, c in enumerate(tie_order)}
    if len(ranks) != len(ClassLabel):
        raise ValueError("tie order must list every class exactly once")
    return ranks


def _position_candidates(scorer, word: str, first: bool, ranks) -> list:
    cands = scorer.candidates(word)
    if first:
        cands = [t for t in cands if t[0] != ClassLabel.PLUS]
    if not cands:
        raise ValueError(f"no admissible candidates for {word!r}")
    return sorted(cands, key=lambda t: ranks[t[0]])


def viterbi(model, words: Sequence[str], mixture=None,
            tie_order: Sequence[ClassLabel] | None = None) -> tuple[list[ClassLabel], float]:
    """Best class sequence and its log10 score."""
    if not words:
        raise ValueError("cannot decode an empty word sequence")
    scorer = _as_scorer(model, mixture)
    ranks = _ranks(tie_order)
    k = scorer.history_length
    # state: history tuple -> (score, rank of its best prefix)
    layer = {scorer.start(): (0.0, 0)}
    backs: list[dict] = []
    for i, w in enumerate(words):
        cands = _position_candidates(scorer, w, i == 0, ranks)
        best: dict[tuple, tuple[float, int, int, tuple]] = {}
        for h, (s, r) in layer.items():
            for tok in cands:
                sc = s + scorer.transition(h, tok)
                nh = (h + (tok,))[-k:]
                cur = best.get(nh)
                if cur is None or sc > cur[0] or (sc == cur[0] and r < cur[1]):
                    best[nh] = (sc, r, ranks[tok[0]], h)
        order = sorted(best, key=lambda nh: (best[nh][1], best[nh][2]))
        layer = {nh: (best[nh][0], n) for n, nh in enumerate(order)}
        backs.append({nh: best[nh][3] for nh in best})

    final_best = None
    for h, (s, r) in layer.items():
        sc = s + scorer.final(h)
        if final_best is None or sc > final_best[0] or (sc == final_best[0] and r < final_best[1]):
            final_best = (sc, r, h)
    score, _, h = final_best
    path = []
    for i in reversed(range(len(words))):
        path.append(h[-1][0])
        h = backs[i][h]
    path.reverse()
    return path, score


def decode(model, words: Sequence[str], mixture=None,
           tie_order: Sequence[ClassLabel] | None = None) -> list[ClassLabel]:
    return viterbi(model, words, mixture, tie_order)[0]


def sequence_score(model, words: Sequence[str], classes: Sequence[ClassLabel], mixture=None) -> float:
    """log10 score of one class sequence, accumulated left to right."""
    scorer = _as_scorer(model, mixture)
    k = scorer.history_length
    h = scorer.start()
    s = 0.0
    for w, c in zip(words, classes):
        tok = next(t for t in scorer.candidates(w) if t[0] == c)
        s = s + scorer.transition(h, tok)
        h = (h + (tok,))[-k:]
    return s + scorer.final(h)


def brute_force_decode(model, words: Sequence[str], mixture=None,
                       tie_order: Sequence[ClassLabel] | None = None) -> list[ClassLabel]:
    """Exhaustive argmax over all class sequences (same scores and tie rule)."""
    if not words:
        raise ValueError("cannot decode an empty word sequence")
    scorer = _as_scorer(model, mixture)
    ranks = _ranks(tie_order)
    per_pos = [_position_candidates(scorer, w, i == 0, ranks) for i, w in enumerate(words)]
    size = math.prod(len(c) for c in per_pos)
    if size > BRUTE_FORCE_LIMIT:
        raise DecodeTooLarge(f"{size} sequences exceed the brute-force limit of {BRUTE_FORCE_LIMIT}")
    k = scorer.history_length
    best, best_seq = None, None
    for seq in itertools.product(*per_pos):
        h = scorer.start()
        s = 0.0
        for tok in seq:
            s = s + scorer.transition(h, tok)
            h = (h + (tok,))[-k:]
        s = s + scorer.final(h)
        if best is None or s > best:
            best, best_seq = s, seq
    return [t[0] for t in best_seq]


def tag_transcript(model, transcript: AnnotatedTranscript, mixture=None,
                   tie_order: Sequence[ClassLabel] | None = None) -> AnnotatedTranscript:
    """Decode every utterance line and return the annotated transcript."""
    tagged = []
    for line in transcript.lines():
        if not line.tokens:
            continue
        classes = decode(model, line.tokens, mixture, tie_order)
        tagged.append(AnnotatedTranscript(line.tokens, tuple(extract_entities(line.tokens, classes)),
                                          transcript.doc_id))
    return AnnotatedTranscript.from_lines(tagged, transcript.doc_id)
