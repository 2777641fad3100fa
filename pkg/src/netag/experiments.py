"""Experiment harnesses: closed-loop synthetic runs, learning curves,
self-training and the decomposition mixture sweep.

Every harness is deterministic given its seed.
"""
from __future__ import annotations

import random
from dataclasses import asdict, dataclass
from typing import Sequence

from .config import RunConfig
from .corpus import AnnotatedTranscript, build_vocabulary, corpus_lines
from .decoder import tag_transcript
from .evaluation import ScoreReport, score_corpus
from .explicit import ExplicitNEModel, train_explicit
from .generate import sample_corpus
from .implicit import train_implicit

__all__ = [
    "train_model",
    "tag_corpus",
    "evaluate",
    "split_lines",
    "pack_lines",
    "closed_loop",
    "learning_curve",
    "self_train",
    "mixture_sweep",
    "CurvePoint",
    "SelfTrainStep",
    "SweepPoint",
]


def train_model(corpus: Sequence[AnnotatedTranscript], cfg: RunConfig, kind: str | None = None):
    kind = kind or cfg.model_kind
    vocab = build_vocabulary(corpus, cfg.cutoff, cfg.possible_vocab)
    if kind == "explicit":
        return train_explicit(corpus, vocab, cfg.scheme(), cfg.regime)
    if kind == "implicit":
        return train_implicit(corpus, vocab, cfg.scheme(), cfg.regime, order=cfg.order)
    raise ValueError(f"unknown model kind {kind!r}")


def _mixture(model, cfg: RunConfig, k: float | None = None):
    if isinstance(model, ExplicitNEModel):
        return cfg.mixture_k if k is None else k
    return None


def tag_corpus(model, docs: Sequence[AnnotatedTranscript], cfg: RunConfig,
               k: float | None = None) -> list[AnnotatedTranscript]:
    mix = _mixture(model, cfg, k)
    return [tag_transcript(model, d.without_annotation(), mix, cfg.tie_order) for d in docs]


def evaluate(model, refs: Sequence[AnnotatedTranscript], cfg: RunConfig, k: float | None = None) -> ScoreReport:
    return score_corpus(refs, tag_corpus(model, refs, cfg, k), cfg.score_mode)


def pack_lines(lines: Sequence[AnnotatedTranscript], prefix: str, per_doc: int = 20) -> list[AnnotatedTranscript]:
    return [AnnotatedTranscript.from_lines(lines[i:i + per_doc], f"{prefix}{i // per_doc:04d}")
            for i in range(0, len(lines), per_doc)]


def split_lines(corpus: Sequence[AnnotatedTranscript], heldout_fraction: float, seed: int):
    """Shuffle utterance lines and split into (train lines, held-out documents)."""
    if not 0.0 < heldout_fraction < 1.0:
        raise ValueError("held-out fraction must lie in (0, 1)")
    lines = [l for l in corpus_lines(corpus) if l.tokens]
    random.Random(seed).shuffle(lines)
    n_held = max(1, round(len(lines) * heldout_fraction))
    return lines[n_held:], pack_lines(lines[:n_held], "heldout")


def _tokens(lines) -> int:
    return sum(len(l.tokens) for l in lines)


def closed_loop(generator: ExplicitNEModel, cfg: RunConfig, n_train: int = 100000,
                n_test: int = 10000, seed: int = 0) -> dict[str, ScoreReport]:
    """Sample train and test corpora from ``generator``; score both model kinds."""
    train = sample_corpus(generator, n_train, seed=2 * seed, prefix="train")
    test = sample_corpus(generator, n_test, seed=2 * seed + 1, prefix="test")
    return {kind: evaluate(train_model(train, cfg, kind), test, cfg) for kind in ("explicit", "implicit")}


@dataclass
class CurvePoint:
    fraction: float
    train_tokens: int
    R: float
    P: float
    PR: float
    SER: float


def learning_curve(corpus: Sequence[AnnotatedTranscript], fractions: Sequence[float], cfg: RunConfig,
                   heldout_fraction: float = 0.1) -> list[CurvePoint]:
    """Train on nested prefixes of the shuffled training lines; score a fixed held-out split."""
    if not fractions or any(not 0.0 < f <= 1.0 for f in fractions):
        raise ValueError("fractions must lie in (0, 1]")
    train, held = split_lines(corpus, heldout_fraction, cfg.seed)
    out = []
    for f in fractions:
        prefix = train[:max(1, round(len(train) * f))]
        model = train_model(pack_lines(prefix, "train"), cfg)
        r = evaluate(model, held, cfg)
        out.append(CurvePoint(f, _tokens(prefix), r.R, r.P, r.PR, r.SER))
    return out


@dataclass
class SelfTrainStep:
    iteration: int
    train_tokens: int
    R: float
    P: float
    PR: float
    SER: float


def self_train(seed_corpus: Sequence[AnnotatedTranscript], unlabeled: Sequence[AnnotatedTranscript],
               heldout: Sequence[AnnotatedTranscript], iterations: int, cfg: RunConfig):
    """Train on the labelled seed, then repeatedly tag ``unlabeled`` and retrain on the union.

    Step 0 is the seed-only model; step ``i`` retrains on the seed plus the
    unlabelled text as tagged by the model of step ``i - 1``.
    Returns ``(final model, steps)``.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    plain = [d.without_annotation() for d in unlabeled]
    model = train_model(seed_corpus, cfg)
    steps = []

    def log(i, corpus):
        r = evaluate(model, heldout, cfg)
        steps.append(SelfTrainStep(i, sum(len(d.tokens) for d in corpus), r.R, r.P, r.PR, r.SER))

    log(0, seed_corpus)
    for i in range(1, iterations + 1):
        union = list(seed_corpus) + tag_corpus(model, plain, cfg)
        model = train_model(union, cfg)
        log(i, union)
    return model, steps


@dataclass
class SweepPoint:
    k: float
    R: float
    P: float
    PR: float
    SER: float


def mixture_sweep(model: ExplicitNEModel, refs: Sequence[AnnotatedTranscript], ks: Sequence[float],
                  cfg: RunConfig) -> list[SweepPoint]:
    if not isinstance(model, ExplicitNEModel):
        raise ValueError("the mixture sweep needs an explicit model")
    out = []
    for k in ks:
        r = evaluate(model, refs, cfg, k)
        out.append(SweepPoint(k, r.R, r.P, r.PR, r.SER))
    return out


def as_rows(points) -> tuple[list[str], list[list]]:
    rows = [asdict(p) for p in points]
    header = list(rows[0]) if rows else []
    return header, [[r[h] for h in header] for r in rows]
