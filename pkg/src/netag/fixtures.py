"""Bundled data files and how they are rebuilt.

``python -m netag.fixtures`` regenerates everything under ``netag/data``
deterministically.
"""
from __future__ import annotations

import sys
from pathlib import Path

from .corpus import build_vocabulary, read_transcripts, write_transcripts
from .explicit import train_explicit
from .generate import sample_corpus
from .serialize import read_model, write_model
from .synth import seed_corpus

DATA = Path(__file__).parent / "data"
GENERATOR_MODEL = DATA / "generator.model"
SYNTHETIC_CORPUS = DATA / "synthetic_50k.txt"
LAJOUS_TRAIN = DATA / "lajous_train.txt"
LAJOUS_TEST = DATA / "lajous_test.txt"
LAJOUS_MODEL = DATA / "lajous_explicit.model"
YORKSHIRE_REF = DATA / "yorkshire_ref.txt"
YORKSHIRE_HYP = DATA / "yorkshire_hyp.txt"

SEED_TOKENS = 30000
SYNTHETIC_TOKENS = 50000


def build_generator():
    seed = seed_corpus(SEED_TOKENS, seed=0)
    return train_explicit(seed, vocab=build_vocabulary(seed, cutoff=0))


def load_generator():
    return read_model(GENERATOR_MODEL)


def load_lajous():
    return read_transcripts(LAJOUS_TRAIN.read_text(), source=str(LAJOUS_TRAIN))


def build_lajous_model():
    docs = load_lajous()
    return train_explicit(docs, vocab=build_vocabulary(docs, cutoff=1))


def rebuild(out: Path = DATA) -> None:
    out.mkdir(parents=True, exist_ok=True)
    gen = build_generator()
    write_model(gen, out / GENERATOR_MODEL.name)
    gen = read_model(out / GENERATOR_MODEL.name)
    syn = sample_corpus(gen, SYNTHETIC_TOKENS, seed=0)
    (out / SYNTHETIC_CORPUS.name).write_text(write_transcripts(syn))
    write_model(build_lajous_model(), out / LAJOUS_MODEL.name)


if __name__ == "__main__":
    rebuild(Path(sys.argv[1]) if len(sys.argv) > 1 else DATA)
