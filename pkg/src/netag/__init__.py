"""Trainable statistical named-entity tagging for speech transcripts."""
from .corpus import (
    AnnotatedTranscript,
    ClassLabel,
    EntitySpan,
    Vocabulary,
    build_vocabulary,
    extract_entities,
    map_oov,
    parse_markup,
    read_transcripts,
    to_class_sequence,
    write_markup,
    write_transcripts,
)
from .decoder import brute_force_decode, decode, tag_transcript
from .estimation import DiscountScheme, Regime, SchemeKind
from .evaluation import align_words, metrics, score, score_corpus
from .explicit import ExplicitNEModel, MixtureSetting, train_explicit
from .implicit import ImplicitNEModel, train_implicit

__version__ = "0.1.0"
