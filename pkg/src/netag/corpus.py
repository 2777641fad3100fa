"""Annotated transcripts, the class-sequence encoding, and vocabularies.

Transcripts use inline SGML-style elements::

    AT THE <ENAMEX TYPE="ORGANIZATION">RONALD REAGAN CENTER</ENAMEX> IN
    <ENAMEX TYPE="LOCATION">SIMI VALLEY</ENAMEX> ...

A file holds one or more documents. Each document starts with a ``#DOC <id>``
line and documents are separated by blank lines; a file without any ``#DOC``
line is a single document. Every text line of a document is one utterance.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from enum import IntEnum
from pathlib import Path
from typing import Iterable, Sequence

__all__ = [
    "ClassLabel",
    "NAME_CLASSES",
    "EntitySpan",
    "AnnotatedTranscript",
    "Vocabulary",
    "MarkupError",
    "UNKNOWN",
    "BOS",
    "EOS",
    "DEFAULT_POSSIBLE_SIZE",
    "normalize_token",
    "parse_markup",
    "write_markup",
    "read_transcripts",
    "write_transcripts",
    "load_corpus",
    "to_class_sequence",
    "extract_entities",
    "build_vocabulary",
    "map_oov",
    "corpus_lines",
]

UNKNOWN = "<UNK>"
BOS = "<s>"
EOS = "</s>"
DEFAULT_POSSIBLE_SIZE = 60_000


class ClassLabel(IntEnum):
    """Name classes plus OTHER and the PLUS continuation marker.

    The integer value is the tie-break ordering used by the decoder.
    """

    OTHER = 0
    PERSON = 1
    LOCATION = 2
    ORGANIZATION = 3
    DATE = 4
    TIME = 5
    MONEY = 6
    PERCENT = 7
    PLUS = 8

    @property
    def symbol(self) -> str:
        return "<+>" if self is ClassLabel.PLUS else f"<{self.name.lower()}>"


NAME_CLASSES = tuple(c for c in ClassLabel if c not in (ClassLabel.OTHER, ClassLabel.PLUS))

_ELEMENT = {
    ClassLabel.PERSON: "ENAMEX",
    ClassLabel.LOCATION: "ENAMEX",
    ClassLabel.ORGANIZATION: "ENAMEX",
    ClassLabel.DATE: "TIMEX",
    ClassLabel.TIME: "TIMEX",
    ClassLabel.MONEY: "NUMEX",
    ClassLabel.PERCENT: "NUMEX",
}
_TYPES_OF = {
    elem: {c.name: c for c, e in _ELEMENT.items() if e == elem}
    for elem in ("ENAMEX", "TIMEX", "NUMEX")
}


class MarkupError(ValueError):
    """Malformed annotation markup, located by 1-based line and column."""

    def __init__(self, message: str, line: int, column: int, source: str | None = None):
        self.line = line
        self.column = column
        self.source = source
        where = f"{source}:" if source else ""
        super().__init__(f"{where}line {line}, column {column}: {message}")


def normalize_token(word: str) -> str:
    if not word or any(ch.isspace() for ch in word):
        raise ValueError(f"invalid token {word!r}")
    return word.upper()


@dataclass(frozen=True, order=True)
class EntitySpan:
    start: int
    length: int
    cls: ClassLabel = field(compare=True)

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("span length must be >= 1")
        if self.start < 0:
            raise ValueError("span start must be >= 0")
        if self.cls in (ClassLabel.OTHER, ClassLabel.PLUS):
            raise ValueError(f"{self.cls.name} cannot label an entity span")

    @property
    def end(self) -> int:
        return self.start + self.length


@dataclass(frozen=True)
class AnnotatedTranscript:
    """Words of one document plus its flat, non-overlapping entity spans.

    ``line_starts`` holds the token index at which each utterance line
    begins. Spans never cross a line boundary.
    """

    tokens: tuple[str, ...]
    spans: tuple[EntitySpan, ...] = ()
    doc_id: str = ""
    line_starts: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "spans", tuple(self.spans))
        if self.line_starts is None:
            object.__setattr__(self, "line_starts", (0,) if self.tokens else ())
        else:
            object.__setattr__(self, "line_starts", tuple(self.line_starts))
        n = len(self.tokens)
        ls = self.line_starts
        if n and (not ls or ls[0] != 0):
            raise ValueError("first line must start at token 0")
        if not n and ls:
            raise ValueError("empty transcript cannot have lines")
        if any(b <= a for a, b in zip(ls, ls[1:])) or (ls and ls[-1] >= n):
            raise ValueError("line starts must be strictly increasing and within bounds")
        prev_end = 0
        for span in self.spans:
            if span.start < prev_end:
                raise ValueError("spans must be sorted and non-overlapping")
            if span.end > n:
                raise ValueError("span exceeds token bounds")
            if any(span.start < b < span.end for b in ls):
                raise ValueError("span crosses a line boundary")
            prev_end = span.end

    def __len__(self) -> int:
        return len(self.tokens)

    def lines(self) -> list["AnnotatedTranscript"]:
        """Split into single-utterance transcripts."""
        bounds = list(self.line_starts) + [len(self.tokens)]
        out = []
        k = 0
        for a, b in zip(bounds, bounds[1:]):
            spans = []
            while k < len(self.spans) and self.spans[k].start < b:
                s = self.spans[k]
                spans.append(EntitySpan(s.start - a, s.length, s.cls))
                k += 1
            out.append(AnnotatedTranscript(self.tokens[a:b], tuple(spans), self.doc_id))
        return out

    def class_sequence(self) -> list[ClassLabel]:
        return to_class_sequence(self)

    def without_annotation(self) -> "AnnotatedTranscript":
        return AnnotatedTranscript(self.tokens, (), self.doc_id, self.line_starts)

    @classmethod
    def from_lines(cls, lines: Sequence["AnnotatedTranscript"], doc_id: str = "") -> "AnnotatedTranscript":
        tokens: list[str] = []
        spans: list[EntitySpan] = []
        starts: list[int] = []
        for line in lines:
            if not line.tokens:
                continue
            offset = len(tokens)
            for a in line.line_starts:
                starts.append(a + offset)
            spans.extend(EntitySpan(s.start + offset, s.length, s.cls) for s in line.spans)
            tokens.extend(line.tokens)
        return cls(tuple(tokens), tuple(spans), doc_id, tuple(starts))


# ---------------------------------------------------------------------------
# markup

_TAG = re.compile(r"<(/?)([A-Za-z]+)((?:\s+[^>]*)?)>")
_ATTR = re.compile(r'\s+TYPE\s*=\s*"([^"]*)"\s*$', re.IGNORECASE)


def _parse_line(line: str, lineno: int, source: str | None, offset: int,
                tokens: list[str], spans: list[EntitySpan]) -> None:
    pos = 0
    open_tag: tuple[str, ClassLabel, int, int] | None = None  # element, class, token start, column

    def add_words(chunk: str, col0: int) -> None:
        for m in re.finditer(r"\S+", chunk):
            word = m.group()
            if "<" in word or ">" in word:
                raise MarkupError(f"stray angle bracket in {word!r}", lineno, col0 + m.start() + 1, source)
            tokens.append(word.upper())

    for m in _TAG.finditer(line):
        add_words(line[pos:m.start()], pos)
        col = m.start() + 1
        closing, elem, attrs = m.group(1), m.group(2).upper(), m.group(3)
        if elem not in _TYPES_OF:
            raise MarkupError(f"unknown element <{m.group(2)}>", lineno, col, source)
        if closing:
            if open_tag is None or open_tag[0] != elem:
                raise MarkupError(f"unbalanced closing tag </{elem}>", lineno, col, source)
            _, c, start, ocol = open_tag
            if len(tokens) - offset == start:
                raise MarkupError(f"empty <{elem}> element", lineno, ocol, source)
            spans.append(EntitySpan(start, len(tokens) - offset - start, c))
            open_tag = None
        else:
            if open_tag is not None:
                raise MarkupError("nested annotation is not allowed", lineno, col, source)
            am = _ATTR.match(attrs)
            if am is None:
                raise MarkupError(f"<{elem}> requires a TYPE attribute", lineno, col, source)
            value = am.group(1).strip().upper()
            c = _TYPES_OF[elem].get(value)
            if c is None:
                raise MarkupError(f"unknown TYPE attribute {value!r} for <{elem}>", lineno, col, source)
            open_tag = (elem, c, len(tokens) - offset, col)
        pos = m.end()
    add_words(line[pos:], pos)
    if open_tag is not None:
        raise MarkupError(f"unbalanced tag <{open_tag[0]}> is never closed", lineno, open_tag[3], source)


def parse_markup(text: str, doc_id: str = "", *, source: str | None = None,
                 first_line: int = 1) -> AnnotatedTranscript:
    """Parse the annotated text of one document.

    Blank lines are skipped; each remaining line becomes one utterance.
    """
    tokens: list[str] = []
    spans: list[EntitySpan] = []
    starts: list[int] = []
    for i, line in enumerate(text.splitlines()):
        if not line.strip():
            continue
        offset = len(tokens)
        line_spans: list[EntitySpan] = []
        _parse_line(line, first_line + i, source, offset, tokens, line_spans)
        if len(tokens) > offset:
            starts.append(offset)
        spans.extend(EntitySpan(s.start + offset, s.length, s.cls) for s in line_spans)
    return AnnotatedTranscript(tuple(tokens), tuple(spans), doc_id, tuple(starts))


def _format_line(tokens: Sequence[str], spans: Sequence[EntitySpan]) -> str:
    by_start = {s.start: s for s in spans}
    out = []
    i = 0
    while i < len(tokens):
        s = by_start.get(i)
        if s is None:
            out.append(tokens[i])
            i += 1
            continue
        elem = _ELEMENT[s.cls]
        out.append(f'<{elem} TYPE="{s.cls.name}">' + " ".join(tokens[s.start:s.end]) + f"</{elem}>")
        i = s.end
    return " ".join(out)


def write_markup(t: AnnotatedTranscript) -> str:
    """Canonical annotated text of one document, one line per utterance."""
    return "".join(_format_line(line.tokens, line.spans) + "\n" for line in t.lines())


def read_transcripts(text: str, default_id: str = "doc", *, source: str | None = None) -> list[AnnotatedTranscript]:
    """Parse a whole transcript file into documents."""
    docs: list[AnnotatedTranscript] = []
    lines = text.splitlines()
    if not any(l.startswith("#DOC") for l in lines):
        return [parse_markup(text, default_id, source=source)]
    cur_id: str | None = None
    body: list[str] = []
    body_start = 1

    def flush():
        if cur_id is None:
            if any(l.strip() for l in body):
                docs.append(parse_markup("\n".join(body), default_id, source=source, first_line=body_start))
            return
        docs.append(parse_markup("\n".join(body), cur_id, source=source, first_line=body_start))

    for i, line in enumerate(lines, start=1):
        if line.startswith("#DOC"):
            flush()
            parts = line.split(None, 1)
            if len(parts) < 2 or not parts[1].strip():
                raise MarkupError("#DOC line needs an id", i, 1, source)
            cur_id = parts[1].strip()
            body = []
            body_start = i + 1
        else:
            body.append(line)
    flush()
    return docs


def write_transcripts(docs: Iterable[AnnotatedTranscript]) -> str:
    return "\n".join(f"#DOC {d.doc_id}\n" + write_markup(d) for d in docs)


def load_corpus(paths: Iterable[str | Path]) -> list[AnnotatedTranscript]:
    docs: list[AnnotatedTranscript] = []
    for p in paths:
        p = Path(p)
        docs.extend(read_transcripts(p.read_text(encoding="utf-8"), p.stem, source=str(p)))
    return docs


def corpus_lines(corpus: Iterable[AnnotatedTranscript]) -> list[AnnotatedTranscript]:
    """All nonempty utterance lines of a corpus, in order."""
    return [line for doc in corpus for line in doc.lines() if line.tokens]


# ---------------------------------------------------------------------------
# class-sequence encoding


def to_class_sequence(t: AnnotatedTranscript) -> list[ClassLabel]:
    """Per-token classes: a name's first word carries its class, the rest PLUS.

    Untagged runs are encoded the same way, OTHER then PLUS, and every line
    starts a fresh run.
    """
    n = len(t.tokens)
    out: list[ClassLabel | None] = [None] * n
    for s in t.spans:
        out[s.start] = s.cls
        for i in range(s.start + 1, s.end):
            out[i] = ClassLabel.PLUS
    line_starts = set(t.line_starts)
    prev_untagged = False
    for i in range(n):
        if out[i] is None:
            out[i] = ClassLabel.PLUS if prev_untagged and i not in line_starts else ClassLabel.OTHER
            prev_untagged = True
        else:
            prev_untagged = False
    return out  # type: ignore[return-value]


def extract_entities(tokens: Sequence[str], classes: Sequence[ClassLabel]) -> list[EntitySpan]:
    """Inverse of :func:`to_class_sequence` for the non-OTHER runs."""
    if len(tokens) != len(classes):
        raise ValueError(f"length mismatch: {len(tokens)} tokens, {len(classes)} classes")
    if classes and classes[0] == ClassLabel.PLUS:
        raise ValueError("class sequence cannot start with PLUS")
    spans = []
    start = cls = None
    for i, c in enumerate(list(classes) + [ClassLabel.OTHER]):
        if c == ClassLabel.PLUS:
            continue
        if cls is not None:
            spans.append(EntitySpan(start, i - start, cls))
            cls = None
        if c != ClassLabel.OTHER and i < len(classes):
            start, cls = i, ClassLabel(c)
    return spans


# ---------------------------------------------------------------------------
# vocabulary


@dataclass(frozen=True)
class Vocabulary:
    words: frozenset[str]
    cutoff: int = 0
    has_unknown: bool = False
    possible_size: int = DEFAULT_POSSIBLE_SIZE

    def __post_init__(self):
        object.__setattr__(self, "words", frozenset(self.words))
        if self.has_unknown and UNKNOWN not in self.words:
            raise ValueError("vocabulary with unknown handling must contain the unknown token")
        if self.possible_size < len(self.words):
            raise ValueError(f"possible vocabulary size {self.possible_size} < {len(self.words)} words")

    def __contains__(self, word: object) -> bool:
        return word in self.words

    def __len__(self) -> int:
        return len(self.words)

    def map(self, word: str) -> str:
        if self.has_unknown and word not in self.words:
            return UNKNOWN
        return word


def build_vocabulary(corpus: Iterable[AnnotatedTranscript], cutoff: int = 0,
                     possible_size: int = DEFAULT_POSSIBLE_SIZE) -> Vocabulary:
    """Keep words seen more than ``cutoff`` times; the rest become UNKNOWN.

    With ``cutoff=0`` every observed word is kept and no unknown token exists.
    """
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    freq: Counter[str] = Counter()
    for doc in corpus:
        freq.update(doc.tokens)
    if not freq:
        raise ValueError("cannot build a vocabulary from an empty corpus")
    if possible_size < len(freq):
        raise ValueError(f"possible vocabulary size {possible_size} < {len(freq)} distinct words")
    if cutoff == 0:
        return Vocabulary(frozenset(freq), 0, False, possible_size)
    kept = {w for w, n in freq.items() if n > cutoff}
    kept.add(UNKNOWN)
    return Vocabulary(frozenset(kept), cutoff, True, max(possible_size, len(kept)))


def map_oov(tokens: Sequence[str], v: Vocabulary) -> list[str]:
    if not v.has_unknown:
        return list(tokens)
    return [w if w in v.words else UNKNOWN for w in tokens]
