"""Slot scoring of hypothesised entities against a reference.

Reference and hypothesis words are aligned first (minimum edit distance),
then slots are paired through overlapping aligned tokens. A paired slot is
judged on type and extent, plus content when the word sequences differ;
each failed component moves ``1/n`` of the slot from correct to incorrect.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .corpus import AnnotatedTranscript, EntitySpan

__all__ = [
    "Op",
    "Alignment",
    "align_words",
    "ErrorCounts",
    "ScoreReport",
    "metrics",
    "harmonic_mean",
    "score",
    "score_corpus",
    "format_report",
    "SUB_COST",
    "INS_COST",
    "DEL_COST",
]

SUB_COST = 4
INS_COST = 3
DEL_COST = 3


class Op(Enum):
    MATCH = "M"
    SUBSTITUTE = "S"
    INSERT = "I"
    DELETE = "D"


@dataclass(frozen=True)
class Alignment:
    """Edit operations as ``(op, ref_index, hyp_index)``; absent side is None."""

    ops: tuple[tuple[Op, int | None, int | None], ...]
    cost: int
    ref_length: int

    @property
    def errors(self) -> int:
        return sum(op is not Op.MATCH for op, _, _ in self.ops)

    @property
    def wer(self) -> float:
        return self.errors / max(self.ref_length, 1)


def align_words(ref: Sequence[str], hyp: Sequence[str]) -> Alignment:
    """Minimum-cost alignment; ties prefer match, substitute, delete, insert."""
    n, m = len(ref), len(hyp)
    d = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        d[i][0] = i * DEL_COST
    for j in range(1, m + 1):
        d[0][j] = j * INS_COST
    for i in range(1, n + 1):
        row, prev = d[i], d[i - 1]
        ri = ref[i - 1]
        for j in range(1, m + 1):
            diag = prev[j - 1] + (0 if ri == hyp[j - 1] else SUB_COST)
            row[j] = min(diag, prev[j] + DEL_COST, row[j - 1] + INS_COST)
    ops = []
    i, j = n, m
    while i or j:
        if i and j:
            same = ref[i - 1] == hyp[j - 1]
            if d[i][j] == d[i - 1][j - 1] + (0 if same else SUB_COST):
                ops.append((Op.MATCH if same else Op.SUBSTITUTE, i - 1, j - 1))
                i, j = i - 1, j - 1
                continue
        if i and d[i][j] == d[i - 1][j] + DEL_COST:
            ops.append((Op.DELETE, i - 1, None))
            i -= 1
        else:
            ops.append((Op.INSERT, None, j - 1))
            j -= 1
    ops.reverse()
    return Alignment(tuple(ops), d[n][m], n)


@dataclass
class ErrorCounts:
    C: float = 0.0
    I: float = 0.0
    M: float = 0.0
    S: float = 0.0

    def __add__(self, other: "ErrorCounts") -> "ErrorCounts":
        return ErrorCounts(self.C + other.C, self.I + other.I, self.M + other.M, self.S + other.S)


@dataclass
class ScoreReport:
    counts: ErrorCounts
    R: float
    P: float
    PR: float
    SER: float
    WER: float = 0.0

    def key_values(self) -> str:
        c = self.counts
        vals = [("C", c.C), ("I", c.I), ("M", c.M), ("S", c.S), ("R", self.R), ("P", self.P),
                ("PR", self.PR), ("SER", self.SER), ("WER", self.WER)]
        return " ".join(f"{k}={v:.6f}" for k, v in vals)


def harmonic_mean(r: float, p: float) -> float:
    return 2 * r * p / (r + p) if r + p > 0 else 0.0


def metrics(c: ErrorCounts) -> dict[str, float]:
    ref = c.C + c.I + c.M
    if ref <= 0:
        raise ValueError("no reference slots: recall and slot error rate are undefined")
    hyp = c.C + c.I + c.S
    r = c.C / ref
    p = c.C / hyp if hyp > 0 else 0.0
    return {"R": r, "P": p, "PR": harmonic_mean(r, p), "SER": (c.I + c.M + c.S) / ref}


def _columns(alignment: Alignment):
    ref_col, hyp_col = {}, {}
    for k, (_, ri, hi) in enumerate(alignment.ops):
        if ri is not None:
            ref_col[ri] = k
        if hi is not None:
            hyp_col[hi] = k
    return ref_col, hyp_col


def _pair_slots(ref_spans, hyp_spans, alignment):
    """Greedy one-to-one pairing by number of aligned overlapping tokens."""
    hyp_of_ref = {}
    for _, ri, hi in alignment.ops:
        if ri is not None and hi is not None:
            hyp_of_ref[ri] = hi
    hyp_slot = {}
    for b, s in enumerate(hyp_spans):
        for t in range(s.start, s.end):
            hyp_slot[t] = b
    overlap: dict[tuple[int, int], int] = {}
    for a, s in enumerate(ref_spans):
        for t in range(s.start, s.end):
            hi = hyp_of_ref.get(t)
            if hi is not None and hi in hyp_slot:
                key = (a, hyp_slot[hi])
                overlap[key] = overlap.get(key, 0) + 1
    pairs = []
    used_r, used_h = set(), set()
    for (a, b), n in sorted(overlap.items(), key=lambda kv: (-kv[1], kv[0])):
        if a in used_r or b in used_h:
            continue
        pairs.append((a, b))
        used_r.add(a)
        used_h.add(b)
    return pairs


def score_counts(ref: AnnotatedTranscript, hyp: AnnotatedTranscript, mode: str | None = None):
    """Error counts and the word alignment for one document pair.

    ``mode`` is ``"verbatim"`` (type and extent), ``"asr"`` (type, extent
    and content) or ``None`` to choose by whether the words differ.
    """
    if mode is None:
        mode = "verbatim" if ref.tokens == hyp.tokens else "asr"
    if mode not in ("verbatim", "asr"):
        raise ValueError(f"unknown scoring mode {mode!r}")
    alignment = align_words(ref.tokens, hyp.tokens)
    ref_col, hyp_col = _columns(alignment)
    pairs = _pair_slots(ref.spans, hyp.spans, alignment)
    n_comp = 2 if mode == "verbatim" else 3
    counts = ErrorCounts()
    for a, b in pairs:
        rs, hs = ref.spans[a], hyp.spans[b]
        r_lo, r_hi = ref_col[rs.start], ref_col[rs.end - 1]
        h_lo, h_hi = hyp_col[hs.start], hyp_col[hs.end - 1]
        failed = (rs.cls != hs.cls) + ((r_lo, r_hi) != (h_lo, h_hi))
        if n_comp == 3:
            lo, hi = min(r_lo, h_lo), max(r_hi, h_hi)
            failed += any(alignment.ops[k][0] is not Op.MATCH for k in range(lo, hi + 1))
        counts.I += failed / n_comp
        counts.C += 1.0 - failed / n_comp
    counts.M += len(ref.spans) - len(pairs)
    counts.S += len(hyp.spans) - len(pairs)
    return counts, alignment


def _report(counts: ErrorCounts, wer: float) -> ScoreReport:
    m = metrics(counts)
    return ScoreReport(counts, m["R"], m["P"], m["PR"], m["SER"], wer)


def score(ref: AnnotatedTranscript, hyp: AnnotatedTranscript, mode: str | None = None) -> ScoreReport:
    counts, alignment = score_counts(ref, hyp, mode)
    return _report(counts, alignment.wer)


def score_corpus(refs: Sequence[AnnotatedTranscript], hyps: Sequence[AnnotatedTranscript],
                 mode: str | None = None) -> ScoreReport:
    """Pool counts over documents paired in order."""
    if len(refs) != len(hyps):
        raise ValueError(f"{len(refs)} reference documents but {len(hyps)} hypothesis documents")
    total = ErrorCounts()
    errors = ref_words = 0
    for r, h in zip(refs, hyps):
        if r.doc_id and h.doc_id and r.doc_id != h.doc_id:
            raise ValueError(f"document ids differ: {r.doc_id!r} vs {h.doc_id!r}")
        c, a = score_counts(r, h, mode)
        total = total + c
        errors += a.errors
        ref_words += a.ref_length
    return _report(total, errors / max(ref_words, 1))


def format_report(report: ScoreReport) -> str:
    c = report.counts
    rows = [
        ("correct", c.C), ("incorrect", c.I), ("missing", c.M), ("spurious", c.S),
        ("recall", report.R), ("precision", report.P), ("P&R", report.PR),
        ("slot error rate", report.SER), ("word error rate", report.WER),
    ]
    width = max(len(name) for name, _ in rows)
    table = "\n".join(f"{name:<{width}}  {value:10.4f}" for name, value in rows)
    return table + "\n" + report.key_values()

