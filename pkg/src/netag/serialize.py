"""Text model files (ARPA-like).

Layout::

    \\netag-model 1
    kind EXPLICIT
    <header key value lines>
    \\vocab <n>
    <one word per line>
    \\inventory <n>|none                   (implicit models only)
    <one CLASS|WORD token per line>
    \\chain <name> <n levels>
    \\terminal uniform <size>            or   \\terminal unigram <n>
                                             <log10p> <class> ...
    \\level <j> <projection, comma separated or ->
    <log10p> <context elements> <event>
    \\weights <j>
    <log10w> <context elements>
    \\end

Classes are written by name, words verbatim and class-word tokens as
``CLASS|WORD``. Probabilities use the shortest exact float repr, so a
write/read cycle is lossless.
"""
from __future__ import annotations

from pathlib import Path
from typing import Callable, Hashable, TextIO

from .corpus import ClassLabel, Vocabulary
from .estimation import (
    BackoffTable,
    DiscountScheme,
    Regime,
    SchemeKind,
    UniformTerminal,
    UnigramTerminal,
)
from .explicit import CHAIN_LAYOUT, ExplicitNEModel
from .implicit import ImplicitNEModel, projections_for_order

__all__ = ["FORMAT_VERSION", "ModelFormatError", "write_model", "read_model", "dump_model", "load_model"]

FORMAT_VERSION = 1
MAGIC = "\\netag-model"

# element types: C class, W word, T class-word token
_EXPLICIT_TYPES = {
    "word_a": ("CCW", "W"),
    "class_a": ("CW", "C"),
    "word_b": ("CW", "W"),
    "class_b": ("WC", "C"),
}
_IMPLICIT_TYPES = ("TT", "T")


class ModelFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"model file format {FORMAT_VERSION}: {message}{where}")
        self.line = line


def _enc(kind: str, x) -> str:
    if kind == "C":
        return x.name
    if kind == "W":
        return x
    c, w = x
    return f"{c.name}|{w}"


def _dec(kind: str) -> Callable[[str], Hashable]:
    if kind == "C":
        return lambda s: ClassLabel[s]
    if kind == "W":
        return lambda s: s
    def token(s):
        c, w = s.split("|", 1)
        return (ClassLabel[c], w)
    return token


def _write_table(out: TextIO, name: str, table: BackoffTable, ctx_types: str, ev_type: str) -> None:
    out.write(f"\\chain {name} {len(table.levels)}\n")
    term = table.terminal
    if isinstance(term, UniformTerminal):
        out.write(f"\\terminal uniform {term.size}\n")
    else:
        items = sorted((_enc(ev_type, e), p) for e, p in term.probs.items())
        out.write(f"\\terminal unigram {len(items)}\n")
        for e, p in items:
            out.write(f"{p!r} {e}\n")
    for j, lvl in enumerate(table.levels):
        types = [ctx_types[i] for i in lvl.projection]
        proj = ",".join(map(str, lvl.projection)) or "-"
        out.write(f"\\level {j} {proj}\n")
        rows = []
        for key, dist in lvl.logp.items():
            ctx = " ".join(_enc(t, x) for t, x in zip(types, key))
            for ev, lp in dist.items():
                rows.append((ctx, _enc(ev_type, ev), lp))
        rows.sort()
        for ctx, ev, lp in rows:
            out.write(f"{lp!r} {ctx} {ev}\n" if ctx else f"{lp!r} {ev}\n")
        out.write(f"\\weights {j}\n")
        wrows = sorted((" ".join(_enc(t, x) for t, x in zip(types, key)), lw) for key, lw in lvl.logw.items())
        for ctx, lw in wrows:
            out.write(f"{lw!r} {ctx}\n" if ctx else f"{lw!r}\n")


def dump_model(model, out: TextIO) -> None:
    s = model.scheme
    out.write(f"{MAGIC} {FORMAT_VERSION}\n")
    out.write(f"kind {model.kind}\n")
    out.write(f"scheme {s.kind.value}\n")
    out.write(f"abs_b {'none' if s.b is None else repr(s.b)}\n")
    out.write(f"gt_threshold {s.gt_threshold}\n")
    out.write(f"heldout_every {s.heldout_every}\n")
    out.write(f"em_iterations {s.em_iterations}\n")
    out.write(f"regime {model.regime.value}\n")
    v = model.vocab
    out.write(f"possible_vocab {v.possible_size}\n")
    out.write(f"cutoff {v.cutoff}\n")
    out.write(f"has_unknown {int(v.has_unknown)}\n")
    out.write("classes " + " ".join(c.name for c in model.classes) + "\n")
    if model.kind == "IMPLICIT":
        out.write(f"order {model.order}\n")
    words = sorted(v.words)
    out.write(f"\\vocab {len(words)}\n")
    for w in words:
        out.write(w + "\n")
    if model.kind == "IMPLICIT":
        if model.inventory is None:
            out.write("\\inventory none\n")
        else:
            toks = sorted(_enc("T", t) for t in model.inventory)
            out.write(f"\\inventory {len(toks)}\n")
            for t in toks:
                out.write(t + "\n")
    if model.kind == "EXPLICIT":
        for name in CHAIN_LAYOUT:
            _write_table(out, name, model.chains[name], *_EXPLICIT_TYPES[name])
    else:
        _write_table(out, "tokens", model.table, *_IMPLICIT_TYPES)
    out.write("\\end\n")


def write_model(model, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        dump_model(model, f)


class _Lines:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.i = 0

    def next(self) -> str:
        if self.i >= len(self.lines):
            raise ModelFormatError("unexpected end of file", self.i)
        self.i += 1
        return self.lines[self.i - 1]

    def expect(self, prefix: str) -> list[str]:
        line = self.next()
        parts = line.split()
        if not parts or parts[0] != prefix:
            raise ModelFormatError(f"expected {prefix!r}, found {line[:40]!r}", self.i)
        return parts[1:]


def _read_table(r: _Lines, name: str, ctx_types: str, ev_type: str, regime: Regime,
                alphabet: frozenset | None) -> BackoffTable:
    parts = r.expect("\\chain")
    if len(parts) != 2 or parts[0] != name:
        raise ModelFormatError(f"expected chain {name!r}", r.i)
    n_levels = int(parts[1])
    dec_ev = _dec(ev_type)
    t = r.expect("\\terminal")
    if t[0] == "uniform":
        terminal = UniformTerminal(int(t[1]))
    elif t[0] == "unigram":
        probs = {}
        for _ in range(int(t[1])):
            p, e = r.next().split()
            probs[dec_ev(e)] = float(p)
        terminal = UnigramTerminal(probs)
    else:
        raise ModelFormatError(f"unknown terminal {t[0]!r}", r.i)
    projections, tables = [], []
    for j in range(n_levels):
        hdr = r.expect("\\level")
        if int(hdr[0]) != j:
            raise ModelFormatError("levels out of order", r.i)
        proj = () if hdr[1] == "-" else tuple(int(x) for x in hdr[1].split(","))
        decs = [_dec(ctx_types[i]) for i in proj]
        width = len(proj)
        logp: dict = {}
        while True:
            line = r.next()
            if line.startswith("\\weights"):
                break
            f = line.split()
            if len(f) != width + 2:
                raise ModelFormatError(f"expected {width + 2} fields", r.i)
            key = tuple(d(x) for d, x in zip(decs, f[1:-1]))
            logp.setdefault(key, {})[dec_ev(f[-1])] = float(f[0])
        logw: dict = {}
        for _ in range(len(logp)):
            f = r.next().split()
            if len(f) != width + 1:
                raise ModelFormatError(f"expected {width + 1} fields in weights", r.i)
            logw[tuple(d(x) for d, x in zip(decs, f[1:]))] = float(f[0])
        if logw.keys() != logp.keys():
            raise ModelFormatError("weights do not match level contexts", r.i)
        projections.append(proj)
        tables.append((logp, logw))
    return BackoffTable(BackoffTable.make_levels(projections, tables), terminal, regime, alphabet)


def load_model(text: str):
    r = _Lines(text)
    try:
        head = r.next().split()
        if len(head) != 2 or head[0] != MAGIC:
            raise ModelFormatError("not a model file", 1)
        if head[1] != str(FORMAT_VERSION):
            raise ModelFormatError(f"unsupported version {head[1]!r}", 1)
        header = {}
        while True:
            line = r.next()
            if line.startswith("\\vocab"):
                n_words = int(line.split()[1])
                break
            k, _, v = line.partition(" ")
            header[k] = v
        words = frozenset(r.next() for _ in range(n_words))
        scheme = DiscountScheme(
            SchemeKind(header["scheme"]),
            None if header["abs_b"] == "none" else float(header["abs_b"]),
            int(header["gt_threshold"]),
            int(header["heldout_every"]),
            int(header["em_iterations"]),
        )
        regime = Regime(header["regime"])
        vocab = Vocabulary(words, int(header["cutoff"]), bool(int(header["has_unknown"])),
                           int(header["possible_vocab"]))
        classes = tuple(ClassLabel[c] for c in header["classes"].split())
        kind = header["kind"]
        if kind == "EXPLICIT":
            chains = {name: _read_table(r, name, *_EXPLICIT_TYPES[name], regime,
                                        frozenset(classes) if name.startswith("class") else None)
                      for name in CHAIN_LAYOUT}
            for name, (_, projections, _) in CHAIN_LAYOUT.items():
                if tuple(l.projection for l in chains[name].levels) != projections:
                    raise ModelFormatError(f"chain {name!r} has an unexpected level layout")
            model = ExplicitNEModel(chains, vocab, classes, scheme, regime)
        elif kind == "IMPLICIT":
            order = int(header["order"])
            n_inv = r.expect("\\inventory")[0]
            dec = _dec("T")
            inventory = None if n_inv == "none" else frozenset(dec(r.next()) for _ in range(int(n_inv)))
            table = _read_table(r, "tokens", *_IMPLICIT_TYPES, regime, None)
            if tuple(l.projection for l in table.levels) != projections_for_order(order):
                raise ModelFormatError("token chain has an unexpected level layout")
            model = ImplicitNEModel(table, vocab, classes, scheme, order, inventory)
        else:
            raise ModelFormatError(f"unknown model kind {kind!r}", 2)
        if r.next().strip() != "\\end":
            raise ModelFormatError("missing \\end", r.i)
        return model
    except ModelFormatError:
        raise
    except (KeyError, ValueError, IndexError) as exc:
        raise ModelFormatError(f"corrupt model file: {exc}", r.i) from exc


def read_model(path: str | Path):
    return load_model(Path(path).read_text(encoding="utf-8"))
