"""Command-line interface.

Exit codes: 0 success, 1 usage, 2 data or format error, 3 numerical
degeneracy.
"""
from __future__ import annotations

import argparse
import sys
from collections import Counter
from pathlib import Path
from typing import Sequence

from . import experiments as ex
from . import fixtures
from .config import ConfigError, load_config
from .corpus import ClassLabel, MarkupError, corpus_lines, load_corpus, read_transcripts, write_transcripts
from .estimation import EstimationError, NumericalDegeneracyError
from .evaluation import format_report, score_corpus
from .explicit import ExplicitNEModel
from .generate import sample_corpus
from .serialize import ModelFormatError, read_model, write_model

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _shared() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("shared options")
    g.add_argument("--config", metavar="PATH", help="flat key=value configuration file")
    g.add_argument("--seed", type=int)
    g.add_argument("--model-kind", choices=["implicit", "explicit"])
    g.add_argument("--regime", choices=["interp", "backoff"])
    g.add_argument("--discount", choices=["gt", "abs", "gt-abs", "del"])
    g.add_argument("--cutoff", type=int)
    g.add_argument("--possible-vocab", type=int, metavar="N")
    g.add_argument("--mixture-k", type=float, metavar="X")
    g.add_argument("--score-mode", choices=["verbatim", "asr", "auto"])
    return p


def _config(args):
    overrides = {
        "seed": args.seed,
        "model_kind": args.model_kind,
        "regime": args.regime,
        "discount": args.discount,
        "cutoff": args.cutoff,
        "possible_vocab": args.possible_vocab,
        "mixture_k": args.mixture_k,
        "score_mode": args.score_mode,
    }
    return load_config(args.config, overrides)


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _table(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    def fmt(v):
        return f"{v:.6f}" if isinstance(v, float) else str(v)
    return "\n".join(["\t".join(header)] + ["\t".join(fmt(v) for v in r) for r in rows]) + "\n"


def _figure_path(args) -> Path | None:
    if args.no_plot:
        return None
    if args.plot:
        return Path(args.plot)
    if args.out and args.out != "-":
        return Path(args.out).with_suffix(".png")
    return None


def _load(paths: Sequence[str]):
    docs = load_corpus(paths)
    if not any(d.tokens for d in docs):
        raise ValueError("corpus is empty: " + ", ".join(map(str, paths)))
    return docs


def corpus_stats(docs) -> str:
    counts = Counter()
    n_tokens = 0
    for line in corpus_lines(docs):
        n_tokens += len(line.tokens)
        counts.update(line.class_sequence())
    lines = [f"tokens\t{n_tokens}"]
    lines += [f"class\t{c.name}\t{counts[c]}" for c in ClassLabel]
    lines.append(f"classes present\t{sum(1 for c in ClassLabel if counts[c])}")
    return "\n".join(lines)


def cmd_train(args) -> int:
    cfg = _config(args)
    docs = _load(args.corpus)
    model = ex.train_model(docs, cfg)
    write_model(model, args.out)
    print(corpus_stats(docs))
    print(f"vocabulary\t{len(model.vocab.words)}")
    print(f"model\t{model.kind}\t{args.out}")
    return EXIT_OK


def cmd_tag(args) -> int:
    cfg = _config(args)
    model = read_model(args.model)
    src = sys.stdin.read() if args.input == "-" else Path(args.input).read_text(encoding="utf-8")
    docs = read_transcripts(src, "input", source=args.input)
    _write(write_transcripts(ex.tag_corpus(model, docs, cfg)), args.out)
    return EXIT_OK


def cmd_score(args) -> int:
    cfg = _config(args)
    refs = load_corpus([args.ref])
    hyps = load_corpus([args.hyp])
    print(format_report(score_corpus(refs, hyps, cfg.score_mode)))
    return EXIT_OK


def cmd_generate(args) -> int:
    cfg = _config(args)
    model = read_model(args.generator) if args.generator else fixtures.load_generator()
    if not isinstance(model, ExplicitNEModel):
        raise UsageError("the generator must be an explicit model")
    _write(write_transcripts(sample_corpus(model, args.tokens, seed=cfg.seed)), args.out)
    return EXIT_OK


def cmd_self_train(args) -> int:
    from .plotting import plot_self_train
    cfg = _config(args)
    seed_docs, unlabeled, held = _load([args.seed_corpus]), _load([args.unlabeled]), _load([args.heldout])
    model, steps = ex.self_train(seed_docs, unlabeled, held, args.iterations, cfg)
    _write(_table(*ex.as_rows(steps)), args.out)
    if args.model_out:
        write_model(model, args.model_out)
    fig = _figure_path(args)
    if fig:
        plot_self_train(steps, fig)
    return EXIT_OK


def cmd_learning_curve(args) -> int:
    from .plotting import plot_learning_curve
    cfg = _config(args)
    points = ex.learning_curve(_load(args.corpus), args.fractions, cfg, args.heldout_fraction)
    _write(_table(*ex.as_rows(points)), args.out)
    fig = _figure_path(args)
    if fig:
        plot_learning_curve(points, fig)
    return EXIT_OK


def cmd_mixture_sweep(args) -> int:
    from .plotting import plot_mixture_sweep
    cfg = _config(args)
    model = read_model(args.model)
    if not isinstance(model, ExplicitNEModel):
        raise UsageError("the mixture sweep needs an explicit model")
    points = ex.mixture_sweep(model, _load([args.ref]), args.ks, cfg)
    _write(_table(*ex.as_rows(points)), args.out)
    fig = _figure_path(args)
    if fig:
        plot_mixture_sweep(points, fig)
    return EXIT_OK


def _report_flags(p) -> None:
    p.add_argument("-o", "--out", help="TSV output (default: standard output)")
    p.add_argument("--plot", metavar="PNG", help="figure path (default: next to --out)")
    p.add_argument("--no-plot", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    shared = _shared()
    p = _Parser(prog="netag", description="Named entity tagging with class-word n-gram models.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("train", parents=[shared], help="train and save a model")
    s.add_argument("corpus", nargs="+", help="annotated transcript files")
    s.add_argument("-o", "--out", required=True, help="model file")
    s.set_defaults(func=cmd_train)

    s = sub.add_parser("tag", parents=[shared], help="tag plain text, one utterance per line")
    s.add_argument("model")
    s.add_argument("input", help="text file or - for standard input")
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_tag)

    s = sub.add_parser("score", parents=[shared], help="score a hypothesis against a reference")
    s.add_argument("ref")
    s.add_argument("hyp")
    s.set_defaults(func=cmd_score)

    s = sub.add_parser("generate", parents=[shared], help="sample a synthetic annotated corpus")
    s.add_argument("generator", nargs="?", help="explicit model file (default: bundled generator)")
    s.add_argument("-n", "--tokens", type=int, default=10000)
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("self-train", parents=[shared], help="iterated automatic annotation")
    s.add_argument("seed_corpus")
    s.add_argument("unlabeled")
    s.add_argument("--heldout", required=True)
    s.add_argument("--iterations", type=int, default=3)
    s.add_argument("--model-out")
    _report_flags(s)
    s.set_defaults(func=cmd_self_train)

    s = sub.add_parser("learning-curve", parents=[shared], help="P&R against training size")
    s.add_argument("corpus", nargs="+")
    s.add_argument("--fractions", type=_floats, default=[0.1, 0.2, 0.4, 0.8, 1.0])
    s.add_argument("--heldout-fraction", type=float, default=0.1)
    _report_flags(s)
    s.set_defaults(func=cmd_learning_curve)

    s = sub.add_parser("mixture-sweep", parents=[shared], help="P, R and P&R against mixture weight")
    s.add_argument("model")
    s.add_argument("ref")
    s.add_argument("--ks", type=_floats, default=[0.0, 0.25, 0.5, 0.75, 1.0])
    _report_flags(s)
    s.set_defaults(func=cmd_mixture_sweep)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        print(f"netag: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalDegeneracyError as exc:
        print(f"netag: numerical degeneracy: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (MarkupError, ModelFormatError, EstimationError, OSError, ValueError) as exc:
        print(f"netag: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
