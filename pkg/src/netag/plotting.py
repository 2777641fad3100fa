"""Figures for the experiment reports (written to image files)."""
from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["plot_learning_curve", "plot_self_train", "plot_mixture_sweep"]


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_learning_curve(points: Sequence, path: str | Path) -> Path:
    fig, ax = plt.subplots(figsize=(5, 3.5))
    x = [p.train_tokens for p in points]
    ax.plot(x, [p.PR for p in points], "o-", label="P&R")
    ax.plot(x, [p.R for p in points], "s--", label="recall", alpha=0.7)
    ax.plot(x, [p.P for p in points], "^--", label="precision", alpha=0.7)
    ax.set_xscale("log")
    ax.set_xlabel("training tokens")
    ax.set_ylabel("score")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    return _save(fig, path)


def plot_self_train(steps: Sequence, path: str | Path) -> Path:
    fig, ax = plt.subplots(figsize=(5, 3.5))
    x = [s.iteration for s in steps]
    ax.plot(x, [s.PR for s in steps], "o-", label="P&R")
    ax.plot(x, [s.R for s in steps], "s--", label="recall", alpha=0.7)
    ax.plot(x, [s.P for s in steps], "^--", label="precision", alpha=0.7)
    ax.set_xticks(x)
    ax.set_xlabel("iteration")
    ax.set_ylabel("held-out score")
    ax.grid(True, alpha=0.3)
    ax.legend()
    return _save(fig, path)


def plot_mixture_sweep(points: Sequence, path: str | Path) -> Path:
    fig, ax = plt.subplots(figsize=(5, 3.5))
    x = [p.k for p in points]
    ax.plot(x, [p.P for p in points], "^-", label="precision")
    ax.plot(x, [p.R for p in points], "s-", label="recall")
    ax.plot(x, [p.PR for p in points], "o-", label="P&R")
    ax.set_xlabel("mixture weight k")
    ax.set_ylabel("score")
    ax.grid(True, alpha=0.3)
    ax.legend()
    return _save(fig, path)
