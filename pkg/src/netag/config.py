"""Run configuration: defaults, flat ``key=value`` files and overrides."""
from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Mapping

from .corpus import ClassLabel
from .estimation import DiscountScheme, Regime, SchemeKind

__all__ = ["RunConfig", "ConfigError", "load_config", "parse_config"]


class ConfigError(ValueError):
    pass


def _tie_order(value) -> tuple[ClassLabel, ...]:
    if isinstance(value, str):
        value = [v for v in value.replace(",", " ").split() if v]
    order = tuple(v if isinstance(v, ClassLabel) else ClassLabel[str(v).upper()] for v in value)
    if sorted(order) != sorted(ClassLabel):
        raise ConfigError("tie_order must list every class exactly once")
    return order


def _optional_float(v):
    if v is None or (isinstance(v, str) and v.lower() in ("", "none", "auto")):
        return None
    return float(v)


def _score_mode(v):
    if v is None or v in ("", "auto"):
        return None
    if v not in ("verbatim", "asr"):
        raise ConfigError(f"score_mode must be verbatim, asr or auto, not {v!r}")
    return v


def _kind(v):
    v = str(v).lower()
    if v not in ("implicit", "explicit"):
        raise ConfigError(f"model_kind must be implicit or explicit, not {v!r}")
    return v


_PARSERS = {
    "cutoff": int,
    "possible_vocab": int,
    "discount": lambda v: v if isinstance(v, SchemeKind) else SchemeKind(v),
    "abs_b": _optional_float,
    "gt_threshold": int,
    "regime": lambda v: v if isinstance(v, Regime) else Regime(v),
    "mixture_k": float,
    "tie_order": _tie_order,
    "seed": int,
    "model_kind": _kind,
    "score_mode": _score_mode,
    "order": int,
}


@dataclass(frozen=True)
class RunConfig:
    cutoff: int = 1
    possible_vocab: int = 60000
    discount: SchemeKind = SchemeKind.GT_ABS_COMBINED
    abs_b: float | None = None
    gt_threshold: int = 7
    regime: Regime = Regime.BACKOFF
    mixture_k: float = 0.0
    tie_order: tuple[ClassLabel, ...] = field(default_factory=lambda: tuple(ClassLabel))
    seed: int = 0
    model_kind: str = "explicit"
    score_mode: str | None = None
    order: int = 3

    def __post_init__(self):
        if self.cutoff < 0:
            raise ConfigError("cutoff must be >= 0")
        if self.possible_vocab < 1:
            raise ConfigError("possible_vocab must be positive")
        if not 0.0 <= self.mixture_k <= 1.0:
            raise ConfigError("mixture_k must lie in [0, 1]")
        if self.order not in (1, 2, 3):
            raise ConfigError("order must be 1, 2 or 3")
        try:
            self.scheme()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def scheme(self) -> DiscountScheme:
        return DiscountScheme(self.discount, self.abs_b, self.gt_threshold)

    def updated(self, values: Mapping[str, Any]) -> "RunConfig":
        """Copy with ``values`` applied; None values are ignored."""
        known = {f.name for f in fields(self)}
        changes = {}
        for key, raw in values.items():
            if key not in known:
                raise ConfigError(f"unknown configuration key {key!r}")
            if raw is None:
                continue
            try:
                changes[key] = _PARSERS[key](raw)
            except (ValueError, KeyError) as exc:
                raise ConfigError(f"bad value for {key}: {raw!r}") from exc
        return replace(self, **changes)


def parse_config(text: str, source: str = "<config>") -> dict[str, str]:
    values = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{source}:{n}: expected key=value")
        key = key.strip().replace("-", "_")
        if key in values:
            raise ConfigError(f"{source}:{n}: duplicate key {key!r}")
        values[key] = value.strip()
    return values


def load_config(path: str | Path | None = None, overrides: Mapping[str, Any] | None = None) -> RunConfig:
    """Defaults, then the file, then ``overrides`` (highest precedence)."""
    cfg = RunConfig()
    if path is not None:
        cfg = cfg.updated(parse_config(Path(path).read_text(), str(path)))
    if overrides:
        cfg = cfg.updated(overrides)
    return cfg
