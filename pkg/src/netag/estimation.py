"""N-gram counting, discounting, and chained smoothing.

A smoothing chain is a list of levels with progressively weaker contexts.
Every level holds discounted relative frequencies ``f`` and the retained
mass ``alpha`` per context; below the last level sits a terminal
distribution (uniform over the possible vocabulary, or an empirical
unigram). Two regimes combine the levels:

* interpolation: ``p = f(e|h) + (1 - alpha(h)) * p_weaker(e)``
* back-off: ``p = f(e|h)`` for seen events, else ``beta(h) * p_weaker(e)``
  with ``beta = (1 - alpha) / (1 - sum of p_weaker over seen events)``.

:func:`compile_chain` turns a chain into a :class:`BackoffTable`: a stored
log10 probability per seen event and a log10 weight per context, the same
shape for both regimes. Models query and serialize the compiled form.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from operator import itemgetter
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

__all__ = [
    "Regime",
    "SchemeKind",
    "DiscountScheme",
    "EstimationError",
    "SchemeInapplicableError",
    "NumericalDegeneracyError",
    "CountTable",
    "count_ngrams",
    "DiscountedCPD",
    "discount",
    "good_turing_counts",
    "absolute_constant",
    "count_bucket",
    "InterpolationFit",
    "deleted_interpolation_weights",
    "UniformTerminal",
    "UnigramTerminal",
    "ChainLevel",
    "SmoothingChain",
    "interpolated_prob",
    "backoff_prob",
    "chain_prob",
    "build_chain",
    "BackoffTable",
    "CompiledLevel",
    "compile_chain",
    "distribution_mass",
    "log10",
]

NEG_INF = float("-inf")
_DEGENERATE_MASS = 1e-12


def log10(p: float) -> float:
    return math.log10(p) if p > 0.0 else NEG_INF


class Regime(Enum):
    INTERPOLATION = "interp"
    BACKOFF = "backoff"


class SchemeKind(Enum):
    GOOD_TURING = "gt"
    ABSOLUTE = "abs"
    GT_ABS_COMBINED = "gt-abs"
    DELETED_INTERPOLATION = "del"


class EstimationError(Exception):
    pass


class SchemeInapplicableError(EstimationError):
    pass


class NumericalDegeneracyError(EstimationError):
    pass


@dataclass(frozen=True)
class DiscountScheme:
    """Discounting method and its parameters.

    ``b`` is the absolute discount; ``None`` estimates it per table as
    ``n1 / (n1 + 2 n2)``. ``gt_threshold`` is the largest count Good-Turing
    may touch. ``heldout_every`` and ``em_iterations`` drive deleted
    interpolation (every k-th event is held out).
    """

    kind: SchemeKind = SchemeKind.GT_ABS_COMBINED
    b: float | None = None
    gt_threshold: int = 7
    heldout_every: int = 10
    em_iterations: int = 50

    def __post_init__(self):
        if self.b is not None and not 0.0 < self.b < 1.0:
            raise ValueError("absolute discount must satisfy 0 < b < 1")
        if self.gt_threshold < 1:
            raise ValueError("gt_threshold must be >= 1")
        if self.heldout_every < 2:
            raise ValueError("heldout_every must be >= 2")


# ---------------------------------------------------------------------------
# counts


class CountTable:
    """Occurrence counts of events per context."""

    def __init__(self):
        self.counts: dict[Hashable, dict[Hashable, int]] = {}
        self.totals: dict[Hashable, int] = {}

    def add(self, context: Hashable, event: Hashable, n: int = 1) -> None:
        dist = self.counts.get(context)
        if dist is None:
            dist = self.counts[context] = {}
            self.totals[context] = 0
        dist[event] = dist.get(event, 0) + n
        self.totals[context] += n

    def get(self, context: Hashable, event: Hashable) -> int:
        return self.counts.get(context, {}).get(event, 0)

    def entries(self):
        for ctx, dist in self.counts.items():
            for ev, n in dist.items():
                yield (ctx, ev), n

    def frequency_of_frequencies(self) -> Counter:
        return Counter(n for dist in self.counts.values() for n in dist.values())

    @property
    def total(self) -> int:
        return sum(self.totals.values())

    def __len__(self) -> int:
        return sum(len(d) for d in self.counts.values())

    def __bool__(self) -> bool:
        return bool(self.counts)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CountTable):
            return NotImplemented
        return self.counts == other.counts and self.totals == other.totals

    def __repr__(self) -> str:
        return f"CountTable({len(self.counts)} contexts, {len(self)} entries)"


def count_ngrams(events: Iterable[tuple[Hashable, Hashable]]) -> CountTable:
    table = CountTable()
    for ctx, ev in events:
        table.add(ctx, ev)
    return table


# ---------------------------------------------------------------------------
# discounting


@dataclass
class DiscountedCPD:
    freqs: dict[Hashable, dict[Hashable, float]] = field(default_factory=dict)
    alpha: dict[Hashable, float] = field(default_factory=dict)

    def f(self, context: Hashable, event: Hashable) -> float:
        return self.freqs.get(context, {}).get(event, 0.0)


def good_turing_counts(n_r: Mapping[int, int], threshold: int) -> dict[int, float]:
    """Good-Turing adjusted counts ``r* = (r+1) n_{r+1} / n_r``.

    Only counts ``r <= threshold`` where the adjustment is a genuine
    discount (``0 < r* < r``) are returned.
    """
    out = {}
    for r in range(1, threshold + 1):
        nr, nr1 = n_r.get(r, 0), n_r.get(r + 1, 0)
        if nr == 0 or nr1 == 0:
            continue
        rs = (r + 1) * nr1 / nr
        if 0.0 < rs < r:
            out[r] = rs
    return out


def absolute_constant(n_r: Mapping[int, int]) -> float:
    n1, n2 = n_r.get(1, 0), n_r.get(2, 0)
    if n1 == 0 or n2 == 0:
        return 0.5
    return n1 / (n1 + 2 * n2)


def count_bucket(total: int) -> int:
    """Context-count bucket for interpolation weights (log2 bins, capped)."""
    if total <= 0:
        return -1
    return min(total.bit_length() - 1, 8)


def _ml(table: CountTable) -> DiscountedCPD:
    cpd = DiscountedCPD()
    for ctx, dist in table.counts.items():
        tot = table.totals[ctx]
        cpd.freqs[ctx] = {e: n / tot for e, n in dist.items()}
        cpd.alpha[ctx] = 1.0
    return cpd


def discount(table: CountTable, scheme: DiscountScheme,
             weights: Mapping[int, float] | None = None,
             bucket: Callable[[int], int] = count_bucket) -> DiscountedCPD:
    """Discounted relative frequencies and retained mass for every context.

    For deleted interpolation ``weights`` maps a context-count bucket to
    the weight given to the relative frequency; buckets without a weight
    borrow the nearest one, and weights are kept inside (0, 1) so every
    stored frequency stays positive.
    """
    if not table:
        raise EstimationError("cannot discount an empty count table")
    kind = scheme.kind
    if kind is SchemeKind.DELETED_INTERPOLATION:
        if weights is None:
            raise ValueError("deleted interpolation needs per-bucket weights")
        cpd = DiscountedCPD()
        for ctx, dist in table.counts.items():
            tot = table.totals[ctx]
            lam = min(max(_nearest(weights, bucket(tot)), 1e-4), 1.0 - 1e-4)
            cpd.freqs[ctx] = {e: lam * n / tot for e, n in dist.items()}
            cpd.alpha[ctx] = math.fsum(cpd.freqs[ctx].values())
        return cpd

    n_r = table.frequency_of_frequencies()
    gt: dict[int, float] = {}
    if kind in (SchemeKind.GOOD_TURING, SchemeKind.GT_ABS_COMBINED):
        if kind is SchemeKind.GOOD_TURING and n_r.get(1, 0) > 0 and n_r.get(2, 0) == 0:
            raise SchemeInapplicableError(
                "Good-Turing needs n_2 > 0 to discount singletons; use the combined GT/absolute scheme")
        gt = good_turing_counts(n_r, scheme.gt_threshold)
    b = scheme.b if scheme.b is not None else absolute_constant(n_r)

    def adjusted(r: int) -> float:
        if kind is SchemeKind.ABSOLUTE:
            return r - b
        rs = gt.get(r)
        if rs is not None:
            return rs
        return r - b if kind is SchemeKind.GT_ABS_COMBINED else float(r)

    cpd = DiscountedCPD()
    for ctx, dist in table.counts.items():
        tot = table.totals[ctx]
        freqs = {e: adjusted(n) / tot for e, n in dist.items()}
        cpd.freqs[ctx] = freqs
        cpd.alpha[ctx] = min(1.0, math.fsum(freqs.values()))
    return cpd


# ---------------------------------------------------------------------------
# deleted interpolation


@dataclass
class InterpolationFit:
    weights: dict[int, tuple[float, ...]]
    loglik: list[float]


def deleted_interpolation_weights(
    levels: Sequence[CountTable],
    heldout: Sequence[tuple[Any, Hashable]],
    *,
    projections: Sequence[Callable[[Any], Hashable]] | None = None,
    floor: Callable[[Any, Hashable], float] | None = None,
    bucket: Callable[[Any], int] | None = None,
    iterations: int = 50,
    tol: float = 0.0,
) -> InterpolationFit:
    """EM estimate of linear interpolation weights on held-out events.

    Component ``j`` is the relative frequency of ``levels[j]`` in the
    context ``projections[j](context)``; ``floor`` adds a final component.
    Weights are fitted separately per ``bucket(context)`` (by default the
    log2 count bucket of the first level's context) and sum to one.
    ``loglik`` records the held-out log-likelihood (natural log) before
    every iteration and after the last.
    """
    if not heldout:
        raise ValueError("held-out stream is empty")
    projections = list(projections) if projections is not None else [lambda h: h] * len(levels)
    if len(projections) != len(levels):
        raise ValueError("one projection per level is required")
    n_comp = len(levels) + (floor is not None)
    if n_comp < 2:
        raise ValueError("interpolation needs at least two components")
    if bucket is None:
        proj0, top = projections[0], levels[0]

        def bucket(h):
            return count_bucket(top.totals.get(proj0(h), 0))

    rows: dict[int, list[list[float]]] = {}
    for h, e in heldout:
        probs = []
        for table, proj in zip(levels, projections):
            ctx = proj(h)
            tot = table.totals.get(ctx, 0)
            probs.append(table.counts[ctx].get(e, 0) / tot if tot else 0.0)
        if floor is not None:
            probs.append(floor(h, e))
        if any(p > 0.0 for p in probs):
            rows.setdefault(bucket(h), []).append(probs)

    weights = {b: [1.0 / n_comp] * n_comp for b in rows}

    def loglik() -> float:
        return math.fsum(math.log(sum(w * p for w, p in zip(weights[b], r)))
                         for b, rs in rows.items() for r in rs)

    history = [loglik()]
    for _ in range(iterations):
        for b, rs in rows.items():
            w = weights[b]
            acc = [0.0] * n_comp
            for r in rs:
                mix = [wj * pj for wj, pj in zip(w, r)]
                z = sum(mix)
                for j in range(n_comp):
                    acc[j] += mix[j] / z
            weights[b] = [a / len(rs) for a in acc]
        history.append(loglik())
        if tol and history[-1] - history[-2] < tol:
            break
    return InterpolationFit({b: tuple(w) for b, w in weights.items()}, history)


# ---------------------------------------------------------------------------
# chains


@dataclass(frozen=True)
class UniformTerminal:
    size: int

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("uniform terminal needs a positive size")

    def prob(self, event: Hashable) -> float:
        return 1.0 / self.size

    def logprob(self, event: Hashable) -> float:
        return -math.log10(self.size)


@dataclass(frozen=True)
class UnigramTerminal:
    probs: Mapping[Hashable, float]

    def prob(self, event: Hashable) -> float:
        return self.probs.get(event, 0.0)

    def logprob(self, event: Hashable) -> float:
        return log10(self.probs.get(event, 0.0))


Terminal = UniformTerminal | UnigramTerminal


@dataclass
class ChainLevel:
    projection: tuple[int, ...]
    cpd: DiscountedCPD


@dataclass
class SmoothingChain:
    """Levels from strongest to weakest context, then a terminal.

    ``alphabet`` is the finite event set when there is one (classes); for
    words it is ``None`` and the terminal is uniform over the possible
    vocabulary.
    """

    levels: list[ChainLevel]
    terminal: Terminal
    regime: Regime
    alphabet: frozenset | None = None

    def __post_init__(self):
        for upper, lower in zip(self.levels, self.levels[1:]):
            if not (set(lower.projection) < set(upper.projection)):
                raise ValueError("each level's context must strictly reduce the previous one")


def _project(context: Sequence, proj: tuple[int, ...]) -> tuple:
    return tuple(context[i] for i in proj)


def _weaker_prob(chain: SmoothingChain, j: int, context: Sequence, event: Hashable) -> float:
    if j >= len(chain.levels):
        return chain.terminal.prob(event)
    if chain.regime is Regime.INTERPOLATION:
        return _interp(chain, j, context, event)
    return _backoff(chain, j, context, event)


def _interp(chain: SmoothingChain, j: int, context: Sequence, event: Hashable) -> float:
    lvl = chain.levels[j]
    key = _project(context, lvl.projection)
    alpha = lvl.cpd.alpha.get(key, 0.0)
    return lvl.cpd.f(key, event) + (1.0 - alpha) * _weaker_prob(chain, j + 1, context, event)


def _unseen_weaker_mass(chain: SmoothingChain, j: int, context: Sequence, seen: Iterable[Hashable]) -> float:
    seen = list(seen)
    if chain.alphabet is not None:
        seen_set = set(seen)
        return math.fsum(_weaker_prob(chain, j + 1, context, e) for e in sorted(chain.alphabet - seen_set, key=repr))
    return 1.0 - math.fsum(_weaker_prob(chain, j + 1, context, e) for e in seen)


def _backoff(chain: SmoothingChain, j: int, context: Sequence, event: Hashable) -> float:
    lvl = chain.levels[j]
    key = _project(context, lvl.projection)
    freqs = lvl.cpd.freqs.get(key)
    if freqs is None:
        return _weaker_prob(chain, j + 1, context, event)
    if event in freqs:
        return freqs[event]
    left = 1.0 - lvl.cpd.alpha[key]
    if left <= 0.0:
        return 0.0
    denom = _unseen_weaker_mass(chain, j, context, freqs)
    if denom <= 0.0:
        raise NumericalDegeneracyError(f"back-off denominator {denom!r} <= 0 in context {key!r}")
    return left / denom * _weaker_prob(chain, j + 1, context, event)


def interpolated_prob(chain: SmoothingChain, context: Sequence, event: Hashable) -> float:
    if chain.regime is not Regime.INTERPOLATION:
        raise ValueError("chain is not an interpolation chain")
    return _weaker_prob(chain, 0, context, event)


def backoff_prob(chain: SmoothingChain, context: Sequence, event: Hashable) -> float:
    if chain.regime is not Regime.BACKOFF:
        raise ValueError("chain is not a back-off chain")
    return _weaker_prob(chain, 0, context, event)


def chain_prob(chain: SmoothingChain, context: Sequence, event: Hashable) -> float:
    return _weaker_prob(chain, 0, context, event)


def _split_heldout(events: Sequence, every: int):
    train = [ev for i, ev in enumerate(events) if i % every != every - 1]
    held = [ev for i, ev in enumerate(events) if i % every == every - 1]
    return train, held


def build_chain(
    events: Sequence[tuple[tuple, Hashable]],
    projections: Sequence[tuple[int, ...]],
    terminal: Terminal,
    scheme: DiscountScheme,
    regime: Regime,
    alphabet: frozenset | None = None,
) -> SmoothingChain:
    """Count, discount and assemble a chain from (full context, event) pairs.

    Under back-off, a context whose seen events already carry all of the
    weaker model's mass keeps its undiscounted relative frequencies, since
    there is nowhere to put the reserved mass. The compiled table is built
    along the way and cached on the chain.
    """
    if not events:
        raise EstimationError("no training events")
    projections = [tuple(p) for p in projections]
    tables = [count_ngrams((_project(h, p), e) for h, e in events) for p in projections]

    if scheme.kind is SchemeKind.DELETED_INTERPOLATION:
        cpds = _deleted_interpolation_cpds(events, projections, tables, terminal, scheme, regime, alphabet)
    else:
        cpds = [discount(t, scheme) for t in tables]

    chain = SmoothingChain([ChainLevel(p, c) for p, c in zip(projections, cpds)], terminal, regime, alphabet)
    chain.compiled = _compile(chain, tables)
    return chain


def _nearest(weights: Mapping[int, float], b: int) -> float:
    if b in weights:
        return weights[b]
    if not weights:
        return 0.5
    return weights[min(weights, key=lambda k: (abs(k - b), -k))]


def _deleted_interpolation_cpds(events, projections, tables, terminal, scheme, regime, alphabet):
    train, held = _split_heldout(events, scheme.heldout_every)
    if not held or not train:
        return [_ml(t) for t in tables]
    train_tables = [count_ngrams((_project(h, p), e) for h, e in train) for p in projections]
    n = len(projections)
    lams: list[dict[int, float]] = [{} for _ in range(n)]
    train_chain = SmoothingChain([ChainLevel(p, DiscountedCPD()) for p in projections],
                                 terminal, regime, alphabet)
    partial = BackoffTable(BackoffTable.make_levels(projections, [({}, {}) for _ in range(n)]),
                           terminal, regime, alphabet)
    for j in reversed(range(n)):
        proj = projections[j]

        def floor(h, e, j=j):
            if j + 1 >= n:
                return terminal.prob(e)
            key = _project(h, projections[j + 1])
            return 10.0 ** partial.logprob_from(j + 1, key, e)

        fit = deleted_interpolation_weights(
            [train_tables[j]], held, projections=[lambda h, p=proj: _project(h, p)],
            floor=floor, iterations=scheme.em_iterations)
        lams[j] = {b: w[0] for b, w in fit.weights.items()}
        train_chain.levels[j].cpd = discount(train_tables[j], scheme, lams[j])
        _compile_level(partial, train_chain, j, train_tables[j])
    return [discount(t, scheme, lam) for t, lam in zip(tables, lams)]


# ---------------------------------------------------------------------------
# compiled form


def _getter(idx: tuple[int, ...]) -> Callable[[Sequence], tuple]:
    if not idx:
        return lambda k: ()
    if len(idx) == 1:
        i = idx[0]
        return lambda k: (k[i],)
    return itemgetter(*idx)


@dataclass
class CompiledLevel:
    """Stored log10 probabilities and per-context log10 weights.

    ``sub`` indexes the previous level's key (the full context for the
    first level).
    """

    projection: tuple[int, ...]
    sub: tuple[int, ...]
    logp: dict[tuple, dict[Hashable, float]]
    logw: dict[tuple, float]

    def __post_init__(self):
        self._get = _getter(self.sub)


class BackoffTable:
    """Query-time form of a smoothing chain (ARPA-style)."""

    def __init__(self, levels: list[CompiledLevel], terminal: Terminal, regime: Regime,
                 alphabet: frozenset | None = None):
        self.levels = levels
        self.terminal = terminal
        self.regime = regime
        self.alphabet = alphabet

    @staticmethod
    def make_levels(projections: Sequence[tuple[int, ...]], tables: Sequence[tuple[dict, dict]]) -> list[CompiledLevel]:
        out = []
        prev: tuple[int, ...] | None = None
        for proj, (logp, logw) in zip(projections, tables):
            sub = proj if prev is None else tuple(prev.index(i) for i in proj)
            out.append(CompiledLevel(tuple(proj), sub, logp, logw))
            prev = tuple(proj)
        return out

    def logprob(self, context: Sequence, event: Hashable) -> float:
        acc = 0.0
        key = context
        for lvl in self.levels:
            key = lvl._get(key)
            dist = lvl.logp.get(key)
            if dist is not None:
                lp = dist.get(event)
                if lp is not None:
                    return acc + lp
                acc += lvl.logw[key]
        return acc + self.terminal.logprob(event)

    def logprob_from(self, j: int, key: tuple, event: Hashable) -> float:
        """Query starting at level ``j`` with that level's own context key."""
        acc = 0.0
        for n, lvl in enumerate(self.levels[j:]):
            if n:
                key = lvl._get(key)
            dist = lvl.logp.get(key)
            if dist is not None:
                lp = dist.get(event)
                if lp is not None:
                    return acc + lp
                acc += lvl.logw[key]
        return acc + self.terminal.logprob(event)

    def prob(self, context: Sequence, event: Hashable) -> float:
        return 10.0 ** self.logprob(context, event)

    def contexts(self, j: int):
        return self.levels[j].logp.keys()

    def without_level(self, j: int) -> "BackoffTable":
        """Same table with level ``j`` emptied (every context unseen there)."""
        levels = list(self.levels)
        lvl = levels[j]
        levels[j] = CompiledLevel(lvl.projection, lvl.sub, {}, {})
        return BackoffTable(levels, self.terminal, self.regime, self.alphabet)

    def n_entries(self) -> int:
        return sum(len(d) for lvl in self.levels for d in lvl.logp.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BackoffTable):
            return NotImplemented
        return (self.regime == other.regime and self.terminal == other.terminal
                and [(l.projection, l.logp, l.logw) for l in self.levels]
                == [(l.projection, l.logp, l.logw) for l in other.levels])


def _compile_level(table: BackoffTable, chain: SmoothingChain, j: int,
                   counts: CountTable | None = None) -> None:
    """Fill compiled level ``j``; levels below it must already be compiled.

    With ``counts`` given, degenerate back-off contexts are reset to their
    relative frequencies (updating the chain) instead of raising.
    """
    n = len(chain.levels)
    cpd = chain.levels[j].cpd
    logp, logw = table.levels[j].logp, table.levels[j].logw
    logp.clear()
    logw.clear()
    nxt = j + 1

    def weaker(key, e):
        if nxt < n:
            return 10.0 ** table.logprob_from(nxt, table.levels[nxt]._get(key), e)
        return chain.terminal.prob(e)

    for key, freqs in cpd.freqs.items():
        left = 1.0 - cpd.alpha[key]
        if chain.regime is Regime.INTERPOLATION:
            logp[key] = {e: log10(f + left * weaker(key, e)) for e, f in freqs.items()}
            logw[key] = log10(left)
            continue
        if left > 0.0:
            if chain.alphabet is not None:
                denom = math.fsum(weaker(key, e) for e in sorted(chain.alphabet - freqs.keys(), key=repr))
            else:
                denom = 1.0 - math.fsum(weaker(key, e) for e in freqs)
            if denom <= _DEGENERATE_MASS:
                if counts is None:
                    raise NumericalDegeneracyError(f"back-off denominator {denom!r} <= 0 in context {key!r}")
                tot = counts.totals[key]
                freqs = cpd.freqs[key] = {e: c / tot for e, c in counts.counts[key].items()}
                cpd.alpha[key] = 1.0
                left = 0.0
        logp[key] = {e: log10(f) for e, f in freqs.items()}
        logw[key] = log10(left / denom) if left > 0.0 else NEG_INF


def _compile(chain: SmoothingChain, counts: Sequence[CountTable] | None = None) -> BackoffTable:
    n = len(chain.levels)
    projections = [lvl.projection for lvl in chain.levels]
    table = BackoffTable(BackoffTable.make_levels(projections, [({}, {}) for _ in range(n)]),
                         chain.terminal, chain.regime, chain.alphabet)
    for j in reversed(range(n)):
        _compile_level(table, chain, j, counts[j] if counts is not None else None)
    return table


def compile_chain(chain: SmoothingChain) -> BackoffTable:
    cached = getattr(chain, "compiled", None)
    if cached is not None:
        return cached
    return _compile(chain)


def distribution_mass(table: BackoffTable, j: int, key: tuple, events: Iterable[Hashable],
                      alphabet_size: int | None = None) -> float:
    """Total probability over an event alphabet for one level-``j`` context.

    ``events`` lists the known events; when ``alphabet_size`` exceeds their
    number the remaining (interchangeable, never stored) events are added
    through a single novel probe.
    """
    events = list(events)
    total = math.fsum(10.0 ** table.logprob_from(j, key, e) for e in events)
    if alphabet_size is not None and alphabet_size > len(events):
        probe = object()
        total += (alphabet_size - len(events)) * 10.0 ** table.logprob_from(j, key, probe)
    return total
