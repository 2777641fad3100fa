import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from netag.estimation import (
    ChainLevel,
    CountTable,
    DiscountedCPD,
    DiscountScheme,
    NumericalDegeneracyError,
    Regime,
    SchemeInapplicableError,
    SchemeKind,
    SmoothingChain,
    UniformTerminal,
    UnigramTerminal,
    absolute_constant,
    backoff_prob,
    build_chain,
    chain_prob,
    compile_chain,
    count_ngrams,
    deleted_interpolation_weights,
    discount,
    distribution_mass,
    good_turing_counts,
    interpolated_prob,
)

SCHEMES = [SchemeKind.GOOD_TURING, SchemeKind.ABSOLUTE, SchemeKind.GT_ABS_COMBINED]


def test_count_examples():
    t = count_ngrams([("x", "a"), ("x", "a"), ("x", "b")])
    assert t.get("x", "a") == 2 and t.get("x", "b") == 1 and t.totals["x"] == 3
    assert len(count_ngrams([])) == 0


def test_count_order_invariant():
    rng = random.Random(3)
    stream = [(rng.choice("xyz"), rng.choice("abcd")) for _ in range(200)]
    base = count_ngrams(stream)
    for _ in range(20):
        rng.shuffle(stream)
        assert count_ngrams(stream) == base


def test_frequency_of_frequencies_conserves_total():
    rng = random.Random(4)
    t = count_ngrams((rng.choice("xyz"), rng.randrange(30)) for _ in range(500))
    n_r = t.frequency_of_frequencies()
    assert sum(r * n for r, n in n_r.items()) == t.total == 500
    for ctx, dist in t.counts.items():
        assert t.totals[ctx] == sum(dist.values())


def test_absolute_single_event():
    t = CountTable()
    t.add("x", "a", 10)
    cpd = discount(t, DiscountScheme(SchemeKind.ABSOLUTE, b=0.5))
    assert cpd.freqs["x"]["a"] == pytest.approx(0.95)
    assert cpd.alpha["x"] == pytest.approx(0.95)


def test_good_turing_applies_only_as_a_discount():
    # r* = 2 * 20 / 40 = 1.0 is no discount, so r = 1 is left to absolute discounting
    assert 1 not in good_turing_counts({1: 40, 2: 20}, 7)
    assert good_turing_counts({1: 40, 2: 10}, 7) == {1: 0.5}
    assert good_turing_counts({1: 40, 2: 10, 3: 1}, 1) == {1: 0.5}


def test_good_turing_worked_counts():
    t = CountTable()
    for i in range(40):
        t.add("x", f"s{i}")
    for i in range(20):
        t.add("x", f"d{i}", 2)
    gt = discount(t, DiscountScheme(SchemeKind.GOOD_TURING))
    assert gt.freqs["x"]["s0"] == pytest.approx(1 / 80)
    comb = discount(t, DiscountScheme(SchemeKind.GT_ABS_COMBINED))
    b = absolute_constant({1: 40, 2: 20})
    assert b == pytest.approx(0.5)
    assert comb.freqs["x"]["s0"] == pytest.approx((1 - b) / 80)


def test_pure_good_turing_inapplicable():
    t = CountTable()
    t.add("x", "a", 1)
    t.add("x", "b", 3)
    with pytest.raises(SchemeInapplicableError, match="combined"):
        discount(t, DiscountScheme(SchemeKind.GOOD_TURING))
    discount(t, DiscountScheme(SchemeKind.GT_ABS_COMBINED))


def test_bad_scheme_parameters():
    with pytest.raises(ValueError):
        DiscountScheme(SchemeKind.ABSOLUTE, b=1.0)
    with pytest.raises(ValueError):
        DiscountScheme(SchemeKind.ABSOLUTE, b=0.0)


def _random_table(rng):
    t = CountTable()
    for _ in range(rng.randint(1, 300)):
        t.add(rng.randrange(5), rng.randrange(rng.randint(1, 40)), rng.choice([1, 1, 1, 2, 3, 5]))
    return t


def test_discount_conservation_500_tables():
    rng = random.Random(5)
    checked = 0
    for _ in range(500):
        t = _random_table(rng)
        for kind in SCHEMES:
            try:
                cpd = discount(t, DiscountScheme(kind))
            except SchemeInapplicableError:
                continue
            checked += 1
            for ctx in t.counts:
                a = cpd.alpha[ctx]
                assert 0.0 < a <= 1.0
                assert math.fsum(cpd.freqs[ctx].values()) == pytest.approx(a, abs=1e-9)
                assert all(f > 0 for f in cpd.freqs[ctx].values())
                if kind is SchemeKind.ABSOLUTE:
                    assert 1.0 - a > 0
    assert checked > 1000


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(1, 20), min_size=1, max_size=10), st.integers(0, 9))
def test_absolute_monotone_in_count(counts, which):
    which %= len(counts)
    t1, t2 = CountTable(), CountTable()
    for i, n in enumerate(counts):
        t1.add("x", i, n)
        t2.add("x", i, n + (i == which))
    s = DiscountScheme(SchemeKind.ABSOLUTE, b=0.5)
    f1 = discount(t1, s).freqs["x"][which] * t1.totals["x"]
    f2 = discount(t2, s).freqs["x"][which] * t2.totals["x"]
    assert f2 >= f1


# deleted interpolation


def test_em_monotone_100_instances():
    rng = random.Random(6)
    for _ in range(100):
        top, low = CountTable(), CountTable()
        events = [(rng.randrange(4), rng.randrange(8)) for _ in range(200)]
        for h, e in events[:150]:
            top.add(h, e)
            low.add((), e)
        held = events[150:]
        fit = deleted_interpolation_weights([top, low], held, projections=[lambda h: h, lambda h: ()],
                                            floor=lambda h, e: 1 / 8, iterations=20)
        ll = fit.loglik
        assert all(b >= a - 1e-9 for a, b in zip(ll, ll[1:]))
        for w in fit.weights.values():
            assert sum(w) == pytest.approx(1.0) and min(w) >= 0


def test_em_recovers_generating_level():
    rng = random.Random(7)
    # held-out events follow the context-specific distribution exactly
    dists = {h: rng.sample(range(50), 3) for h in range(5)}
    top, low = CountTable(), CountTable()
    for _ in range(10000):
        h = rng.randrange(5)
        e = rng.choice(dists[h])
        top.add(h, e)
        low.add((), e)
    held = []
    for _ in range(10000):
        h = rng.randrange(5)
        held.append((h, rng.choice(dists[h])))
    fit = deleted_interpolation_weights([top, low], held, projections=[lambda h: h, lambda h: ()],
                                        bucket=lambda h: 0, iterations=50)
    assert fit.weights[0][0] >= 0.9


def test_em_symmetric_case_and_errors():
    t = CountTable()
    for e in "abab":
        t.add("x", e)
    fit = deleted_interpolation_weights([t, t], [("x", "a"), ("x", "b")], iterations=10)
    (w,) = fit.weights.values()
    assert sum(w) == pytest.approx(1.0)
    assert fit.loglik[0] == pytest.approx(fit.loglik[-1])
    with pytest.raises(ValueError):
        deleted_interpolation_weights([t, t], [])


# chains


def _one_level(regime, freqs, alpha, terminal, alphabet=None):
    cpd = DiscountedCPD({("x",): freqs}, {("x",): alpha})
    return SmoothingChain([ChainLevel((0,), cpd)], terminal, regime, alphabet)


def test_interpolation_worked_values():
    chain = _one_level(Regime.INTERPOLATION, {"a": 0.4, "b": 0.3}, 0.7,
                       UnigramTerminal({"a": 0.2, "b": 0.3, "c": 0.5}))
    assert interpolated_prob(chain, ("x",), "a") == pytest.approx(0.46)
    assert interpolated_prob(chain, ("y",), "a") == pytest.approx(0.2)


def test_backoff_worked_values():
    chain = _one_level(Regime.BACKOFF, {"a": 0.25, "b": 0.45}, 0.7,
                       UnigramTerminal({"a": 0.25, "b": 0.25, "c": 0.1, "d": 0.4}))
    assert backoff_prob(chain, ("x",), "c") == pytest.approx(0.06)
    assert backoff_prob(chain, ("x",), "a") == 0.25
    assert backoff_prob(chain, ("y",), "c") == pytest.approx(0.1)
    table = compile_chain(chain)
    assert table.prob(("x",), "c") == pytest.approx(0.06)


def test_backoff_degenerate_context():
    chain = _one_level(Regime.BACKOFF, {"a": 0.5, "b": 0.3}, 0.8, UnigramTerminal({"a": 0.5, "b": 0.5}))
    with pytest.raises(NumericalDegeneracyError, match="x"):
        backoff_prob(chain, ("x",), "c")
    with pytest.raises(NumericalDegeneracyError):
        compile_chain(chain)


def test_degenerate_contexts_are_undiscounted_in_training():
    # classes {a, b}; context x has seen both, so no back-off mass can be placed
    events = [(("x",), "a"), (("x",), "b"), (("y",), "a")] * 3 + [(("y",), "a")]
    chain = build_chain(events, [(0,), ()], UnigramTerminal({"a": 0.5, "b": 0.5}),
                        DiscountScheme(), Regime.BACKOFF, frozenset("ab"))
    t = chain.compiled
    assert t.prob(("x",), "a") == pytest.approx(0.5)
    assert t.prob(("x",), "a") + t.prob(("x",), "b") == pytest.approx(1.0)


def test_chain_requires_strict_reduction():
    cpd = DiscountedCPD()
    with pytest.raises(ValueError):
        SmoothingChain([ChainLevel((0, 1), cpd), ChainLevel((0, 1), cpd)], UniformTerminal(3), Regime.BACKOFF)
    with pytest.raises(ValueError):
        SmoothingChain([ChainLevel((0,), cpd), ChainLevel((1,), cpd)], UniformTerminal(3), Regime.BACKOFF)


def _random_chain(rng, regime, kind, finite):
    n_ev = rng.randint(2, 12)
    alphabet = list(range(n_ev))
    events = []
    for _ in range(rng.randint(5, 120)):
        h = (rng.randrange(3), rng.randrange(3))
        events.append((h, rng.choice(alphabet[: rng.randint(1, n_ev)])))
    if finite:
        from collections import Counter
        c = Counter(e for _, e in events)
        tot = sum(c.values())
        probs = {e: (c[e] + 1) / (tot + n_ev) for e in alphabet}
        terminal, alpha = UnigramTerminal(probs), frozenset(alphabet)
        size = None
    else:
        terminal, alpha, size = UniformTerminal(n_ev + 5), None, n_ev + 5
    chain = build_chain(events, [(0, 1), (1,), ()] if not finite else [(0, 1), (1,)], terminal,
                        DiscountScheme(kind), regime, alpha)
    return chain, alphabet, size


@pytest.mark.parametrize("regime", list(Regime))
def test_normalization_and_reference_agreement_200_chains(regime):
    rng = random.Random(8)
    built = 0
    while built < 200:
        kind = rng.choice(SCHEMES + [SchemeKind.DELETED_INTERPOLATION])
        finite = rng.random() < 0.5
        try:
            chain, alphabet, size = _random_chain(rng, regime, kind, finite)
        except SchemeInapplicableError:
            continue
        built += 1
        table = chain.compiled
        for j, lvl in enumerate(table.levels):
            for key in list(lvl.logp) + [("novel",) * len(lvl.projection)]:
                assert distribution_mass(table, j, key, alphabet, size) == pytest.approx(1.0, abs=1e-6)
        for h in [(0, 0), (1, 2), (2, 1), (9, 9)]:
            for e in alphabet + ["never"]:
                ref = chain_prob(chain, h, e)
                assert table.prob(h, e) == pytest.approx(ref, rel=1e-9, abs=1e-15)


def test_deterministic_tables():
    rng = random.Random(9)
    events = [((rng.randrange(3), rng.randrange(3)), rng.randrange(6)) for _ in range(300)]
    for kind in SCHEMES + [SchemeKind.DELETED_INTERPOLATION]:
        try:
            a = build_chain(events, [(0, 1), (1,), ()], UniformTerminal(10), DiscountScheme(kind), Regime.BACKOFF)
        except SchemeInapplicableError:
            continue
        b = build_chain(list(events), [(0, 1), (1,), ()], UniformTerminal(10), DiscountScheme(kind), Regime.BACKOFF)
        assert a.compiled == b.compiled


def test_fall_through_when_top_level_removed():
    rng = random.Random(10)
    events = [((rng.randrange(3), rng.randrange(3)), rng.randrange(6)) for _ in range(300)]
    t = build_chain(events, [(0, 1), (1,), ()], UniformTerminal(10), DiscountScheme(), Regime.BACKOFF).compiled
    bare = t.without_level(0)
    for h in [(0, 1), (2, 2)]:
        for e in range(8):
            assert bare.logprob(h, e) == t.logprob_from(1, (h[1],), e)
