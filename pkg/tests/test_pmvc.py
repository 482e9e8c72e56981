"""Discrete offer game: marginal pricing, payoffs, best replies, pure NE."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vcgames import (
    EnumerationCapExceeded,
    GameInstance,
    StrategyProfile,
    TableValuation,
    Universe,
    all_profiles,
    counterexample_instance,
    payoff_table,
    pmvc_best_response,
    pmvc_outcome,
    pmvc_payoffs,
    pmvc_prices,
    pmvc_pure_ne,
    random_instance,
)

G = counterexample_instance()
U = G.universe


def profile(left, right):
    return StrategyProfile((U.mask_of(left), U.mask_of(right)))


def payoffs(left, right):
    return pmvc_payoffs(G, profile(left, right))


# Every payoff pair of the 4x4 discrete game on the running instance, worked
# out by hand from the subset values.  Payoffs are (vendor owning {a,b},
# vendor owning {c,d}).
PAYOFF_ORACLE = {
    ((), ()): ("0", "0"),
    ((), ("c",)): ("0", "2.803"),
    ((), ("d",)): ("0", "2.703"),
    ((), ("c", "d")): ("0", "2.703"),
    (("a",), ()): ("3.203", "0"),
    (("a",), ("c",)): ("2.601", "2.201"),
    (("a",), ("d",)): ("2.601", "2.101"),
    (("a",), ("c", "d")): ("2.4", "2.301"),
    (("b",), ()): ("2.503", "0"),
    (("b",), ("c",)): ("2.501", "2.801"),
    (("b",), ("d",)): ("2.501", "2.701"),
    (("b",), ("c", "d")): ("2.5", "2.701"),
    (("a", "b"), ()): ("3.103", "0"),
    (("a", "b"), ("c",)): ("2.501", "2.2"),
    (("a", "b"), ("d",)): ("2.501", "2.1"),
    (("a", "b"), ("c", "d")): ("2.1", "2.1"),
}


# -- profiles and parsing --------------------------------------------------


def test_profile_basics():
    s = profile(("a",), ("c", "d"))
    assert s.union_mask == U.mask_of(("a", "c", "d"))
    assert s.format(U) == "{a}|{c,d}"
    assert G.parse_profile("{a}|{c,d}") == s
    assert G.parse_profile("{}|{}") == profile((), ())


def test_parse_profile_errors():
    with pytest.raises(ValueError):
        G.parse_profile("{a}")
    with pytest.raises(ValueError):
        G.parse_profile("{c}|{a}")  # items swapped across owners


def test_check_profile_rejects_unowned_items():
    with pytest.raises(ValueError):
        G.check_profile(StrategyProfile((U.mask_of(("a", "c")), 0)))
    with pytest.raises(ValueError):
        G.check_profile(StrategyProfile((0,)))


def test_instance_validation():
    v = TableValuation(Universe(("x", "y")), [0, 1, 1, 2])
    with pytest.raises(ValueError):
        GameInstance(v, ())
    with pytest.raises(ValueError):
        GameInstance(v, (0b01, 0b11))
    with pytest.raises(ValueError):
        GameInstance(v, (0b01,))
    with pytest.raises(ValueError):
        GameInstance(TableValuation(Universe(("x", "y")), [0, 1, 1, 3]), (0b11,))
    diag = GameInstance(
        TableValuation(Universe(("x", "y")), [0, 1, 1, 3]), (0b11,),
        allow_uncertified=True,
    )
    assert not diag.certified


def test_owner_lookup():
    assert G.owner_of(U.index("a")) == 0
    assert G.owner_of(U.index("d")) == 1


# -- mechanism prices ------------------------------------------------------


def test_prices_full_offer():
    p = pmvc_prices(G, profile(("a", "b"), ("c", "d")))
    assert [str(q.numerator / q.denominator) for q in p.prices] == [
        "1.0", "1.1", "1.1", "1.0",
    ]
    assert p.prices == (Fraction(1), Fraction("1.1"), Fraction("1.1"), Fraction(1))


def test_prices_partial_offer_uses_sentinel():
    p = pmvc_prices(G, profile(("a",), ("c",)))
    sent = Fraction("8.6045")
    assert p.prices[U.index("a")] == Fraction("2.601")
    assert p.prices[U.index("b")] == sent
    assert p.prices[U.index("c")] == Fraction("2.201")
    assert p.prices[U.index("d")] == sent


def test_prices_empty_offer_all_sentinel():
    p = pmvc_prices(G, profile((), ()))
    assert set(p.prices) == {Fraction("8.6045")}


def test_undercut_prices_shave_and_clamp():
    eps = Fraction(1, 1000)
    p = pmvc_prices(G, profile(("a", "b"), ("c", "d")), undercut=eps)
    assert p.prices[U.index("a")] == Fraction("0.999")
    assert p.prices[U.index("b")] == Fraction("1.099")
    # a marginal below eps clamps to zero instead of going negative
    v = TableValuation(Universe(("x", "y")), [0, 1, 1, 1])
    g2 = GameInstance(v, (0b11,))
    p2 = pmvc_prices(g2, StrategyProfile((0b11,)), undercut=Fraction(2))
    assert p2.prices == (Fraction(0), Fraction(0))


def test_undercut_must_be_positive():
    with pytest.raises(ValueError):
        pmvc_prices(G, profile((), ()), undercut=Fraction(0))
    with pytest.raises(ValueError):
        pmvc_prices(G, profile((), ()), undercut=Fraction(-1, 2))


# -- outcomes and payoffs --------------------------------------------------


def test_outcome_full_offer():
    out = pmvc_outcome(G, profile(("a", "b"), ("c", "d")))
    assert out.sold == U.full_mask
    assert out.vendor_payoffs == (Fraction("2.1"), Fraction("2.1"))
    assert out.welfare == Fraction("7.6045")
    assert out.buyer_utility == Fraction("7.6045") - Fraction("4.2")


def test_outcome_monopoly_row():
    out = pmvc_outcome(G, profile(("a",), ()))
    assert out.sold == U.mask_of(("a",))
    assert out.vendor_payoffs == (Fraction("3.203"), Fraction(0))


def test_outcome_mixed_offer():
    out = pmvc_outcome(G, profile(("b",), ("c", "d")))
    assert out.sold == U.mask_of(("b", "c", "d"))
    assert out.vendor_payoffs == (Fraction("2.5"), Fraction("2.701"))


def test_payoff_table_matches_oracle():
    outcomes = payoff_table(G)
    assert len(outcomes) == 16
    seen = {}
    for out in outcomes:
        key = (U.names_of(out.profile.offers[0]), U.names_of(out.profile.offers[1]))
        seen[key] = tuple(str(q) for q in out.vendor_payoffs)
    expected = {
        k: tuple(str(Fraction(x)) for x in pair) for k, pair in PAYOFF_ORACLE.items()
    }
    assert seen == expected


def test_closed_form_matches_demand_route():
    for s in all_profiles(G):
        assert pmvc_payoffs(G, s) == pmvc_outcome(G, s).vendor_payoffs


def test_closed_form_refuses_uncertified():
    v = TableValuation(Universe(("x", "y")), [0, 1, 1, 3])
    g = GameInstance(v, (0b11,), allow_uncertified=True)
    with pytest.raises(ValueError):
        pmvc_payoffs(g, StrategyProfile((0b11,)))


def test_full_sale_on_running_instance():
    for s in all_profiles(G):
        assert pmvc_outcome(G, s).sold == s.union_mask


def test_undercut_outcome_is_strict():
    eps = Fraction(1, 1000)
    out = pmvc_outcome(G, profile(("a", "b"), ("c", "d")), undercut=eps)
    assert out.sold == U.full_mask
    assert out.demand.optima_count == 1
    assert out.vendor_payoffs == (Fraction("2.098"), Fraction("2.098"))


# -- profile enumeration ---------------------------------------------------


def test_all_profiles_order():
    first = [s.format(U) for s in list(all_profiles(G))[:5]]
    assert first == ["{}|{}", "{}|{c}", "{}|{d}", "{}|{c,d}", "{a}|{}"]
    assert len(list(all_profiles(G))) == 16


def test_payoff_table_cap():
    with pytest.raises(EnumerationCapExceeded):
        payoff_table(G, cap=10)


# -- best replies ----------------------------------------------------------


def test_best_response_examples():
    cd = profile((), ("c", "d"))
    assert pmvc_best_response(G, 0, cd) == [U.mask_of(("b",))]
    a_only = profile(("a",), ())
    assert pmvc_best_response(G, 1, a_only) == [U.mask_of(("c", "d"))]
    assert pmvc_payoffs(G, profile(("b",), ("c", "d")))[0] == Fraction("2.5")
    assert pmvc_payoffs(G, profile(("a",), ("c", "d")))[1] == Fraction("2.301")


def test_best_response_empty_vendor():
    v = TableValuation(Universe(("x", "y")), [0, 1, 1, 2])
    g = GameInstance(v, (0b11, 0))
    assert pmvc_best_response(g, 1, StrategyProfile((0b11, 0))) == [0]


def test_best_response_rejects_bad_others():
    with pytest.raises(ValueError):
        pmvc_best_response(G, 0, StrategyProfile((0, U.mask_of(("a",)))))


def test_best_response_diagnostic_route_agrees():
    # the uncertified path reruns demand per candidate; on a certified table
    # both routes must coincide
    v = TableValuation(U, [G.valuation.value_mask(m) for m in range(16)])
    certified = GameInstance(v, G.vendor_masks)
    diagnostic = GameInstance(v, G.vendor_masks, allow_uncertified=True)
    diagnostic.monotone_certified = False  # force the demand route
    for s in all_profiles(certified):
        for i in range(2):
            assert pmvc_best_response(certified, i, s) == pmvc_best_response(
                diagnostic, i, s
            )


# -- pure equilibria -------------------------------------------------------


def test_running_instance_has_no_pure_ne():
    assert pmvc_pure_ne(G) == []


def test_single_item_monopoly_ne():
    v = TableValuation(Universe(("x",)), [0, 2])
    g = GameInstance(v, (0b1,))
    assert pmvc_pure_ne(g) == [StrategyProfile((0b1,))]


def test_pure_ne_cap():
    with pytest.raises(EnumerationCapExceeded):
        pmvc_pure_ne(G, cap=3)


def naive_pure_ne(g):
    """Reference check: literal unilateral-deviation loops over outcomes."""
    found = []
    for s in all_profiles(g):
        base = pmvc_outcome(g, s).vendor_payoffs
        ok = True
        for i in range(g.n_vendors):
            items = g.vendor_items(i)
            offers = list(s.offers)
            for lm in range(1 << len(items)):
                alt = 0
                for j, it in enumerate(items):
                    if lm >> j & 1:
                        alt |= 1 << it
                offers[i] = alt
                if pmvc_outcome(g, StrategyProfile(tuple(offers))).vendor_payoffs[i] > base[i]:
                    ok = False
                    break
            offers[i] = s.offers[i]
            if not ok:
                break
        if ok:
            found.append(s)
    return found


def test_pure_ne_matches_naive_on_running_instance():
    assert pmvc_pure_ne(G) == naive_pure_ne(G)


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(["coverage", "additive-concave"]))
def test_pure_ne_matches_naive_on_random_instances(seed, gen):
    g = random_instance(seed, n_items=4, n_vendors=2, generator=gen)
    assert pmvc_pure_ne(g) == naive_pure_ne(g)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 30))
def test_full_sale_property(seed, profile_seed):
    import random

    g = random_instance(seed, n_items=5, n_vendors=2, generator="coverage")
    rng = random.Random(profile_seed)
    s = StrategyProfile(tuple(_random_offer(rng, m) for m in g.vendor_masks))
    out = pmvc_outcome(g, s)
    assert out.sold == s.union_mask
    assert out.vendor_payoffs == pmvc_payoffs(g, s)


def _random_offer(rng, owned):
    mask = 0
    for b in range(owned.bit_length()):
        if owned >> b & 1 and rng.random() < 0.6:
            mask |= 1 << b
    return mask
