"""The price-moderated vendor-competition (PMVC) game.

Vendors own disjoint item sets A_1..A_k and each picks an offer S_i subseteq A_i.
A mechanism prices every offered item at its marginal contribution to the
joint offer S* = union S_i, namely ``m_a(S* - a) = v(S*) - v(S* - a)``, and
every withheld item at the sentinel ``v(A*) + 1``.  The buyer then purchases
via the demand oracle.

Under a certified monotone-submodular valuation the buyer's maximal choice is
exactly S* (dropping any offered item leaves utility unchanged, adding any
withheld one strictly hurts), so vendor i's payoff collapses to
``sum_{a in S_i} m_a(S* - a)``.  That closed form is what the fast
equilibrium enumeration uses; ``pmvc_outcome`` always goes through the demand
oracle so the invariant stays observable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .items import Universe, bits_of
from .market import DemandResult, PriceVector, demand, sentinel_price
from .valuation import Valuation

__all__ = [
    "GameInstance",
    "StrategyProfile",
    "Outcome",
    "EnumerationCapExceeded",
    "DEFAULT_PROFILE_CAP",
    "pmvc_prices",
    "pmvc_outcome",
    "pmvc_payoffs",
    "all_profiles",
    "payoff_table",
    "pmvc_best_response",
    "pmvc_pure_ne",
]

DEFAULT_PROFILE_CAP = 1 << 20


class EnumerationCapExceeded(RuntimeError):
    """Raised when a profile enumeration would exceed the configured cap."""


@dataclass(frozen=True)
class StrategyProfile:
    """One offer mask per vendor; offers[i] subseteq A_i."""

    offers: tuple[int, ...]

    @property
    def union_mask(self) -> int:
        mask = 0
        for s in self.offers:
            mask |= s
        return mask

    def format(self, universe: Universe) -> str:
        return "|".join(universe.format_set(s) for s in self.offers)


class GameInstance:
    """A valuation plus a disjoint vendor partition of its universe.

    Instances are certified monotone and submodular on construction; pass
    ``allow_uncertified=True`` only for diagnostic fixtures.  Most of the
    vendor-game layer refuses uncertified instances because its shortcuts
    lean on submodularity.
    """

    def __init__(self, valuation: Valuation, vendor_masks: Sequence[int], *,
                 allow_uncertified: bool = False):
        universe = valuation.universe
        masks = tuple(int(m) for m in vendor_masks)
        if not masks:
            raise ValueError("need at least one vendor")
        union = 0
        for m in masks:
            universe._check_mask(m)
            if m & union:
                raise ValueError("vendor item sets must be disjoint")
            union |= m
        if union != universe.full_mask:
            raise ValueError("vendor item sets must cover all items")
        self.valuation = valuation
        self.universe = universe
        self.vendor_masks = masks
        monotone, submodular = valuation.certify()
        self.monotone_certified = monotone
        self.submodular_certified = submodular
        if not allow_uncertified and not (monotone and submodular):
            raise ValueError(
                "valuation failed certification "
                f"(monotone={monotone}, submodular={submodular}); "
                "pass allow_uncertified=True for diagnostic use"
            )

    @property
    def certified(self) -> bool:
        return self.monotone_certified and self.submodular_certified

    @property
    def n_vendors(self) -> int:
        return len(self.vendor_masks)

    @property
    def max_vendor_size(self) -> int:
        return max((m.bit_count() for m in self.vendor_masks), default=0)

    def vendor_items(self, i: int) -> tuple[int, ...]:
        return tuple(bits_of(self.vendor_masks[i]))

    def owner_of(self, item: int) -> int:
        bit = 1 << item
        for i, m in enumerate(self.vendor_masks):
            if m & bit:
                return i
        raise KeyError(f"item {item} not owned")

    def check_profile(self, s: StrategyProfile) -> None:
        if len(s.offers) != self.n_vendors:
            raise ValueError("profile length != vendor count")
        for offer, owned in zip(s.offers, self.vendor_masks):
            if offer & ~owned:
                raise ValueError("vendor offering items it does not own")

    def parse_profile(self, text: str) -> StrategyProfile:
        parts = text.split("|")
        if len(parts) != self.n_vendors:
            raise ValueError(f"expected {self.n_vendors} vendor parts in {text!r}")
        s = StrategyProfile(tuple(self.universe.parse_set(p) for p in parts))
        self.check_profile(s)
        return s


@dataclass(frozen=True)
class Outcome:
    """Mechanism prices, the buyer's purchase, and everyone's payoff."""

    profile: StrategyProfile
    prices: PriceVector
    sold: int
    vendor_payoffs: tuple[Fraction, ...]
    buyer_utility: Fraction
    welfare: Fraction
    demand: DemandResult


def pmvc_prices(g: GameInstance, s: StrategyProfile, undercut: Fraction | None = None) -> PriceVector:
    """Marginal-contribution prices for the offers, sentinel for the rest.

    ``undercut`` is an optional strictly positive rational epsilon; offered
    items are then priced ``max(m_a(S* - a) - eps, 0)``, modeling a vendor
    shaving prices to make the buyer strictly prefer taking everything.
    Default is exact marginal pricing.
    """
    g.check_profile(s)
    if undercut is not None and undercut <= 0:
        raise ValueError("undercut epsilon must be positive")
    v = g.valuation
    union = s.union_mask
    unavailable = sentinel_price(v)
    prices = []
    v_union = v.value_mask(union)
    for item in range(g.universe.n):
        bit = 1 << item
        if union & bit:
            m = v_union - v.value_mask(union ^ bit)
            if undercut is not None:
                m = max(m - undercut, Fraction(0))
            prices.append(m)
        else:
            prices.append(unavailable)
    return PriceVector(g.universe, tuple(prices))


def pmvc_outcome(g: GameInstance, s: StrategyProfile, undercut: Fraction | None = None) -> Outcome:
    """Price the profile, run the buyer, split revenue by ownership."""
    p = pmvc_prices(g, s, undercut)
    d = demand(g.valuation, p)
    payoffs = tuple(
        p.total(d.chosen & owned & offer)
        for owned, offer in zip(g.vendor_masks, s.offers)
    )
    welfare = g.valuation.value_mask(d.chosen)
    return Outcome(s, p, d.chosen, payoffs, d.utility, welfare, d)


def pmvc_payoffs(g: GameInstance, s: StrategyProfile) -> tuple[Fraction, ...]:
    """Closed-form payoffs sum_{a in S_i} m_a(S* - a).

    Equals the demand-based payoffs of ``pmvc_outcome`` whenever the
    valuation is certified (full-sale invariant); refuses otherwise.
    """
    if not g.certified:
        raise ValueError("closed-form payoffs need a certified valuation")
    g.check_profile(s)
    v = g.valuation
    union = s.union_mask
    v_union = v.value_mask(union)
    out = []
    for offer in s.offers:
        total = Fraction(0)
        for item in bits_of(offer):
            total += v_union - v.value_mask(union ^ (1 << item))
        out.append(total)
    return tuple(out)


def _local_to_global(items: tuple[int, ...], local_mask: int) -> int:
    mask = 0
    for j in bits_of(local_mask):
        mask |= 1 << items[j]
    return mask


def all_profiles(g: GameInstance) -> Iterator[StrategyProfile]:
    """Deterministic profile order: per-vendor subsets by ascending local
    index, later vendors cycling fastest (row-major product)."""
    per_vendor = []
    for i in range(g.n_vendors):
        items = g.vendor_items(i)
        per_vendor.append([_local_to_global(items, lm) for lm in range(1 << len(items))])

    def rec(i: int, acc: list[int]) -> Iterator[StrategyProfile]:
        if i == len(per_vendor):
            yield StrategyProfile(tuple(acc))
            return
        for offer in per_vendor[i]:
            acc.append(offer)
            yield from rec(i + 1, acc)
            acc.pop()

    return rec(0, [])


def _profile_count(g: GameInstance) -> int:
    return math.prod(1 << m.bit_count() for m in g.vendor_masks)


def payoff_table(
    g: GameInstance,
    cap: int = DEFAULT_PROFILE_CAP,
    undercut: Fraction | None = None,
) -> list[Outcome]:
    """Full normal form of the discrete game, one demand run per profile."""
    count = _profile_count(g)
    if count > cap:
        raise EnumerationCapExceeded(f"{count} profiles exceed cap {cap}")
    return [pmvc_outcome(g, s, undercut) for s in all_profiles(g)]


def _scaled_game(g: GameInstance, undercut: Fraction | None):
    """Dense integer value table, plus the undercut step in the same scale."""
    table, lv = g.valuation.dense_scaled()
    if undercut is None:
        return table, lv, 0
    scale = math.lcm(lv, Fraction(undercut).denominator)
    if scale != lv:
        mult = scale // lv
        table = [x * mult for x in table]
    eps_int = Fraction(undercut).numerator * (scale // Fraction(undercut).denominator)
    return table, scale, eps_int


def _vendor_payoff_int(table, union: int, offer: int, eps_int: int) -> int:
    v_union = table[union]
    total = 0
    for item in bits_of(offer):
        m = v_union - table[union ^ (1 << item)]
        if eps_int:
            m = max(m - eps_int, 0)
        total += m
    return total


def pmvc_best_response(
    g: GameInstance,
    vendor: int,
    others: StrategyProfile | Sequence[int],
    undercut: Fraction | None = None,
) -> list[int]:
    """All payoff-maximizing offers for one vendor, others' offers fixed.

    Complete enumeration of the 2^{|A_i|} candidate offers; returns every
    maximizer, ascending by mask.  A vendor owning no items has [0].
    """
    offers = others.offers if isinstance(others, StrategyProfile) else tuple(others)
    rest = 0
    for j, offer in enumerate(offers):
        if j != vendor:
            if offer & ~g.vendor_masks[j]:
                raise ValueError("vendor offering items it does not own")
            rest |= offer
    items = g.vendor_items(vendor)
    if g.certified:
        table, _, eps_int = _scaled_game(g, undercut)
        best = None
        winners: list[int] = []
        for lm in range(1 << len(items)):
            mine = _local_to_global(items, lm)
            pay = _vendor_payoff_int(table, rest | mine, mine, eps_int)
            if best is None or pay > best:
                best, winners = pay, [mine]
            elif pay == best:
                winners.append(mine)
        return sorted(winners)
    # diagnostic route: honest demand per candidate offer
    best_f = None
    winners = []
    base = list(offers)
    for lm in range(1 << len(items)):
        mine = _local_to_global(items, lm)
        base[vendor] = mine
        out = pmvc_outcome(g, StrategyProfile(tuple(base)), undercut)
        pay = out.vendor_payoffs[vendor]
        if best_f is None or pay > best_f:
            best_f, winners = pay, [mine]
        elif pay == best_f:
            winners.append(mine)
    return sorted(winners)


def pmvc_pure_ne(
    g: GameInstance,
    cap: int = DEFAULT_PROFILE_CAP,
    undercut: Fraction | None = None,
) -> list[StrategyProfile]:
    """Every pure Nash equilibrium of the discrete game.

    Since vendor sets are disjoint, profiles correspond one-to-one with
    subsets M of the universe via S_i = M & A_i.  For certified valuations the
    closed-form payoffs make this a pair of integer passes per vendor: one to
    tabulate the best reply value against each configuration of the others,
    one to keep the profiles where the vendor already attains it.  Profiles
    come back in the deterministic ``all_profiles`` order.
    """
    count = _profile_count(g)
    if count > cap:
        raise EnumerationCapExceeded(f"{count} profiles exceed cap {cap}")
    n = g.universe.n
    if not g.certified:
        return _pure_ne_diagnostic(g, undercut)
    table, _, eps_int = _scaled_game(g, undercut)
    candidates = list(range(1 << n))
    for i, owned in enumerate(g.vendor_masks):
        best_vs: dict[int, int] = {}
        for m in range(1 << n):
            rest = m & ~owned
            pay = _vendor_payoff_int(table, m, m & owned, eps_int)
            cur = best_vs.get(rest)
            if cur is None or pay > cur:
                best_vs[rest] = pay
        candidates = [
            m
            for m in candidates
            if _vendor_payoff_int(table, m, m & owned, eps_int) == best_vs[m & ~owned]
        ]
    equilibria = [
        StrategyProfile(tuple(m & owned for owned in g.vendor_masks))
        for m in candidates
    ]
    return sorted(equilibria, key=lambda s: _profile_sort_key(g, s))


def _profile_sort_key(g: GameInstance, s: StrategyProfile) -> tuple[int, ...]:
    key = []
    for i, offer in enumerate(s.offers):
        items = g.vendor_items(i)
        local = 0
        for j, item in enumerate(items):
            if offer & (1 << item):
                local |= 1 << j
        key.append(local)
    return tuple(key)


def _pure_ne_diagnostic(g: GameInstance, undercut: Fraction | None) -> list[StrategyProfile]:
    out = []
    for s in all_profiles(g):
        payoffs = pmvc_outcome(g, s, undercut).vendor_payoffs
        if all(
            payoffs[i]
            >= max(
                pmvc_outcome(
                    g,
                    StrategyProfile(s.offers[:i] + (alt,) + s.offers[i + 1:]),
                    undercut,
                ).vendor_payoffs[i]
                for alt in (
                    _local_to_global(g.vendor_items(i), lm)
                    for lm in range(1 << len(g.vendor_items(i)))
                )
            )
            for i in range(g.n_vendors)
        ):
            out.append(s)
    return out
