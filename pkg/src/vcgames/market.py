"""The buyer side: quasi-linear utility and the demand oracle.

The buyer sees a price per item and buys a utility-maximizing subset,
``u(S) = v(S) - p(S)``.  Ties are resolved toward buying more: ``demand``
returns the union of all maximizers whenever that union is itself a
maximizer.  The union can fail to be optimal even for submodular valuations
(demand families of submodular valuations are not closed under union in
general -- that needs gross substitutes), so there is a documented fallback:
the largest maximizer in the canonical subset order.  Since the bitmask order
refines strict inclusion, that fallback is always a maximal maximizer.

Items a vendor withholds are modeled with the sentinel price ``v(A*) + 1``,
an exact rational that no rational buyer ever pays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .items import Universe, bits_of
from .valuation import Valuation

__all__ = [
    "PriceVector",
    "DemandResult",
    "sentinel_price",
    "buyer_utility",
    "demand",
    "demand_all",
]

DEMAND_ALL_MAX_ITEMS = 16


@dataclass(frozen=True)
class PriceVector:
    """One nonnegative exact price per item of a universe."""

    universe: Universe
    prices: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.prices) != self.universe.n:
            raise ValueError("need one price per item")
        object.__setattr__(self, "prices", tuple(Fraction(p) for p in self.prices))
        if any(p < 0 for p in self.prices):
            raise ValueError("prices must be nonnegative")

    def total(self, mask: int) -> Fraction:
        self.universe._check_mask(mask)
        return sum((self.prices[i] for i in bits_of(mask)), Fraction(0))

    def replace(self, updates: dict[int, Fraction]) -> "PriceVector":
        prices = list(self.prices)
        for i, q in updates.items():
            prices[i] = Fraction(q)
        return PriceVector(self.universe, tuple(prices))

    def format(self) -> str:
        from .rationals import format_rational

        pairs = (
            f"{name}={format_rational(p)}"
            for name, p in zip(self.universe.names, self.prices)
        )
        return ", ".join(pairs)


@dataclass(frozen=True)
class DemandResult:
    """What the buyer picks: the chosen set, its utility, and tie diagnostics."""

    chosen: int
    utility: Fraction
    optima_count: int
    union_is_optimal: bool


def sentinel_price(v: Valuation) -> Fraction:
    """The 'not for sale' price: v(A*) + 1, strictly above any marginal value."""
    return v.value_mask(v.universe.full_mask) + 1


def buyer_utility(v: Valuation, p: PriceVector, mask: int) -> Fraction:
    return v.value_mask(mask) - p.total(mask)


def _scaled_utilities(v: Valuation, p: PriceVector) -> tuple[list[int], int]:
    """Utilities of all subsets as exact integers over a common denominator."""
    table, lv = v.dense_scaled()
    lp = math.lcm(*(q.denominator for q in p.prices)) if p.prices else 1
    scale = math.lcm(lv, lp)
    mv = scale // lv
    price_int = [q.numerator * (scale // q.denominator) for q in p.prices]
    n = v.universe.n
    psum = [0] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        psum[mask] = psum[mask ^ low] + price_int[low.bit_length() - 1]
    utils = [table[m] * mv - psum[m] for m in range(1 << n)]
    return utils, scale


def _scan_utilities(utils: list[int]) -> tuple[int, int, int, bool]:
    """Apply the tie rule to a dense utility list.

    Returns ``(chosen, best, count, union_ok)``.  The chosen set is the union
    of all maximizers when that union also maximizes, else the maximizer with
    the largest bitmask.
    """
    best = utils[0]
    union = 0
    count = 0
    best_mask = 0
    for mask, u in enumerate(utils):
        if u > best:
            best = u
            union = mask
            count = 1
            best_mask = mask
        elif u == best:
            union |= mask
            count += 1
            best_mask = mask
    union_ok = utils[union] == best
    chosen = union if union_ok else best_mask
    return chosen, best, count, union_ok


def demand(v: Valuation, p: PriceVector) -> DemandResult:
    """The buyer's purchase under maximal tie-breaking.

    Enumerates all 2^n subsets exactly.  ``union_is_optimal`` records whether
    the union of maximizers was itself a maximizer; when it is not, the chosen
    set is the maximizer with the largest bitmask (a maximal one, since the
    bitmask order extends strict inclusion).
    """
    if p.universe is not v.universe and p.universe != v.universe:
        raise ValueError("price vector universe mismatch")
    utils, scale = _scaled_utilities(v, p)
    chosen, _, count, union_ok = _scan_utilities(utils)
    return DemandResult(chosen, Fraction(utils[chosen], scale), count, union_ok)


def demand_all(v: Valuation, p: PriceVector) -> list[int]:
    """All utility-maximizing subsets, ascending by mask.  Capped at 16 items."""
    if v.universe.n > DEMAND_ALL_MAX_ITEMS:
        raise ValueError(
            f"demand_all enumerates maximizers explicitly; capped at {DEMAND_ALL_MAX_ITEMS} items"
        )
    utils, _ = _scaled_utilities(v, p)
    best = max(utils)
    return [mask for mask, u in enumerate(utils) if u == best]
