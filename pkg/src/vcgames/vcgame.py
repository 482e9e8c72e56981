"""The continuous vendor-competition game: arbitrary nonnegative price vectors.

Vendors price their own items; the buyer purchases through the demand oracle.
The interesting computations are vendor best responses, equilibrium
verification, the revenue-preserving projection onto the discrete
marginal-priced game, and best-response dynamics.

Best responses come in three tiers:

* ``candidate-set`` -- cheap heuristic: offer some C subseteq A_i priced at
  marginal contributions relative to C together with what would sell without
  the vendor; revenue is whatever the demand oracle then actually pays.
  Sound for refuting equilibria, never claimed optimal.
* ``target-set-exact`` -- complete: for a target bought set B the best prices
  solve a linear program (maximize the vendor's share of p(B) subject to the
  buyer weakly preferring B over every other subset), and scanning targets is
  collapsed by a decomposition: the constraint system depends on the target
  only through the vendor's own part B_i and a single scalar, the best
  achievable "outside" utility term, which can be maximized independently.
  Solved with an exact rational simplex.  The optimum is the supremum of
  achievable revenue; ties in the buyer's choice can keep it from being
  realized exactly, in which case shaving any positive epsilon off the
  positive prices realizes a revenue strictly within epsilon * |B_i| of it
  (used when materializing refutation certificates).
* ``grid`` -- exhaustive search over the finite price grid of all marginal
  values plus 0 and the sentinel; realized revenue, used as a cross-check.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from . import exactlp
from .items import bits_of, submasks_of
from .market import PriceVector, demand, sentinel_price
from .pmvc import (
    GameInstance,
    StrategyProfile,
    pmvc_best_response,
    pmvc_outcome,
    pmvc_payoffs,
    pmvc_prices,
)

__all__ = [
    "METHODS",
    "BestResponse",
    "DeviationCertificate",
    "VendorCheck",
    "VerificationResult",
    "TraceStep",
    "DynamicsTrace",
    "SoldSetMismatch",
    "vendor_revenue",
    "vc_best_response",
    "vc_verify_ne",
    "map_to_pmvc",
    "br_dynamics",
]

METHODS = ("candidate-set", "target-set-exact", "grid")
EXACT_MAX_ITEMS = 12
DEFAULT_GRID_CAP = 1 << 20


class SoldSetMismatch(AssertionError):
    """The marginal-priced projection changed the bought set (should be
    impossible for certified instances under the maximal buyer)."""


@dataclass(frozen=True)
class BestResponse:
    """A vendor's best reply against fixed competitor prices.

    ``revenue`` is the method's reported optimum: for ``target-set-exact`` the
    exact supremum, for the other tiers the demand-realized revenue of the
    best candidate found.  ``realized_revenue`` is what the demand oracle pays
    at ``prices`` under the maximal tie rule; it can fall below ``revenue``
    only for the exact tier and only on knife-edge ties.
    """

    vendor: int
    method: str
    prices: dict[int, Fraction]
    revenue: Fraction
    realized_revenue: Fraction
    target_mask: int


@dataclass(frozen=True)
class DeviationCertificate:
    """A concrete profitable deviation; replayable through the demand oracle."""

    vendor: int
    method: str
    prices: dict[int, Fraction]
    old_revenue: Fraction
    new_revenue: Fraction
    undercut: Fraction | None = None


@dataclass(frozen=True)
class VendorCheck:
    vendor: int
    current_revenue: Fraction
    best_revenue: Fraction


@dataclass(frozen=True)
class VerificationResult:
    certified: bool
    method: str
    checks: tuple[VendorCheck, ...]
    certificate: DeviationCertificate | None

    @property
    def status(self) -> str:
        return "ne-certified" if self.certified else "refuted"


@dataclass(frozen=True)
class TraceStep:
    vendor: int
    profile: StrategyProfile | None
    prices: PriceVector | None
    payoffs: tuple[Fraction, ...]


@dataclass(frozen=True)
class DynamicsTrace:
    mode: str
    start: StrategyProfile | PriceVector
    steps: tuple[TraceStep, ...]
    status: str  # converged | cycle | cap
    period: int | None


def _require_certified(g: GameInstance) -> None:
    if not g.certified:
        raise ValueError("vendor-game analysis requires a certified instance")


def vendor_revenue(g: GameInstance, p: PriceVector, vendor: int) -> Fraction:
    """What vendor i earns when the buyer purchases at p."""
    _require_certified(g)
    d = demand(g.valuation, p)
    return p.total(d.chosen & g.vendor_masks[vendor])


# -- target-set-exact ------------------------------------------------------


def _fixed_price_ints(g: GameInstance, p: PriceVector, vendor: int, scale: int):
    """Subset sums of competitors' prices, scaled; own items contribute 0."""
    n = g.universe.n
    owned = g.vendor_masks[vendor]
    per_item = [0] * n
    for item in range(n):
        if not owned & (1 << item):
            q = p.prices[item]
            per_item[item] = q.numerator * (scale // q.denominator)
    psum = [0] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        psum[mask] = psum[mask ^ low] + per_item[low.bit_length() - 1]
    return psum


def _exact_best_response(g: GameInstance, vendor: int, p: PriceVector) -> BestResponse:
    n = g.universe.n
    if n > EXACT_MAX_ITEMS:
        raise ValueError(f"target-set-exact enumerates 2^n targets; capped at {EXACT_MAX_ITEMS} items")
    owned = g.vendor_masks[vendor]
    others = g.universe.full_mask & ~owned
    items = tuple(bits_of(owned))
    ni = len(items)
    table, lv = g.valuation.dense_scaled()
    lp = math.lcm(*(q.denominator for q in p.prices)) if p.prices else 1
    scale = math.lcm(lv, lp)
    if scale != lv:
        mult = scale // lv
        table = [x * mult for x in table]
    pmsum = _fixed_price_ints(g, p, vendor, scale)

    def to_global(lm: int) -> int:
        mask = 0
        for j in bits_of(lm):
            mask |= 1 << items[j]
        return mask

    glob = [to_global(lm) for lm in range(1 << ni)]

    # outside_min[R] = min over competitor-sets S' of p(S') - v(R | S'):
    # the binding term of the buyer's "switch to R plus something else"
    # constraints, independent of the target's outside part.
    outside_min = [0] * (1 << ni)
    for lm in range(1 << ni):
        rg = glob[lm]
        best = None
        for sp in submasks_of(others):
            cand = pmsum[sp] - table[rg | sp]
            if best is None or cand < best:
                best = cand
        outside_min[lm] = best

    # best_const[B_i] = max over outside parts B_out of v(B_i | B_out) - p(B_out);
    # a larger constant relaxes every constraint, so the best target with a
    # given own part uses the maximizing outside part.
    best_const = [0] * (1 << ni)
    best_out = [0] * (1 << ni)
    for lm in range(1 << ni):
        bg = glob[lm]
        best = None
        arg = 0
        for sp in submasks_of(others):
            cand = table[bg | sp] - pmsum[sp]
            if best is None or cand > best:
                best, arg = cand, sp
        best_const[lm] = best
        best_out[lm] = arg

    # subset-min of outside_min, for the feasibility test
    min_outside = list(outside_min)
    for j in range(ni):
        bit = 1 << j
        for lm in range(1 << ni):
            if lm & bit and min_outside[lm ^ bit] < min_outside[lm]:
                min_outside[lm] = min_outside[lm ^ bit]

    sent = sentinel_price(g.valuation)
    best_rev = Fraction(0)
    best_prices: dict[int, Fraction] = {item: sent for item in items}
    best_target = 0
    # selling nothing at all is always available
    order = sorted(
        range(1, 1 << ni),
        key=lambda lm: (-(best_const[lm] + outside_min[0]), lm),
    )
    for lm in order:
        upper = best_const[lm] + outside_min[0]  # the W = B_i constraint row
        if Fraction(upper, scale) <= best_rev:
            break  # sorted descending by this bound; nothing better remains
        if best_const[lm] + min_outside[lm] < 0:
            continue  # no prices make the buyer prefer this target
        var_bits = tuple(bits_of(lm))
        nvars = len(var_bits)
        rows = []
        rhs = []
        for wl in submasks_of(lm):
            if wl == 0:
                continue
            rows.append([Fraction(1 if wl & (1 << b) else 0) for b in var_bits])
            rhs.append(Fraction(best_const[lm] + outside_min[lm ^ wl], scale))
        value, x = exactlp.maximize([Fraction(1)] * nvars, rows, rhs)
        if value > best_rev:
            best_rev = value
            best_target = lm
            best_prices = {item: sent for item in items}
            for j, b in enumerate(var_bits):
                best_prices[items[b]] = x[j]

    full = p.replace(best_prices)
    d = demand(g.valuation, full)
    realized = full.total(d.chosen & owned)
    return BestResponse(
        vendor=vendor,
        method="target-set-exact",
        prices=best_prices,
        revenue=best_rev,
        realized_revenue=realized,
        target_mask=glob[best_target] | best_out[best_target],
    )


# -- candidate-set ---------------------------------------------------------


def _candidate_best_response(g: GameInstance, vendor: int, p: PriceVector) -> BestResponse:
    v = g.valuation
    owned = g.vendor_masks[vendor]
    items = tuple(bits_of(owned))
    sent = sentinel_price(v)
    absent = p.replace({item: sent for item in items})
    backdrop = demand(v, absent).chosen  # what sells without this vendor
    best: BestResponse | None = None
    for lm in range(1 << len(items)):
        offer = 0
        for j in bits_of(lm):
            offer |= 1 << items[j]
        union = offer | backdrop
        v_union = v.value_mask(union)
        updates: dict[int, Fraction] = {item: sent for item in items}
        for item in bits_of(offer):
            updates[item] = v_union - v.value_mask(union ^ (1 << item))
        full = p.replace(updates)
        d = demand(v, full)
        revenue = full.total(d.chosen & offer)
        if best is None or revenue > best.revenue:
            best = BestResponse(
                vendor=vendor,
                method="candidate-set",
                prices=updates,
                revenue=revenue,
                realized_revenue=revenue,
                target_mask=offer,
            )
    return best


# -- grid ------------------------------------------------------------------


def _grid_best_response(
    g: GameInstance, vendor: int, p: PriceVector, grid_cap: int
) -> BestResponse:
    n = g.universe.n
    if n > EXACT_MAX_ITEMS:
        raise ValueError(f"grid search builds the full marginal grid; capped at {EXACT_MAX_ITEMS} items")
    owned = g.vendor_masks[vendor]
    items = tuple(bits_of(owned))
    ni = len(items)
    table, lv = g.valuation.dense_scaled()
    lp = math.lcm(*(q.denominator for q in p.prices)) if p.prices else 1
    scale = math.lcm(lv, lp)
    if scale != lv:
        table = [x * (scale // lv) for x in table]
    grid_ints = {0, table[g.universe.full_mask] + scale}  # 0 and v(A*) + 1
    for mask in range(1, 1 << n):
        v_mask = table[mask]
        for item in bits_of(mask):
            grid_ints.add(v_mask - table[mask ^ (1 << item)])
    grid = sorted(grid_ints)
    if len(grid) ** ni > grid_cap:
        raise ValueError(
            f"grid search would try {len(grid)}^{ni} combinations (cap {grid_cap})"
        )
    pmsum = _fixed_price_ints(g, p, vendor, scale)
    others = g.universe.full_mask & ~owned

    # Prices of competitor items never change across combos, so the choice
    # over the competitor part of the bundle collapses: per own-part o,
    # precompute the best achievable base utility, the union of best rests
    # (for the union tie rule), and the largest best rest (for the fallback).
    base_best = [0] * (1 << n)
    rest_union = [0] * (1 << n)
    rest_max = [0] * (1 << n)
    own_parts = sorted(submasks_of(owned))  # ascending, so subset sums fill in order
    pos_of = {1 << item: j for j, item in enumerate(items)}
    for o in own_parts:
        best = None
        union = 0
        top = 0
        for r in submasks_of(others):
            b = table[o | r] - pmsum[o | r]
            if best is None or b > best:
                best, union, top = b, r, r
            elif b == best:
                union |= r
                if r > top:
                    top = r
        base_best[o] = best
        rest_union[o] = union
        rest_max[o] = top

    best_rev_int = -1
    best_combo: tuple[int, ...] | None = None
    best_target = 0
    ownsum = [0] * (1 << n)
    for combo in itertools.product(grid, repeat=ni):
        for o in own_parts:
            if o:
                low = o & -o
                ownsum[o] = ownsum[o ^ low] + combo[pos_of[low]]
        best = None
        for o in own_parts:
            score = base_best[o] - ownsum[o]
            if best is None or score > best:
                best = score
        union = 0
        top = -1
        for o in own_parts:
            if base_best[o] - ownsum[o] == best:
                union |= o | rest_union[o]
                cand = o | rest_max[o]
                if cand > top:
                    top = cand
        u_union = table[union] - pmsum[union] - ownsum[union & owned]
        chosen = union if u_union == best else top
        rev = ownsum[chosen & owned]
        if rev > best_rev_int:
            best_rev_int = rev
            best_combo = combo
            best_target = chosen & owned
    prices = {
        item: Fraction(q, scale) for item, q in zip(items, best_combo or ())
    }
    revenue = Fraction(best_rev_int if best_rev_int >= 0 else 0, scale)
    replay = p.replace(prices)
    realized = replay.total(demand(g.valuation, replay).chosen & owned)
    return BestResponse(
        vendor=vendor,
        method="grid",
        prices=prices,
        revenue=revenue,
        realized_revenue=realized,
        target_mask=best_target,
    )


def vc_best_response(
    g: GameInstance,
    vendor: int,
    p: PriceVector,
    method: str = "target-set-exact",
    grid_cap: int = DEFAULT_GRID_CAP,
) -> BestResponse:
    """Best reply of one vendor against the competitor prices read from p.

    Entries of p at the vendor's own items are ignored.  See the module
    docstring for the three tiers; only ``target-set-exact`` is complete.
    """
    _require_certified(g)
    if not 0 <= vendor < g.n_vendors:
        raise ValueError(f"no vendor {vendor}")
    if method == "target-set-exact":
        return _exact_best_response(g, vendor, p)
    if method == "candidate-set":
        return _candidate_best_response(g, vendor, p)
    if method == "grid":
        return _grid_best_response(g, vendor, p, grid_cap)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def _materialize_deviation(
    g: GameInstance, vendor: int, p: PriceVector, br: BestResponse, current: Fraction
) -> tuple[dict[int, Fraction], Fraction, Fraction | None]:
    """Turn a supremum-beating reply into a demand-replayable strict gain.

    If the exact prices already realize more than ``current`` they are used
    as-is.  Otherwise every positive price on the target is shaved by a small
    epsilon; any u-maximizer then containing the whole positive-priced part,
    the realized revenue lands within epsilon * |positives| of the supremum.
    """
    if br.realized_revenue > current:
        return br.prices, br.realized_revenue, None
    positives = [
        item
        for item in br.prices
        if br.prices[item] > 0 and (1 << item) & br.target_mask & g.vendor_masks[vendor]
    ]
    if not positives:
        return br.prices, br.realized_revenue, None
    gap = br.revenue - current
    eps = min(min(br.prices[i] for i in positives), gap / len(positives)) / 2
    shaved = dict(br.prices)
    for item in positives:
        shaved[item] = shaved[item] - eps
    full = p.replace(shaved)
    d = demand(g.valuation, full)
    realized = full.total(d.chosen & g.vendor_masks[vendor])
    return shaved, realized, eps


def vc_verify_ne(
    g: GameInstance, p: PriceVector, method: str = "target-set-exact"
) -> VerificationResult:
    """Check every vendor for a profitable deviation.

    A refutation is sound under any method (the certificate is replayable
    through the demand oracle); certification is exact only under
    ``target-set-exact``, whose optimum bounds every deviation's revenue.
    """
    _require_certified(g)
    d = demand(g.valuation, p)
    checks = []
    certificate = None
    for vendor in range(g.n_vendors):
        current = p.total(d.chosen & g.vendor_masks[vendor])
        br = vc_best_response(g, vendor, p, method)
        checks.append(VendorCheck(vendor, current, br.revenue))
        if certificate is None and br.revenue > current:
            prices, realized, eps = _materialize_deviation(g, vendor, p, br, current)
            certificate = DeviationCertificate(
                vendor=vendor,
                method=method,
                prices=prices,
                old_revenue=current,
                new_revenue=realized,
                undercut=eps,
            )
    return VerificationResult(
        certified=certificate is None,
        method=method,
        checks=tuple(checks),
        certificate=certificate,
    )


def map_to_pmvc(
    g: GameInstance, p: PriceVector
) -> tuple[StrategyProfile, tuple[Fraction, ...]]:
    """Project a price vector onto the discrete game: each vendor offers
    exactly what it was selling.  The bought set is preserved and no vendor
    loses revenue (each sold item's price is at most its marginal value, which
    is what the mechanism then charges).  Returns the profile and the
    per-vendor revenue gains.
    """
    _require_certified(g)
    d = demand(g.valuation, p)
    sold = d.chosen
    profile = StrategyProfile(tuple(sold & owned for owned in g.vendor_masks))
    out = pmvc_outcome(g, profile)
    if out.sold != sold:
        raise SoldSetMismatch(
            f"bought set changed: {g.universe.format_set(sold)} -> "
            f"{g.universe.format_set(out.sold)}"
        )
    deltas = tuple(
        out.vendor_payoffs[i] - p.total(sold & g.vendor_masks[i])
        for i in range(g.n_vendors)
    )
    if any(delta < 0 for delta in deltas):
        raise SoldSetMismatch("projection decreased a vendor's revenue")
    return profile, deltas


# -- best-response dynamics ------------------------------------------------


def br_dynamics(
    g: GameInstance,
    start: StrategyProfile | PriceVector,
    mode: str = "discrete",
    order: str = "round-robin",
    max_steps: int = 1000,
) -> DynamicsTrace:
    """Round-robin strict best-response dynamics.

    Discrete mode walks the offer-set game (deviations only on strict payoff
    gains, ties broken toward the smallest offer mask); continuous mode
    re-prices via the exact best response.  States are hashed exactly, so a
    revisited (state, turn) pair is a provable cycle and ``period`` counts the
    moves in it.
    """
    _require_certified(g)
    if order != "round-robin":
        raise ValueError("only round-robin order is supported")
    if mode == "discrete":
        if isinstance(start, PriceVector):
            start, _ = map_to_pmvc(g, start)
        return _discrete_dynamics(g, start, max_steps)
    if mode == "continuous":
        if isinstance(start, StrategyProfile):
            start = pmvc_prices(g, start)
        return _continuous_dynamics(g, start, max_steps)
    raise ValueError(f"unknown mode {mode!r}")


def _discrete_dynamics(g: GameInstance, start: StrategyProfile, max_steps: int) -> DynamicsTrace:
    g.check_profile(start)
    k = g.n_vendors
    state = start
    steps: list[TraceStep] = []
    seen: dict[tuple, int] = {}
    pos = 0
    moves = 0
    quiet = 0
    status = "cap"
    period = None
    while moves < max_steps:
        key = (state.offers, pos)
        if key in seen:
            status = "cycle"
            period = moves - seen[key]
            break
        seen[key] = moves
        vendor = pos
        current = pmvc_payoffs(g, state)[vendor]
        replies = pmvc_best_response(g, vendor, state)
        best_offer = replies[0]
        best_pay = pmvc_payoffs(
            g,
            StrategyProfile(
                state.offers[:vendor] + (best_offer,) + state.offers[vendor + 1:]
            ),
        )[vendor]
        if best_pay > current:
            state = StrategyProfile(
                state.offers[:vendor] + (best_offer,) + state.offers[vendor + 1:]
            )
            moves += 1
            quiet = 0
            steps.append(TraceStep(vendor, state, None, pmvc_payoffs(g, state)))
        else:
            quiet += 1
            if quiet >= k:
                status = "converged"
                break
        pos = (pos + 1) % k
    return DynamicsTrace("discrete", start, tuple(steps), status, period)


def _continuous_dynamics(g: GameInstance, start: PriceVector, max_steps: int) -> DynamicsTrace:
    k = g.n_vendors
    state = start
    steps: list[TraceStep] = []
    seen: dict[tuple, int] = {}
    pos = 0
    moves = 0
    quiet = 0
    status = "cap"
    period = None
    while moves < max_steps:
        key = (state.prices, pos)
        if key in seen:
            status = "cycle"
            period = moves - seen[key]
            break
        seen[key] = moves
        vendor = pos
        current = vendor_revenue(g, state, vendor)
        br = _exact_best_response(g, vendor, state)
        if br.revenue > current:
            # knife-edge optima may not be realized as priced; shave to make
            # the improvement strict in actually-paid revenue
            prices, realized, _ = _materialize_deviation(g, vendor, state, br, current)
            state = state.replace(prices)
            moves += 1
            quiet = 0
            d = demand(g.valuation, state)
            payoffs = tuple(
                state.total(d.chosen & g.vendor_masks[i]) for i in range(k)
            )
            steps.append(TraceStep(vendor, None, state, payoffs))
        else:
            quiet += 1
            if quiet >= k:
                status = "converged"
                break
        pos = (pos + 1) % k
    return DynamicsTrace("continuous", start, tuple(steps), status, period)
