"""JSON and CSV encodings for instances, tables, reports, and traces.

All numbers travel as strings: exact decimals when the denominator allows,
"num/den" otherwise.  Loading accepts both forms everywhere, so files
round-trip bit-exactly.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Any

from .analysis import EquilibriumReport
from .items import bits_of, Universe
from .market import PriceVector
from .pmvc import GameInstance, StrategyProfile
from .rationals import format_rational, parse_rational
from .valuation import (
    AdditiveGroupsValuation,
    CategoryMaxValuation,
    TableValuation,
    Valuation,
)
from .vcgame import BestResponse, DynamicsTrace, VerificationResult

__all__ = [
    "SchemaError",
    "valuation_to_obj",
    "valuation_from_obj",
    "instance_to_obj",
    "instance_from_obj",
    "load_instance",
    "dump_instance",
    "prices_to_obj",
    "prices_from_obj",
    "payoff_table_csv",
    "payoff_table_obj",
    "report_to_obj",
    "report_to_text",
    "trace_to_jsonl",
    "verification_to_obj",
    "best_response_to_obj",
]


class SchemaError(ValueError):
    """Structurally invalid instance or report data."""


def _fmt(q: Fraction) -> str:
    return format_rational(q)


def _names(u: Universe, mask: int) -> list[str]:
    return [u.items[i].name for i in bits_of(mask)]


def _need(data: dict, key: str, kind: type, where: str):
    if key not in data:
        raise SchemaError(f"{where}: missing required field {key!r}")
    value = data[key]
    if not isinstance(value, kind):
        raise SchemaError(f"{where}: field {key!r} must be {kind.__name__}")
    return value


# -- valuations ------------------------------------------------------------


def valuation_to_obj(v: Valuation) -> dict[str, Any]:
    u = v.universe
    if isinstance(v, TableValuation):
        entries = {}
        for mask in range(1, 1 << u.n):
            entries[",".join(_names(u, mask))] = _fmt(v.value_mask(mask))
        return {"type": "table", "items": [it.name for it in u.items], "entries": entries}
    if isinstance(v, AdditiveGroupsValuation):
        return {
            "type": "additive_groups",
            "items": [it.name for it in u.items],
            "groups": [_names(u, g) for g in v.group_masks],
            "curve": {"kind": "explicit", "values": [_fmt(q) for q in v.curve]},
        }
    if isinstance(v, CategoryMaxValuation):
        return {
            "type": "category_max",
            "items": [it.name for it in u.items],
            "categories": [_names(u, c) for c in v.category_masks],
            "item_values": {
                u.items[i].name: _fmt(v.item_values[i]) for i in range(u.n)
            },
        }
    raise SchemaError(f"cannot serialize valuation of type {type(v).__name__}")


def _universe_for(data: dict[str, Any]) -> Universe:
    """Item order: explicit "items" wins, else vendor order, else the
    type-specific structure, else sorted entry names."""
    if "items" in data:
        items = _need(data, "items", list, "instance")
        return Universe(tuple(str(x) for x in items))
    if "vendors" in data:
        names = [str(n) for group in data["vendors"] for n in group]
        return Universe(tuple(names))
    vtype = _need(data, "type", str, "valuation")
    if vtype == "additive_groups":
        return Universe(tuple(str(n) for g in _need(data, "groups", list, vtype) for n in g))
    if vtype == "category_max":
        return Universe(
            tuple(str(n) for c in _need(data, "categories", list, vtype) for n in c)
        )
    entries = _need(data, "entries", dict, vtype)
    names: set[str] = set()
    for key in entries:
        names.update(part for part in str(key).split(",") if part)
    return Universe(tuple(sorted(names)))


def _parse_value(text: Any, where: str) -> Fraction:
    if isinstance(text, (int, str)):
        try:
            return parse_rational(str(text))
        except ValueError as e:
            raise SchemaError(f"{where}: {e}") from None
    raise SchemaError(f"{where}: numbers must be strings, got {type(text).__name__}")


def valuation_from_obj(data: dict[str, Any], universe: Universe | None = None) -> Valuation:
    if not isinstance(data, dict):
        raise SchemaError("valuation must be a JSON object")
    u = universe or _universe_for(data)
    vtype = _need(data, "type", str, "valuation")
    if vtype == "table":
        entries = _need(data, "entries", dict, "table valuation")
        values = [Fraction(0)] * (1 << u.n)
        seen = [False] * (1 << u.n)
        seen[0] = True
        for key, raw in entries.items():
            try:
                mask = u.parse_set(str(key))
            except (KeyError, ValueError) as e:
                raise SchemaError(f"table entry {key!r}: {e}") from None
            if seen[mask] and mask != 0:
                raise SchemaError(f"table entry {key!r}: duplicate subset")
            seen[mask] = True
            values[mask] = _parse_value(raw, f"table entry {key!r}")
        missing = [m for m in range(1 << u.n) if not seen[m]]
        if missing:
            raise SchemaError(
                f"table valuation: missing {len(missing)} subsets, "
                f"first {{{','.join(_names(u, missing[0]))}}}"
            )
        if values[0] != 0:
            raise SchemaError("table valuation: the empty set must have value 0")
        return TableValuation(u, values)
    if vtype == "additive_groups":
        groups = _need(data, "groups", list, "additive_groups")
        masks = []
        for group in groups:
            try:
                masks.append(u.mask_of(str(n) for n in group))
            except KeyError as e:
                raise SchemaError(f"group {group!r}: unknown item {e}") from None
        curve_spec = _need(data, "curve", dict, "additive_groups")
        kind = _need(curve_spec, "kind", str, "curve")
        if kind == "harmonic":
            top = max((mask.bit_count() for mask in masks), default=0)
            curve = [Fraction(0)]
            for t in range(1, top + 1):
                curve.append(curve[-1] + Fraction(1, t))
        elif kind == "explicit":
            raw = _need(curve_spec, "values", list, "curve")
            curve = [_parse_value(x, f"curve value {i}") for i, x in enumerate(raw)]
        else:
            raise SchemaError(f"curve kind must be harmonic or explicit, got {kind!r}")
        try:
            return AdditiveGroupsValuation(u, tuple(masks), tuple(curve))
        except ValueError as e:
            raise SchemaError(f"additive_groups: {e}") from None
    if vtype == "category_max":
        cats = _need(data, "categories", list, "category_max")
        masks = []
        for cat in cats:
            try:
                masks.append(u.mask_of(str(n) for n in cat))
            except KeyError as e:
                raise SchemaError(f"category {cat!r}: unknown item {e}") from None
        raw_vals = _need(data, "item_values", dict, "category_max")
        values = []
        for item in u.items:
            if item.name not in raw_vals:
                raise SchemaError(f"category_max: no value for item {item.name!r}")
            values.append(_parse_value(raw_vals[item.name], f"value of {item.name!r}"))
        try:
            return CategoryMaxValuation(u, tuple(masks), tuple(values))
        except ValueError as e:
            raise SchemaError(f"category_max: {e}") from None
    raise SchemaError(f"unknown valuation type {vtype!r}")


# -- instances -------------------------------------------------------------


def instance_to_obj(g: GameInstance) -> dict[str, Any]:
    obj = valuation_to_obj(g.valuation)
    obj["vendors"] = [_names(g.universe, mask) for mask in g.vendor_masks]
    return obj


def instance_from_obj(data: dict[str, Any], allow_uncertified: bool = True) -> GameInstance:
    """Build an instance from its JSON object.

    Without a "vendors" field a single vendor owns everything (enough for
    validation-only workflows).  Uncertified valuations load by default so
    the checkers can report on them; analysis entry points still refuse them.
    """
    if not isinstance(data, dict):
        raise SchemaError("instance must be a JSON object")
    u = _universe_for(data)
    v = valuation_from_obj(data, u)
    if "vendors" in data:
        vendors = _need(data, "vendors", list, "instance")
        masks = []
        for group in vendors:
            if not isinstance(group, list):
                raise SchemaError("each vendor must be a list of item names")
            try:
                masks.append(u.mask_of(str(n) for n in group))
            except KeyError as e:
                raise SchemaError(f"vendor {group!r}: unknown item {e}") from None
    else:
        masks = [u.full_mask]
    try:
        return GameInstance(v, tuple(masks), allow_uncertified=allow_uncertified)
    except ValueError as e:
        raise SchemaError(str(e)) from None


def load_instance(path: str, allow_uncertified: bool = True) -> GameInstance:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise SchemaError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None
    return instance_from_obj(data, allow_uncertified=allow_uncertified)


def dump_instance(g: GameInstance) -> str:
    return json.dumps(instance_to_obj(g), indent=2, sort_keys=True)


# -- prices ----------------------------------------------------------------


def prices_to_obj(p: PriceVector) -> dict[str, str]:
    return {
        p.universe.items[i].name: _fmt(q) for i, q in enumerate(p.prices)
    }


def prices_from_obj(u: Universe, data: dict[str, Any], default: Fraction) -> PriceVector:
    """Prices keyed by item name; unnamed items get the default."""
    prices = [default] * u.n
    for name, raw in data.items():
        try:
            idx = u.index(str(name))
        except KeyError:
            raise SchemaError(f"price for unknown item {name!r}") from None
        prices[idx] = _parse_value(raw, f"price of {name!r}")
    return PriceVector(u, tuple(prices))


# -- payoff tables ---------------------------------------------------------


def _table_rows(g: GameInstance, outcomes) -> list[tuple[str, list[str]]]:
    return [
        (o.profile.format(g.universe), [_fmt(q) for q in o.vendor_payoffs])
        for o in outcomes
    ]


def payoff_table_csv(g: GameInstance, outcomes) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["profile"] + [f"vendor_{i}" for i in range(g.n_vendors)])
    for key, payoffs in _table_rows(g, outcomes):
        writer.writerow([key] + payoffs)
    return out.getvalue()


def payoff_table_obj(g: GameInstance, outcomes) -> dict[str, Any]:
    return {
        "vendors": g.n_vendors,
        "rows": [
            {"profile": key, "payoffs": payoffs}
            for key, payoffs in _table_rows(g, outcomes)
        ],
    }


# -- reports ---------------------------------------------------------------


def report_to_obj(g: GameInstance, report: EquilibriumReport) -> dict[str, Any]:
    return {
        "equilibria": [
            {"profile": s.format(g.universe), "welfare": _fmt(w)}
            for s, w in report.equilibria
        ],
        "optimal_welfare": _fmt(report.optimal_welfare),
        "poa": None if report.poa is None else _fmt(report.poa),
        "pos": None if report.pos is None else _fmt(report.pos),
        "welfare_ratio_bound": _fmt(report.welfare_ratio_bound),
        "bound_satisfied": report.bound_satisfied,
    }


def report_to_text(g: GameInstance, report: EquilibriumReport) -> str:
    m = g.max_vendor_size
    lines = [f"{len(report.equilibria)} pure Nash equilibria"]
    for s, w in report.equilibria:
        lines.append(f"  {s.format(g.universe)}  welfare {_fmt(w)}")
    lines.append(f"optimal welfare = {_fmt(report.optimal_welfare)}")
    if report.poa is None:
        lines.append("PoA undefined (no pure NE)")
        lines.append("PoS undefined (no pure NE)")
    else:
        verdict = "satisfied" if report.bound_satisfied else "VIOLATED"
        lines.append(
            f"PoA = {_fmt(report.poa)}, bound H_{m}+1 = "
            f"{_fmt(report.welfare_ratio_bound)}, {verdict}"
        )
        lines.append(f"PoS = {_fmt(report.pos)}")
    return "\n".join(lines)


def trace_to_jsonl(g: GameInstance, trace: DynamicsTrace) -> str:
    if isinstance(trace.start, StrategyProfile):
        start: Any = trace.start.format(g.universe)
    else:
        start = prices_to_obj(trace.start)
    lines = [json.dumps({"mode": trace.mode, "start": start})]
    for i, step in enumerate(trace.steps):
        lines.append(
            json.dumps(
                {
                    "step": i,
                    "vendor": step.vendor,
                    "profile": None if step.profile is None else step.profile.format(g.universe),
                    "prices": None if step.prices is None else prices_to_obj(step.prices),
                    "payoffs": [_fmt(q) for q in step.payoffs],
                }
            )
        )
    lines.append(
        json.dumps(
            {"status": trace.status, "period": trace.period, "moves": len(trace.steps)}
        )
    )
    return "\n".join(lines)


def _priced_items(g: GameInstance, prices: dict[int, Fraction]) -> dict[str, str]:
    return {
        g.universe.items[item].name: _fmt(q) for item, q in sorted(prices.items())
    }


def best_response_to_obj(g: GameInstance, br: BestResponse) -> dict[str, Any]:
    return {
        "vendor": br.vendor,
        "method": br.method,
        "prices": _priced_items(g, br.prices),
        "revenue": _fmt(br.revenue),
        "realized_revenue": _fmt(br.realized_revenue),
        "target": g.universe.format_set(br.target_mask),
    }


def verification_to_obj(g: GameInstance, res: VerificationResult) -> dict[str, Any]:
    obj: dict[str, Any] = {
        "status": res.status,
        "method": res.method,
        "vendors": [
            {
                "vendor": c.vendor,
                "current_revenue": _fmt(c.current_revenue),
                "best_revenue": _fmt(c.best_revenue),
            }
            for c in res.checks
        ],
    }
    if res.certificate is not None:
        cert = res.certificate
        obj["deviation"] = {
            "vendor": cert.vendor,
            "prices": _priced_items(g, cert.prices),
            "old_revenue": _fmt(cert.old_revenue),
            "new_revenue": _fmt(cert.new_revenue),
            "undercut": None if cert.undercut is None else _fmt(cert.undercut),
        }
    return obj
