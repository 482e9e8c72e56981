"""Item universes and bitmask subset utilities.

Items are indexed 0..n-1 and carry unique string names.  A subset of items is
an int bitmask (bit i set <=> item i in the set), which keeps the dense
2^n enumerations cheap.  Universes are capped at 20 items so every operation
that scans all subsets stays tractable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple

__all__ = [
    "MAX_ITEMS",
    "Item",
    "Universe",
    "bits_of",
    "submasks_of",
]

MAX_ITEMS = 20


class Item(NamedTuple):
    id: int
    name: str


def bits_of(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def submasks_of(mask: int) -> Iterator[int]:
    """Yield every submask of ``mask`` (including 0 and mask itself)."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


@dataclass(frozen=True)
class Universe:
    """An ordered set of named items."""

    names: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.names:
            raise ValueError("a universe needs at least one item")
        if len(self.names) > MAX_ITEMS:
            raise ValueError(f"at most {MAX_ITEMS} items supported, got {len(self.names)}")
        if len(set(self.names)) != len(self.names):
            raise ValueError("item names must be unique")
        for name in self.names:
            if not name or any(ch in name for ch in ",|{}"):
                raise ValueError(f"invalid item name: {name!r}")

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def items(self) -> tuple[Item, ...]:
        return tuple(Item(i, name) for i, name in enumerate(self.names))

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown item: {name!r}") from None

    def mask_of(self, names) -> int:
        mask = 0
        for name in names:
            mask |= 1 << self.index(name)
        return mask

    def names_of(self, mask: int) -> tuple[str, ...]:
        self._check_mask(mask)
        return tuple(self.names[i] for i in bits_of(mask))

    def subsets(self) -> Iterator[int]:
        """All subsets of the universe, ascending by bitmask value."""
        return iter(range(1 << self.n))

    def format_set(self, mask: int) -> str:
        return "{" + ",".join(self.names_of(mask)) + "}"

    def parse_set(self, text: str) -> int:
        """Parse "{a,c}" or "a,c"; "{}" and "" denote the empty set."""
        text = text.strip()
        if text.startswith("{") and text.endswith("}"):
            text = text[1:-1]
        if not text.strip():
            return 0
        return self.mask_of(part.strip() for part in text.split(","))

    def _check_mask(self, mask: int) -> None:
        if mask < 0 or mask > self.full_mask:
            raise ValueError(f"mask {mask:#x} outside universe of {self.n} items")
