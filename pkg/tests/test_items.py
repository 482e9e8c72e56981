import pytest
from hypothesis import given, strategies as st

from vcgames.items import MAX_ITEMS, Universe, bits_of, submasks_of


def test_universe_basics():
    u = Universe(("a", "b", "c"))
    assert u.n == 3
    assert u.full_mask == 0b111
    assert u.index("b") == 1
    assert u.mask_of(("a", "c")) == 0b101
    assert u.names_of(0b101) == ("a", "c")


def test_universe_rejects_duplicates_and_bad_names():
    with pytest.raises(ValueError):
        Universe(("a", "a"))
    with pytest.raises(ValueError):
        Universe(("a,b",))
    with pytest.raises(ValueError):
        Universe(("a|b",))
    with pytest.raises(ValueError):
        Universe(("{x}",))
    with pytest.raises(ValueError):
        Universe(())
    with pytest.raises(ValueError):
        Universe(tuple(f"i{k}" for k in range(MAX_ITEMS + 1)))


def test_unknown_item_raises():
    u = Universe(("a", "b"))
    with pytest.raises(KeyError):
        u.index("z")
    with pytest.raises(KeyError):
        u.mask_of(("a", "z"))


def test_format_and_parse_set():
    u = Universe(("a", "b", "c"))
    assert u.format_set(0) == "{}"
    assert u.format_set(0b101) == "{a,c}"
    assert u.parse_set("{a,c}") == 0b101
    assert u.parse_set("a,c") == 0b101
    assert u.parse_set("{}") == 0
    assert u.parse_set("") == 0


def test_parse_set_round_trip():
    u = Universe(("x", "y", "z", "w"))
    for mask in range(16):
        assert u.parse_set(u.format_set(mask)) == mask


def test_bits_of():
    assert list(bits_of(0)) == []
    assert list(bits_of(0b1011)) == [0, 1, 3]


def test_submasks_of_complete():
    subs = list(submasks_of(0b101))
    assert sorted(subs) == [0b000, 0b001, 0b100, 0b101]
    assert list(submasks_of(0)) == [0]


@given(st.integers(0, (1 << 12) - 1))
def test_submasks_are_exactly_subsets(mask):
    subs = set(submasks_of(mask))
    assert len(subs) == 1 << mask.bit_count()
    assert all(s & mask == s for s in subs)


@given(st.integers(0, (1 << 16) - 1))
def test_bits_of_rebuilds_mask(mask):
    assert sum(1 << b for b in bits_of(mask)) == mask
