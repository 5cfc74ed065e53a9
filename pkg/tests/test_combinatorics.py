from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from prehom.combinatorics import (ThinDimVector, classify, compositions, even_internal_count,
                                  from_strings, internal_even_ends, one_strings, parse_bits,
                                  parse_strings, relabel, thin_vectors, validate_thin)
from prehom.errors import (ConsecutiveZeros, LeadingOrTrailingZero, NonBinaryEntry,
                           NonPositiveEntry)

D_T17 = (1, 1, 0, 1, 1, 1, 0, 1, 1, 0, 1, 1, 1, 1, 1, 0, 1)
D_T15 = (1, 0, 1, 1, 0, 1, 1, 1, 1, 0, 1, 1, 1, 0, 1)


def test_validate_examples():
    d = validate_thin(D_T17)
    assert (d.t, d.n) == (17, 13)
    d1 = validate_thin([1])
    assert (d1.t, d1.n) == (1, 1)


@pytest.mark.parametrize("raw, err", [
    ((1, 0, 0, 1), ConsecutiveZeros),
    ((0, 1), LeadingOrTrailingZero),
    ((1, 0), LeadingOrTrailingZero),
    ((1, 2, 1), NonBinaryEntry),
])
def test_validate_rejects(raw, err):
    with pytest.raises(err):
        validate_thin(raw)


def test_one_strings_examples():
    assert one_strings(validate_thin(D_T17)).a == (2, 3, 2, 5, 1)
    assert one_strings(validate_thin(D_T15)).a == (1, 2, 4, 3, 1)
    assert one_strings(validate_thin([1])).a == (1,)


def test_from_strings_examples():
    assert from_strings((2, 3, 2, 5, 1)).entries == D_T17
    assert from_strings((1, 1)).entries == (1, 0, 1)
    assert from_strings((1, 2, 2, 1)).entries == (1, 0, 1, 1, 0, 1, 1, 0, 1)
    with pytest.raises(NonPositiveEntry):
        from_strings((1, 0, 2))


def test_classify_examples():
    assert even_internal_count(from_strings((2, 3, 2, 5, 1))) == 1
    assert even_internal_count(from_strings((1, 2, 2, 1))) == 2
    assert even_internal_count(from_strings((6,))) == 0
    c = classify(from_strings((2, 3, 2, 5, 1)))
    assert c.dense and c.codim == 0
    c = classify(from_strings((1, 2, 2, 1)))
    assert not c.dense and c.codim == 1
    assert classify(from_strings((1, 1))).dense


def test_relabel_is_order_preserving():
    lab = relabel(validate_thin((1, 1, 0, 1)))
    assert lab.gamma == {1: 1, 2: 2, 4: 3}
    assert lab.inverse[3] == 4


def test_internal_even_ends():
    assert internal_even_ends(validate_thin(D_T15)) == [4, 9]
    assert internal_even_ends(from_strings((2, 3, 2, 5, 1))) == [9]


def test_parsers():
    assert parse_bits("1,1,0,1") == validate_thin((1, 1, 0, 1))
    assert parse_strings("1,2,2,1") == from_strings((1, 2, 2, 1))


def test_compositions_count():
    for n in range(1, 8):
        assert len(list(compositions(n))) == 2 ** (n - 1)


def test_thin_vectors_bounds():
    ds = thin_vectors(t_max=6)
    assert all(d.t <= 6 for d in ds)
    assert len(set(ds)) == len(ds)
    # every 0/1 word of length <= 6 with no leading/trailing/double zero
    brute = 0
    for t in range(1, 7):
        for bits in range(2 ** t):
            w = [(bits >> k) & 1 for k in range(t)]
            s = "".join(map(str, w))
            if w[0] and w[-1] and "00" not in s:
                brute += 1
    assert len(ds) == brute
    assert all(d.n <= 4 for d in thin_vectors(n_max=4))


strings = st.lists(st.integers(1, 6), min_size=1, max_size=6)


@given(strings)
def test_strings_round_trip(a):
    d = from_strings(a)
    assert one_strings(d).a == tuple(a)
    assert validate_thin(d.entries) == d
    assert d.n == sum(a)
    assert d.t == sum(a) + len(a) - 1


@given(strings)
def test_classify_counts_internal_evens(a):
    e = sum(1 for v in a[1:-1] if v % 2 == 0)
    c = classify(from_strings(a))
    assert c.e == e
    assert c.codim == max(0, e - 1)
    assert c.dense == (e <= 1)
    assert len(internal_even_ends(from_strings(a))) == e


def test_dim_vector_is_frozen():
    d = ThinDimVector((1, 1))
    with pytest.raises(Exception):
        d.entries = (1,)
