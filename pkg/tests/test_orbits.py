from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from prehom.combinatorics import classify, from_strings, thin_vectors, validate_thin
from prehom.constructions import element_x, element_xbar
from prehom.errors import BudgetExceeded, NonPrimeField, NotMinimal
from prehom.fields import GF
from prehom.matrix_model import (conjugate, element_from_sparse, ideal_roots,
                                 random_borel_element, random_element, zero_element)
from prehom.orbits import (FiniteFieldContext, class_size_formula, dense_profile_size,
                           enumerate_orbits, inert_points, is_minimal, max_class_size, orbit_of,
                           predicted_max_class_size, same_b_orbit, sublattice_rank, u_orbit,
                           u_orbit_size)

D111 = validate_thin((1, 1, 1))
D1101 = validate_thin((1, 1, 0, 1))


def _unit(d, root, q, v=1):
    return element_from_sparse(d, {root: v}, GF(q))


def test_census_examples():
    c = enumerate_orbits(D111, 2)
    assert c.n_orbits == 2 and c.max_size == 1
    c = enumerate_orbits(D1101, 2)
    assert sorted(c.sizes.tolist()) == [1, 1, 2]
    assert c.max_size == 2
    assert enumerate_orbits(validate_thin((1, 1)), 3).n_orbits == 1


def test_canonical_keys_are_least_codes():
    c = enumerate_orbits(from_strings((1, 2, 1)), 3)
    labels = c.labels
    for k, key in enumerate(c.keys):
        assert key == np.flatnonzero(labels == k).min()


def test_orbit_examples():
    assert orbit_of(zero_element(D1101, GF(2))).tolist() == [0]
    assert len(orbit_of(_unit(D1101, (2, 4), 2))) == 2
    assert u_orbit_size(_unit(D111, (1, 3), 2)) == (1, 0)
    assert u_orbit_size(_unit(D1101, (2, 4), 2)) == (2, 1)
    assert u_orbit_size(zero_element(D1101, GF(2))) == (1, 0)


def test_sublattice_rank_examples():
    assert sublattice_rank(_unit(D111, (1, 3), 2)) == 1
    assert sublattice_rank(zero_element(D1101, GF(3))) == 0
    d = from_strings((1, 2, 2))
    assert sublattice_rank(element_xbar(d, field=GF(2))) == d.n - 1


def test_inert_points_of_zero():
    # the fibre over 0 at level 1 holds 0 and a nonzero multiple of the first root
    assert inert_points(zero_element(D1101, GF(2)))[0] is False


def test_minimal_representatives():
    for a in [(1, 2, 2), (1, 2, 1, 2)]:
        d = from_strings(a)
        assert is_minimal(element_xbar(d, field=GF(2)))
        assert not is_minimal(element_x(d, field=GF(2)))
    d = from_strings((1, 2, 2, 1))
    assert is_minimal(element_xbar(d, [2], GF(3)))


def test_minimal_nonzero_coordinates_are_ramified():
    d = from_strings((1, 2, 1, 1))
    for q in (2, 3):
        y = element_xbar(d, field=GF(q))
        inert = inert_points(y)
        coords = y.coordinates()
        assert all(not inert[k] for k, v in enumerate(coords) if v)


def test_class_size_formula_examples():
    assert class_size_formula(_unit(D111, (1, 3), 3)) == 2
    assert class_size_formula(zero_element(D111, GF(3))) == 1
    for a in [(1, 2, 1), (2, 2, 1), (1, 2, 2)]:
        d = from_strings(a)
        assert classify(d).e == 1
        for q in (2, 3):
            y = element_xbar(d, field=GF(q))
            dim = ideal_roots(d).dim
            size = (q - 1) ** (d.n - 1) * q ** (dim - (d.n - 1))
            assert class_size_formula(y) == size == len(orbit_of(y))


def test_class_size_formula_needs_minimal():
    d = from_strings((1, 2, 2))
    with pytest.raises(NotMinimal):
        class_size_formula(element_x(d, field=GF(2)))


def test_max_class_size_examples():
    r = max_class_size(D1101, 2)
    assert r.brute == 2 and r.predicted == 2 and r.match
    r = max_class_size(from_strings((1, 2, 1)), 2)
    assert r.brute == 4 == r.predicted
    r = max_class_size(validate_thin((1, 0, 1)), 2)
    assert r.brute == 1 and r.predicted == 2 and not r.match and r.anomaly
    assert predicted_max_class_size(validate_thin((1,)), 3) == Fraction(3, 2)


def test_dense_sizes():
    # e = 1: the dense orbit has the smaller profile
    d = from_strings((1, 2, 1))
    assert dense_profile_size(d, 2) == max_class_size(d, 2).brute == 4
    # e = 0 with both rows nonempty: mm = n - 2
    d = from_strings((2, 3))
    dim = ideal_roots(d).dim
    for q in (2, 3):
        assert max_class_size(d, q).brute == (q - 1) ** (d.n - 2) * q ** (dim - d.n + 2)


def test_context_checks():
    with pytest.raises(NonPrimeField):
        FiniteFieldContext(D111, 4)
    with pytest.raises(BudgetExceeded):
        enumerate_orbits(validate_thin((1, 1, 1, 1, 1, 1)), 3, budget=1000)


def test_code_round_trip():
    ctx = FiniteFieldContext(from_strings((1, 2, 1)), 3)
    y = random_element(ctx.d, GF(3), 4)
    assert ctx.element(ctx.code_of(y)) == y


def test_generators_are_lower_triangular_and_invertible():
    ctx = FiniteFieldContext(from_strings((2, 2)), 5)
    for M in ctx.borel_generators:
        assert np.array_equal(M, np.tril(M))
        assert all(int(v) % 5 for v in np.diag(M))


@pytest.mark.parametrize("q", [2, 3])
def test_census_invariants(q):
    for d in thin_vectors(n_max=4):
        c = enumerate_orbits(d, q)
        ctx = c.ctx
        assert int(c.sizes.sum()) == q ** ctx.D
        assert all(ctx.group_order % int(s) == 0 for s in c.sizes)
        assert c.sizes_consistent()
        assert c.unique_minimal()
        assert c.dichotomy_holds()
        assert c.u_orbit_sizes_match()


small = [d for d in thin_vectors(n_max=5) if 0 < ideal_roots(d).dim <= 9]


@given(st.sampled_from(small), st.sampled_from([2, 3]), st.integers(0, 10 ** 6))
def test_random_conjugates_share_an_orbit(d, q, seed):
    rng = random.Random(seed)
    F = GF(q)
    y = random_element(d, F, rng)
    g = random_borel_element(d.n, F, rng)
    z = conjugate(y, g)
    assert same_b_orbit(y, z)
    assert FiniteFieldContext(d, q).code_of(z) in set(orbit_of(y).tolist())


@given(st.sampled_from(small), st.sampled_from([2, 3]), st.integers(0, 10 ** 6))
def test_u_orbit_size_is_power_of_q(d, q, seed):
    y = random_element(d, GF(q), seed)
    size, In = u_orbit_size(y)
    assert size == len(u_orbit(y)) == q ** In
    assert In == sum(inert_points(y))


@given(st.sampled_from(small), st.sampled_from([2, 3]), st.integers(0, 10 ** 6))
def test_orbit_size_formula_for_minimal_elements(d, q, seed):
    c = enumerate_orbits(d, q)
    rng = random.Random(seed)
    k = rng.randrange(c.n_orbits)
    y = c.ctx.element(int(c.keys[k]))
    reps = np.flatnonzero(c.minimal_mask & (c.labels == k))
    assert len(reps) == 1
    m = c.ctx.element(int(reps[0]))
    assert is_minimal(m)
    assert class_size_formula(m) == c.sizes[k] == len(orbit_of(y))
