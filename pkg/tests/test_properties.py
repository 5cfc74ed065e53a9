"""Cross-module invariants checked on random inputs."""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import given, strategies as st

from prehom.combinatorics import classify, thin_vectors
from prehom.constructions import decompose_JK, element_xbar, family_Fbar
from prehom.fields import GF, QQ
from prehom.matrix_model import (ad_image_rank, element_from_coordinates, ideal_roots,
                                 orbit_codim, random_element)
from prehom.quiver import euler_form, ext1_dim, hom_dim, hom_space, module_from_element
from prehom.verify import SuiteOptions, run_suite

DS = thin_vectors(t_max=9)


def _sparse(d, rng, field=QQ):
    coords = [rng.randint(-2, 2) if rng.random() < 0.4 else 0 for _ in ideal_roots(d).roots]
    return element_from_coordinates(d, coords, field)


@given(st.sampled_from(DS), st.integers(0, 10 ** 6), st.booleans())
def test_orbit_codim_equals_self_ext(d, seed, sparse):
    rng = random.Random(seed)
    x = _sparse(d, rng) if sparse else random_element(d, QQ, rng)
    M = module_from_element(x)
    lhs = ideal_roots(d).dim - ad_image_rank(x)
    assert lhs == hom_space(M, M).dimension - euler_form(M, M)


@given(st.sampled_from(DS), st.sampled_from([3, 5, 7]), st.integers(0, 10 ** 6))
def test_bridge_identity_over_prime_fields(d, p, seed):
    x = _sparse(d, random.Random(seed), GF(p))
    M = module_from_element(x)
    assert orbit_codim(x) == hom_dim(M, M) - euler_form(M, M)


@given(st.sampled_from(thin_vectors(t_max=10)), st.integers(0, 10 ** 6))
def test_no_orbit_beats_the_minimal_codimension(d, seed):
    x = _sparse(d, random.Random(seed))
    assert orbit_codim(x) >= classify(d).codim


@given(st.sampled_from(thin_vectors(t_max=11)), st.integers(0, 10 ** 6))
def test_ext_vanishing_matches_density(d, seed):
    c = classify(d)
    rng = random.Random(seed)
    if c.e <= 1:
        M = module_from_element(element_xbar(d))
        assert ext1_dim(M, M) == 0
    else:
        params = [Fraction(rng.choice([-1, 1]) * rng.randint(2, 30)) for _ in range(c.e - 1)]
        M = module_from_element(family_Fbar(d).instantiate(params))
        assert ext1_dim(M, M) == c.e - 1
    dec = decompose_JK(d)
    if dec.e:
        assert ext1_dim(dec.T(), dec.S()) == dec.e
        assert ext1_dim(dec.S(), dec.T()) == 0


@given(st.integers(0, 2 ** 32))
def test_suites_are_deterministic(seed):
    opts = SuiteOptions(seed=seed, t_max=5, samples=6)
    a = run_suite("A2", opts).to_json()
    b = run_suite("A2", opts).to_json()
    assert a == b
