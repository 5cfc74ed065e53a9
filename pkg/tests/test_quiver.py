from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from prehom.combinatorics import thin_vectors
from prehom.errors import InadmissibleIndex, NotDeltaGood, NotStandardSubset
from prehom.fields import GF, QQ
from prehom.matrix_model import random_element, zero_element
from prehom.quiver import (Morphism, QuiverModule, StandardSubset, delta, direct_sum, euler_form,
                           ext1_dim, find_isomorphism, hom_dim, hom_dim_standard, hom_space,
                           is_delta_good, module_from_element, projective, resolve_standard,
                           standard_module, standard_morphism, standard_subsets)


def _standard(t: int):
    return st.sets(st.integers(1, t), max_size=(t + 1) // 2).filter(
        lambda s: all(b - a >= 2 for a, b in zip(sorted(s), sorted(s)[1:]))
    ).map(lambda s: tuple(sorted(s)))


@st.composite
def standard_pair(draw, t_max=12):
    t = draw(st.integers(1, t_max))
    return t, draw(_standard(t)), draw(_standard(t))


def test_standard_subset_validation():
    with pytest.raises(NotStandardSubset):
        StandardSubset((1, 2), 4)
    with pytest.raises(NotStandardSubset):
        StandardSubset((3, 6), 5)
    assert len(standard_subsets(4)) == 8  # Fibonacci count of gap-2 subsets


def test_standard_module_dims():
    M = standard_module((1, 3, 7), 7)
    assert M.dims == (1, 1, 2, 2, 2, 2, 3)
    assert M.relations_hold() and is_delta_good(M)
    D = delta(4, 6)
    assert D.dims == (0, 0, 0, 1, 1, 1)
    assert all(all(v == 0 for row in D.b(j) for v in row) for j in range(1, 5))


def test_projectives_at_the_end_are_injective():
    t = 7
    mods = [standard_module(J, t) for J in standard_subsets(t)]
    for i in (t - 1, t):
        P = projective(i, t)
        assert all(ext1_dim(M, P) == 0 for M in mods)


def test_hom_examples():
    t = 7
    assert hom_dim(standard_module((1, 3, 7), t), standard_module((2, 4, 6), t)) == 2
    assert hom_dim_standard((1, 3, 7), (2, 4, 6)) == 2
    assert hom_dim_standard((2,), (5,)) == 0
    assert hom_dim(delta(3, 5), delta(3, 5)) == 1
    assert hom_dim_standard((4,), (4,)) == 1


def test_standard_morphisms_named_by_K():
    t = 7
    J, K = (1, 3, 7), (2, 4, 6)
    for k in (2, 4):
        phi = standard_morphism(J, K, k, t)
        assert phi.is_homomorphism() and not phi.is_zero()
    with pytest.raises(InadmissibleIndex):
        standard_morphism(J, K, 6, t)
    ident = standard_morphism(J, J, 7, t)
    assert ident.is_isomorphism()


def test_euler_and_ext_examples():
    t = 6
    assert ext1_dim(delta(4, t), delta(4, t)) == 0
    N = standard_module((1, 5), t)  # dim N_4 = dim N_2
    assert euler_form(delta(4, t), N) == 0


def test_not_delta_good():
    M = QuiverModule(2, (1, 1), ([[QQ.zero]],), (), QQ)
    assert M.relations_hold()
    assert not is_delta_good(M)
    with pytest.raises(NotDeltaGood):
        euler_form(M, M)


def test_zero_element_module_is_sum_of_deltas():
    from prehom.combinatorics import validate_thin
    d = validate_thin((1, 1, 0, 1, 1))
    M = module_from_element(zero_element(d))
    S = direct_sum(*(delta(i, d.t) for i in d.support))
    assert find_isomorphism(M, S) is not None


def test_resolution_small():
    res = resolve_standard((1, 3, 6), [4], 6, 6)
    assert res.is_exact()


def test_hom_space_basis_are_homomorphisms():
    M, N = standard_module((1, 3, 7), 7), standard_module((2, 4, 6), 7)
    space = hom_space(M, N)
    assert space.dimension == 2
    assert all(isinstance(phi, Morphism) and phi.is_homomorphism() for phi in space.basis)


def test_json_round_trip():
    M = module_from_element(random_element(thin_vectors(t_max=6)[-1], GF(5), 3))
    N = QuiverModule.from_json(M.to_json())
    assert (N.dims, N.alpha, N.beta, N.field) == (M.dims, M.alpha, M.beta, M.field)


@given(standard_pair())
def test_hom_formula_matches_solver(pair):
    t, J, K = pair
    assert hom_dim_standard(J, K) == hom_dim(standard_module(J, t), standard_module(K, t))


@given(standard_pair(t_max=10))
def test_ext_between_standards_nonnegative(pair):
    t, J, K = pair
    assert ext1_dim(standard_module(J, t), standard_module(K, t)) >= 0


@given(st.integers(1, 12).flatmap(lambda t: st.tuples(st.just(t), _standard(t))))
def test_standards_have_no_self_extensions(tj):
    t, J = tj
    M = standard_module(J, t)
    assert ext1_dim(M, M) == 0
    assert hom_dim(M, M) == hom_dim_standard(J, J) == len(J)


@given(st.sampled_from(thin_vectors(t_max=9)), st.integers(0, 10 ** 6), st.data())
def test_projective_hom_counts_dimension(d, seed, data):
    N = module_from_element(random_element(d, QQ, seed, bound=3))
    i = data.draw(st.integers(1, d.t))
    P = projective(i, d.t)
    assert hom_dim(P, N) == N.dim(i)
    assert ext1_dim(P, N) == 0


@given(st.sampled_from(thin_vectors(t_max=10)), st.integers(0, 10 ** 6))
def test_module_of_element(d, seed):
    x = random_element(d, QQ, random.Random(seed), bound=4)
    M = module_from_element(x)
    assert M.relations_hold()
    assert is_delta_good(M)
    assert M.delta_dim() == d.entries
