import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.combinatorics import Permutation, PermutationGroup

import oracles
from weaknorm import catalog
from weaknorm.errors import ForeignSubgroup, InvalidPermutation, NotNormal, OrderCapExceeded
from weaknorm.perm import (
    check_permutation,
    close_generators,
    compose,
    from_cycles,
    mask_from_indices,
    indices_from_mask,
    preimage,
    quotient,
)

SMALL = ["S3", "D4", "Q8", "A4", "C3xS3", "D5", "C2^3", "S4", "C4xC4"]


def sympy_group(G):
    return PermutationGroup([Permutation(list(G.perm(g))) for g in G.generators])


def test_check_permutation_rejects_bad_input():
    assert check_permutation([1, 0, 2], 3) == (1, 0, 2)
    with pytest.raises(InvalidPermutation):
        check_permutation([0, 0, 1], 3)
    with pytest.raises(InvalidPermutation):
        check_permutation([0, 1], 3)
    with pytest.raises(InvalidPermutation):
        check_permutation(["a", 1, 2], 3)


def test_from_cycles_and_compose_apply_left_first():
    a = from_cycles(3, (0, 1))
    b = from_cycles(3, (1, 2))
    # apply a then b: 0 -> 1 -> 2
    assert compose(a, b)[0] == 2
    with pytest.raises(InvalidPermutation):
        from_cycles(3, (0, 1), (1, 2))


def test_order_cap_raises():
    with pytest.raises(OrderCapExceeded):
        close_generators(6, [(1, 2, 3, 4, 5, 0), (1, 0, 2, 3, 4, 5)], cap=100)


@pytest.mark.parametrize("recipe", SMALL)
def test_order_and_solvability_match_sympy(recipe):
    G = catalog.build_recipe(recipe)
    P = sympy_group(G)
    assert G.order == P.order()
    assert sorted(G.element_orders.tolist()) == sorted(Permutation(list(p)).order() for p in P.elements)


@pytest.mark.parametrize("recipe", SMALL)
def test_cayley_table_matches_direct_composition(recipe):
    G = catalog.build_recipe(recipe)
    elems = oracles.elements(G)
    for x in range(G.order):
        for y in range(G.order):
            assert G.perm(int(G.mul[x, y])) == oracles.mul(elems[x], elems[y])
    assert (G.mul[np.arange(G.order), G.inv] == 0).all()
    assert G.perm(0) == tuple(range(G.degree))


def test_elements_are_canonically_ordered():
    G = catalog.build_recipe("S4")
    rows = [G.perm(i) for i in range(G.order)]
    assert rows == sorted(rows)
    H = close_generators(4, [(1, 2, 3, 0), (1, 0, 2, 3)])
    assert (H.perms == G.perms).all()


def test_conj_table_is_g_inverse_x_g():
    G = catalog.build_recipe("S4")
    elems = oracles.elements(G)
    for g in range(G.order):
        for x in range(G.order):
            assert G.perm(int(G.conj[g, x])) == oracles.conj(elems[x], elems[g])


@given(st.sets(st.integers(0, 200), max_size=30))
def test_mask_round_trip(indices):
    mask = mask_from_indices(indices)
    assert sorted(indices) == indices_from_mask(mask, 201).tolist()


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_subgroup_closure_matches_oracle(recipe, data):
    G = catalog.build_recipe(recipe)
    gens = data.draw(st.lists(st.integers(0, G.order - 1), max_size=3))
    S = G.subgroup(gens)
    want = oracles.closure([G.perm(g) for g in gens], oracles.identity_of(G))
    assert S.mask == oracles.as_mask(G, want)


def test_subgroup_operations():
    G = catalog.build_recipe("S4")
    A = G.subgroup([G.index((1, 2, 0, 3))])
    B = G.subgroup([G.index((1, 0, 2, 3))])
    J = A.join(B)
    assert J.order == 6 and A <= J and B < J and not J <= A
    assert (A & B).is_trivial
    assert not J.is_normal()
    g = G.index((0, 1, 3, 2))
    assert J.conjugate(g).order == 6 and J.conjugate(g) != J
    other = catalog.build_recipe("S4")
    with pytest.raises(ForeignSubgroup):
        _ = A <= other.whole()


@pytest.mark.parametrize("recipe", SMALL)
def test_quotient_homomorphism_and_preimage(recipe):
    G = catalog.build_recipe(recipe)
    from weaknorm.lattice import normal_subgroups

    for N in normal_subgroups(G):
        q = quotient(G, N)
        assert q.image.order * N.order == G.order
        phi = q.elem_to_coset
        assert (q.image.mul[phi[:, None], phi[None, :]] == phi[G.mul]).all()
        assert (phi[N.elements] == 0).all()
        assert preimage(q, q.image.trivial()) == N
        assert preimage(q, q.image.whole()).is_whole


def test_quotient_of_non_normal_raises():
    G = catalog.build_recipe("S3")
    with pytest.raises(NotNormal):
        quotient(G, G.subgroup([G.index((1, 0, 2))]))


def test_as_group_keeps_element_correspondence():
    G = catalog.build_recipe("S4")
    from weaknorm.lattice import all_subgroups

    for S in all_subgroups(G).all:
        H = G.as_group(S)
        assert H.order == S.order
        for i, x in enumerate(S.elements):
            assert H.perm(i) == G.perm(int(x))
