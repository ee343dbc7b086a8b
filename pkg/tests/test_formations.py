import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import isprime

import oracles
from weaknorm import catalog
from weaknorm.errors import ParseError
from weaknorm.formations import (
    ABELIAN,
    NILPOTENT,
    SUPERSOLVABLE,
    FormationTag,
    chief_series,
    is_member,
    is_p_solvable,
    is_solvable,
    p_nilpotent,
    p_supersolvable,
    parse_formation,
    product,
    residual,
    residual_product_identity_check,
)
from weaknorm.lattice import all_subgroups, normal_subgroups, normal_subgroups_of, prime_divisors

SMALL = ["S3", "D4", "Q8", "A4", "S4", "C3xS3", "D5", "Q8xC3", "C2xA4", "D6", "S3xS3", "A4xC3", "A5"]


def simple_tags(G):
    tags = [ABELIAN, NILPOTENT, SUPERSOLVABLE]
    for p in prime_divisors(G.order):
        tags += [p_nilpotent(p), p_supersolvable(p)]
    return tags


@pytest.mark.parametrize("text", ["A", "N", "U", "Np:2", "Up:3", "Np:2*Up:2", "U*U", "A*N"])
def test_parse_round_trip(text):
    tag = parse_formation(text)
    assert str(tag) == text
    assert FormationTag.parse(str(tag)) == tag


def test_product_nests_left_factor_first():
    tag = parse_formation("N*U")
    assert tag.kind == "Product" and tag.left == NILPOTENT and tag.right == SUPERSOLVABLE


@pytest.mark.parametrize("text", ["B", "Up", "Up:4", "Np:x", "U*", "A*N*U", ""])
def test_parse_rejects(text):
    with pytest.raises(ParseError):
        parse_formation(text)


def test_tag_validation():
    with pytest.raises(ValueError):
        FormationTag("Up", 6)
    with pytest.raises(ValueError):
        FormationTag("Product", left=ABELIAN)


@pytest.mark.parametrize("recipe,solv", [("S4", True), ("A5", False), ("C7xA5", False), ("Q8xS3", True)])
def test_solvability(recipe, solv):
    G = catalog.builtin_fixture(recipe) if recipe in catalog.FIXTURE_NAMES else catalog.build_recipe(recipe)
    assert is_solvable(G) == solv


def test_p_solvability_of_a5_and_c7xa5():
    A5 = catalog.build_recipe("A5")
    assert not any(is_p_solvable(A5, p) for p in (2, 3, 5))
    assert is_p_solvable(A5, 7)
    G = catalog.builtin_fixture("C7xA5")
    assert is_p_solvable(G, 7) and not is_p_solvable(G, 5)


@pytest.mark.parametrize("recipe,flags", [
    # abelian, nilpotent, supersolvable
    ("S3", (False, False, True)),
    ("D4", (False, True, True)),
    ("A4", (False, False, False)),
    ("S4", (False, False, False)),
    ("C3xC4", (True, True, True)),
    ("D5xC3", (False, False, True)),
])
def test_membership(recipe, flags):
    G = catalog.build_recipe(recipe)
    assert (is_member(G, ABELIAN), is_member(G, NILPOTENT), is_member(G, SUPERSOLVABLE)) == flags


def test_p_membership_on_s4_and_a4():
    S4 = catalog.build_recipe("S4")
    assert is_member(S4, p_supersolvable(3)) and not is_member(S4, p_supersolvable(2))
    assert not is_member(S4, p_nilpotent(2)) and not is_member(S4, p_nilpotent(3))
    A4 = catalog.build_recipe("A4")
    assert is_member(A4, p_nilpotent(3)) and not is_member(A4, p_nilpotent(2))


@pytest.mark.parametrize("tag,order", [("A", 12), ("N", 12), ("U", 4), ("Up:2", 4), ("Up:3", 1),
                                       ("Np:2", 4), ("Np:3", 12), ("N*U", 1), ("U*U", 1), ("A*A", 4)])
def test_s4_residuals(tag, order):
    assert residual(catalog.build_recipe("S4"), parse_formation(tag)).order == order


@pytest.mark.parametrize("recipe", SMALL)
def test_residuals_match_definitional_oracle(recipe):
    G = catalog.build_recipe(recipe)
    data = oracles.NormalData(G, G.whole(), normal_subgroups(G))
    for tag in simple_tags(G):
        assert residual(G, tag).mask == oracles.residual(data, tag), tag


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_subgroup_residuals_match_oracle(recipe, data):
    G = catalog.build_recipe(recipe)
    subs = all_subgroups(G).all
    T = subs[data.draw(st.integers(0, len(subs) - 1))]
    tags = simple_tags(G)
    tag = tags[data.draw(st.integers(0, len(tags) - 1))]
    nd = oracles.NormalData(G, T, normal_subgroups_of(G, T))
    assert residual(G, tag, T).mask == oracles.residual(nd, tag)


@pytest.mark.parametrize("recipe", SMALL)
def test_membership_agrees_with_trivial_residual(recipe):
    G = catalog.build_recipe(recipe)
    for T in all_subgroups(G).all:
        for tag in simple_tags(G):
            assert is_member(G, tag, T) == residual(G, tag, T).is_trivial


@pytest.mark.parametrize("recipe", ["S4", "S3xS3", "A4xC3", "D6"])
def test_product_residual_composes(recipe):
    G = catalog.build_recipe(recipe)
    for left in simple_tags(G):
        for right in simple_tags(G):
            R = residual(G, right)
            data = oracles.NormalData(G, R, normal_subgroups_of(G, R))
            assert residual(G, product(left, right)).mask == oracles.residual(data, left)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(SMALL + ["S4xC2", "Q8xS3"]), st.integers(0, 10_000))
def test_chief_factors_do_not_depend_on_choices(recipe, seed):
    G = catalog.build_recipe(recipe)
    base = sorted(chief_series(G).factor_orders)
    again = chief_series(G, rng=random.Random(seed))
    assert sorted(again.factor_orders) == base
    for a, b in zip(again.chain, again.chain[1:]):
        assert a < b and b.is_normal()
    factors = again.factor_orders
    assert is_member(G, SUPERSOLVABLE) == all(isprime(f) for f in factors)
    for p in prime_divisors(G.order):
        assert is_member(G, p_supersolvable(p)) == all(f % p or f == p for f in factors)


@pytest.mark.parametrize("recipe", SMALL)
def test_u_residual_is_product_of_up_residuals(recipe):
    assert residual_product_identity_check(catalog.build_recipe(recipe))
