from functools import reduce

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from weaknorm import catalog
from weaknorm.errors import ForeignSubgroup
from weaknorm.formations import (
    ABELIAN,
    NILPOTENT,
    SUPERSOLVABLE,
    p_nilpotent,
    p_supersolvable,
    residual,
)
from weaknorm.lattice import (
    all_subgroups,
    center,
    normal_subgroups,
    normal_subgroups_of,
    normalizer,
    prime_divisors,
)
from weaknorm.norms import (
    baer_norm,
    n1_group_check,
    norm,
    norm_above,
    norm_infinity,
    norm_infinity_by_intersection,
    norm_series,
    weak_centralizer,
    weak_norm,
    weak_norm_direct,
)
from weaknorm.perm import preimage, quotient

SMALL = ["S3", "D4", "A4", "S4", "C3xS3", "D5", "Q8xC3", "C2xA4", "S3xS3", "A4xC3", "D6xC2"]


def tags_of(G):
    out = [ABELIAN, NILPOTENT, SUPERSOLVABLE]
    for p in prime_divisors(G.order):
        out += [p_nilpotent(p), p_supersolvable(p)]
    return out


def oracle_weak_norm(G, H, tag) -> int:
    """Intersection of brute-force normalizers of oracle residuals of every T <= H."""
    full = frozenset(oracles.elements(G))
    result = full
    for T in all_subgroups(G).within(H):
        data = oracles.NormalData(G, T, normal_subgroups_of(G, T))
        R = G.subgroup_from_mask(oracles.residual(data, tag))
        result = result & oracles.normalizer(G, R)
    return oracles.as_mask(G, result)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_weak_norm_matches_definition(recipe, data):
    G = catalog.build_recipe(recipe)
    subs = all_subgroups(G).all
    H = subs[data.draw(st.integers(0, len(subs) - 1))]
    tags = tags_of(G)
    tag = tags[data.draw(st.integers(0, len(tags) - 1))]
    want = oracle_weak_norm(G, H, tag)
    assert weak_norm(G, H, tag).mask == want
    assert weak_norm_direct(G, H, tag).mask == want


@pytest.mark.parametrize("recipe", SMALL)
def test_norm_is_normal_and_contains_center(recipe):
    G = catalog.build_recipe(recipe)
    Z = center(G)
    for tag in tags_of(G):
        N = norm(G, tag)
        assert N.is_normal()
        assert Z <= N
        assert baer_norm(G) <= N


def test_weak_norm_rejects_foreign_subgroup():
    G = catalog.build_recipe("S3")
    H = catalog.build_recipe("S3").whole()
    with pytest.raises(ForeignSubgroup):
        weak_norm(G, H, SUPERSOLVABLE)
    with pytest.raises(ForeignSubgroup):
        weak_centralizer(G, H)


def test_weak_centralizer_and_baer_norm():
    Q8 = catalog.build_recipe("Q8")
    assert baer_norm(Q8).is_whole  # every subgroup of Q8 is normal
    S4 = catalog.build_recipe("S4")
    assert baer_norm(S4).is_trivial
    D4 = catalog.build_recipe("D4")
    assert baer_norm(D4).order == 2


def test_fixture_values():
    S4 = catalog.builtin_fixture("S4")
    assert norm(S4, p_supersolvable(3)).is_whole
    S3 = next(S for S in all_subgroups(S4).all if S.order == 6)
    R = residual(S4, p_nilpotent(3), S3)
    assert R.order == 3
    assert normalizer(S4, R).order == 6
    G = catalog.builtin_fixture("G96_70")
    H = G.subgroup([G.labels[k] for k in "abf"])
    W = weak_norm(G, H, p_supersolvable(2))
    assert W.order == 48 and norm(G, p_supersolvable(2)).order == 48
    assert not n1_group_check(G, H, p_supersolvable(2))


@pytest.mark.parametrize("recipe", SMALL)
def test_norm_of_quotient_matches_in_group_computation(recipe):
    G = catalog.build_recipe(recipe)
    for K in normal_subgroups(G):
        q = quotient(G, K)
        for tag in (SUPERSOLVABLE, p_supersolvable(2), NILPOTENT):
            via_quotient = preimage(q, norm(q.image, tag))
            assert via_quotient.mask == norm_above(G, K, tag).mask


@pytest.mark.parametrize("recipe", SMALL + ["S4xC2"])
def test_norm_series_is_ascending_and_stable(recipe):
    G = catalog.build_recipe(recipe)
    for tag in tags_of(G):
        s = norm_series(G, tag)
        assert s.terms[0].is_trivial
        for a, b in zip(s.terms, s.terms[1:]):
            assert a < b and b.is_normal()
        top = s.terminal
        q = quotient(G, top)
        assert norm(q.image, tag).is_trivial
        assert norm_infinity(G, tag) == top


@pytest.mark.parametrize("recipe", SMALL + ["S4xC2"])
def test_norm_infinity_by_brute_intersection(recipe):
    G = catalog.build_recipe(recipe)
    for tag in (SUPERSOLVABLE,) + tuple(p_supersolvable(p) for p in prime_divisors(G.order)):
        brute = reduce(lambda a, b: a & b,
                       (N.mask for N in normal_subgroups(G) if norm(quotient(G, N).image, tag).is_trivial))
        assert norm_infinity_by_intersection(G, tag).mask == brute == norm_infinity(G, tag).mask


def test_norm_series_of_fixtures():
    assert norm_series(catalog.builtin_fixture("C7xA5"), SUPERSOLVABLE).orders == [1, 7]
    assert norm_infinity(catalog.builtin_fixture("C5xS4"), p_supersolvable(2)).is_whole
    G = catalog.builtin_fixture("G216_153")
    assert norm(G, p_supersolvable(2)).is_trivial and norm(G, SUPERSOLVABLE).is_trivial
