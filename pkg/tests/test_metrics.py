import pytest

import oracles
from weaknorm import catalog, metrics
from weaknorm.errors import NotPSolvable, NotSolvable
from weaknorm.formations import NILPOTENT, is_solvable, p_nilpotent
from weaknorm.lattice import normal_subgroups, normal_subgroups_of, prime_divisors

SOLVABLE = ["S3", "D4", "A4", "S4", "C3xS3", "Q8xC3", "C2xA4", "S3xS3", "A4xC3", "S4xC2", "S4xC3",
            "D6xS3", "A4xS3", "S4xS3"]


def oracle_member_mod(G, tag):
    """``member(N, K)``: is ``N/K`` in ``tag``, decided by the definitional oracle."""
    def member(N, K):
        return oracles.quotient_in(oracles.NormalData(G, N, normal_subgroups_of(G, N)), K, tag)
    return member


def test_c5xs4_upper_2_series():
    G = catalog.builtin_fixture("C5xS4")
    s = metrics.upper_p_series(G, 2)
    assert s.orders == [1, 5, 20, 60, 120]
    assert s.p_factor_count == metrics.p_length(G, 2) == 2


@pytest.mark.parametrize("recipe,lp,hp,h", [
    ("S4", {2: 2, 3: 1}, {2: 2, 3: 2}, 3),
    ("S3", {2: 1, 3: 1}, {2: 1, 3: 2}, 2),
    ("D4", {2: 1}, {2: 1}, 1),
    ("A4", {2: 1, 3: 1}, {2: 2, 3: 1}, 2),
])
def test_known_lengths(recipe, lp, hp, h):
    G = catalog.build_recipe(recipe)
    assert {p: metrics.p_length(G, p) for p in lp} == lp
    assert {p: metrics.p_fitting_length(G, p) for p in hp} == hp
    assert metrics.fitting_length(G) == h


def test_cyclic_group_lengths():
    G = catalog.build_recipe("C3")
    assert metrics.p_length(G, 2) == 0
    assert metrics.p_fitting_length(G, 2) == 1
    assert metrics.p_length(G, 3) == 1


def test_errors_for_non_solvable_groups():
    A5 = catalog.build_recipe("A5")
    with pytest.raises(NotPSolvable):
        metrics.p_length(A5, 2)
    with pytest.raises(NotPSolvable):
        metrics.p_fitting_length(A5, 5)
    with pytest.raises(NotSolvable):
        metrics.fitting_length(A5)
    assert metrics.p_length(A5, 7) == 0


@pytest.mark.parametrize("recipe", SOLVABLE)
def test_p_length_matches_normal_lattice_oracle(recipe):
    G = catalog.build_recipe(recipe)
    normals = normal_subgroups(G)
    for p in prime_divisors(G.order):
        assert metrics.p_length(G, p) == oracles.p_length(G, normals, p)
        s = metrics.upper_p_series(G, p)
        assert s.orders == sorted(set(oracles.upper_p_orders(G, normals, p)))


@pytest.mark.parametrize("recipe", SOLVABLE)
def test_fitting_lengths_match_oracle(recipe):
    G = catalog.build_recipe(recipe)
    normals = normal_subgroups(G)
    assert is_solvable(G)
    assert metrics.fitting_length(G) == oracles.layer_count(G, normals, oracle_member_mod(G, NILPOTENT))
    for p in prime_divisors(G.order):
        want = oracles.layer_count(G, normals, oracle_member_mod(G, p_nilpotent(p)))
        assert metrics.p_fitting_length(G, p) == want
        assert metrics.shortest_p_nilpotent_chain(G, p) == want


def test_fixture_p_fitting_lengths():
    G = catalog.builtin_fixture("G96_70")
    assert metrics.p_fitting_length(G, 2) == metrics.shortest_p_nilpotent_chain(G, 2) == 2
