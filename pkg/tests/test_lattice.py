import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.combinatorics import Permutation, PermutationGroup

import oracles
from weaknorm import catalog, lattice
from weaknorm.lattice import (
    all_subgroups,
    center,
    centralizer,
    derived_series,
    derived_subgroup,
    fitting,
    frattini,
    hypercenter,
    minimal_normal_subgroups,
    normal_closure,
    normal_subgroups,
    normalizer,
    o_p,
    o_p_prime,
    p_fitting,
    socle,
)

# subgroup counts of standard small groups
KNOWN_COUNTS = {"C2": 2, "C6": 4, "S3": 6, "C2^2": 5, "D4": 10, "Q8": 6, "A4": 10, "C2^3": 16,
                "S4": 30, "D6": 16, "A5": 59, "C3^2": 6, "Q8xC2": 19}

SMALL = ["S3", "D4", "Q8", "A4", "S4", "C3xS3", "D5", "Q8xC3", "C2xA4", "D6"]


def sympy_group(G):
    return PermutationGroup([Permutation(list(G.perm(g))) for g in G.generators])


@pytest.mark.parametrize("recipe,count", sorted(KNOWN_COUNTS.items()))
def test_subgroup_counts(recipe, count):
    assert len(all_subgroups(catalog.build_recipe(recipe))) == count


@pytest.mark.parametrize("name,count", [("S4", 30), ("G96_70", 164), ("G216_153", 182), ("SL25", 76),
                                        ("C5xS4", 60)])
def test_fixture_subgroup_counts(name, count):
    assert len(all_subgroups(catalog.builtin_fixture(name))) == count


@pytest.mark.parametrize("recipe", SMALL)
def test_lattice_matches_subset_closure_oracle(recipe):
    G = catalog.build_recipe(recipe)
    want = {oracles.as_mask(G, S) for S in oracles.subgroups_by_subset_closure(G)}
    L = all_subgroups(G)
    assert L.masks() == want
    assert [S.mask for S in L.normal] == [S.mask for S in normal_subgroups(G)]


@pytest.mark.parametrize("recipe", SMALL)
def test_normal_and_maximal_lists(recipe):
    G = catalog.build_recipe(recipe)
    L = all_subgroups(G)
    brute_normal = [S for S in L.all if oracles.normalizer(G, S) == frozenset(oracles.elements(G))]
    assert {S.mask for S in brute_normal} == {S.mask for S in L.normal}
    proper = [S for S in L.all if not S.is_whole]
    brute_max = [S for S in proper if not any(S < T for T in proper)]
    assert {S.mask for S in brute_max} == {S.mask for S in L.maximal}


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_normalizer_and_centralizer_match_brute_force(recipe, data):
    G = catalog.build_recipe(recipe)
    subs = all_subgroups(G).all
    S = subs[data.draw(st.integers(0, len(subs) - 1))]
    assert normalizer(G, S).mask == oracles.as_mask(G, oracles.normalizer(G, S))
    assert centralizer(G, S).mask == oracles.as_mask(G, oracles.centralizer(G, S))


@pytest.mark.parametrize("recipe", SMALL + ["C4xC4", "C2^3xC3"])
def test_center_and_derived_match_sympy(recipe):
    G = catalog.build_recipe(recipe)
    P = sympy_group(G)
    assert center(G).order == P.center().order()
    assert derived_subgroup(G).order == P.derived_subgroup().order()
    assert (derived_series(G)[-1].order == 1) == P.is_solvable


@pytest.mark.parametrize("recipe,phi,fit,soc", [("S4", 1, 4, 4), ("Q8", 2, 8, 2), ("D4", 2, 8, 2),
                                                ("C8", 4, 8, 2), ("A5", 1, 1, 60), ("C2xA4", 1, 8, 8),
                                                ("S3", 1, 3, 3)])
def test_frattini_fitting_socle(recipe, phi, fit, soc):
    G = catalog.build_recipe(recipe)
    assert frattini(G).order == phi
    assert fitting(G).order == fit
    assert socle(G).order == soc


def test_o_p_and_p_fitting():
    G = catalog.build_recipe("S4")
    assert o_p(G, 2).order == 4 and o_p(G, 3).order == 1
    assert o_p_prime(G, 3).order == 4 and o_p_prime(G, 2).order == 1
    assert p_fitting(G, 3).order == 12  # O_{3',3}(S4) = A4
    H = catalog.build_recipe("S3xC5")
    assert o_p_prime(H, 2).order == 15


def test_hypercenter():
    assert hypercenter(catalog.build_recipe("D4")).order == 8
    assert hypercenter(catalog.build_recipe("S3xC2")).order == 2
    assert hypercenter(catalog.build_recipe("S4")).order == 1


def test_minimal_normal_and_normal_closure():
    G = catalog.build_recipe("S3xS3")
    mins = minimal_normal_subgroups(G)
    assert sorted(M.order for M in mins) == [3, 3]
    t = G.subgroup([G.generators[0]])
    closure = normal_closure(G, t)
    assert closure.is_normal() and t <= closure
    assert all(not (t <= N) or closure <= N for N in normal_subgroups(G))


def test_subgroups_within_and_as_group_agree():
    G = catalog.build_recipe("S4")
    L = all_subgroups(G)
    A4 = next(S for S in L.normal if S.order == 12)
    inside = L.within(A4)
    assert len(inside) == len(all_subgroups(G.as_group(A4))) == 10


def test_disk_cache_round_trip(tmp_path):
    lattice.set_cache_dir(tmp_path)
    try:
        G = catalog.build_recipe("D6")
        L1 = all_subgroups(G)
        assert list(tmp_path.iterdir())
        H = catalog.build_recipe("D6")
        L2 = all_subgroups(H)
        assert L1.masks() == L2.masks()
        assert [S.mask for S in L1.maximal] == [S.mask for S in L2.maximal]
    finally:
        lattice.set_cache_dir(None)


def test_prime_helpers():
    assert lattice.prime_divisors(1) == []
    assert lattice.prime_divisors(360) == [2, 3, 5]
    assert lattice.is_pi_number(12, [2, 3]) and not lattice.is_pi_number(10, [2])
