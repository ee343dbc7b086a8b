import pytest
from sympy.combinatorics import Permutation, PermutationGroup

from weaknorm import catalog
from weaknorm.errors import OrderMismatch, ParseError, UnknownFixture


def word(G, *names):
    x = 0
    for n in names:
        x = int(G.mul[x, G.labels[n]])
    return x


def conj_label(G, a, b):
    """``a^b = b^-1 a b``."""
    return int(G.conj[G.labels[b], G.labels[a]])


def test_group_file_round_trip():
    G = catalog.builtin_fixture("G96_70")
    text = catalog.dump_group(G)
    H = catalog.load_group(text)
    assert (H.perms == G.perms).all()
    assert H.labels == G.labels
    gf = catalog.parse_group_file("# comment\nname X\ndegree 3\n1 2 0  # trailing\n")
    assert gf.name == "X" and gf.generators == [[1, 2, 0]] and gf.expected_order is None


@pytest.mark.parametrize("text", [
    "name X\n1 0\n",                          # no degree
    "degree 2\nlabels a b\n1 0\n",            # label count mismatch
    "degree x\n",                             # bad integer
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        catalog.parse_group_file(text)


def test_order_mismatch_is_reported():
    with pytest.raises(OrderMismatch):
        catalog.load_group("degree 3\norder 5\n1 2 0\n")


def test_unknown_fixture():
    with pytest.raises(UnknownFixture):
        catalog.build_fixture("G7")
    with pytest.raises(UnknownFixture):
        catalog.fixture_text("G7")


@pytest.mark.parametrize("name", catalog.FIXTURE_NAMES)
def test_shipped_fixture_matches_builder(name):
    shipped = catalog.builtin_fixture(name)
    built = catalog.build_fixture(name)
    assert shipped.order == catalog.FIXTURE_ORDERS[name]
    assert (shipped.perms == built.perms).all()
    P = PermutationGroup([Permutation(list(shipped.perm(g))) for g in shipped.generators])
    assert P.order() == shipped.order


def test_g96_70_relations():
    G = catalog.builtin_fixture("G96_70")
    L = G.labels
    orders = {k: int(G.element_orders[v]) for k, v in L.items()}
    assert orders == {"a": 2, "b": 2, "c": 2, "d": 2, "e": 2, "f": 3}
    assert conj_label(G, "a", "e") == word(G, "a", "c")
    assert conj_label(G, "b", "e") == word(G, "b", "d")
    assert conj_label(G, "c", "e") == L["c"] and conj_label(G, "d", "e") == L["d"]
    assert conj_label(G, "a", "f") == L["b"]
    assert conj_label(G, "b", "f") == word(G, "a", "b")
    assert conj_label(G, "c", "f") == L["d"]
    assert conj_label(G, "d", "f") == word(G, "c", "d")
    # e and f commute, so <e, f> is cyclic of order 6
    assert word(G, "e", "f") == word(G, "f", "e")


def test_g216_153_relations():
    G = catalog.builtin_fixture("G216_153")
    L = G.labels
    assert [int(G.element_orders[L[k]]) for k in "abcdef"] == [3, 3, 4, 4, 2, 3]
    ainv = int(G.inv[L["a"]])
    binv = int(G.inv[L["b"]])
    assert conj_label(G, "a", "c") == int(G.mul[ainv, L["b"]])
    assert conj_label(G, "b", "c") == word(G, "a", "b")
    assert conj_label(G, "a", "d") == binv
    assert conj_label(G, "b", "d") == L["a"]
    assert conj_label(G, "a", "f") == binv
    assert conj_label(G, "b", "f") == int(G.mul[L["a"], binv])
    assert conj_label(G, "c", "f") == word(G, "d", "d", "d")
    assert conj_label(G, "d", "f") == word(G, "c", "d")
    assert word(G, "c", "c") == L["e"] == word(G, "d", "d")


@pytest.mark.parametrize("recipe,order", [("C2", 2), ("S3xC4", 24), ("C2^3xC3", 24), ("Q8xC3", 24),
                                          ("D6", 12), ("A4xC2", 24)])
def test_recipes(recipe, order):
    assert catalog.recipe_order(recipe) == order
    assert catalog.build_recipe(recipe).order == order


def test_bad_recipe():
    with pytest.raises(ParseError):
        catalog.build_recipe("X5")
    with pytest.raises(ParseError):
        catalog.build_block("S3^2")


def test_default_corpus_is_deterministic_and_bounded():
    spec = catalog.CorpusSpec.default()
    recipes = catalog.corpus_recipes(spec)
    assert recipes == catalog.corpus_recipes(spec)
    assert len(recipes) == len(set(recipes))
    assert all(catalog.recipe_order(r) <= 96 for r in recipes)
    orders = [catalog.recipe_order(r) for r in recipes]
    assert orders == sorted(orders)


def test_load_directory(tmp_path):
    (tmp_path / "b.grp").write_text(catalog.fixture_text("S4"))
    (tmp_path / "a.grp").write_text("degree 3\norder 5\n1 2 0\n")
    (tmp_path / "c.txt").write_text("ignored")
    groups = list(catalog.load_directory(tmp_path))
    assert [G.name for G in groups] == ["S4"]
