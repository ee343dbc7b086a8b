"""Named groups, the line-oriented group file format, and corpus generation.

Group file format::

    # free-form comment lines
    name G96_70
    degree 96
    order 96                 (optional; checked against the closure)
    labels a b c d e f       (optional; one label per generator line)
    1 0 3 2 ...              (one generator per line, space-separated images)
"""

from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .errors import GroupError, OrderMismatch, ParseError, UnknownFixture
from .perm import DEFAULT_ORDER_CAP, PermGroup, close_generators, from_cycles

log = logging.getLogger(__name__)

FIXTURE_NAMES = ("S4", "G96_70", "G216_153", "SL25", "C7xA5", "C5xS4")


@dataclass
class GroupFile:
    name: str
    degree: int
    generators: list[list[int]]
    expected_order: int | None = None
    labels: list[str] | None = None


# file format ------------------------------------------------------------------

def parse_group_file(text: str) -> GroupFile:
    name = None
    degree = None
    order = None
    labels = None
    gens: list[list[int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        try:
            if head == "name":
                name = rest.strip()
            elif head == "degree":
                degree = int(rest)
            elif head == "order":
                order = int(rest)
            elif head == "labels":
                labels = rest.split()
            else:
                gens.append([int(tok) for tok in line.split()])
        except ValueError as exc:
            raise ParseError(f"line {lineno}: cannot parse {raw!r}") from exc
    if degree is None:
        raise ParseError("missing 'degree' header")
    if labels is not None and len(labels) != len(gens):
        raise ParseError(f"{len(labels)} labels for {len(gens)} generators")
    return GroupFile(name or "unnamed", degree, gens, order, labels)


def format_group_file(gf: GroupFile, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"name {gf.name}")
    lines.append(f"degree {gf.degree}")
    if gf.expected_order is not None:
        lines.append(f"order {gf.expected_order}")
    if gf.labels:
        lines.append("labels " + " ".join(gf.labels))
    lines.extend(" ".join(str(i) for i in g) for g in gf.generators)
    return "\n".join(lines) + "\n"


def load_group(gf: GroupFile | str | Path, cap: int = DEFAULT_ORDER_CAP) -> PermGroup:
    """Close a group file's generators; ``expected_order`` must match exactly."""
    if isinstance(gf, Path):
        gf = parse_group_file(gf.read_text())
    elif isinstance(gf, str):
        gf = parse_group_file(gf)
    G = close_generators(gf.degree, gf.generators, cap=cap, name=gf.name)
    if gf.expected_order is not None and G.order != gf.expected_order:
        raise OrderMismatch(f"{gf.name}: closure has order {G.order}, file says {gf.expected_order}")
    G.labels = {}
    if gf.labels:
        for label, images in zip(gf.labels, gf.generators):
            G.labels[label] = G.index(images)
    return G


def to_group_file(G: PermGroup, name: str | None = None) -> GroupFile:
    labels = getattr(G, "labels", None) or {}
    by_index = {v: k for k, v in labels.items()}
    gens = list(G.generators)
    names = [by_index.get(g) for g in gens]
    return GroupFile(
        name=name or G.name or "unnamed",
        degree=G.degree,
        generators=[list(G.perm(g)) for g in gens],
        expected_order=G.order,
        labels=names if labels and all(names) else None,
    )


def dump_group(G: PermGroup, name: str | None = None) -> str:
    return format_group_file(to_group_file(G, name))


# constructions ------------------------------------------------------------------

def cyclic(n: int) -> PermGroup:
    if n == 1:
        return close_generators(1, [], name="C1")
    return close_generators(n, [from_cycles(n, tuple(range(n)))], name=f"C{n}")


def dihedral(n: int) -> PermGroup:
    """Dihedral group of order ``2n`` acting on an ``n``-gon (``D4`` has order 8)."""
    rot = from_cycles(n, tuple(range(n)))
    refl = tuple((-i) % n for i in range(n))
    return close_generators(n, [rot, refl], name=f"D{n}")


def symmetric(n: int) -> PermGroup:
    if n == 1:
        return close_generators(1, [], name="S1")
    gens = [from_cycles(n, (0, 1))] if n == 2 else [from_cycles(n, (0, 1)), from_cycles(n, tuple(range(n)))]
    return close_generators(n, gens, name=f"S{n}")


def alternating(n: int) -> PermGroup:
    gens = [from_cycles(n, (0, 1, k)) for k in range(2, n)]
    return close_generators(n, gens, name=f"A{n}")


def quaternion() -> PermGroup:
    """``Q8`` in its regular representation (points are 1, i, j, k, -1, -i, -j, -k)."""
    # right multiplication by i and by j on the basis units
    i_act = (1, 4, 7, 2, 5, 0, 3, 6)
    j_act = (2, 3, 4, 5, 6, 7, 0, 1)
    return close_generators(8, [i_act, j_act], name="Q8")


def elementary_abelian(p: int, rank: int) -> PermGroup:
    gens = []
    degree = p * rank
    for r in range(rank):
        gens.append(from_cycles(degree, tuple(range(r * p, (r + 1) * p))))
    return close_generators(degree, gens, name=f"C{p}^{rank}")


def direct_product(A: PermGroup, B: PermGroup, name: str | None = None,
                   cap: int = DEFAULT_ORDER_CAP) -> PermGroup:
    """``A x B`` acting on the disjoint union of the two point sets."""
    da, db = A.degree, B.degree
    gens = []
    for g in A.generators:
        gens.append(A.perm(g) + tuple(range(da, da + db)))
    for g in B.generators:
        gens.append(tuple(range(da)) + tuple(da + i for i in B.perm(g)))
    label = name or f"{A.name}x{B.name}"
    return close_generators(da + db, gens, cap=cap, name=label)


def regular_representation(G: PermGroup, labels: dict[str, int] | None = None,
                           name: str | None = None) -> PermGroup:
    """Right regular action of ``G`` on its own element indices."""
    gens = [tuple(int(v) for v in G.mul[:, g]) for g in G.generators]
    R = close_generators(G.order, gens, cap=G.order, name=name or G.name)
    R.labels = {}
    if labels:
        for label, x in labels.items():
            R.labels[label] = R.index(tuple(int(v) for v in G.mul[:, x]))
    return R


def affine_group(p: int, dim: int, matrices: Sequence[Sequence[Sequence[int]]],
                 name: str | None = None) -> tuple[PermGroup, dict[str, int]]:
    """``F_p^dim`` translations extended by the given matrices, acting on row vectors
    ``x -> x M + v``.  Returns the group and the indices of the translation by each
    basis vector (labelled ``t0, t1, ...``) and of each matrix (``m0, m1, ...``)."""
    points = list(itertools.product(range(p), repeat=dim))
    pos = {v: i for i, v in enumerate(points)}
    arr = np.array(points)

    def as_perm(M, v) -> tuple[int, ...]:
        img = (arr @ np.array(M) + np.array(v)) % p
        return tuple(pos[tuple(int(c) for c in row)] for row in img)

    ident = np.eye(dim, dtype=int)
    trans = [as_perm(ident, ident[k]) for k in range(dim)]
    lin = [as_perm(M, [0] * dim) for M in matrices]
    G = close_generators(len(points), trans + lin, name=name)
    labels = {f"t{k}": G.index(t) for k, t in enumerate(trans)}
    labels.update({f"m{k}": G.index(m) for k, m in enumerate(lin)})
    return G, labels


def special_linear_2(p: int) -> PermGroup:
    """``SL(2, p)`` acting on the nonzero row vectors of ``F_p^2``."""
    vecs = [v for v in itertools.product(range(p), repeat=2) if v != (0, 0)]
    pos = {v: i for i, v in enumerate(vecs)}

    def act(M):
        return tuple(pos[((v[0] * M[0][0] + v[1] * M[1][0]) % p, (v[0] * M[0][1] + v[1] * M[1][1]) % p)]
                     for v in vecs)

    return close_generators(len(vecs), [act([[1, 1], [0, 1]]), act([[0, p - 1], [1, 0]])],
                            name=f"SL(2,{p})")


def build_g96_70() -> PermGroup:
    """``C2^4 : C6`` with a^e=ac, b^e=bd, c^e=c, d^e=d, a^f=b, b^f=ab, c^f=d, d^f=cd."""
    # rows are images of the basis a, b, c, d
    e = [[1, 0, 1, 0], [0, 1, 0, 1], [0, 0, 1, 0], [0, 0, 0, 1]]
    f = [[0, 1, 0, 0], [1, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 1]]
    A, lab = affine_group(2, 4, [e, f])
    labels = {"a": lab["t0"], "b": lab["t1"], "c": lab["t2"], "d": lab["t3"], "e": lab["m0"], "f": lab["m1"]}
    return regular_representation(A, labels, name="G96_70")


def build_g216_153() -> PermGroup:
    """``((C3 x C3) : Q8) : C3`` with Q8 = <c, d>, e = c^2 and
    a^c=a^-1 b, b^c=ab, a^d=b^-1, b^d=a, a^f=b^-1, b^f=ab^-1, c^f=d^3, d^f=cd."""
    c = [[2, 1], [1, 1]]
    d = [[0, 2], [1, 0]]
    f = [[0, 2], [1, 2]]
    A, lab = affine_group(3, 2, [c, d, f])
    e = int(A.mul[lab["m0"], lab["m0"]])
    labels = {"a": lab["t0"], "b": lab["t1"], "c": lab["m0"], "d": lab["m1"], "e": e, "f": lab["m2"]}
    R = regular_representation(A, labels, name="G216_153")
    # the file lists all six named elements as generators
    gens = [R.perm(R.labels[k]) for k in "abcdef"]
    G = close_generators(R.degree, gens, name="G216_153")
    G.labels = {k: G.index(g) for k, g in zip("abcdef", gens)}
    return G


FIXTURE_BUILDERS = {
    "S4": lambda: symmetric(4),
    "G96_70": build_g96_70,
    "G216_153": build_g216_153,
    "SL25": lambda: special_linear_2(5),
    "C7xA5": lambda: direct_product(cyclic(7), alternating(5), name="C7xA5"),
    "C5xS4": lambda: direct_product(cyclic(5), symmetric(4), name="C5xS4"),
}

FIXTURE_ORDERS = {"S4": 24, "G96_70": 96, "G216_153": 216, "SL25": 120, "C7xA5": 420, "C5xS4": 120}


def build_fixture(name: str) -> PermGroup:
    """Construct a fixture from its recipe (used to freeze the shipped files)."""
    try:
        builder = FIXTURE_BUILDERS[name]
    except KeyError:
        raise UnknownFixture(name) from None
    G = builder()
    G.name = name
    if not hasattr(G, "labels"):
        G.labels = {}
    if G.order != FIXTURE_ORDERS[name]:
        raise OrderMismatch(f"{name}: recipe produced order {G.order}")
    return G


def fixture_text(name: str) -> str:
    if name not in FIXTURE_NAMES:
        raise UnknownFixture(name)
    return resources.files("weaknorm.fixtures").joinpath(f"{name}.grp").read_text()


def builtin_fixture(name: str) -> PermGroup:
    """Load one of the frozen fixture files shipped with the package."""
    return load_group(fixture_text(name))


def freeze_fixtures(directory: Path) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    for name in FIXTURE_NAMES:
        G = build_fixture(name)
        (directory / f"{name}.grp").write_text(dump_group(G, name))


# recipes and corpora -------------------------------------------------------------

_BLOCK = re.compile(r"^(C|D|S|A)(\d+)(?:\^(\d+))?$|^Q8$")


def build_block(token: str) -> PermGroup:
    m = _BLOCK.match(token)
    if not m:
        raise ParseError(f"unknown building block {token!r}")
    if token == "Q8":
        return quaternion()
    kind, n, rank = m.group(1), int(m.group(2)), m.group(3)
    if rank is not None:
        if kind != "C":
            raise ParseError(f"only cyclic blocks take a rank: {token!r}")
        return elementary_abelian(n, int(rank))
    return {"C": cyclic, "D": dihedral, "S": symmetric, "A": alternating}[kind](n)


def block_order(token: str) -> int:
    m = _BLOCK.match(token)
    if not m:
        raise ParseError(f"unknown building block {token!r}")
    if token == "Q8":
        return 8
    kind, n, rank = m.group(1), int(m.group(2)), m.group(3)
    if rank is not None:
        return n ** int(rank)
    from math import factorial
    return {"C": n, "D": 2 * n, "S": factorial(n), "A": factorial(n) // 2}[kind]


def build_recipe(recipe: str, cap: int = DEFAULT_ORDER_CAP) -> PermGroup:
    """Build ``"C3xD4"``-style recipes: building blocks joined by ``x``."""
    parts = recipe.split("x")
    G = build_block(parts[0])
    for tok in parts[1:]:
        G = direct_product(G, build_block(tok), cap=cap)
    G.name = recipe
    G.labels = {}
    return G


def recipe_order(recipe: str) -> int:
    out = 1
    for tok in recipe.split("x"):
        out *= block_order(tok)
    return out


DEFAULT_BLOCKS = (
    "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10", "C11", "C12",
    "C2^2", "C2^3", "C3^2",
    "S3", "D4", "D5", "D6", "Q8", "A4", "S4", "A5",
)


@dataclass(frozen=True)
class CorpusSpec:
    blocks: tuple[str, ...] = ()
    max_order: int = 96
    products: bool = True
    include_fixtures: bool = False
    fixtures_max_order: int | None = None

    @classmethod
    def default(cls) -> "CorpusSpec":
        return cls(blocks=DEFAULT_BLOCKS, max_order=96, products=True, include_fixtures=True)

    @classmethod
    def fixtures_only(cls) -> "CorpusSpec":
        return cls(include_fixtures=True)


def corpus_recipes(spec: CorpusSpec) -> list[str]:
    """Recipe strings in deterministic order: by order, then recipe string."""
    recipes = {b for b in spec.blocks if block_order(b) <= spec.max_order}
    if spec.products:
        for a, b in itertools.combinations_with_replacement(sorted(spec.blocks), 2):
            if block_order(a) * block_order(b) <= spec.max_order:
                recipes.add(f"{a}x{b}")
    return sorted(recipes, key=lambda r: (recipe_order(r), r))


def corpus(spec: CorpusSpec, cap: int = DEFAULT_ORDER_CAP) -> Iterator[PermGroup]:
    """Deterministic stream of corpus groups; fixtures (if requested) come after the
    generated groups and replace generated groups carrying the same name."""
    fixture_names = []
    if spec.include_fixtures:
        limit = spec.fixtures_max_order
        fixture_names = [n for n in FIXTURE_NAMES if limit is None or FIXTURE_ORDERS[n] <= limit]
    for recipe in corpus_recipes(spec):
        if recipe in fixture_names:
            continue
        try:
            yield build_recipe(recipe, cap=cap)
        except GroupError as exc:
            log.warning("skipping %s: %s", recipe, exc)
    for name in fixture_names:
        yield builtin_fixture(name)


def load_directory(path: Path, cap: int = DEFAULT_ORDER_CAP) -> Iterator[PermGroup]:
    for file in sorted(path.glob("*.grp")):
        try:
            yield load_group(file, cap=cap)
        except GroupError as exc:
            log.warning("skipping %s: %s", file, exc)
