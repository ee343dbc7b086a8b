"""Permutation groups realized by full element enumeration.

Every group is stored as the complete, canonically ordered list of its
elements (identity first, then lexicographic on image arrays) together with
a Cayley table.  Subgroups are bitsets over the parent's element indices,
held as Python ints: bit ``i`` set means element ``i`` is a member.

Products follow the left-to-right convention: ``x * y`` applies ``x`` first,
so ``(x * y)[k] == y[x[k]]`` and conjugation is ``x^g = g^-1 x g``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import ForeignSubgroup, InvalidPermutation, NotNormal, OrderCapExceeded

DEFAULT_ORDER_CAP = 512

Permutation = tuple[int, ...]


# bitset helpers ---------------------------------------------------------

def mask_from_bool(flags: np.ndarray) -> int:
    packed = np.packbits(np.asarray(flags, dtype=bool), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def mask_from_indices(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << int(i)
    return mask


def bool_from_mask(mask: int, n: int) -> np.ndarray:
    nbytes = (n + 7) // 8
    raw = np.frombuffer(mask.to_bytes(nbytes, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].astype(bool)


def indices_from_mask(mask: int, n: int) -> np.ndarray:
    return np.flatnonzero(bool_from_mask(mask, n))


# permutations -----------------------------------------------------------

def check_permutation(images: Sequence[int], degree: int) -> Permutation:
    """Validate ``images`` as a bijection of ``range(degree)`` and return it as a tuple."""
    try:
        perm = tuple(int(i) for i in images)
    except (TypeError, ValueError) as exc:
        raise InvalidPermutation(f"non-integer image in {images!r}") from exc
    if len(perm) != degree:
        raise InvalidPermutation(f"expected {degree} images, got {len(perm)}")
    if sorted(perm) != list(range(degree)):
        raise InvalidPermutation(f"{perm} is not a bijection on 0..{degree - 1}")
    return perm


def from_cycles(degree: int, *cycles: Sequence[int]) -> Permutation:
    """Build a permutation from disjoint cycles, e.g. ``from_cycles(4, (0, 1, 2, 3))``."""
    images = list(range(degree))
    seen: set[int] = set()
    for cyc in cycles:
        for a in cyc:
            if not 0 <= a < degree or a in seen:
                raise InvalidPermutation(f"bad cycle {cyc} for degree {degree}")
            seen.add(a)
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            images[a] = b
    return tuple(images)


def compose(x: Sequence[int], y: Sequence[int]) -> Permutation:
    """``x * y``: apply ``x`` then ``y``."""
    return tuple(y[i] for i in x)


# groups -----------------------------------------------------------------

class PermGroup:
    """An immutable finite permutation group with all elements enumerated.

    Build instances with :func:`close_generators`; the constructor expects an
    already canonical element array.
    """

    def __init__(self, degree: int, perms: np.ndarray, generators: Sequence[int],
                 name: str | None = None, table: np.ndarray | None = None):
        self.degree = int(degree)
        self.perms = np.ascontiguousarray(perms, dtype=np.int32)
        self.perms.setflags(write=False)
        self.order = len(self.perms)
        self.generators = tuple(int(g) for g in generators)
        self.name = name
        self.labels: dict[str, int] = {}
        self._cache: dict = {}
        self._index = {row.tobytes(): i for i, row in enumerate(self.perms)}
        self.mul = self._build_table() if table is None else np.ascontiguousarray(table, dtype=np.int32)
        self.mul.setflags(write=False)
        self.inv = np.argmax(self.mul == 0, axis=1).astype(np.int32)
        self.inv.setflags(write=False)

    def __repr__(self) -> str:
        label = self.name or "PermGroup"
        return f"<{label} order={self.order} degree={self.degree}>"

    def _build_table(self) -> np.ndarray:
        n = self.order
        if not self.generators:
            return np.zeros((n, n), dtype=np.int32)
        gens = self.perms[list(self.generators)]
        # right multiplication by each generator, looked up once per (element, generator)
        right = np.empty((n, len(gens)), dtype=np.int32)
        for j, g in enumerate(gens):
            prod = g[self.perms]
            right[:, j] = [self._index[row.tobytes()] for row in prod]
        table = np.full((n, n), -1, dtype=np.int32)
        table[:, 0] = np.arange(n)
        done = np.zeros(n, dtype=bool)
        done[0] = True
        frontier = [0]
        while frontier:
            nxt = []
            for y in frontier:
                col = table[:, y]
                for j in range(len(gens)):
                    z = right[y, j]
                    if not done[z]:
                        done[z] = True
                        table[:, z] = right[col, j]
                        nxt.append(z)
            frontier = nxt
        if not done.all():
            raise ValueError("generators do not generate the element list")
        return table

    # element access -----------------------------------------------------

    def perm(self, x: int) -> Permutation:
        return tuple(int(i) for i in self.perms[x])

    def index(self, perm: Sequence[int]) -> int:
        key = np.asarray(perm, dtype=np.int32).tobytes()
        try:
            return self._index[key]
        except KeyError:
            raise KeyError(f"{tuple(perm)} is not an element of {self!r}") from None

    def index_rows(self, rows: np.ndarray) -> np.ndarray:
        rows = np.ascontiguousarray(rows, dtype=np.int32)
        return np.array([self._index[r.tobytes()] for r in rows], dtype=np.int32)

    def product(self, x: int, y: int) -> int:
        return int(self.mul[x, y])

    def inverse(self, x: int) -> int:
        return int(self.inv[x])

    def commutator(self, x: int, y: int) -> int:
        """``[x, y] = x^-1 y^-1 x y``."""
        m = self.mul
        return int(m[m[self.inv[x], self.inv[y]], m[x, y]])

    @property
    def conj(self) -> np.ndarray:
        """``conj[g, x] = g^-1 x g`` for every pair of element indices."""
        table = self._cache.get("conj")
        if table is None:
            table = self.mul[self.inv[:, None], self.mul.T]
            table.setflags(write=False)
            self._cache["conj"] = table
        return table

    @property
    def element_orders(self) -> np.ndarray:
        orders = self._cache.get("orders")
        if orders is None:
            n = self.order
            orders = np.zeros(n, dtype=np.int64)
            cur = np.arange(n)
            for k in range(1, n + 1):
                cur = self.mul[cur, np.arange(n)] if k > 1 else cur
                hit = (cur == 0) & (orders == 0)
                orders[hit] = k
                if orders.all():
                    break
            orders.setflags(write=False)
            self._cache["orders"] = orders
        return orders

    def element_order(self, x: int) -> int:
        if not 0 <= x < self.order:
            raise IndexError(f"element index {x} out of range for order {self.order}")
        return int(self.element_orders[x])

    @cached_property
    def cayley_hash(self) -> str:
        h = hashlib.sha256()
        h.update(str(self.order).encode())
        h.update(self.mul.astype("<i4").tobytes())
        return h.hexdigest()

    # subgroups -----------------------------------------------------------

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.order) - 1

    def whole(self) -> "SubgroupHandle":
        return SubgroupHandle(self, self.full_mask, self.generators)

    def trivial(self) -> "SubgroupHandle":
        return SubgroupHandle(self, 1, ())

    def subgroup(self, gens: Iterable[int]) -> "SubgroupHandle":
        gens = tuple(int(g) for g in gens)
        return SubgroupHandle(self, closure_mask(self, gens), gens)

    def subgroup_from_mask(self, mask: int) -> "SubgroupHandle":
        return SubgroupHandle(self, mask)

    def as_group(self, sub: "SubgroupHandle", name: str | None = None) -> "PermGroup":
        """Materialize a subgroup as a standalone group on the same points."""
        if sub.parent is not self:
            raise ForeignSubgroup("subgroup belongs to another group")
        idx = sub.elements
        relabel = np.full(self.order, -1, dtype=np.int32)
        relabel[idx] = np.arange(len(idx), dtype=np.int32)
        table = relabel[self.mul[np.ix_(idx, idx)]]
        gens = [int(relabel[g]) for g in sub.generators]
        return PermGroup(self.degree, self.perms[idx], gens, name=name, table=table)


def closure_mask(G: PermGroup, gens: Sequence[int], start: int = 1) -> int:
    """Bitset of the subgroup generated by ``gens``.

    ``start`` seeds the search with a subgroup already known to lie inside the
    result; its generators must be included in ``gens``.
    """
    n = G.order
    seen = bool_from_mask(start, n)
    gens = np.unique(np.asarray([g for g in gens if g != 0], dtype=np.int64))
    if gens.size == 0:
        return start
    if start != 1:
        frontier = np.flatnonzero(seen)
    else:
        frontier = np.array([0])
    mul = G.mul
    while frontier.size:
        prod = mul[frontier[:, None], gens].ravel()
        prod = prod[~seen[prod]]
        if not prod.size:
            break
        prod = np.unique(prod)
        seen[prod] = True
        frontier = prod
    return mask_from_bool(seen)


@dataclass(frozen=True, eq=False)
class SubgroupHandle:
    """A subgroup of ``parent`` stored as an element-index bitset."""

    parent: PermGroup
    mask: int
    gens: tuple[int, ...] | None = field(default=None, repr=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SubgroupHandle):
            return NotImplemented
        return self.parent is other.parent and self.mask == other.mask

    def __hash__(self) -> int:
        return hash((id(self.parent), self.mask))

    def __repr__(self) -> str:
        return f"<Subgroup order={self.order} of {self.parent!r}>"

    @cached_property
    def order(self) -> int:
        return self.mask.bit_count()

    def __len__(self) -> int:
        return self.order

    @cached_property
    def elements(self) -> np.ndarray:
        idx = indices_from_mask(self.mask, self.parent.order)
        idx.setflags(write=False)
        return idx

    @cached_property
    def flags(self) -> np.ndarray:
        f = bool_from_mask(self.mask, self.parent.order)
        f.setflags(write=False)
        return f

    @cached_property
    def generators(self) -> tuple[int, ...]:
        if self.gens is not None:
            return self.gens
        return greedy_generators(self.parent, self.mask)

    def __contains__(self, x: int) -> bool:
        return bool((self.mask >> int(x)) & 1)

    def _same_parent(self, other: "SubgroupHandle") -> None:
        if self.parent is not other.parent:
            raise ForeignSubgroup("subgroups belong to different groups")

    def __le__(self, other: "SubgroupHandle") -> bool:
        self._same_parent(other)
        return self.mask & ~other.mask == 0

    def __lt__(self, other: "SubgroupHandle") -> bool:
        return self <= other and self.mask != other.mask

    def __ge__(self, other: "SubgroupHandle") -> bool:
        return other <= self

    def __gt__(self, other: "SubgroupHandle") -> bool:
        return other < self

    def __and__(self, other: "SubgroupHandle") -> "SubgroupHandle":
        self._same_parent(other)
        return SubgroupHandle(self.parent, self.mask & other.mask)

    def join(self, other: "SubgroupHandle") -> "SubgroupHandle":
        self._same_parent(other)
        if other <= self:
            return self
        if self <= other:
            return other
        mask = closure_mask(self.parent, self.generators + other.generators, start=self.mask)
        return SubgroupHandle(self.parent, mask)

    @property
    def is_trivial(self) -> bool:
        return self.mask == 1

    @property
    def is_whole(self) -> bool:
        return self.mask == self.parent.full_mask

    def conjugate(self, g: int) -> "SubgroupHandle":
        """``X^g``."""
        images = self.parent.conj[g, self.elements]
        return SubgroupHandle(self.parent, mask_from_indices(images))

    def is_normalized_by(self, g: int) -> bool:
        return bool(self.flags[self.parent.conj[g, self.elements]].all())

    def is_normal(self, within: "SubgroupHandle | None" = None) -> bool:
        """Normality in ``within`` (default: the whole parent group)."""
        gens = self.parent.generators if within is None else within.generators
        return all(self.is_normalized_by(g) for g in gens)


def greedy_generators(G: PermGroup, mask: int) -> tuple[int, ...]:
    """A small generating set: repeatedly add the smallest element not yet generated,
    preferring elements of largest order."""
    target = indices_from_mask(mask, G.order)
    if target.size <= 1:
        return ()
    orders = G.element_orders[target]
    ranked = target[np.lexsort((target, -orders))]
    gens: list[int] = []
    current = 1
    for x in ranked:
        if not (current >> int(x)) & 1:
            gens.append(int(x))
            current = closure_mask(G, gens, start=current)
            if current == mask:
                break
    return tuple(gens)


def close_generators(degree: int, gens: Iterable[Sequence[int]], cap: int = DEFAULT_ORDER_CAP,
                     name: str | None = None) -> PermGroup:
    """Enumerate the group generated by ``gens`` on ``degree`` points.

    Raises :class:`OrderCapExceeded` as soon as the closure passes ``cap``.
    """
    checked = [check_permutation(g, degree) for g in gens]
    ident = np.arange(degree, dtype=np.int32)
    gen_arr = np.array(checked, dtype=np.int32).reshape(len(checked), degree)
    found = {ident.tobytes(): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        block = np.stack(frontier)
        for g in gen_arr:
            for row in g[block]:
                key = row.tobytes()
                if key not in found:
                    found[key] = row
                    nxt.append(row)
                    if len(found) > cap:
                        raise OrderCapExceeded(cap, len(found))
        frontier = nxt
    perms = np.stack(list(found.values()))
    perms = perms[np.lexsort(perms.T[::-1])]
    pos = {row.tobytes(): i for i, row in enumerate(perms)}
    gen_idx = []
    for g in gen_arr:
        i = pos[g.tobytes()]
        if i != 0 and i not in gen_idx:
            gen_idx.append(i)
    return PermGroup(degree, perms, gen_idx, name=name)


def element_order(G: PermGroup, x: int) -> int:
    return G.element_order(x)


# quotients ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class QuotientMap:
    """The natural surjection ``source -> source/kernel``.

    ``image`` is the regular action of ``source`` on the cosets of ``kernel``;
    ``elem_to_coset[x]`` is the element index in ``image`` of the coset of ``x``.
    """

    source: PermGroup
    kernel: SubgroupHandle
    image: PermGroup
    elem_to_coset: np.ndarray
    coset_reps: np.ndarray

    def __call__(self, x: int) -> int:
        return int(self.elem_to_coset[x])

    def image_of(self, sub: SubgroupHandle) -> SubgroupHandle:
        if sub.parent is not self.source:
            raise ForeignSubgroup("subgroup is not in the quotient's source group")
        imgs = np.unique(self.elem_to_coset[sub.elements])
        gens = tuple(sorted({int(self.elem_to_coset[g]) for g in sub.generators} - {0}))
        return SubgroupHandle(self.image, mask_from_indices(imgs), gens)

    def preimage(self, sub: SubgroupHandle) -> SubgroupHandle:
        return preimage(self, sub)


def quotient(G: PermGroup, N: SubgroupHandle) -> QuotientMap:
    """Build ``G/N`` as the regular permutation action on cosets of ``N``."""
    if N.parent is not G:
        raise ForeignSubgroup("kernel is not a subgroup of the given group")
    if not N.is_normal():
        raise NotNormal(f"subgroup of order {N.order} is not normal in {G!r}")
    cache = G._cache.setdefault("quotients", {})
    if N.mask in cache:
        return cache[N.mask]
    n = G.order
    label = np.full(n, -1, dtype=np.int64)
    reps = []
    members = N.elements
    for x in range(n):
        if label[x] < 0:
            label[G.mul[x, members]] = len(reps)
            reps.append(x)
    reps_arr = np.array(reps, dtype=np.int64)
    m = len(reps)
    # action of every element on cosets: coset(r) . x = coset(r x)
    action = label[G.mul[reps_arr][:, np.arange(n)]].T.astype(np.int32)  # shape (n, m)
    gen_actions = [tuple(int(v) for v in action[g]) for g in G.generators]
    image = close_generators(m, gen_actions, cap=max(m, 1), name=_quotient_name(G, N))
    elem_to_coset = image.index_rows(action)
    elem_to_coset.setflags(write=False)
    qmap = QuotientMap(G, N, image, elem_to_coset, reps_arr)
    cache[N.mask] = qmap
    return qmap


def _quotient_name(G: PermGroup, N: SubgroupHandle) -> str | None:
    if G.name is None:
        return None
    return f"{G.name}/N{N.order}"


def preimage(q: QuotientMap, S: SubgroupHandle) -> SubgroupHandle:
    """``{x in source : q(x) in S}``."""
    if S.parent is not q.image:
        raise ForeignSubgroup("subgroup does not live in the quotient image")
    hit = S.flags[q.elem_to_coset]
    return SubgroupHandle(q.source, mask_from_bool(hit))
