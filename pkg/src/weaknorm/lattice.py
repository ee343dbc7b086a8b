"""Subgroup enumeration and the classical characteristic subgroups.

Normal subgroups are found without the full lattice (joins of normal
closures of conjugacy classes); the full lattice is built by layered joins
of cyclic subgroups and is cached per group, optionally on disk.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from sympy import factorint

from .errors import ForeignSubgroup, LatticeCapExceeded
from .perm import (
    PermGroup,
    SubgroupHandle,
    closure_mask,
    mask_from_bool,
    mask_from_indices,
)

log = logging.getLogger(__name__)

DEFAULT_SUBGROUP_CAP = 20000

_cache_dir: Path | None = None


def set_cache_dir(path: str | os.PathLike | None) -> None:
    """Directory for on-disk lattice caches; ``None`` disables disk caching."""
    global _cache_dir
    _cache_dir = None if path is None else Path(path)
    if _cache_dir is not None:
        _cache_dir.mkdir(parents=True, exist_ok=True)


def prime_divisors(n: int) -> list[int]:
    return sorted(factorint(n)) if n > 1 else []


def is_pi_number(n: int, primes: Iterable[int]) -> bool:
    primes = set(primes)
    return all(q in primes for q in prime_divisors(n))


def _check(G: PermGroup, X: SubgroupHandle) -> None:
    if X.parent is not G:
        raise ForeignSubgroup("subgroup does not belong to the given group")


def _sort_key(S: SubgroupHandle) -> tuple[int, int]:
    return (S.order, S.mask)


# conjugacy and normal subgroups ---------------------------------------------

def conjugacy_classes(G: PermGroup, within: SubgroupHandle | None = None) -> list[np.ndarray]:
    """Classes of ``within`` (default ``G``) under conjugation by ``within`` itself,
    each a sorted index array, ordered by smallest member."""
    members = np.arange(G.order) if within is None else within.elements
    seen = np.zeros(G.order, dtype=bool)
    classes = []
    conj = G.conj
    for x in members:
        if not seen[x]:
            cls = np.unique(conj[members, x])
            seen[cls] = True
            classes.append(cls)
    return classes


def _product_mask(G: PermGroup, A: np.ndarray, B: np.ndarray) -> int:
    flags = np.zeros(G.order, dtype=bool)
    flags[G.mul[A[:, None], B[None, :]].ravel()] = True
    return mask_from_bool(flags)


def normal_subgroups_of(G: PermGroup, T: SubgroupHandle) -> list[SubgroupHandle]:
    """All subgroups of ``T`` that are normal in ``T``, sorted by (order, bitset)."""
    _check(G, T)
    key = ("normal_in", T.mask)
    hit = G._cache.get(key)
    if hit is not None:
        return hit
    closures: dict[int, SubgroupHandle] = {}
    for cls in conjugacy_classes(G, T):
        if cls[0] == 0:
            continue
        gens = [int(c) for c in cls]
        mask = closure_mask(G, gens)
        if mask not in closures:
            closures[mask] = SubgroupHandle(G, mask)
    found = {1: G.trivial() if T.mask != 1 else T}
    frontier = [found[1]]
    blocks = sorted(closures.values(), key=_sort_key)
    while frontier:
        nxt = []
        for N in frontier:
            for C in blocks:
                if C.mask & ~N.mask == 0:
                    continue
                mask = _product_mask(G, N.elements, C.elements)
                if mask not in found:
                    S = SubgroupHandle(G, mask)
                    found[mask] = S
                    nxt.append(S)
        frontier = nxt
    result = sorted(found.values(), key=_sort_key)
    G._cache[key] = result
    return result


def normal_subgroups(G: PermGroup) -> list[SubgroupHandle]:
    return normal_subgroups_of(G, G.whole())


def normal_product(A: SubgroupHandle, B: SubgroupHandle) -> SubgroupHandle:
    """``AB`` for subgroups with ``AB = BA`` (e.g. one of them normal)."""
    G = A.parent
    return SubgroupHandle(G, _product_mask(G, A.elements, B.elements))


def normal_closure(G: PermGroup, X: SubgroupHandle, within: SubgroupHandle | None = None) -> SubgroupHandle:
    conj = G.conj
    acting = np.arange(G.order) if within is None else within.elements
    images = np.unique(conj[np.ix_(acting, X.elements)])
    return SubgroupHandle(G, closure_mask(G, [int(i) for i in images]))


# the lattice ------------------------------------------------------------------

@dataclass(frozen=True)
class SubgroupLattice:
    """All subgroups of ``parent``, sorted by (order, bitset)."""

    parent: PermGroup
    all: tuple[SubgroupHandle, ...]
    normal: tuple[SubgroupHandle, ...]
    maximal: tuple[SubgroupHandle, ...]

    def __len__(self) -> int:
        return len(self.all)

    def __iter__(self):
        return iter(self.all)

    def within(self, H: SubgroupHandle) -> list[SubgroupHandle]:
        """Subgroups of ``H`` (in lattice order)."""
        return [T for T in self.all if T.mask & ~H.mask == 0]

    def masks(self) -> set[int]:
        return {S.mask for S in self.all}


def cyclic_subgroups(G: PermGroup) -> dict[int, int]:
    """Map from cyclic-subgroup bitset to its smallest generator."""
    out: dict[int, int] = {}
    orders = G.element_orders
    for x in range(G.order):
        powers = [0]
        cur = x
        for _ in range(int(orders[x]) - 1):
            powers.append(cur)
            cur = int(G.mul[cur, x])
        mask = mask_from_indices(powers)
        out.setdefault(mask, x)
    return out


def conjugate_masks(G: PermGroup, S: SubgroupHandle) -> set[int]:
    """Bitsets of all conjugates of ``S``."""
    n = G.order
    flags = np.zeros((n, n), dtype=bool)
    flags[np.arange(n)[:, None], G.conj[:, S.elements]] = True
    packed = np.packbits(flags, axis=1, bitorder="little")
    return {int.from_bytes(row.tobytes(), "little") for row in packed}


def _enumerate(G: PermGroup, cap: int) -> list[SubgroupHandle]:
    cyclic = cyclic_subgroups(G)
    found: dict[int, SubgroupHandle] = {}
    for mask, x in cyclic.items():
        found[mask] = SubgroupHandle(G, mask, (x,) if x else ())
    cyc_items = sorted(cyclic.items(), key=lambda kv: (kv[0].bit_count(), kv[0]))
    queue = sorted(found.values(), key=_sort_key)
    done_reps: set[int] = set()
    while queue:
        nxt = []
        for S in queue:
            if S.mask in done_reps:
                continue
            # joins commute with conjugation, so one member per conjugacy class suffices
            done_reps.update(conjugate_masks(G, S))
            gens = S.generators
            elems = S.elements
            # <S, x> depends only on the double coset SxS
            covered = S.flags.copy()
            for cmask, x in cyc_items:
                if covered[x]:
                    continue
                covered[G.mul[G.mul[elems, x][:, None], elems[None, :]].ravel()] = True
                mask = closure_mask(G, gens + (x,), start=S.mask)
                if mask in found:
                    continue
                J = SubgroupHandle(G, mask, gens + (x,))
                for cm in conjugate_masks(G, J):
                    if cm not in found:
                        found[cm] = SubgroupHandle(G, cm)
                if len(found) > cap:
                    raise LatticeCapExceeded(cap, len(found))
                nxt.append(J)
        queue = nxt
    return sorted(found.values(), key=_sort_key)


def _maximal(G: PermGroup, subs: Sequence[SubgroupHandle]) -> list[SubgroupHandle]:
    full = G.full_mask
    proper = [S for S in subs if S.mask != full]
    out = []
    for i, S in enumerate(proper):
        above = False
        for T in proper[i + 1:]:
            if T.order > S.order and S.mask & ~T.mask == 0:
                above = True
                break
        if not above:
            out.append(S)
    return out


def _cache_path(G: PermGroup) -> Path | None:
    if _cache_dir is None:
        return None
    return _cache_dir / f"{G.cayley_hash}.lattice"


def save_lattice(L: SubgroupLattice, path: Path) -> None:
    lines = [format(S.mask, "x") for S in L.all]
    path.write_text("\n".join(lines) + "\n")


def load_lattice(G: PermGroup, path: Path) -> SubgroupLattice:
    masks = [int(line, 16) for line in path.read_text().split()]
    return _assemble(G, [SubgroupHandle(G, m) for m in masks])


def _assemble(G: PermGroup, subs: Sequence[SubgroupHandle]) -> SubgroupLattice:
    subs = sorted(subs, key=_sort_key)
    gens = np.asarray(G.generators, dtype=np.int64)
    normal = tuple(S for S in subs if S.flags[G.conj[gens[:, None], S.elements[None, :]]].all())
    G._cache.setdefault(("normal_in", G.full_mask), list(normal))
    return SubgroupLattice(G, tuple(subs), normal, tuple(_maximal(G, subs)))


def all_subgroups(G: PermGroup, cap: int = DEFAULT_SUBGROUP_CAP) -> SubgroupLattice:
    """Every subgroup of ``G`` by layered cyclic joins; cached in memory and on disk."""
    L = G._cache.get("lattice")
    if L is not None:
        return L
    path = _cache_path(G)
    if path is not None and path.exists():
        L = load_lattice(G, path)
        log.debug("lattice of %r loaded from %s", G, path)
    else:
        L = _assemble(G, _enumerate(G, cap))
        if path is not None:
            save_lattice(L, path)
    G._cache["lattice"] = L
    return L


# normalizers, centralizers, centres ---------------------------------------------

def normalizer(G: PermGroup, X: SubgroupHandle) -> SubgroupHandle:
    """``N_G(X)`` by conjugating the bitset of ``X`` with every element."""
    _check(G, X)
    cache = G._cache.setdefault("normalizers", {})
    hit = cache.get(X.mask)
    if hit is not None:
        return hit
    if X.is_trivial or X.is_whole:
        N = G.whole()
    else:
        ok = X.flags[G.conj[:, X.elements]].all(axis=1)
        N = SubgroupHandle(G, mask_from_bool(ok))
    cache[X.mask] = N
    return N


def centralizer(G: PermGroup, X: SubgroupHandle, within: SubgroupHandle | None = None) -> SubgroupHandle:
    """``C_G(X)``; with ``within`` the centralizer is taken inside that subgroup."""
    _check(G, X)
    gens = np.asarray(X.generators, dtype=np.int64)
    if gens.size == 0:
        return G.whole() if within is None else within
    ok = (G.mul[:, gens] == G.mul[gens, :].T).all(axis=1)
    if within is not None:
        ok &= within.flags
    return SubgroupHandle(G, mask_from_bool(ok))


def center(G: PermGroup, within: SubgroupHandle | None = None) -> SubgroupHandle:
    H = G.whole() if within is None else within
    return centralizer(G, H, within=H)


def _center_above(G: PermGroup, K: SubgroupHandle, within: SubgroupHandle | None = None) -> SubgroupHandle:
    """Preimage of ``Z(T/K)`` for ``K`` normal in ``T = within`` (default ``G``)."""
    T = G.whole() if within is None else within
    gens = np.asarray(T.generators, dtype=np.int64)
    if gens.size == 0:
        return T
    m = G.mul
    x = T.elements
    comm = m[m[G.inv[x][:, None], G.inv[gens][None, :]], m[x[:, None], gens[None, :]]]
    ok = K.flags[comm].all(axis=1)
    return SubgroupHandle(G, mask_from_indices(x[ok]))


def upper_central_series(G: PermGroup, within: SubgroupHandle | None = None) -> list[SubgroupHandle]:
    terms = [G.trivial()]
    while True:
        nxt = _center_above(G, terms[-1], within)
        if nxt.mask == terms[-1].mask:
            return terms
        terms.append(nxt)


def hypercenter(G: PermGroup, within: SubgroupHandle | None = None) -> SubgroupHandle:
    """``Z_inf(T)`` for ``T = within`` (default ``G``)."""
    return upper_central_series(G, within)[-1]


def frattini(G: PermGroup) -> SubgroupHandle:
    """Intersection of the maximal subgroups (``G`` itself when ``G`` is trivial)."""
    L = all_subgroups(G)
    mask = G.full_mask
    for M in L.maximal:
        mask &= M.mask
    return SubgroupHandle(G, mask)


# pi-cores and Fitting subgroups -------------------------------------------------

def normal_above(G: PermGroup, K: SubgroupHandle) -> list[SubgroupHandle]:
    return [N for N in normal_subgroups(G) if K.mask & ~N.mask == 0]


def o_pi_above(G: PermGroup, K: SubgroupHandle, primes: Iterable[int]) -> SubgroupHandle:
    """Preimage of ``O_pi(G/K)`` for normal ``K``: join of the normal subgroups above
    ``K`` whose index over ``K`` is a pi-number."""
    primes = set(primes)
    mask = K.mask
    result = K
    for N in normal_above(G, K):
        if N.mask & ~mask and is_pi_number(N.order // K.order, primes):
            result = normal_product(result, N)
            mask = result.mask
    return result


def o_pi(G: PermGroup, primes: Iterable[int]) -> SubgroupHandle:
    """Largest normal pi-subgroup."""
    primes = set(primes)
    if not primes:
        raise ValueError("primes must be nonempty")
    return o_pi_above(G, G.trivial(), primes)


def o_p(G: PermGroup, p: int) -> SubgroupHandle:
    return o_pi(G, {p})


def o_p_prime(G: PermGroup, p: int) -> SubgroupHandle:
    return o_pi_above(G, G.trivial(), set(prime_divisors(G.order)) - {p})


def fitting_above(G: PermGroup, K: SubgroupHandle) -> SubgroupHandle:
    """Preimage of ``F(G/K)``."""
    result = K
    for q in prime_divisors(G.order // K.order):
        result = normal_product(result, o_pi_above(G, K, {q}))
    return result


def p_fitting_above(G: PermGroup, K: SubgroupHandle, p: int) -> SubgroupHandle:
    """Preimage of ``F_p(G/K) = O_{p'p}(G/K)``."""
    others = set(prime_divisors(G.order)) - {p}
    M = o_pi_above(G, K, others) if others else K
    return o_pi_above(G, M, {p})


def fitting(G: PermGroup) -> SubgroupHandle:
    return fitting_above(G, G.trivial())


def p_fitting(G: PermGroup, p: int) -> SubgroupHandle:
    return p_fitting_above(G, G.trivial(), p)


def minimal_normal_subgroups(G: PermGroup) -> list[SubgroupHandle]:
    nontrivial = [N for N in normal_subgroups(G) if not N.is_trivial]
    out = []
    for N in nontrivial:
        if not any(M.mask != N.mask and M.mask & ~N.mask == 0 for M in out):
            out.append(N)
    return out


def socle(G: PermGroup) -> SubgroupHandle:
    result = G.trivial()
    for N in minimal_normal_subgroups(G):
        result = normal_product(result, N)
    return result


def derived_subgroup(G: PermGroup, within: SubgroupHandle | None = None) -> SubgroupHandle:
    """``T'`` for ``T = within`` (default ``G``): normal closure of generator commutators."""
    T = G.whole() if within is None else within
    gens = T.generators
    comms = {G.commutator(a, b) for a in gens for b in gens} - {0}
    if not comms:
        return G.trivial()
    C = SubgroupHandle(G, closure_mask(G, sorted(comms)))
    return normal_closure(G, C, within=T)


def derived_series(G: PermGroup, within: SubgroupHandle | None = None) -> list[SubgroupHandle]:
    T = G.whole() if within is None else within
    series = [T]
    while True:
        D = derived_subgroup(G, series[-1])
        if D.mask == series[-1].mask:
            return series
        series.append(D)
