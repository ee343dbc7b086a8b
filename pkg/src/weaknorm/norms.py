"""Weak norms, norms, weak centralizers and the ascending norm series.

``N_F(G, H)`` is the intersection of ``N_G(T^F)`` over all subgroups ``T`` of
``H``.  Only the set of distinct residuals matters, so residuals are collected
first and each distinct one is normalized once.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ForeignSubgroup
from .formations import FormationTag, is_member, residual
from .lattice import all_subgroups, normal_product, normal_subgroups, normalizer
from .perm import PermGroup, SubgroupHandle, preimage, quotient


def _intersect_normalizers(G: PermGroup, masks: set[int]) -> SubgroupHandle:
    result = G.full_mask
    for m in sorted(masks):
        if m == 1:
            continue
        result &= normalizer(G, SubgroupHandle(G, m)).mask
        if result == 1:
            break
    return SubgroupHandle(G, result)


def residual_set(G: PermGroup, H: SubgroupHandle, tag: FormationTag) -> set[int]:
    """Bitsets of the distinct ``T^F`` for ``T <= H``."""
    return {residual(G, tag, T).mask for T in all_subgroups(G).within(H)}


def weak_norm(G: PermGroup, H: SubgroupHandle, tag: FormationTag) -> SubgroupHandle:
    """``N_F(G, H)``; equals ``G`` outright when ``H`` lies in ``F`` (every tag here is
    subgroup-closed, so all residuals are trivial)."""
    if H.parent is not G:
        raise ForeignSubgroup("H does not belong to G")
    cache = G._cache.setdefault("weak_norms", {})
    key = (H.mask, tag)
    hit = cache.get(key)
    if hit is not None:
        return hit
    if is_member(G, tag, H):
        result = G.whole()
    else:
        result = _intersect_normalizers(G, residual_set(G, H, tag))
    cache[key] = result
    return result


def weak_norm_direct(G: PermGroup, H: SubgroupHandle, tag: FormationTag) -> SubgroupHandle:
    """``N_F(G, H)`` straight from the definition, with no membership shortcut."""
    if H.parent is not G:
        raise ForeignSubgroup("H does not belong to G")
    return _intersect_normalizers(G, residual_set(G, H, tag))


def norm(G: PermGroup, tag: FormationTag) -> SubgroupHandle:
    """``N_F(G) = N_F(G, G)``; asserted normal."""
    N = weak_norm(G, G.whole(), tag)
    assert N.is_normal(), "norm must be normal"
    return N


def weak_centralizer(G: PermGroup, H: SubgroupHandle) -> SubgroupHandle:
    """``C*_G(H)``: intersection of the normalizers of all subgroups of ``H``."""
    if H.parent is not G:
        raise ForeignSubgroup("H does not belong to G")
    return _intersect_normalizers(G, {T.mask for T in all_subgroups(G).within(H)})


def baer_norm(G: PermGroup) -> SubgroupHandle:
    return weak_centralizer(G, G.whole())


def n1_group_check(G: PermGroup, H: SubgroupHandle, tag: FormationTag) -> bool:
    """Is ``G`` an N_1-group with respect to ``H`` and ``F``?"""
    return weak_norm(G, H, tag).is_whole


def norm_above(G: PermGroup, K: SubgroupHandle, tag: FormationTag) -> SubgroupHandle:
    """Preimage of ``N_F(G/K)`` computed inside ``G`` as the intersection of
    ``N_G(T^F K)`` over ``K <= T``; a cross-check for the quotient route."""
    masks = set()
    for T in all_subgroups(G).all:
        if K.mask & ~T.mask == 0:
            masks.add(normal_product(residual(G, tag, T), K).mask)
    return _intersect_normalizers(G, masks - {K.mask})


@dataclass(frozen=True)
class NormSeries:
    group: PermGroup
    formation: FormationTag
    terms: tuple[SubgroupHandle, ...]
    terminal_index: int

    @property
    def terminal(self) -> SubgroupHandle:
        return self.terms[self.terminal_index]

    @property
    def orders(self) -> list[int]:
        return [t.order for t in self.terms]


def norm_series(G: PermGroup, tag: FormationTag) -> NormSeries:
    """``1 = N^0 <= N^1 <= ...`` with ``N^{i+1}/N^i = N_F(G/N^i)``, built through a fresh
    quotient at every step (``G/1`` is ``G`` itself); ``terms`` stops at the first
    repeated term."""
    cache = G._cache.setdefault("norm_series", {})
    hit = cache.get(tag)
    if hit is not None:
        return hit
    terms = [G.trivial(), norm(G, tag)]
    while terms[-1].mask != terms[-2].mask:
        q = quotient(G, terms[-1])
        terms.append(preimage(q, norm(q.image, tag)))
    terms.pop()
    series = NormSeries(G, tag, tuple(terms), len(terms) - 1)
    cache[tag] = series
    return series


def norm_infinity(G: PermGroup, tag: FormationTag) -> SubgroupHandle:
    """Terminal term ``N^inf_F(G)``."""
    return norm_series(G, tag).terminal


def norm_infinity_by_intersection(G: PermGroup, tag: FormationTag) -> SubgroupHandle:
    """``cap { N normal : N_F(G/N) = 1 }``.  A quotient already in ``F`` is its own
    norm, so normal subgroups above ``G^F`` other than ``G`` never qualify."""
    R = residual(G, tag)
    mask = G.full_mask
    for N in normal_subgroups(G):
        if R.mask & ~N.mask == 0:
            continue
        q = quotient(G, N)
        if norm(q.image, tag).is_trivial:
            mask &= N.mask
    return SubgroupHandle(G, mask)
