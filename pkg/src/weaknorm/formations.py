"""Formation membership, chief series and residuals.

A residual ``T^F`` is found on the lattice of normal subgroups of ``T``: a
quotient ``T/N`` lies in one of the saturated formations handled here exactly
when every chief factor of ``T`` above ``N`` passes a local test (central,
prime order, ...).  Walking a single chain of covers from ``N`` up to ``T``
decides membership for every ``N`` at once, and the residual is the
intersection of the ``N`` that pass.  The abelian residual is the derived
subgroup.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from sympy import isprime

from .errors import ParseError
from .lattice import (
    derived_series,
    derived_subgroup,
    normal_product,
    normal_subgroups_of,
    prime_divisors,
)
from .perm import PermGroup, SubgroupHandle

KINDS = ("A", "N", "Np", "U", "Up", "Product")


@dataclass(frozen=True)
class FormationTag:
    """One of A, N, N_p, U, U_p, or a product ``left right`` (``G^right in left``)."""

    kind: str
    p: int | None = None
    left: "FormationTag | None" = None
    right: "FormationTag | None" = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown formation kind {self.kind!r}")
        if self.kind in ("Np", "Up"):
            if self.p is None or not isprime(self.p):
                raise ValueError(f"{self.kind} needs a prime, got {self.p!r}")
        if self.kind == "Product":
            if self.left is None or self.right is None:
                raise ValueError("a product needs two factors")
            if self.depth > 2:
                raise ValueError("formation products nest at most two deep")

    @property
    def depth(self) -> int:
        if self.kind != "Product":
            return 1
        return 1 + max(self.left.depth, self.right.depth)

    def __str__(self) -> str:
        if self.kind == "Product":
            return f"{self.left}*{self.right}"
        if self.p is not None:
            return f"{self.kind}:{self.p}"
        return self.kind

    def __repr__(self) -> str:
        return f"FormationTag({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "FormationTag":
        return parse_formation(text)


ABELIAN = FormationTag("A")
NILPOTENT = FormationTag("N")
SUPERSOLVABLE = FormationTag("U")


def p_nilpotent(p: int) -> FormationTag:
    return FormationTag("Np", p)


def p_supersolvable(p: int) -> FormationTag:
    return FormationTag("Up", p)


def product(left: FormationTag, right: FormationTag) -> FormationTag:
    return FormationTag("Product", left=left, right=right)


def parse_formation(text: str) -> FormationTag:
    """Parse ``A``, ``N``, ``Np:2``, ``U``, ``Up:3`` and ``*``-products (left factor first)."""
    parts = [t.strip() for t in text.split("*")]
    try:
        tags = [_parse_simple(t) for t in parts]
        tag = tags[-1]
        for left in reversed(tags[:-1]):
            tag = product(left, tag)
        return tag
    except ValueError as exc:
        raise ParseError(f"bad formation tag {text!r}: {exc}") from exc


def _parse_simple(token: str) -> FormationTag:
    name, _, arg = token.partition(":")
    if name in ("A", "N", "U") and not arg:
        return FormationTag(name)
    if name in ("Np", "Up") and arg:
        return FormationTag(name, int(arg))
    raise ValueError(f"unrecognized factor {token!r}")


# chief series ---------------------------------------------------------------------

@dataclass(frozen=True)
class ChiefSeries:
    chain: tuple[SubgroupHandle, ...]

    @property
    def factor_orders(self) -> list[int]:
        return [b.order // a.order for a, b in zip(self.chain, self.chain[1:])]


def _covers_above(normals: list[SubgroupHandle], N: SubgroupHandle) -> list[SubgroupHandle]:
    """Normal subgroups minimal among those strictly containing ``N``."""
    above = [M for M in normals if M.mask != N.mask and N.mask & ~M.mask == 0]
    out = []
    for M in above:
        if not any(K.mask & ~M.mask == 0 for K in out):
            out.append(M)
    return out


def chief_series(G: PermGroup, within: SubgroupHandle | None = None,
                 rng: random.Random | None = None) -> ChiefSeries:
    """Chief series of ``T = within`` (default ``G``), built upward by choosing the first
    minimal normal subgroup of each quotient; ``rng`` picks a random one instead."""
    T = G.whole() if within is None else within
    normals = normal_subgroups_of(G, T)
    if rng is None:
        cache = G._cache.setdefault("chief_series", {})
        hit = cache.get(T.mask)
        if hit is not None:
            return hit
    chain = [normals[0]]
    start = 0
    while chain[-1].mask != T.mask:
        N = chain[-1]
        if rng is None:
            # normals are sorted by order, so the first one above N is a cover
            for start in range(start + 1, len(normals)):
                if N.mask & ~normals[start].mask == 0:
                    break
            chain.append(normals[start])
        else:
            chain.append(rng.choice(_covers_above(normals, N)))
    series = ChiefSeries(tuple(chain))
    if rng is None:
        cache[T.mask] = series
    return series


# membership -------------------------------------------------------------------------

def is_solvable(G: PermGroup, within: SubgroupHandle | None = None) -> bool:
    T = G.whole() if within is None else within
    cache = G._cache.setdefault("solvable", {})
    hit = cache.get(T.mask)
    if hit is None:
        hit = cache[T.mask] = derived_series(G, T)[-1].is_trivial
    return hit


def is_p_solvable(G: PermGroup, p: int, within: SubgroupHandle | None = None) -> bool:
    """Every chief factor is a p-group or a p'-group."""
    if is_solvable(G, within):
        return True
    for f in chief_series(G, within).factor_orders:
        primes = prime_divisors(f)
        if p in primes and len(primes) > 1:
            return False
    return True


def _p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


def is_member(G: PermGroup, tag: FormationTag, within: SubgroupHandle | None = None) -> bool:
    """Decide ``T in F`` for ``T = within`` (default ``G``) from the defining criteria."""
    T = G.whole() if within is None else within
    if T.is_trivial:
        return True
    kind = tag.kind
    if kind == "A":
        return _is_abelian(G, T)
    if kind == "N":
        return _is_nilpotent(G, T)
    if kind == "Np":
        p = tag.p
        others = set(prime_divisors(T.order)) - {p}
        if not others:
            return True
        normals = normal_subgroups_of(G, T)
        core = G.trivial()
        for N in normals:
            if p not in prime_divisors(N.order):
                core = normal_product(core, N)
        return core.order == T.order // _p_part(T.order, p)
    if kind == "U":
        return all(isprime(f) for f in chief_series(G, T).factor_orders)
    if kind == "Up":
        return all(f % tag.p or f == tag.p for f in chief_series(G, T).factor_orders)
    inner = residual(G, tag.right, T)
    return is_member(G, tag.left, inner)


def _is_abelian(G: PermGroup, T: SubgroupHandle) -> bool:
    gens = np.asarray(T.generators, dtype=np.int64)
    return bool((G.mul[np.ix_(gens, gens)] == G.mul[np.ix_(gens, gens)].T).all())


def _is_nilpotent(G: PermGroup, T: SubgroupHandle) -> bool:
    """Every Sylow subgroup is normal: the p-elements number exactly ``|T|_p``."""
    orders = G.element_orders[T.elements]
    for p in prime_divisors(T.order):
        if int(np.sum(_is_power_of(orders, p))) != _p_part(T.order, p):
            return False
    return True


def _is_power_of(values: np.ndarray, p: int) -> np.ndarray:
    v = values.copy()
    while True:
        div = (v % p == 0) & (v > 1)
        if not div.any():
            break
        v[div] //= p
    return v == 1


# residuals ------------------------------------------------------------------------------

def _commutators_inside(G: PermGroup, A: SubgroupHandle, B: SubgroupHandle, N: SubgroupHandle) -> bool:
    """``[A, B] <= N`` for normal ``N`` of a group containing ``A`` and ``B``."""
    a = np.asarray(A.generators, dtype=np.int64)
    b = np.asarray(B.generators, dtype=np.int64)
    if a.size == 0 or b.size == 0:
        return True
    m, inv = G.mul, G.inv
    comm = m[m[inv[a][:, None], inv[b][None, :]], m[a[:, None], b[None, :]]]
    return bool(N.flags[comm].all())


def _factor_ok(G: PermGroup, T: SubgroupHandle, N: SubgroupHandle, M: SubgroupHandle,
               tag: FormationTag) -> bool:
    """Local test for the chief factor ``M/N`` of ``T``."""
    size = M.order // N.order
    if tag.kind == "U":
        return isprime(size)
    if tag.kind == "Up":
        return size % tag.p != 0 or size == tag.p
    if tag.kind == "N":
        return _commutators_inside(G, M, T, N)
    if tag.kind == "Np":
        return size % tag.p != 0 or _commutators_inside(G, M, T, N)
    raise ValueError(f"no chief-factor test for {tag}")


def quotient_membership(G: PermGroup, T: SubgroupHandle, tag: FormationTag) -> dict[int, bool]:
    """For every normal subgroup ``N`` of ``T`` (by bitset): is ``T/N`` in ``tag``?
    Only for the saturated simple tags N, N_p, U, U_p."""
    normals = normal_subgroups_of(G, T)
    good: dict[int, bool] = {T.mask: True}
    for i in range(len(normals) - 1, -1, -1):
        N = normals[i]
        if N.mask == T.mask:
            continue
        # the smallest normal subgroup strictly above N is a cover of N
        for M in normals[i + 1:]:
            if M.mask != N.mask and N.mask & ~M.mask == 0:
                break
        good[N.mask] = good[M.mask] and _factor_ok(G, T, N, M, tag)
    return good


def residual(G: PermGroup, tag: FormationTag, within: SubgroupHandle | None = None) -> SubgroupHandle:
    """``T^F``: the smallest normal subgroup of ``T = within`` with quotient in ``F``."""
    T = G.whole() if within is None else within
    cache = G._cache.setdefault("residuals", {})
    key = (T.mask, tag)
    hit = cache.get(key)
    if hit is not None:
        return hit
    if T.is_trivial or _is_abelian(G, T) or (tag.kind not in ("A", "Product") and _is_nilpotent(G, T)):
        R = G.trivial()
    elif tag.kind == "A":
        R = derived_subgroup(G, T)
    elif tag.kind == "Product":
        R = residual(G, tag.left, residual(G, tag.right, T))
    else:
        good = quotient_membership(G, T, tag)
        mask = T.mask
        for m, ok in good.items():
            if ok:
                mask &= m
        R = SubgroupHandle(G, mask)
    cache[key] = R
    return R


def residual_product_identity_check(G: PermGroup, primes: Iterable[int] | None = None) -> bool:
    """Is ``G^U`` the product of the ``G^{U_p}`` over the given primes (default ``pi(G)``)?"""
    primes = prime_divisors(G.order) if primes is None else list(primes)
    joined = G.trivial()
    for p in primes:
        joined = normal_product(joined, residual(G, p_supersolvable(p)))
    return joined.mask == residual(G, SUPERSOLVABLE).mask
