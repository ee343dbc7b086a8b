"""Theorem checks: each one enumerates instances ``(H, K, N, p, k, F)`` on a group,
gates them by a hypothesis, and evaluates an assertion.

Instances are drawn from deterministic samples of the subgroup lattice, the
normal subgroups and the prime divisors of ``|G|``, so the same group always
yields the same instances in the same order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Any, Callable, Iterable, Iterator

import numpy as np

from . import metrics
from .errors import ForeignSubgroup
from .formations import (
    ABELIAN,
    NILPOTENT,
    SUPERSOLVABLE,
    FormationTag,
    is_member,
    is_p_solvable,
    is_solvable,
    p_nilpotent,
    p_supersolvable,
    product,
    residual,
)
from .lattice import (
    all_subgroups,
    centralizer,
    center,
    derived_subgroup,
    frattini,
    hypercenter,
    normal_product,
    normal_subgroups,
    o_p,
    prime_divisors,
)
from .norms import norm, norm_infinity, norm_infinity_by_intersection, weak_norm, weak_norm_direct
from .perm import PermGroup, QuotientMap, SubgroupHandle, mask_from_bool, quotient

SUBGROUP_SAMPLE = 10
NORMAL_SAMPLE = 8
PROPER_SAMPLE = 3
DECOMPOSITION_SAMPLE = 6


def spread(items: list, k: int) -> list:
    """At most ``k`` items evenly spaced over ``items``, always keeping both ends."""
    n = len(items)
    if n <= k:
        return list(items)
    picks = sorted({round(i * (n - 1) / (k - 1)) for i in range(k)})
    return [items[i] for i in picks]


def is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


# per-group context --------------------------------------------------------------

class SubgroupAsGroup:
    """A subgroup ``K`` of ``G`` realized as a standalone group, with index maps."""

    def __init__(self, G: PermGroup, K: SubgroupHandle):
        self.parent = G
        self.sub = K
        self.group = G.as_group(K, name=f"{G.name}>K{K.order}")
        self.idx = K.elements

    def down(self, X: SubgroupHandle) -> SubgroupHandle:
        """``X <= K`` as a subgroup of the standalone group."""
        if X.mask & ~self.sub.mask:
            raise ForeignSubgroup("subgroup is not contained in K")
        return SubgroupHandle(self.group, mask_from_bool(X.flags[self.idx]))

    def up(self, Y: SubgroupHandle) -> SubgroupHandle:
        flags = np.zeros(self.parent.order, dtype=bool)
        flags[self.idx[Y.elements]] = True
        return SubgroupHandle(self.parent, mask_from_bool(flags))


class Ctx:
    """Cached samples and derived data for one group."""

    def __init__(self, G: PermGroup):
        self.G = G
        self.primes = prime_divisors(G.order)
        self.lattice = all_subgroups(G)
        self._as_group: dict[int, SubgroupAsGroup] = {}

    @cached_property
    def normals(self) -> list[SubgroupHandle]:
        return list(normal_subgroups(self.G))

    @cached_property
    def normal_sample(self) -> list[SubgroupHandle]:
        return spread(self.normals, NORMAL_SAMPLE)

    @cached_property
    def sub_sample(self) -> list[SubgroupHandle]:
        return spread(list(self.lattice.all), SUBGROUP_SAMPLE)

    @cached_property
    def proper_sample(self) -> list[SubgroupHandle]:
        return spread(list(self.lattice.maximal), PROPER_SAMPLE)

    @cached_property
    def tags(self) -> list[FormationTag]:
        return [SUPERSOLVABLE] + [p_supersolvable(p) for p in self.primes]

    @cached_property
    def lemma_tags(self) -> list[FormationTag]:
        return [ABELIAN, NILPOTENT] + self.tags

    @cached_property
    def direct_decompositions(self) -> list[tuple[SubgroupHandle, SubgroupHandle]]:
        """Pairs ``(A, B)`` of nontrivial normal subgroups with ``G = A x B``."""
        out = []
        n = self.G.order
        by_order: dict[int, list[SubgroupHandle]] = {}
        for N in self.normals:
            by_order.setdefault(N.order, []).append(N)
        for A in self.normals[1:-1]:
            for B in by_order.get(n // A.order, ()):
                if A.mask & B.mask == 1:
                    out.append((A, B))
            if len(out) >= 8 * DECOMPOSITION_SAMPLE:
                break
        return spread(out, DECOMPOSITION_SAMPLE)

    def as_group(self, K: SubgroupHandle) -> SubgroupAsGroup:
        hit = self._as_group.get(K.mask)
        if hit is None:
            hit = self._as_group[K.mask] = SubgroupAsGroup(self.G, K)
        return hit

    def quotient(self, N: SubgroupHandle) -> QuotientMap:
        return quotient(self.G, N)

    @cached_property
    def solvable(self) -> bool:
        return is_solvable(self.G)

    def p_solvable(self, p: int) -> bool:
        return is_p_solvable(self.G, p)

    @cached_property
    def phi(self) -> SubgroupHandle:
        return frattini(self.G)

    def p_prime_normals(self, p: int) -> list[SubgroupHandle]:
        return [N for N in self.normals if not N.is_trivial and N.order % p]

    def elements_of_orders(self, p: int) -> np.ndarray:
        """Elements of order ``p``, and of order 4 when ``p = 2``."""
        orders = self.G.element_orders
        hit = orders == p
        if p == 2:
            hit |= orders == 4
        return np.flatnonzero(hit)


# instances and checks --------------------------------------------------------------

@dataclass(frozen=True)
class Inst:
    H: SubgroupHandle | None = None
    K: SubgroupHandle | None = None
    N: SubgroupHandle | None = None
    M: SubgroupHandle | None = None
    p: int | None = None
    k: int | None = None
    tag: FormationTag | None = None

    def describe(self) -> dict[str, Any]:
        out: dict[str, Any] = {}
        for name in ("H", "K", "N", "M"):
            S = getattr(self, name)
            if S is not None:
                out[name] = {"order": S.order,
                             "generators": [list(S.parent.perm(g)) for g in S.generators]}
        if self.p is not None:
            out["p"] = self.p
        if self.k is not None:
            out["k"] = self.k
        if self.tag is not None:
            out["formation"] = str(self.tag)
        return out


Outcome = tuple[bool, Any, Any]


@dataclass(frozen=True)
class TheoremCheck:
    id: str
    citation: str
    instances: Callable[[Ctx], Iterable[Inst]]
    hypothesis: Callable[[Ctx, Inst], bool]
    assertion: Callable[[Ctx, Inst], Outcome]
    unproven: bool = False
    question: bool = False


REGISTRY: dict[str, TheoremCheck] = {}


def register(id: str, citation: str, instances, hypothesis, assertion, unproven: bool = False,
             question: bool = False) -> None:
    REGISTRY[id] = TheoremCheck(id, citation, instances, hypothesis, assertion, unproven, question)


def always(ctx: Ctx, inst: Inst) -> bool:
    return True


def le(A: SubgroupHandle, B: SubgroupHandle) -> Outcome:
    return (A.mask & ~B.mask == 0, A.order, f"<= subgroup of order {B.order}")


def eq(A: SubgroupHandle, B: SubgroupHandle) -> Outcome:
    return (A.mask == B.mask, A.order, B.order)


def holds(flag: bool, computed: Any = None, expected: Any = True) -> Outcome:
    return (bool(flag), flag if computed is None else computed, expected)


def implies(a: bool, b: bool) -> bool:
    return (not a) or b


# instance generators

def each_prime(ctx: Ctx) -> Iterator[Inst]:
    for p in ctx.primes:
        yield Inst(p=p)


def each_group(ctx: Ctx) -> Iterator[Inst]:
    yield Inst()


def sub_tag_pairs(ctx: Ctx) -> Iterator[Inst]:
    for tag in ctx.lemma_tags:
        for H in ctx.sub_sample:
            yield Inst(H=H, tag=tag)


def nested_pairs(ctx: Ctx) -> Iterator[Inst]:
    for tag in ctx.lemma_tags:
        for H in ctx.sub_sample:
            for K in ctx.sub_sample:
                if K.mask != H.mask and H.mask & ~K.mask == 0:
                    yield Inst(H=H, K=K, tag=tag)


def proper_sub_tag(ctx: Ctx) -> Iterator[Inst]:
    for tag in ctx.lemma_tags:
        for K in ctx.proper_sample:
            for H in ctx.sub_sample:
                yield Inst(H=H, K=K, tag=tag)


def proper_tag(ctx: Ctx) -> Iterator[Inst]:
    for tag in ctx.lemma_tags:
        for K in ctx.proper_sample:
            yield Inst(K=K, tag=tag)


def normal_tag(ctx: Ctx) -> Iterator[Inst]:
    for tag in ctx.lemma_tags:
        for N in ctx.normal_sample:
            yield Inst(N=N, tag=tag)


def normal_in_sub_tag(ctx: Ctx) -> Iterator[Inst]:
    for tag in ctx.lemma_tags:
        for N in ctx.normal_sample:
            for H in ctx.sub_sample:
                if N.mask & ~H.mask == 0:
                    yield Inst(H=H, N=N, tag=tag)


def normal_prime(ctx: Ctx) -> Iterator[Inst]:
    for p in ctx.primes:
        for N in ctx.normal_sample:
            yield Inst(N=N, p=p)


def proper_prime(ctx: Ctx) -> Iterator[Inst]:
    for p in ctx.primes:
        for K in ctx.proper_sample:
            yield Inst(K=K, p=p)


def normal_pair_prime(ctx: Ctx) -> Iterator[Inst]:
    for p in ctx.primes:
        for i, N in enumerate(ctx.normal_sample):
            for M in ctx.normal_sample[i + 1:]:
                yield Inst(N=N, M=M, p=p)


def p_prime_normal_prime(ctx: Ctx) -> Iterator[Inst]:
    for p in ctx.primes:
        for N in spread(ctx.p_prime_normals(p), NORMAL_SAMPLE):
            yield Inst(N=N, p=p)


def p_prime_normal_sub_prime(ctx: Ctx) -> Iterator[Inst]:
    for p in ctx.primes:
        for N in spread(ctx.p_prime_normals(p), 3):
            for H in ctx.sub_sample:
                yield Inst(H=H, N=N, p=p)


def decomposition_prime(ctx: Ctx) -> Iterator[Inst]:
    for A, B in ctx.direct_decompositions:
        for p in ctx.primes:
            yield Inst(N=A, M=B, p=p)


def coprime_decomposition_sub(ctx: Ctx) -> Iterator[Inst]:
    for A, B in ctx.direct_decompositions:
        if gcd(A.order, B.order) != 1:
            continue
        for p in prime_divisors(A.order):
            for H in ctx.sub_sample:
                yield Inst(H=H, N=A, M=B, p=p)


def normal_h_prime(ctx: Ctx) -> Iterator[Inst]:
    hs = ctx.normal_sample
    for p in ctx.primes:
        for H in hs:
            yield Inst(H=H, p=p)


def normal_h(ctx: Ctx) -> Iterator[Inst]:
    for H in ctx.normal_sample:
        yield Inst(H=H)


def sub_h(ctx: Ctx) -> Iterator[Inst]:
    for H in ctx.sub_sample:
        yield Inst(H=H)


def sub_h_prime(ctx: Ctx) -> Iterator[Inst]:
    for p in ctx.primes:
        for H in ctx.sub_sample:
            yield Inst(H=H, p=p)


def sub_h_smallest_prime(ctx: Ctx) -> Iterator[Inst]:
    for H in ctx.sub_sample:
        if not H.is_trivial:
            yield Inst(H=H, p=prime_divisors(H.order)[0])


def normal_h_smallest_prime(ctx: Ctx) -> Iterator[Inst]:
    for H in ctx.normal_sample:
        if not H.is_trivial:
            yield Inst(H=H, p=prime_divisors(H.order)[0])


def prime_k(ks: tuple[int, ...]):
    def gen(ctx: Ctx) -> Iterator[Inst]:
        for p in ctx.primes:
            for k in ks:
                yield Inst(p=p, k=k)
    return gen


def n1_sub_prime_proper(ctx: Ctx) -> Iterator[Inst]:
    for p in ctx.primes:
        for H in ctx.sub_sample:
            for K in ctx.proper_sample:
                yield Inst(H=H, K=K, p=p)


def n1_normal_in_sub_prime(ctx: Ctx) -> Iterator[Inst]:
    for p in ctx.primes:
        for H in ctx.sub_sample:
            for N in ctx.normal_sample:
                if not N.is_trivial and N.mask & ~H.mask == 0:
                    yield Inst(H=H, N=N, p=p)


def nilpotent_normals(ctx: Ctx) -> Iterator[Inst]:
    for N in ctx.normal_sample:
        yield Inst(N=N)


# shared quantities

def up(p: int) -> FormationTag:
    return p_supersolvable(p)


def NpUp(p: int) -> FormationTag:
    return product(p_nilpotent(p), p_supersolvable(p))


NU = product(NILPOTENT, SUPERSOLVABLE)


def image_in(ctx: Ctx, N: SubgroupHandle, S: SubgroupHandle) -> SubgroupHandle:
    return ctx.quotient(N).image_of(S)


def quotient_group(ctx: Ctx, N: SubgroupHandle) -> PermGroup:
    return ctx.quotient(N).image


def g_is_n1(ctx: Ctx, p: int) -> bool:
    return norm(ctx.G, up(p)).is_whole


def pi_intersection(ctx: Ctx, H: SubgroupHandle) -> SubgroupHandle:
    mask = ctx.G.full_mask
    for q in prime_divisors(H.order):
        mask &= weak_norm(ctx.G, H, up(q)).mask
    return SubgroupHandle(ctx.G, mask)


def small_elements_inside(ctx: Ctx, p: int, S: SubgroupHandle) -> bool:
    """Every element of order ``p`` (and 4 when ``p = 2``) lies in ``S``."""
    return bool(S.flags[ctx.elements_of_orders(p)].all())


def minimal_non_member(ctx: Ctx, T: SubgroupHandle, tag: FormationTag) -> bool:
    """``T`` is not in ``F`` but every proper subgroup of ``T`` is."""
    G = ctx.G
    if residual(G, tag, T).is_trivial:
        return False
    return all(residual(G, tag, S).is_trivial for S in ctx.lattice.within(T) if S.mask != T.mask)


def h_p_quotient(ctx: Ctx, N: SubgroupHandle, p: int) -> int:
    return metrics.p_fitting_length(quotient_group(ctx, N), p)


def l_p_quotient(ctx: Ctx, N: SubgroupHandle, p: int) -> int:
    return metrics.p_length(quotient_group(ctx, N), p)


# ---------------------------------------------------------------------------------
# lemma ladders

def _l211(ctx, i):
    return le(weak_norm(ctx.G, i.K, i.tag), weak_norm(ctx.G, i.H, i.tag))


register("L2.1.1", "weak norm reverses inclusion in H", nested_pairs, always, _l211)


def _l212(ctx, i):
    G = ctx.G
    KG = ctx.as_group(i.K)
    lhs = i.K & weak_norm(G, i.H, i.tag)
    rhs = KG.up(weak_norm(KG.group, KG.down(i.K & i.H), i.tag))
    return le(lhs, rhs)


register("L2.1.2", "K meet N_F(G,H) lies in N_F(K, K meet H)", proper_sub_tag, always, _l212)


def _l213(ctx, i):
    q = ctx.quotient(i.N)
    lhs = q.image_of(weak_norm(ctx.G, i.H, i.tag))
    rhs = weak_norm(q.image, q.image_of(i.H), i.tag)
    return le(lhs, rhs)


register("L2.1.3", "image of N_F(G,H) in G/N lies in N_F(G/N, H/N)", normal_in_sub_tag, always, _l213)


def _l221(ctx, i):
    KG = ctx.as_group(i.K)
    return le(i.K & norm(ctx.G, i.tag), KG.up(norm(KG.group, i.tag)))


register("L2.2.1", "K meet N_F(G) lies in N_F(K)", proper_tag, always, _l221)


def _l222(ctx, i):
    q = ctx.quotient(i.N)
    return le(q.image_of(norm(ctx.G, i.tag)), norm(q.image, i.tag))


register("L2.2.2", "image of N_F(G) lies in N_F(G/N)", normal_tag, always, _l222)


def _l231(ctx, i):
    KG = ctx.as_group(i.K)
    return le(i.K & norm_infinity(ctx.G, i.tag), KG.up(norm_infinity(KG.group, i.tag)))


register("L2.3.1", "K meet N^inf_F(G) lies in N^inf_F(K)", proper_tag, always, _l231)


def _l232(ctx, i):
    q = ctx.quotient(i.N)
    return le(q.image_of(norm_infinity(ctx.G, i.tag)), norm_infinity(q.image, i.tag))


register("L2.3.2", "image of N^inf_F(G) lies in N^inf_F(G/N)", normal_tag, always, _l232)


def _l233(ctx, i):
    q = ctx.quotient(i.N)
    return eq(q.image_of(norm_infinity(ctx.G, i.tag)), norm_infinity(q.image, i.tag))


register("L2.3.3", "N^inf_F(G)/N equals N^inf_F(G/N) for N inside N^inf_F(G)", normal_tag,
         lambda ctx, i: i.N.mask & ~norm_infinity(ctx.G, i.tag).mask == 0, _l233)


def _gate_ps(ctx, i):
    return ctx.p_solvable(i.p)


def _lp(ctx, p):
    return metrics.p_length(ctx.G, p)


def _hp(ctx, p):
    return metrics.p_fitting_length(ctx.G, p)


register("L2.4.1", "l_p does not grow under quotients", normal_prime, _gate_ps,
         lambda ctx, i: (l_p_quotient(ctx, i.N, i.p) <= _lp(ctx, i.p), l_p_quotient(ctx, i.N, i.p), _lp(ctx, i.p)))


def _l242(ctx, i):
    a = metrics.p_length(ctx.as_group(i.K).group, i.p)
    return (a <= _lp(ctx, i.p), a, _lp(ctx, i.p))


register("L2.4.2", "l_p does not grow under subgroups", proper_prime, _gate_ps, _l242)


def _l243(ctx, i):
    a = l_p_quotient(ctx, i.N & i.M, i.p)
    b = max(l_p_quotient(ctx, i.N, i.p), l_p_quotient(ctx, i.M, i.p))
    return (a <= b, a, b)


register("L2.4.3", "l_p of G/(N1 meet N2) is bounded by the larger of the two", normal_pair_prime,
         _gate_ps, _l243)
register("L2.4.4", "l_p(G/Phi(G)) = l_p(G)", each_prime, _gate_ps,
         lambda ctx, i: (l_p_quotient(ctx, ctx.phi, i.p) == _lp(ctx, i.p), l_p_quotient(ctx, ctx.phi, i.p),
                         _lp(ctx, i.p)))
register("L2.4.5", "l_p(G/N) = l_p(G) for a normal p'-subgroup N", p_prime_normal_prime, _gate_ps,
         lambda ctx, i: (l_p_quotient(ctx, i.N, i.p) == _lp(ctx, i.p), l_p_quotient(ctx, i.N, i.p),
                         _lp(ctx, i.p)))


def _l251_hyp(ctx, i):
    q = ctx.quotient(i.N & ctx.phi)
    return is_member(q.image, p_nilpotent(i.p), q.image_of(i.N))


register("L2.5.1", "N p-nilpotent when N/(N meet Phi(G)) is", normal_prime, _l251_hyp,
         lambda ctx, i: holds(is_member(ctx.G, p_nilpotent(i.p), i.N)))


def _l252_hyp(ctx, i):
    q = ctx.quotient(i.N)
    return is_member(q.image, p_nilpotent(i.p), q.image_of(i.H))


register("L2.5.2", "H p-nilpotent when HN/N is and N is a normal p'-subgroup", p_prime_normal_sub_prime,
         _l252_hyp, lambda ctx, i: holds(is_member(ctx.G, p_nilpotent(i.p), i.H)))


def _l261(ctx, i):
    a = metrics.p_fitting_length(ctx.as_group(i.K).group, i.p)
    return (a <= _hp(ctx, i.p), a, _hp(ctx, i.p))


register("L2.6.1", "h_p does not grow under subgroups", proper_prime, _gate_ps, _l261)
register("L2.6.2", "h_p does not grow under quotients", normal_prime, _gate_ps,
         lambda ctx, i: (h_p_quotient(ctx, i.N, i.p) <= _hp(ctx, i.p), h_p_quotient(ctx, i.N, i.p),
                         _hp(ctx, i.p)))


def _l263(ctx, i):
    a = metrics.p_fitting_length(ctx.as_group(i.N).group, i.p)
    b = metrics.p_fitting_length(ctx.as_group(i.M).group, i.p)
    return (_hp(ctx, i.p) == max(a, b), _hp(ctx, i.p), max(a, b))


register("L2.6.3", "h_p of a direct product is the larger factor value", decomposition_prime, _gate_ps, _l263)


def _l264(ctx, i):
    a = h_p_quotient(ctx, i.N & i.M, i.p)
    b = max(h_p_quotient(ctx, i.N, i.p), h_p_quotient(ctx, i.M, i.p))
    return (a <= b, a, b)


register("L2.6.4", "h_p bound passes to G/(A meet B)", normal_pair_prime, _gate_ps, _l264)
register("L2.6.5", "h_p(G/Phi(G)) = h_p(G)", each_prime, _gate_ps,
         lambda ctx, i: (h_p_quotient(ctx, ctx.phi, i.p) == _hp(ctx, i.p), h_p_quotient(ctx, ctx.phi, i.p),
                         _hp(ctx, i.p)))
register("L2.6.6", "h_p(G/N) = h_p(G) for a normal p'-subgroup N", p_prime_normal_prime, _gate_ps,
         lambda ctx, i: (h_p_quotient(ctx, i.N, i.p) == _hp(ctx, i.p), h_p_quotient(ctx, i.N, i.p),
                         _hp(ctx, i.p)))


def _l27_instances(ctx: Ctx) -> Iterator[Inst]:
    for N in ctx.normal_sample:
        for p in ctx.primes:
            yield Inst(N=N, p=p)


def _l27_hyp(ctx, i):
    Q = quotient_group(ctx, i.N)
    return ctx.solvable and metrics.fitting_length(Q) <= 2


def _l27(ctx, i):
    a = l_p_quotient(ctx, i.N, i.p)
    return (a <= 1, a, "<= 1")


register("L2.7", "solvable with h <= 2 gives l_p <= 1 (checked on G/N)", _l27_instances, _l27_hyp, _l27)


def _l210_instances(ctx: Ctx) -> Iterator[Inst]:
    for p in ctx.primes:
        for T in ctx.lattice.all:
            yield Inst(H=T, p=p)


def _l210_hyp(ctx, i):
    return is_p_solvable(ctx.G, i.p, i.H) and minimal_non_member(ctx, i.H, up(i.p))


def _l210(ctx, i):
    R = residual(ctx.G, up(i.p), i.H)
    return (is_p_power(R.order, i.p), R.order, f"power of {i.p}")


register("L2.10", "p-solvable minimal non-U_p group has a p-group U_p-residual", _l210_instances,
         _l210_hyp, _l210)


def _l211_identity(ctx, i):
    G = ctx.G
    joined = G.trivial()
    for p in prime_divisors(i.H.order):
        joined = normal_product(joined, residual(G, up(p), i.H))
    return eq(joined, residual(G, SUPERSOLVABLE, i.H))


register("L2.11", "U-residual is the product of the U_p-residuals", sub_h, always, _l211_identity)


# ---------------------------------------------------------------------------------
# basic properties

def _p31(ctx, i):
    G = ctx.G
    AG = ctx.as_group(i.N)
    inner = AG.up(weak_norm(AG.group, AG.down(i.N & i.H), up(i.p)))
    return eq(weak_norm(G, i.H, up(i.p)), normal_product(inner, i.M))


register("P3.1", "weak norm of A x B with coprime orders splits", coprime_decomposition_sub, always, _p31)


def _t32(ctx, i):
    R = residual(ctx.G, up(i.p), norm(ctx.G, up(i.p)))
    return (is_p_power(R.order, i.p), R.order, f"power of {i.p}")


register("T3.2", "U_p-residual of N_{U_p}(G) is a p-group", each_prime, _gate_ps, _t32)
register("T3.3", "N^inf_{U_p}(G) is the meet of N with N_{U_p}(G/N) = 1", each_prime, always,
         lambda ctx, i: eq(norm_infinity(ctx.G, up(i.p)), norm_infinity_by_intersection(ctx.G, up(i.p))))


def _wn_trivial(ctx, i, tag):
    return weak_norm(ctx.G, i.H, tag).is_trivial


def _cent_trivial(ctx, i, tag):
    return centralizer(ctx.G, residual(ctx.G, tag, i.H)).is_trivial


register("T3.4.fwd", "N_{U_p}(G,H) = 1 implies C_G(H^{U_p}) = 1", normal_h_prime,
         lambda ctx, i: ctx.p_solvable(i.p) and _wn_trivial(ctx, i, up(i.p)),
         lambda ctx, i: holds(_cent_trivial(ctx, i, up(i.p))))
register("T3.4.rev", "C_G(H^{U_p}) = 1 implies N_{U_p}(G,H) = 1", normal_h_prime,
         lambda ctx, i: ctx.p_solvable(i.p) and _cent_trivial(ctx, i, up(i.p)),
         lambda ctx, i: holds(_wn_trivial(ctx, i, up(i.p))))
register("C3.5.fwd", "N_U(G,H) = 1 implies C_G(H^U) = 1", normal_h,
         lambda ctx, i: ctx.solvable and _wn_trivial(ctx, i, SUPERSOLVABLE),
         lambda ctx, i: holds(_cent_trivial(ctx, i, SUPERSOLVABLE)))
register("C3.5.rev", "C_G(H^U) = 1 implies N_U(G,H) = 1", normal_h,
         lambda ctx, i: ctx.solvable and _cent_trivial(ctx, i, SUPERSOLVABLE),
         lambda ctx, i: holds(_wn_trivial(ctx, i, SUPERSOLVABLE)))


def _norm_trivial(ctx, p):
    return norm(ctx.G, up(p)).is_trivial


def _cgr_trivial(ctx, p):
    return centralizer(ctx.G, residual(ctx.G, up(p))).is_trivial


register("C3.6.fwd", "N_{U_p}(G) = 1 implies C_G(G^{U_p}) = 1", each_prime,
         lambda ctx, i: ctx.p_solvable(i.p) and _norm_trivial(ctx, i.p),
         lambda ctx, i: holds(_cgr_trivial(ctx, i.p)))
register("C3.6.rev", "C_G(G^{U_p}) = 1 implies N_{U_p}(G) = 1", each_prime,
         lambda ctx, i: ctx.p_solvable(i.p) and _cgr_trivial(ctx, i.p),
         lambda ctx, i: holds(_norm_trivial(ctx, i.p)))


def _zr_trivial(ctx, p):
    return center(ctx.G, residual(ctx.G, up(p))).is_trivial


register("C3.7", "Z(G^{U_p}) = 1 implies C_G(G^{U_p}) = N_{U_p}(G)", each_prime,
         lambda ctx, i: ctx.p_solvable(i.p) and _zr_trivial(ctx, i.p),
         lambda ctx, i: eq(centralizer(ctx.G, residual(ctx.G, up(i.p))), norm(ctx.G, up(i.p))))


def _meet_trivial(ctx, p):
    return (residual(ctx.G, up(p)) & norm(ctx.G, up(p))).is_trivial


register("C3.8.fwd", "Z(G^{U_p}) = 1 implies G^{U_p} meets N_{U_p}(G) trivially", each_prime,
         lambda ctx, i: ctx.p_solvable(i.p) and _zr_trivial(ctx, i.p),
         lambda ctx, i: holds(_meet_trivial(ctx, i.p)))
register("C3.8.rev", "G^{U_p} meeting N_{U_p}(G) trivially implies Z(G^{U_p}) = 1", each_prime,
         lambda ctx, i: ctx.p_solvable(i.p) and _meet_trivial(ctx, i.p),
         lambda ctx, i: holds(_zr_trivial(ctx, i.p)))
register("T3.9", "Z_inf(G^{U_p}) lies in N^inf_{U_p}(G)", each_prime, always,
         lambda ctx, i: le(hypercenter(ctx.G, residual(ctx.G, up(i.p))), norm_infinity(ctx.G, up(i.p))))
register("C3.10", "Z_inf(G^U) lies in N^inf_{U_p}(G)", each_prime, always,
         lambda ctx, i: le(hypercenter(ctx.G, residual(ctx.G, SUPERSOLVABLE)), norm_infinity(ctx.G, up(i.p))))
register("L3.11", "meet of N_{U_p}(G,H) over pi(H) lies in N_U(G,H)", sub_h, always,
         lambda ctx, i: le(pi_intersection(ctx, i.H), weak_norm(ctx.G, i.H, SUPERSOLVABLE)))


def _l312_hyp(ctx, i):
    R = residual(ctx.G, SUPERSOLVABLE, i.H)
    return not i.H.is_trivial and len(prime_divisors(R.order)) <= 1


register("L3.12", "equality in L3.11 when H^U is a p-group", sub_h, _l312_hyp,
         lambda ctx, i: eq(pi_intersection(ctx, i.H), weak_norm(ctx.G, i.H, SUPERSOLVABLE)))
register("T3.13.fwd", "meet over pi(H) of N_{U_p}(G,H) = G implies N_U(G,H) = G", normal_h,
         lambda ctx, i: ctx.solvable and pi_intersection(ctx, i.H).is_whole,
         lambda ctx, i: holds(weak_norm(ctx.G, i.H, SUPERSOLVABLE).is_whole))
register("T3.13.rev", "N_U(G,H) = G implies meet over pi(H) of N_{U_p}(G,H) = G", normal_h,
         lambda ctx, i: ctx.solvable and weak_norm(ctx.G, i.H, SUPERSOLVABLE).is_whole,
         lambda ctx, i: holds(pi_intersection(ctx, i.H).is_whole))
register("T3.14.fwd", "meet over pi(H) of N_{U_p}(G,H) = 1 implies N_U(G,H) = 1", normal_h,
         lambda ctx, i: ctx.solvable and pi_intersection(ctx, i.H).is_trivial,
         lambda ctx, i: holds(weak_norm(ctx.G, i.H, SUPERSOLVABLE).is_trivial))
register("T3.14.rev", "N_U(G,H) = 1 implies meet over pi(H) of N_{U_p}(G,H) = 1", normal_h,
         lambda ctx, i: ctx.solvable and weak_norm(ctx.G, i.H, SUPERSOLVABLE).is_trivial,
         lambda ctx, i: holds(pi_intersection(ctx, i.H).is_trivial))


# ---------------------------------------------------------------------------------
# N_1-groups

def _tags_u_up(ctx: Ctx) -> Iterator[Inst]:
    yield Inst(tag=SUPERSOLVABLE)
    for p in ctx.primes:
        yield Inst(p=p, tag=up(p))


def _sub_tags_u_up(ctx: Ctx) -> Iterator[Inst]:
    for base in _tags_u_up(ctx):
        for H in ctx.sub_sample:
            yield Inst(H=H, p=base.p, tag=base.tag)


register("P4.1.1", "(p-)supersolvable groups are N_1-groups", _tags_u_up,
         lambda ctx, i: is_member(ctx.G, i.tag),
         lambda ctx, i: holds(weak_norm_direct(ctx.G, ctx.G.whole(), i.tag).is_whole))
register("P4.1.2", "N_1 with respect to a (p-)supersolvable H", _sub_tags_u_up,
         lambda ctx, i: is_member(ctx.G, i.tag, i.H),
         lambda ctx, i: holds(weak_norm_direct(ctx.G, i.H, i.tag).is_whole))


def _p413_hyp(ctx, i):
    G = ctx.G
    return all(S.is_normal() for S in ctx.lattice.all if not residual(G, i.tag, S).is_trivial)


register("P4.1.3", "N_1 when every non-(p-)supersolvable subgroup is normal", _tags_u_up, _p413_hyp,
         lambda ctx, i: holds(weak_norm_direct(ctx.G, ctx.G.whole(), i.tag).is_whole))


def _cyclic(G: PermGroup, S: SubgroupHandle) -> bool:
    return S.is_trivial or int(G.element_orders[S.elements].max()) == S.order


register("P4.1.4", "N_1 with respect to G when G^{U_p} is cyclic", each_prime,
         lambda ctx, i: _cyclic(ctx.G, residual(ctx.G, up(i.p))),
         lambda ctx, i: holds(weak_norm_direct(ctx.G, ctx.G.whole(), up(i.p)).is_whole))


def _p415_instances(ctx: Ctx) -> Iterator[Inst]:
    for p in ctx.primes:
        for H in ctx.normals:
            yield Inst(H=H, p=p)


register("P4.1.5", "N_1 with respect to a normal minimal non-p-supersolvable H", _p415_instances,
         lambda ctx, i: minimal_non_member(ctx, i.H, up(i.p)),
         lambda ctx, i: holds(weak_norm_direct(ctx.G, i.H, up(i.p)).is_whole))


def _p431(ctx, i):
    KG = ctx.as_group(i.K)
    return holds(weak_norm(KG.group, KG.down(i.H & i.K), up(i.p)).is_whole)


register("P4.3.1", "N_1 passes to subgroups K with respect to H meet K", n1_sub_prime_proper,
         lambda ctx, i: weak_norm(ctx.G, i.H, up(i.p)).is_whole, _p431)


def _p432(ctx, i):
    q = ctx.quotient(i.N)
    return holds(weak_norm(q.image, q.image_of(i.H), up(i.p)).is_whole)


register("P4.3.2", "N_1 passes to G/N with respect to H/N", n1_normal_in_sub_prime,
         lambda ctx, i: weak_norm(ctx.G, i.H, up(i.p)).is_whole, _p432)
register("T4.4", "N_1 with respect to itself and U implies solvable", each_group,
         lambda ctx, i: norm(ctx.G, SUPERSOLVABLE).is_whole, lambda ctx, i: holds(ctx.solvable))


def _t44b(ctx, i):
    G = ctx.G
    a = is_solvable(G, norm(G, SUPERSOLVABLE))
    b = is_solvable(G, norm_infinity(G, SUPERSOLVABLE))
    return (a and b, [a, b], [True, True])


register("T4.4.b", "N_U(G) and N^inf_U(G) are solvable", each_group, always, _t44b)
register("T4.5", "N_1 with respect to H and U_p, p smallest in pi(H), implies H p-solvable",
         sub_h_smallest_prime, lambda ctx, i: weak_norm(ctx.G, i.H, up(i.p)).is_whole,
         lambda ctx, i: holds(is_p_solvable(ctx.G, i.p, i.H)))


def _smallest_prime(ctx: Ctx) -> Iterator[Inst]:
    if ctx.primes:
        yield Inst(p=ctx.primes[0])


register("C4.6", "N_1 with respect to itself and U_p, p smallest in pi(G), implies p-solvable",
         _smallest_prime, lambda ctx, i: g_is_n1(ctx, i.p),
         lambda ctx, i: holds(ctx.p_solvable(i.p)), unproven=True)


def _t471_hyp(ctx, i):
    q = ctx.quotient(i.H)
    return weak_norm(ctx.G, i.H, up(i.p)).is_whole and is_p_solvable(q.image, i.p)


register("T4.7.1", "N_1 w.r.t. normal H with G/H p-solvable implies G p-solvable",
         normal_h_smallest_prime, _t471_hyp, lambda ctx, i: holds(ctx.p_solvable(i.p)), unproven=True)


def _t472_hyp(ctx, i):
    G = ctx.G
    return weak_norm(G, i.H, up(i.p)).is_whole and residual(G, up(i.p)).mask & ~i.H.mask == 0


register("T4.7.2", "N_1 w.r.t. H containing G^{U_p} implies G p-solvable", sub_h_smallest_prime,
         _t472_hyp, lambda ctx, i: holds(ctx.p_solvable(i.p)), unproven=True)


def _t48_hyp(ctx, i):
    G = ctx.G
    return o_p(G, i.p).order == p_part(G.order, i.p) and g_is_n1(ctx, i.p)


register("T4.8", "normal Sylow p-subgroup and N_1 w.r.t. itself and U_p implies solvable", each_prime,
         _t48_hyp, lambda ctx, i: holds(ctx.solvable), unproven=True)


def _t49_hyp(ctx, i):
    return ctx.p_solvable(i.p) and g_is_n1(ctx, i.p)


register("T4.9.1", "p-solvable N_1-group has a p-group U_p-residual", each_prime, _t49_hyp,
         lambda ctx, i: (is_p_power(residual(ctx.G, up(i.p)).order, i.p), residual(ctx.G, up(i.p)).order,
                         f"power of {i.p}"))


def _t492(ctx, i):
    for N in ctx.normal_sample:
        if N.is_whole:
            continue
        if norm(quotient_group(ctx, N), up(i.p)).is_trivial:
            return (False, f"trivial norm of G/N with |N| = {N.order}", "nontrivial")
    return (True, "nontrivial", "nontrivial")


register("T4.9.2", "p-solvable N_1-group: N_{U_p}(G/N) > 1 for proper normal N", each_prime, _t49_hyp, _t492)
register("T4.9.3", "p-solvable N_1-group has h_p <= 3", each_prime, _t49_hyp,
         lambda ctx, i: (_hp(ctx, i.p) <= 3, _hp(ctx, i.p), "<= 3"))


def _c410_hyp(ctx, i):
    return bool(ctx.primes) and all(g_is_n1(ctx, p) for p in ctx.primes)


def _c4104(ctx, i):
    for N in ctx.normal_sample:
        Q = quotient_group(ctx, N)
        if not is_member(Q, NU):
            return (False, f"G/N outside NU for |N| = {N.order}", "NU")
    return (True, "NU", "NU")


def _c4106(ctx, i):
    if not ctx.solvable:
        return (False, "not solvable", "solvable")
    lengths = [_lp(ctx, r) for r in ctx.primes]
    return (max(lengths) <= 2, lengths, "all <= 2")


register("C4.10.1", "N_1 for every p in pi(G) implies solvable", each_group, _c410_hyp,
         lambda ctx, i: holds(ctx.solvable))
register("C4.10.2", "N_1 for every p in pi(G) implies G = N_U(G)", each_group, _c410_hyp,
         lambda ctx, i: holds(norm(ctx.G, SUPERSOLVABLE).is_whole))
register("C4.10.3", "N_1 for every p in pi(G) implies G^U nilpotent", each_group, _c410_hyp,
         lambda ctx, i: holds(is_member(ctx.G, NILPOTENT, residual(ctx.G, SUPERSOLVABLE))))
register("C4.10.4", "N_1 for every p in pi(G) implies G/N in NU", each_group, _c410_hyp, _c4104)
register("C4.10.5", "N_1 for every p in pi(G) implies h <= 3", each_group, _c410_hyp,
         lambda ctx, i: (ctx.solvable and metrics.fitting_length(ctx.G) <= 3,
                         metrics.fitting_length(ctx.G) if ctx.solvable else None, "<= 3"))
register("C4.10.6", "N_1 for every p in pi(G) implies l_r <= 2 for all r", each_group, _c410_hyp, _c4106)


def _hall_hyp(ctx, i, tag):
    G = ctx.G
    if not is_member(G, NILPOTENT, i.N):
        return False
    D = derived_subgroup(G, i.N)
    return is_member(quotient_group(ctx, D), tag)


register("T4.11.1", "nilpotent normal N with G/N' nilpotent implies G nilpotent", nilpotent_normals,
         lambda ctx, i: _hall_hyp(ctx, i, NILPOTENT), lambda ctx, i: holds(is_member(ctx.G, NILPOTENT)))
register("T4.11.2", "nilpotent normal N with G/N' supersolvable implies G supersolvable", nilpotent_normals,
         lambda ctx, i: _hall_hyp(ctx, i, SUPERSOLVABLE),
         lambda ctx, i: holds(is_member(ctx.G, SUPERSOLVABLE)))


def _t412_hyp(ctx, i):
    G = ctx.G
    if not (ctx.p_solvable(i.p) and g_is_n1(ctx, i.p)):
        return False
    return residual(G, NILPOTENT).mask & ~residual(G, product(up(i.p), up(i.p))).mask == 0


register("T4.12", "p-solvable N_1-group with G^N inside G^{U_p^2} is nilpotent", each_prime, _t412_hyp,
         lambda ctx, i: holds(is_member(ctx.G, NILPOTENT)))


def _t413_hyp(ctx, i):
    G = ctx.G
    if not norm(G, SUPERSOLVABLE).is_whole:
        return False
    return residual(G, SUPERSOLVABLE).mask & ~residual(G, product(SUPERSOLVABLE, SUPERSOLVABLE)).mask == 0


register("T4.13", "N_1-group for U with G^U inside G^{U^2} is supersolvable", each_group, _t413_hyp,
         lambda ctx, i: holds(is_member(ctx.G, SUPERSOLVABLE)))


# ---------------------------------------------------------------------------------
# applications

def _t51_left(ctx, p):
    return is_member(ctx.G, NpUp(p))


def _t51_right(ctx, p):
    return is_member(quotient_group(ctx, norm(ctx.G, up(p))), NpUp(p))


register("T5.1.fwd", "G in N_pU_p implies G/N_{U_p}(G) in N_pU_p", each_prime,
         lambda ctx, i: ctx.p_solvable(i.p) and _t51_left(ctx, i.p),
         lambda ctx, i: holds(_t51_right(ctx, i.p)))
register("T5.1.rev", "G/N_{U_p}(G) in N_pU_p implies G in N_pU_p", each_prime,
         lambda ctx, i: ctx.p_solvable(i.p) and _t51_right(ctx, i.p),
         lambda ctx, i: holds(_t51_left(ctx, i.p)))


def _c52_hyp(ctx, i):
    return ctx.p_solvable(i.p) and norm_infinity(ctx.G, up(i.p)).is_whole


def _c522(ctx, i):
    for N in ctx.normal_sample:
        if N.is_whole:
            continue
        if norm_infinity(quotient_group(ctx, N), up(i.p)).is_trivial:
            return (False, f"trivial N^inf of G/N with |N| = {N.order}", "nontrivial")
    return (True, "nontrivial", "nontrivial")


register("C5.2.1", "G = N^inf_{U_p}(G) implies G in N_pU_p", each_prime, _c52_hyp,
         lambda ctx, i: holds(_t51_left(ctx, i.p)))
register("C5.2.2", "G = N^inf_{U_p}(G) implies N^inf_{U_p}(G/N) > 1 for proper normal N", each_prime,
         _c52_hyp, _c522)
register("C5.2.3", "G = N^inf_{U_p}(G) implies h_p <= 3", each_prime, _c52_hyp,
         lambda ctx, i: (_hp(ctx, i.p) <= 3, _hp(ctx, i.p), "<= 3"))


def _c52u_hyp(ctx, i):
    return norm_infinity(ctx.G, SUPERSOLVABLE).is_whole


def _c52u3(ctx, i):
    if not ctx.solvable:
        return (False, "not solvable", "solvable")
    lengths = [_lp(ctx, r) for r in ctx.primes]
    return (not lengths or max(lengths) <= 2, lengths, "all <= 2")


register("C5.2U.1", "G = N^inf_U(G) implies G in NU", each_group, _c52u_hyp,
         lambda ctx, i: holds(is_member(ctx.G, NU)))
register("C5.2U.2", "G = N^inf_U(G) implies h <= 3", each_group, _c52u_hyp,
         lambda ctx, i: (ctx.solvable and metrics.fitting_length(ctx.G) <= 3,
                         metrics.fitting_length(ctx.G) if ctx.solvable else None, "<= 3"))
register("C5.2U.3", "G = N^inf_U(G) implies l_p <= 2 for all p", each_group, _c52u_hyp, _c52u3)


def _hp_top(ctx, p):
    return h_p_quotient(ctx, norm_infinity(ctx.G, up(p)), p)


def _lp_top(ctx, p):
    return l_p_quotient(ctx, norm_infinity(ctx.G, SUPERSOLVABLE), p)


register("T5.3.hp.fwd", "h_p(G) <= k implies h_p(G/N^inf_{U_p}(G)) <= k (k >= 3)", prime_k((3, 4)),
         lambda ctx, i: ctx.p_solvable(i.p) and _hp(ctx, i.p) <= i.k,
         lambda ctx, i: (_hp_top(ctx, i.p) <= i.k, _hp_top(ctx, i.p), f"<= {i.k}"))
register("T5.3.hp.rev", "h_p(G/N^inf_{U_p}(G)) <= k implies h_p(G) <= k (k >= 3)", prime_k((3, 4)),
         lambda ctx, i: ctx.p_solvable(i.p) and _hp_top(ctx, i.p) <= i.k,
         lambda ctx, i: (_hp(ctx, i.p) <= i.k, _hp(ctx, i.p), f"<= {i.k}"))
register("T5.3.lp.fwd", "l_p(G) <= k implies l_p(G/N^inf_U(G)) <= k (k >= 2)", prime_k((2, 3)),
         lambda ctx, i: ctx.solvable and _lp(ctx, i.p) <= i.k,
         lambda ctx, i: (_lp_top(ctx, i.p) <= i.k, _lp_top(ctx, i.p), f"<= {i.k}"))
register("T5.3.lp.rev", "l_p(G/N^inf_U(G)) <= k implies l_p(G) <= k (k >= 2)", prime_k((2, 3)),
         lambda ctx, i: ctx.solvable and _lp_top(ctx, i.p) <= i.k,
         lambda ctx, i: (_lp(ctx, i.p) <= i.k, _lp(ctx, i.p), f"<= {i.k}"))
register("T5.4", "elements of order p (and 4) inside N^inf_{U_p}(G) give h_p <= 3", each_prime,
         lambda ctx, i: ctx.p_solvable(i.p) and small_elements_inside(ctx, i.p, norm_infinity(ctx.G, up(i.p))),
         lambda ctx, i: (_hp(ctx, i.p) <= 3, _hp(ctx, i.p), "<= 3"))
register("C5.5", "elements of order p (and 4) inside N_{U_p}(G) give h_p <= 3", each_prime,
         lambda ctx, i: ctx.p_solvable(i.p) and small_elements_inside(ctx, i.p, norm(ctx.G, up(i.p))),
         lambda ctx, i: (_hp(ctx, i.p) <= 3, _hp(ctx, i.p), "<= 3"))
register("T5.6", "solvable, elements of order p (and 4) inside N^inf_U(G) give l_p <= 2", each_prime,
         lambda ctx, i: ctx.solvable and small_elements_inside(ctx, i.p, norm_infinity(ctx.G, SUPERSOLVABLE)),
         lambda ctx, i: (_lp(ctx, i.p) <= 2, _lp(ctx, i.p), "<= 2"))


def q57_hypothesis(ctx: Ctx, i: Inst) -> bool:
    return ctx.p_solvable(i.p) and small_elements_inside(ctx, i.p, norm_infinity(ctx.G, up(i.p)))


def q57_assertion(ctx: Ctx, i: Inst) -> Outcome:
    lp = _lp(ctx, i.p)
    return (lp <= 2, lp, "<= 2")


register("Q5.7", "open: elements of order p (and 4) inside N^inf_{U_p}(G) give l_p <= 2?", each_prime,
         q57_hypothesis, q57_assertion, question=True)


def theorem_ids() -> list[str]:
    """Ids of the proven and unproven theorem checks (questions excluded), sorted."""
    return sorted(k for k, c in REGISTRY.items() if not c.question)
