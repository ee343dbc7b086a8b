"""Upper p-series, p-length, p-Fitting length and Fitting length.

All series are computed inside ``G`` through the ``*_above`` helpers, which
return preimages of characteristic subgroups of quotients ``G/K``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import NotPSolvable, NotSolvable
from .formations import is_member, is_p_solvable, is_solvable, p_nilpotent
from .lattice import fitting_above, normal_subgroups, o_pi_above, p_fitting_above, prime_divisors
from .perm import PermGroup, SubgroupHandle, quotient


@dataclass(frozen=True)
class UpperPSeries:
    """``chain = (P_0, M_0, P_1, M_1, ..., P_n, M_n)`` with ``P_0 = 1`` and ``M_n = G``."""

    p: int
    chain: tuple[SubgroupHandle, ...]

    @property
    def p_factor_count(self) -> int:
        return sum(1 for i in range(2, len(self.chain), 2)
                   if self.chain[i].order > self.chain[i - 1].order)

    @property
    def orders(self) -> list[int]:
        """Orders of the distinct terms, ascending."""
        out: list[int] = []
        for S in self.chain:
            if not out or S.order != out[-1]:
                out.append(S.order)
        return out


def _require_p_solvable(G: PermGroup, p: int) -> None:
    if not is_p_solvable(G, p):
        raise NotPSolvable(f"{G!r} is not {p}-solvable")


def upper_p_series(G: PermGroup, p: int) -> UpperPSeries:
    _require_p_solvable(G, p)
    others = set(prime_divisors(G.order)) - {p}
    chain = [G.trivial()]
    while True:
        P = chain[-1]
        M = o_pi_above(G, P, others) if others else P
        chain.append(M)
        if M.is_whole:
            return UpperPSeries(p, tuple(chain))
        chain.append(o_pi_above(G, M, {p}))


def _cached(G: PermGroup, key, compute) -> int:
    cache = G._cache.setdefault("metrics", {})
    if key not in cache:
        cache[key] = compute()
    return cache[key]


def p_length(G: PermGroup, p: int) -> int:
    """``l_p(G)``; 0 for p'-groups and the trivial group."""
    return _cached(G, ("l", p), lambda: upper_p_series(G, p).p_factor_count)


def _iterate(G: PermGroup, step) -> int:
    K, count = G.trivial(), 0
    while not K.is_whole:
        K = step(K)
        count += 1
    return count


def p_fitting_length(G: PermGroup, p: int) -> int:
    """``h_p(G)``: number of ``F_p``-quotient steps that exhaust ``G`` (0 for ``G = 1``)."""
    _require_p_solvable(G, p)
    return _cached(G, ("h", p), lambda: _iterate(G, lambda K: p_fitting_above(G, K, p)))


def fitting_length(G: PermGroup) -> int:
    """``h(G)``: number of Fitting-quotient steps that exhaust ``G`` (0 for ``G = 1``)."""
    if not is_solvable(G):
        raise NotSolvable(f"{G!r} is not solvable")
    return _cached(G, ("h",), lambda: _iterate(G, lambda K: fitting_above(G, K)))


def shortest_p_nilpotent_chain(G: PermGroup, p: int) -> int:
    """Length of the shortest chain of normal subgroups of ``G`` from 1 to ``G`` whose
    factors are p-nilpotent, by breadth-first search over the normal lattice."""
    _require_p_solvable(G, p)
    normals = normal_subgroups(G)
    dist = {G.trivial().mask: 0}
    queue = deque([G.trivial()])
    while queue:
        K = queue.popleft()
        if K.is_whole:
            return dist[K.mask]
        q = quotient(G, K)
        for N in normals:
            if N.mask in dist or K.mask & ~N.mask:
                continue
            if is_member(q.image, p_nilpotent(p), q.image_of(N)):
                dist[N.mask] = dist[K.mask] + 1
                queue.append(N)
    raise AssertionError("normal lattice exhausted without reaching G")
