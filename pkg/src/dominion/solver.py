"""Exact minimum dominating sets by branch and bound.

Domination is treated as set cover: every vertex must be covered by the closed
neighbourhood of some chosen vertex. A node of the search holds the
undominated vertices and the vertices still allowed as dominators. We branch
on the undominated vertex with the fewest allowed dominators (ties to the
lowest index) and try its dominators c1 < c2 < ... in order; branch i takes
c_i and forbids c1..c_{i-1}. The branches partition the solution space, so
enumeration yields every set exactly once without a dedup table.

Lower bound at a node is the larger of
  * a greedy packing: undominated vertices whose allowed dominators are
    pairwise disjoint each need their own dominator;
  * a coverage count: the fewest allowed dominators whose new-coverage sizes,
    taken largest first, can add up to the number of undominated vertices.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .designs import Design, points_of
from .incidence import IncidenceGraph, VertexSet, incidence_graph, is_dominating, is_neat, external_private_neighbours

DEFAULT_NODE_BUDGET = 10**9
ORACLE_MAX_VERTICES = 26
_INF = 1 << 30


def default_budget() -> int:
    raw = os.environ.get("DOMINION_NODE_BUDGET")
    return int(raw) if raw else DEFAULT_NODE_BUDGET


class SolverError(RuntimeError):
    pass


class BudgetExceeded(SolverError):
    def __init__(self, message: str, partial: list[int] | None = None, nodes: int = 0):
        super().__init__(message)
        self.partial = partial or []
        self.nodes = nodes


class GraphTooLarge(SolverError):
    pass


@dataclass
class GammaResult:
    gamma: int
    witness: VertexSet
    nodes_explored: int
    root_lower_bound: int
    complete: bool = True
    lower_bound: int = 0

    def __post_init__(self):
        if self.complete:
            self.lower_bound = self.gamma


@dataclass
class NeatnessReport:
    gamma: int
    count_mds: int
    count_neat: int
    is_neat_design: bool
    is_super_neat: bool
    sets: list[VertexSet] = field(default_factory=list, repr=False)


class _Search:
    def __init__(self, nbhd: Sequence[int], budget: int):
        self.nbhd = nbhd
        self.budget = budget
        self.nodes = 0
        self.best = _INF
        self.witness = 0
        self.found: list[int] = []

    def bound(self, undom: int, allowed: int) -> tuple[int, int, list[int]]:
        """(lower bound, branch vertex, its allowed dominators); bound is _INF on a dead end."""
        nb = self.nbhd
        rows = []
        m = undom
        while m:
            low = m & -m
            u = low.bit_length() - 1
            m ^= low
            cand = nb[u] & allowed
            if not cand:
                return _INF, u, []
            rows.append((cand.bit_count(), u, cand))
        rows.sort()
        _, branch_u, branch_cand = rows[0]

        packing = 0
        used = 0
        pool = 0
        for _, _, cand in rows:
            pool |= cand
            if not cand & used:
                packing += 1
                used |= cand

        gains = []
        m = pool
        while m:
            low = m & -m
            gains.append((nb[low.bit_length() - 1] & undom).bit_count())
            m ^= low
        gains.sort(reverse=True)
        need = undom.bit_count()
        cover = 0
        for g in gains:
            need -= g
            cover += 1
            if need <= 0:
                break
        return max(packing, cover), branch_u, points_of(branch_cand)

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(f"node budget {self.budget} exhausted", nodes=self.nodes)

    def minimize(self, undom: int, allowed: int, depth: int, chosen: int) -> None:
        self._tick()
        if not undom:
            if depth < self.best:
                self.best = depth
                self.witness = chosen
            return
        lb, _, cands = self.bound(undom, allowed)
        if depth + lb >= self.best:
            return
        nb = self.nbhd
        for c in cands:
            self.minimize(undom & ~nb[c], allowed, depth + 1, chosen | 1 << c)
            allowed &= ~(1 << c)
            if depth + 1 >= self.best:
                return

    def collect(self, undom: int, allowed: int, depth: int, chosen: int, cap: int) -> None:
        self._tick()
        if not undom:
            self.found.append(chosen)
            return
        lb, _, cands = self.bound(undom, allowed)
        if depth + lb > cap:
            return
        nb = self.nbhd
        for c in cands:
            self.collect(undom & ~nb[c], allowed, depth + 1, chosen | 1 << c, cap)
            allowed &= ~(1 << c)


def greedy_dominating_set(nbhd: Sequence[int]) -> int:
    """Repeatedly take the vertex covering the most undominated vertices (lowest index on ties)."""
    undom = (1 << len(nbhd)) - 1
    chosen = 0
    while undom:
        best_u, best_gain = -1, 0
        for u, row in enumerate(nbhd):
            gain = (row & undom).bit_count()
            if gain > best_gain:
                best_u, best_gain = u, gain
        chosen |= 1 << best_u
        undom &= ~nbhd[best_u]
    return chosen


def _root_branches(nbhd: Sequence[int]) -> tuple[int, list[tuple[int, int, int]]]:
    """Root lower bound and the (undominated, allowed, chosen) state of each root branch."""
    full = (1 << len(nbhd)) - 1
    s = _Search(nbhd, _INF)
    lb, _, cands = s.bound(full, full)
    allowed = full
    branches = []
    for c in cands:
        branches.append((full & ~nbhd[c], allowed, 1 << c))
        allowed &= ~(1 << c)
    return lb, branches


def _min_task(nbhd, branch, incumbent, budget):
    undom, allowed, chosen = branch
    s = _Search(nbhd, budget)
    s.best = incumbent
    try:
        s.minimize(undom, allowed, 1, chosen)
    except BudgetExceeded:
        return s.best, s.witness, s.nodes, False
    return s.best, s.witness, s.nodes, True


def _collect_task(nbhd, branch, cap, budget):
    undom, allowed, chosen = branch
    s = _Search(nbhd, budget)
    try:
        s.collect(undom, allowed, 1, chosen, cap)
    except BudgetExceeded:
        return s.found, s.nodes, False
    return s.found, s.nodes, True


def minimum_domination(g: IncidenceGraph, budget: int | None = None, threads: int = 1) -> GammaResult:
    """Exact domination number with a witness.

    With ``threads > 1`` the root branches run in separate processes, each
    starting from the greedy incumbent; the node budget then applies per branch.
    """
    budget = default_budget() if budget is None else budget
    nbhd = g.closed_nbhd
    if not nbhd:
        raise SolverError("empty graph")
    full = (1 << len(nbhd)) - 1
    greedy = greedy_dominating_set(nbhd)
    root_lb, branches = _root_branches(nbhd)
    incumbent = greedy.bit_count()

    if threads <= 1:
        s = _Search(nbhd, budget)
        s.best, s.witness = incumbent, greedy
        try:
            s.minimize(full, full, 0, 0)
        except BudgetExceeded:
            return GammaResult(s.best, s.witness, s.nodes, root_lb, complete=False, lower_bound=root_lb)
        return GammaResult(s.best, s.witness, s.nodes, root_lb)

    best, witness, nodes, complete = incumbent, greedy, 1, True
    if root_lb < incumbent:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_min_task, nbhd, br, incumbent, budget) for br in branches]
            for fut in futures:
                b, w, n, ok = fut.result()
                nodes += n
                complete &= ok
                if b < best:
                    best, witness = b, w
    if not complete:
        return GammaResult(best, witness, nodes, root_lb, complete=False, lower_bound=root_lb)
    return GammaResult(best, witness, nodes, root_lb)


def _vertex_order_key(S: int) -> tuple[int, ...]:
    return tuple(points_of(S))


def enumerate_minimum_dominating_sets(
    g: IncidenceGraph, gamma: int | None = None, budget: int | None = None, threads: int = 1
) -> list[VertexSet]:
    """Every dominating set of size gamma, sorted by increasing vertex tuples."""
    budget = default_budget() if budget is None else budget
    if gamma is None:
        res = minimum_domination(g, budget, threads)
        if not res.complete:
            raise BudgetExceeded("budget exhausted while computing gamma", nodes=res.nodes_explored)
        gamma = res.gamma
    nbhd = g.closed_nbhd
    full = (1 << len(nbhd)) - 1
    if threads <= 1:
        s = _Search(nbhd, budget)
        try:
            s.collect(full, full, 0, 0, gamma)
        except BudgetExceeded as exc:
            raise BudgetExceeded(str(exc), sorted(s.found, key=_vertex_order_key), s.nodes) from None
        found = s.found
    else:
        _, branches = _root_branches(nbhd)
        found, nodes, complete = [], 0, True
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_collect_task, nbhd, br, gamma, budget) for br in branches]
            for fut in futures:
                f, n, ok = fut.result()
                found.extend(f)
                nodes += n
                complete &= ok
        if not complete:
            raise BudgetExceeded("node budget exhausted", sorted(found, key=_vertex_order_key), nodes)
    if any(S.bit_count() != gamma for S in found):
        raise SolverError(f"found a dominating set smaller than gamma={gamma}")
    return sorted(found, key=_vertex_order_key)


def exhaustive_gamma_oracle(g: IncidenceGraph, max_vertices: int = ORACLE_MAX_VERTICES) -> int:
    """Domination number by scanning all subsets in increasing size. Test oracle only."""
    n = g.n
    if n > max_vertices:
        raise GraphTooLarge(f"{n} vertices exceeds oracle cap {max_vertices}")
    full = g.full
    nb = g.closed_nbhd
    for size in range(n + 1):
        for combo in itertools.combinations(range(n), size):
            cover = 0
            for u in combo:
                cover |= nb[u]
            if cover == full:
                return size
    raise SolverError("no dominating set found")  # unreachable: V dominates


def all_dominating_sets_of_size(g: IncidenceGraph, size: int) -> list[VertexSet]:
    """Brute-force scan over all subsets of one size. Test oracle only."""
    out = []
    for combo in itertools.combinations(range(g.n), size):
        S = sum(1 << u for u in combo)
        if is_dominating(g, S):
            out.append(S)
    return out


def has_private_neighbours(g: IncidenceGraph, S: VertexSet) -> bool:
    return all(external_private_neighbours(g, S, u) for u in points_of(S))


def epn_certified_mds(
    g: IncidenceGraph, sets: list[VertexSet] | None = None, budget: int | None = None
) -> VertexSet:
    """A minimum dominating set whose members all have an external private neighbour."""
    if sets is None:
        sets = enumerate_minimum_dominating_sets(g, budget=budget)
    for S in sets:
        if has_private_neighbours(g, S):
            return S
    raise SolverError("no minimum dominating set with private neighbours everywhere; solver bug")


def classify_neatness(d: Design, budget: int | None = None, threads: int = 1) -> NeatnessReport:
    g = incidence_graph(d)
    res = minimum_domination(g, budget, threads)
    if not res.complete:
        raise BudgetExceeded("budget exhausted while computing gamma", nodes=res.nodes_explored)
    sets = enumerate_minimum_dominating_sets(g, res.gamma, budget, threads)
    neat = sum(1 for S in sets if is_neat(d, S))
    return NeatnessReport(
        gamma=res.gamma,
        count_mds=len(sets),
        count_neat=neat,
        is_neat_design=neat >= 1,
        is_super_neat=neat == len(sets),
        sets=sets,
    )
