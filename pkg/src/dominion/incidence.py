"""Incidence graphs of designs and the point/block set machinery around them.

Vertex numbering is points first (0..v-1), then blocks (v..v+b-1). Vertex
sets and point sets are plain int bitsets, so the point part of a vertex set
is a mask and a union of closed neighbourhoods is a chain of ORs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .designs import Design, PointSet, points_of

VertexSet = int


@dataclass(frozen=True)
class IncidenceGraph:
    v: int
    b: int
    closed_nbhd: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.v + self.b

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @property
    def point_mask(self) -> int:
        return (1 << self.v) - 1

    def degree(self, u: int) -> int:
        return self.closed_nbhd[u].bit_count() - 1

    def edge_count(self) -> int:
        return sum(self.degree(u) for u in range(self.v))

    def is_connected(self) -> bool:
        seen = frontier = 1
        while frontier:
            grown = 0
            for u in points_of(frontier):
                grown |= self.closed_nbhd[u]
            frontier = grown & ~seen
            seen |= grown
        return seen == self.full

    def label(self, u: int) -> str:
        return f"p{u}" if u < self.v else f"B{u - self.v}"

    @classmethod
    def from_blocks(cls, v: int, blocks: Sequence[int]) -> IncidenceGraph:
        """Incidence graph of any point/block structure, no design axioms required."""
        b = len(blocks)
        nbhd = [1 << x for x in range(v + b)]
        for j, blk in enumerate(blocks):
            bj = v + j
            for x in points_of(blk):
                nbhd[x] |= 1 << bj
                nbhd[bj] |= 1 << x
        return cls(v, b, tuple(nbhd))


def incidence_graph(d: Design) -> IncidenceGraph:
    g = IncidenceGraph.from_blocks(d.v, d.blocks)
    assert g.is_connected(), "incidence graph of a 2-design is connected"
    return g


def pencil(d: Design, x: int) -> list[int]:
    if not 0 <= x < d.v:
        raise IndexError(f"point {x} outside 0..{d.v - 1}")
    return [j for j, blk in enumerate(d.blocks) if blk >> x & 1]


def blocks_meeting(d: Design, P: PointSet) -> int:
    """L(P) as a bitset over block indices."""
    out = 0
    for j, blk in enumerate(d.blocks):
        if blk & P:
            out |= 1 << j
    return out


def blocks_avoiding(d: Design, P: PointSet) -> int:
    """Blocks disjoint from P, as a bitset over block indices."""
    return ((1 << d.b) - 1) & ~blocks_meeting(d, P)


def neat_closure(d: Design, P: PointSet) -> VertexSet:
    """I_P: the points of P together with every block avoiding P."""
    return P | blocks_avoiding(d, P) << d.v


def project_points(S: VertexSet, v: int) -> PointSet:
    return S & ((1 << v) - 1)


def block_part(S: VertexSet, v: int) -> int:
    """Block vertices of S, re-based to block indices."""
    return S >> v


def dominated_by(g: IncidenceGraph, S: VertexSet) -> int:
    cover = 0
    for u in points_of(S):
        cover |= g.closed_nbhd[u]
    return cover


def is_dominating(g: IncidenceGraph, S: VertexSet) -> bool:
    return dominated_by(g, S) == g.full


def is_neat(d: Design, S: VertexSet) -> bool:
    return S == neat_closure(d, project_points(S, d.v))


def external_private_neighbours(g: IncidenceGraph, S: VertexSet, u: int) -> VertexSet:
    if not S >> u & 1:
        raise ValueError(f"vertex {u} is not in S")
    others = dominated_by(g, S & ~(1 << u))
    return g.closed_nbhd[u] & ~S & ~others
