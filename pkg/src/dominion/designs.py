"""2-(v,k,lambda) designs: construction, validation, transforms and a text format.

Blocks are int bitsets over point indices 0..v-1. A ``Design`` always holds
its blocks in canonical order (sorted by their increasing point tuples) and
carries parameters recomputed from the raw incidence by :func:`validate`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .finite_field import DEFAULT_CAPACITY, FieldError, field_of_order

PointSet = int


class DesignError(ValueError):
    pass


class DesignValidationError(DesignError):
    """The block list is not a 2-design. ``pair`` and ``count`` locate coverage failures."""

    def __init__(self, message: str, pair: tuple[int, int] | None = None, count: int | None = None):
        super().__init__(message)
        self.pair = pair
        self.count = count


class DesignFormatError(DesignError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


@dataclass(frozen=True)
class DesignParams:
    v: int
    k: int
    lam: int
    b: int
    r: int

    def as_tuple(self) -> tuple[int, int, int, int, int]:
        return (self.v, self.k, self.lam, self.b, self.r)

    def as_dict(self) -> dict[str, int]:
        return {"v": self.v, "k": self.k, "lambda": self.lam, "b": self.b, "r": self.r}

    def __str__(self) -> str:
        return f"2-({self.v},{self.k},{self.lam}) b={self.b} r={self.r}"


def points_of(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mask_of(points: Iterable[int]) -> int:
    m = 0
    for x in points:
        m |= 1 << x
    return m


def _canonical(blocks: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(blocks, key=points_of))


@dataclass(frozen=True)
class Design:
    v: int
    blocks: tuple[int, ...]
    params: DesignParams
    name: str = ""

    @property
    def k(self) -> int:
        return self.params.k

    @property
    def lam(self) -> int:
        return self.params.lam

    @property
    def b(self) -> int:
        return self.params.b

    @property
    def r(self) -> int:
        return self.params.r

    def block_points(self, j: int) -> list[int]:
        return points_of(self.blocks[j])

    def same_as(self, other: Design) -> bool:
        """Equality of canonical forms, ignoring names."""
        return self.v == other.v and self.blocks == other.blocks


def validate(v: int, blocks: Sequence[int]) -> DesignParams:
    """Recompute (v, k, lambda, b, r) from raw incidence and check the 2-design axioms."""
    if v < 2:
        raise DesignValidationError(f"need at least 2 points, got v={v}")
    if not blocks:
        raise DesignValidationError("empty block list")
    full = (1 << v) - 1
    for j, blk in enumerate(blocks):
        if blk & ~full:
            raise DesignValidationError(f"block {j} mentions a point outside 0..{v - 1}")
    k = blocks[0].bit_count()
    for j, blk in enumerate(blocks):
        if blk.bit_count() != k:
            raise DesignValidationError(f"block {j} has size {blk.bit_count()}, expected constant k={k}")
    if not 2 <= k <= v:
        raise DesignValidationError(f"block size k={k} outside 2..{v}")

    pencils = [0] * v
    for j, blk in enumerate(blocks):
        for x in points_of(blk):
            pencils[x] |= 1 << j
    lam = (pencils[0] & pencils[1]).bit_count()
    for x, y in itertools.combinations(range(v), 2):
        c = (pencils[x] & pencils[y]).bit_count()
        if c != lam:
            raise DesignValidationError(
                f"pair ({x},{y}) lies in {c} blocks, expected lambda={lam}", pair=(x, y), count=c
            )
    if lam == 0:
        raise DesignValidationError("lambda = 0: no pair is covered")
    r = pencils[0].bit_count()
    for x in range(v):
        if pencils[x].bit_count() != r:
            raise DesignValidationError(f"point {x} lies in {pencils[x].bit_count()} blocks, expected r={r}")
    b = len(blocks)
    if r * (k - 1) != lam * (v - 1):
        raise DesignValidationError(f"r={r} violates r(k-1) = lambda(v-1)")
    if b * k != v * r:
        raise DesignValidationError(f"bk={b * k} differs from vr={v * r}")
    if b < v:
        raise DesignValidationError(f"Fisher inequality violated: b={b} < v={v}")
    return DesignParams(v, k, lam, b, r)


def make_design(v: int, blocks: Iterable[int], name: str = "") -> Design:
    canon = _canonical(blocks)
    return Design(v, canon, validate(v, canon), name)


def is_symmetric(d: Design) -> bool:
    return d.b == d.v


# --- constructions ---------------------------------------------------------


def projective_plane(q: int, capacity: int = DEFAULT_CAPACITY) -> Design:
    """PG(2,q): normalized nonzero vectors of GF(q)^3 and the 2-dim subspaces."""
    try:
        f = field_of_order(q, capacity)
    except FieldError as exc:
        raise DesignError(f"unsupported plane order {q}: {exc}") from None
    add, mul = f.add_table, f.mul_table
    # first nonzero coordinate is 1
    pts = [(0, 0, 1)]
    pts += [(0, 1, c) for c in range(q)]
    pts += [(1, b, c) for b in range(q) for c in range(q)]
    blocks = []
    for a in pts:  # line = {x : a.x = 0}
        blk = 0
        for i, x in enumerate(pts):
            s = add[add[mul[a[0]][x[0]]][mul[a[1]][x[1]]]][mul[a[2]][x[2]]]
            if s == 0:
                blk |= 1 << i
        blocks.append(blk)
    return make_design(len(pts), blocks, f"PG(2,{q})")


def affine_plane(q: int, capacity: int = DEFAULT_CAPACITY) -> Design:
    """AG(2,q): points (x, y) at index x*q + y; lines y = mx + c and x = c."""
    try:
        f = field_of_order(q, capacity)
    except FieldError as exc:
        raise DesignError(f"unsupported plane order {q}: {exc}") from None
    add, mul = f.add_table, f.mul_table
    blocks = []
    for m in range(q):
        for c in range(q):
            blocks.append(mask_of(x * q + add[mul[m][x]][c] for x in range(q)))
    for c in range(q):
        blocks.append(mask_of(c * q + y for y in range(q)))
    return make_design(q * q, blocks, f"AG(2,{q})")


def cyclic_design(v: int, base_blocks: Sequence[Iterable[int]], name: str = "") -> Design:
    """Develop base blocks mod v; a short orbit contributes each translate once."""
    if v < 3:
        raise DesignError(f"cyclic development needs v >= 3, got {v}")
    full = (1 << v) - 1
    blocks = []
    for base in base_blocks:
        base = sorted(set(base))
        if any(not 0 <= x < v for x in base):
            raise DesignError(f"base block {base} not contained in 0..{v - 1}")
        if not 2 <= len(base) < v:
            raise DesignError(f"base block {base} must have 2 <= k < v")
        orbit = []
        seen = set()
        for i in range(v):
            blk = mask_of((x + i) % v for x in base) & full
            if blk not in seen:
                seen.add(blk)
                orbit.append(blk)
        blocks.extend(orbit)
    if not name:
        name = f"cyclic({v}; " + " ".join("{" + ",".join(map(str, sorted(set(b)))) + "}" for b in base_blocks) + ")"
    return make_design(v, blocks, name)


def complement(d: Design) -> Design:
    if d.v - d.k < 2:
        raise DesignError(f"complement needs v - k >= 2, got v={d.v}, k={d.k}")
    full = (1 << d.v) - 1
    out = make_design(d.v, (full & ~blk for blk in d.blocks), f"complement({d.name})")
    assert out.lam == d.b - 2 * d.r + d.lam
    return out


def residual_with_map(d: Design, b0: int) -> tuple[Design, list[int]]:
    """Residual at block index b0, plus the original index of each new point.

    Repeated traces stay as separate blocks.
    """
    if not is_symmetric(d):
        raise DesignError("residual design needs a symmetric design")
    if not 0 <= b0 < d.b:
        raise DesignError(f"block index {b0} outside 0..{d.b - 1}")
    removed = d.blocks[b0]
    keep = [x for x in range(d.v) if not removed >> x & 1]
    new_index = {x: i for i, x in enumerate(keep)}
    blocks = []
    for j, blk in enumerate(d.blocks):
        if j != b0:
            blocks.append(mask_of(new_index[x] for x in points_of(blk & ~removed)))
    return make_design(len(keep), blocks, f"Res({d.name},{b0})"), keep


def residual(d: Design, b0: int) -> Design:
    return residual_with_map(d, b0)[0]


def has_repeated_blocks(d: Design) -> bool:
    return len(set(d.blocks)) != len(d.blocks)


def dual_with_map(d: Design) -> tuple[Design, list[int]]:
    """Swap points and blocks: new point j's pencil is old block j.

    Also returns, for each block of the dual (canonical order), the old point
    whose pencil it is. Sorting those blocks can permute the old points, so
    ``dual(dual(d))`` equals ``d`` only after relabeling through that list.
    """
    if not is_symmetric(d):
        raise DesignError("dual design needs a symmetric design")
    pencils = [0] * d.v
    for j, blk in enumerate(d.blocks):
        for x in points_of(blk):
            pencils[x] |= 1 << j
    out = make_design(d.b, pencils, f"dual({d.name})")
    position = {}
    for x, pen in enumerate(pencils):
        position.setdefault(pen, []).append(x)
    origin = [position[blk].pop(0) for blk in out.blocks]
    return out, origin


def dual(d: Design) -> Design:
    return dual_with_map(d)[0]


def relabel(d: Design, mapping: Sequence[int], name: str = "") -> Design:
    """Send point i to mapping[i]."""
    return make_design(d.v, (mask_of(mapping[x] for x in points_of(blk)) for blk in d.blocks), name or d.name)


def pair_intersections(d: Design) -> set[int]:
    return {(a & c).bit_count() for a, c in itertools.combinations(d.blocks, 2)}


# --- text format -------------------------------------------------------------


def encode(d: Design) -> str:
    lines = [f"{d.v} {d.k} {d.lam} {d.b}"]
    lines += [" ".join(map(str, points_of(blk))) for blk in d.blocks]
    return "\n".join(lines) + "\n"


def decode(text: str, name: str = "") -> Design:
    rows: list[tuple[int, list[int]]] = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            nums = [int(tok) for tok in line.split()]
        except ValueError:
            raise DesignFormatError(f"non-integer token in {line!r}", lineno) from None
        rows.append((lineno, nums))
    if not rows:
        raise DesignFormatError("empty design file")
    head_line, head = rows[0]
    if len(head) != 4:
        raise DesignFormatError("header must be 'v k lambda b'", head_line)
    v, k, lam, b = head
    if len(rows) - 1 != b:
        raise DesignFormatError(f"header declares b={b} blocks, found {len(rows) - 1}", head_line)
    blocks = []
    for lineno, pts in rows[1:]:
        if len(pts) != k:
            raise DesignFormatError(f"block has {len(pts)} points, header says k={k}", lineno)
        if any(x >= y for x, y in zip(pts, pts[1:])):
            raise DesignFormatError("point indices must be strictly increasing", lineno)
        if pts[0] < 0 or pts[-1] >= v:
            raise DesignFormatError(f"point index outside 0..{v - 1}", lineno)
        blocks.append(mask_of(pts))
    d = make_design(v, blocks, name)
    if d.lam != lam:
        raise DesignValidationError(f"header declares lambda={lam}, incidence gives {d.lam}")
    return d
