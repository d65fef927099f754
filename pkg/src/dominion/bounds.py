"""Closed-form domination bounds for designs, checked against exact solver values.

All threshold comparisons are exact (integers and ``Fraction``); some margins
are as small as 1/(q+1).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .designs import Design, DesignError, DesignParams, has_repeated_blocks, is_symmetric, residual
from .incidence import blocks_avoiding, blocks_meeting, incidence_graph, is_dominating, neat_closure
from .solver import BudgetExceeded, minimum_domination

SATISFIED = "satisfied"
VIOLATED = "violated"
NOT_APPLICABLE = "not-applicable"


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def pencil_cover_threshold(p: DesignParams) -> int:
    """ceil(r / lambda): fewest points that can meet every block through an outside point."""
    return ceil_div(p.r, p.lam)


def lb_general(p: DesignParams) -> int:
    """ceil((2v - 1 - (k-1)/lambda) / k), valid for every 2-design."""
    return ceil_div(p.lam * (2 * p.v - 1) - (p.k - 1), p.lam * p.k)


def lb_point_count(p: DesignParams, psize: int) -> int:
    """Size floor for a dominating set whose point part has ``psize`` points."""
    if not 0 <= psize <= p.v:
        raise ValueError(f"psize={psize} outside 0..{p.v}")
    return ceil_div(p.v + psize * (p.k - 1), p.k)


def nonsymmetric_bracket(p: DesignParams) -> tuple[int, int]:
    """(2k-1, hi) for a non-symmetric design with lambda = 1.

    hi is |I_B| for a block B: its k points plus the b - ((r-1)k + 1) blocks missing it.
    """
    if p.lam != 1 or p.b <= p.v:
        raise DesignError(f"bracket needs a non-symmetric design with lambda=1, got {p}")
    lo = 2 * p.k - 1
    hi = p.k + (p.b - ((p.r - 1) * p.k + 1))
    return lo, hi


def nonsymmetric_upper_fraction(p: DesignParams) -> Fraction:
    """The same upper end written through v and k alone."""
    return Fraction((p.v - p.k**2) * (p.v - 1), p.k * (p.k - 1)) + 2 * p.k - 1


def neat_upper(d: Design, P: int) -> int | None:
    """|I_P| when P is small enough that I_P must dominate, else None."""
    if P.bit_count() > pencil_cover_threshold(d.params) - 1:
        return None
    return P.bit_count() + blocks_avoiding(d, P).bit_count()


def biplane_neat_floor(k: int, x: int) -> int:
    """(k^2 - k)/2 + (x^2 - x(2k-3))/2, the floor on |I_P| with |P| = x in a biplane."""
    return (k * k - k + x * x - x * (2 * k - 3)) // 2


def biplane_line_bounds(k: int, ell: int) -> tuple[int, int]:
    """(max |L(P)|, min |I_P|) over point sets of size ell in a symmetric 2-(v,k,2) design."""
    if not 2 <= ell <= k:
        raise ValueError(f"ell={ell} outside 2..{k}")
    return ell * (2 * k - 1 - ell) // 2 + 1, biplane_neat_floor(k, ell)


def lb_biplane_sum(k: int) -> int:
    """k - 1 + sum_{i>=1} floor((k-4) / 2^(2i-1)) for biplanes with k >= 5."""
    if k < 5:
        raise ValueError(f"needs k >= 5, got {k}")
    total = k - 1
    step = 2
    while step <= k - 4:
        total += (k - 4) // step
        step *= 4
    return total


def superneat_threshold(p: DesignParams) -> Fraction:
    return Fraction(pencil_cover_threshold(p) * (p.k - 1) + p.v, p.k)


def superneat_sufficient(p: DesignParams, gamma: int) -> bool:
    if gamma < 1:
        raise ValueError("gamma must be positive")
    return gamma < superneat_threshold(p)


def expected_gamma_plane(kind: str, q: int) -> int:
    if q < 2:
        raise ValueError("plane order must be >= 2")
    if kind == "projective":
        return 2 * q
    if kind == "affine":
        return 2 * q - 1
    raise ValueError(f"unknown plane kind {kind!r}")


def plane_kind(p: DesignParams) -> tuple[str, int] | None:
    """Recognise projective/affine plane parameters from (v, k, lambda)."""
    if p.lam != 1:
        return None
    q = p.k - 1
    if q >= 2 and p.v == q * q + q + 1:
        return "projective", q
    q = p.k
    if q >= 2 and p.v == q * q:
        return "affine", q
    return None


# --- property checks over point sets -------------------------------------------


def _point_sets(v: int, size: int, exhaustive_limit: int, samples: int, rng: random.Random):
    if comb(v, size) <= exhaustive_limit:
        for combo in itertools.combinations(range(v), size):
            yield sum(1 << x for x in combo)
    else:
        for _ in range(samples):
            yield sum(1 << x for x in rng.sample(range(v), size))


@dataclass
class PropertyResult:
    checked: int = 0
    violations: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_small_neat_closures(
    d: Design, exhaustive_limit: int = 10**5, samples: int = 1000, seed: int = 0
) -> PropertyResult:
    """I_P dominates for every P with |P| <= ceil(r/lambda) - 1."""
    g = incidence_graph(d)
    rng = random.Random(seed)
    out = PropertyResult()
    for size in range(pencil_cover_threshold(d.params)):
        for P in _point_sets(d.v, size, exhaustive_limit, samples, rng):
            out.checked += 1
            if not is_dominating(g, neat_closure(d, P)):
                out.violations.append(P)
    return out


def check_biplane_line_bounds(d: Design) -> tuple[PropertyResult, PropertyResult]:
    """Exhaustive over 2 <= |P| <= k in a symmetric design with lambda = 2.

    Returns (upper, equality): ``upper`` collects P with |L(P)| > L_max or
    |I_P| < I_min; ``equality`` collects P where hitting the bound disagrees
    with P lying inside a block. Once L_max reaches b the bound is met by
    every P, so the equality clause cannot hold there.
    """
    if d.lam != 2 or not is_symmetric(d):
        raise DesignError("needs a symmetric design with lambda=2")
    upper, equality = PropertyResult(), PropertyResult()
    for ell in range(2, d.k + 1):
        l_max, i_min = biplane_line_bounds(d.k, ell)
        for combo in itertools.combinations(range(d.v), ell):
            P = sum(1 << x for x in combo)
            upper.checked += 1
            equality.checked += 1
            met = blocks_meeting(d, P).bit_count()
            inside = any(P & ~blk == 0 for blk in d.blocks)
            i_size = ell + d.b - met
            if met > l_max or i_size < i_min:
                upper.violations.append(P)
            if (met == l_max) != inside or (i_size == i_min) != inside:
                equality.violations.append(P)
    return upper, equality


def avoiding_blocks_included(d: Design, S: int) -> bool:
    """Every block missing pi(S) is itself in S; holds for any dominating S."""
    P = S & ((1 << d.v) - 1)
    return blocks_avoiding(d, P) & ~(S >> d.v) == 0


# --- aggregated report ---------------------------------------------------------


@dataclass
class BoundsReport:
    design_id: str
    params: DesignParams
    lb_general: int
    point_count_curve: list[int]
    bracket: tuple[int, int] | None = None
    biplane_lb: int | None = None
    biplane_line_table: list[tuple[int, int, int]] | None = None
    superneat_sufficient: bool | None = None
    gamma: int | None = None
    status: dict[str, str] = field(default_factory=dict)

    @property
    def violated(self) -> list[str]:
        return [name for name, s in self.status.items() if s == VIOLATED]

    def to_json(self) -> dict:
        out: dict = {"lb_general": self.lb_general}
        if self.bracket is not None:
            out["bracket"] = list(self.bracket)
        if self.biplane_lb is not None:
            out["biplane_lb"] = self.biplane_lb
        return out


def evaluate_bounds(d: Design, gamma: int | None = None) -> BoundsReport:
    p = d.params
    rep = BoundsReport(
        design_id=d.name,
        params=p,
        lb_general=lb_general(p),
        point_count_curve=[lb_point_count(p, s) for s in range(p.v + 1)],
        gamma=gamma,
    )

    def judge(name: str, ok: bool | None) -> None:
        if ok is None:
            rep.status[name] = NOT_APPLICABLE
        else:
            rep.status[name] = SATISFIED if ok else VIOLATED

    known = gamma is not None
    judge("lb_general", gamma >= rep.lb_general if known else None)

    if p.lam == 1 and p.b > p.v:
        rep.bracket = nonsymmetric_bracket(p)
        lo, hi = rep.bracket
        judge("nonsymmetric_bracket", lo <= gamma <= hi if known else None)
    else:
        judge("nonsymmetric_bracket", None)

    if p.lam == 2 and is_symmetric(d):
        rep.biplane_line_table = [(ell, *biplane_line_bounds(p.k, ell)) for ell in range(2, p.k + 1)]
        if p.k >= 5:
            rep.biplane_lb = lb_biplane_sum(p.k)
    judge("biplane_sum", gamma >= rep.biplane_lb if known and rep.biplane_lb is not None else None)

    kind = plane_kind(p)
    judge("plane_gamma", gamma == expected_gamma_plane(*kind) if known and kind else None)

    if known:
        rep.superneat_sufficient = superneat_sufficient(p, gamma)
    return rep


@dataclass
class ResidualCheck:
    gamma: int
    residual_gammas: list[int]
    assume_transitive: bool
    inequality_violations: list[int] = field(default_factory=list)
    transitive_violations: list[int] = field(default_factory=list)
    repeated_blocks: list[int] = field(default_factory=list)

    @property
    def status(self) -> str:
        if self.inequality_violations:
            return "fail"
        if self.transitive_violations:
            return "fail" if self.assume_transitive else "finding"
        return "pass"

    @property
    def all_equal(self) -> bool:
        return len(set(self.residual_gammas)) == 1

    @property
    def equality_holds(self) -> bool:
        return all(g == self.gamma - 1 for g in self.residual_gammas)


def residual_relation_check(
    d: Design, assume_transitive: bool, budget: int | None = None, gamma: int | None = None
) -> ResidualCheck:
    """Domination numbers of every residual of a symmetric design against gamma(d) - 1.

    gamma(residual) >= gamma(d) - 1 always; under block-transitivity all residuals
    share one value equal to gamma(d) - 1. Without that assumption a mismatch of
    the latter is a finding rather than a failure.
    """
    if not is_symmetric(d):
        raise DesignError("residual check needs a symmetric design")
    if gamma is None:
        res = minimum_domination(incidence_graph(d), budget)
        if not res.complete:
            raise BudgetExceeded("budget exhausted on the parent design", nodes=res.nodes_explored)
        gamma = res.gamma
    out = ResidualCheck(gamma, [], assume_transitive)
    for b0 in range(d.b):
        r = residual(d, b0)
        if has_repeated_blocks(r):
            out.repeated_blocks.append(b0)
        res = minimum_domination(incidence_graph(r), budget)
        if not res.complete:
            raise BudgetExceeded(f"budget exhausted on residual at block {b0}", nodes=res.nodes_explored)
        out.residual_gammas.append(res.gamma)
        if res.gamma < gamma - 1:
            out.inequality_violations.append(b0)
        elif res.gamma != gamma - 1:
            out.transitive_violations.append(b0)
    return out
