"""The verification suite behind ``dominion verify-paper``.

Each design gets a list of checks. A check is ``pass``/``fail`` when it
tests a proven statement, ``finding`` when it only reports a computed value
against a conjecture, ``skipped`` when the node budget ran out, and ``error``
when an input design could not be loaded.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from . import __version__
from .bounds import (
    avoiding_blocks_included,
    check_biplane_line_bounds,
    check_small_neat_closures,
    evaluate_bounds,
    expected_gamma_plane,
    lb_biplane_sum,
    lb_general,
    nonsymmetric_bracket,
    nonsymmetric_upper_fraction,
    plane_kind,
    residual_relation_check,
    superneat_sufficient,
)
from .designs import (
    Design,
    DesignError,
    affine_plane,
    complement,
    cyclic_design,
    decode,
    dual,
    is_symmetric,
    projective_plane,
    residual,
)
from .finite_field import prime_power
from .incidence import incidence_graph, is_dominating
from .solver import (
    ORACLE_MAX_VERTICES,
    BudgetExceeded,
    SolverError,
    classify_neatness,
    epn_certified_mds,
    exhaustive_gamma_oracle,
    minimum_domination,
)

PASS, FAIL, FINDING, SKIPPED, ERROR = "pass", "fail", "finding", "skipped", "error"

# enumeration of all minimum dominating sets is attempted up to this many vertices
ENUMERATION_MAX_VERTICES = 50
RESIDUAL_MAX_Q = 4

BIPLANE_SUM_EXPECTED = {5: 4, 6: 6, 7: 7, 8: 9, 9: 10, 11: 13, 13: 17}


@dataclass
class Check:
    name: str
    anchor: str
    status: str
    seconds: float = 0.0
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "anchor": self.anchor,
            "status": self.status,
            "seconds": round(self.seconds, 6),
            "detail": self.detail,
        }


@dataclass
class DesignEntry:
    id: str
    design: Design | None
    gamma: int | None = None
    bounds: dict | None = None
    neatness: dict | None = None
    solver: dict | None = None
    checks: list[Check] = field(default_factory=list)

    def to_json(self) -> dict:
        out: dict = {
            "id": self.id,
            "params": self.design.params.as_dict() if self.design else None,
            "gamma": self.gamma,
            "bounds": self.bounds,
        }
        if self.neatness is not None:
            out["neatness"] = self.neatness
        if self.solver is not None:
            out["solver"] = self.solver
        out["checks"] = [c.to_json() for c in self.checks]
        return out


@dataclass
class RunReport:
    entries: list[DesignEntry] = field(default_factory=list)
    version: str = __version__

    def all_checks(self):
        for e in self.entries:
            for c in e.checks:
                yield e, c

    def counts(self) -> dict[str, int]:
        out = {s: 0 for s in (PASS, FAIL, FINDING, SKIPPED, ERROR)}
        for _, c in self.all_checks():
            out[c.status] += 1
        return out

    def exit_code(self) -> int:
        n = self.counts()
        if n[FAIL]:
            return 5
        if n[ERROR]:
            return 3
        if n[SKIPPED]:
            return 4
        return 0

    def to_json(self) -> dict:
        return {
            "version": self.version,
            "designs": [e.to_json() for e in self.entries],
            "summary": self.counts(),
        }


class _Runner:
    def __init__(self, entry: DesignEntry):
        self.entry = entry

    def run(self, name: str, anchor: str, fn: Callable[[], tuple[str, str]]) -> str:
        t0 = time.perf_counter()
        try:
            status, detail = fn()
        except BudgetExceeded as exc:
            status, detail = SKIPPED, f"budget exhausted: {exc}"
        except SolverError as exc:
            status, detail = FAIL, f"solver error: {exc}"
        self.entry.checks.append(Check(name, anchor, status, time.perf_counter() - t0, detail))
        return status



def _verdict(ok: bool, detail: str) -> tuple[str, str]:
    return (PASS if ok else FAIL), detail


def standard_designs(max_q: int) -> list[tuple[Design, dict]]:
    """The suite's designs with per-design options, in a fixed order."""
    out: list[tuple[Design, dict]] = []
    for q in range(2, max_q + 1):
        if prime_power(q) is None:
            continue
        out.append((projective_plane(q), {"transitive": True, "residuals": q <= RESIDUAL_MAX_Q}))
        out.append((affine_plane(q), {}))
    fano = cyclic_design(7, [[0, 1, 3]], "Fano (cyclic 7; {0,1,3})")
    out.append((fano, {"transitive": True, "residuals": True}))
    out.append((complement(fano), {"transitive": False, "residuals": True}))
    out.append((cyclic_design(11, [[1, 3, 4, 5, 9]], "Paley biplane (cyclic 11; {1,3,4,5,9})"),
                {"transitive": True, "residuals": True}))
    out.append((cyclic_design(13, [[0, 1, 4], [0, 2, 7]], "STS(13) (cyclic 13; {0,1,4},{0,2,7})"), {}))
    out.append((cyclic_design(15, [[0, 1, 4], [0, 2, 8], [0, 5, 10]],
                              "STS(15) (cyclic 15; {0,1,4},{0,2,8},{0,5,10})"), {}))
    return out


def verify_design(d: Design, options: dict, budget: int | None = None, threads: int = 1) -> DesignEntry:
    entry = DesignEntry(d.name, d)
    run = _Runner(entry)
    p = d.params
    g = incidence_graph(d)
    kind = plane_kind(p)
    result = {}

    def gamma_check():
        res = minimum_domination(g, budget, threads)
        result["res"] = res
        if not res.complete:
            raise BudgetExceeded(f"bounds {res.lower_bound}..{res.gamma} only")
        entry.gamma = res.gamma
        entry.solver = {"nodes": res.nodes_explored, "root_lower_bound": res.root_lower_bound}
        ok = is_dominating(g, res.witness) and res.witness.bit_count() == res.gamma
        ok &= all(is_dominating(g, res.witness | 1 << u) for u in range(g.n))
        return _verdict(ok, f"gamma = {res.gamma}")

    bounds = evaluate_bounds(d)
    entry.bounds = bounds.to_json()
    if run.run("gamma", "exact minimum dominating set (witness dominates, no smaller set exists)",
               gamma_check) != PASS:
        return entry
    gamma = entry.gamma
    bounds = evaluate_bounds(d, gamma)
    witness = result["res"].witness
    run.run("bounds_report", "every applicable closed-form bound holds",
            lambda: _verdict(not bounds.violated, ", ".join(f"{k}: {v}" for k, v in bounds.status.items())))

    if g.n <= ORACLE_MAX_VERTICES:
        run.run("oracle_equivalence", "branch and bound agrees with exhaustive subset scan",
                lambda: _verdict(exhaustive_gamma_oracle(g) == gamma, f"oracle agrees on {g.n} vertices"))

    lb = lb_general(p)
    run.run("lb_general", "gamma >= ceil((2v - 1 - (k-1)/lambda) / k)",
            lambda: _verdict(lb <= gamma, f"lb = {lb}, gamma = {gamma}"))
    if kind:
        run.run("plane_gamma", "gamma = 2q (projective), 2q - 1 (affine)",
                lambda: _verdict(gamma == expected_gamma_plane(*kind), f"{kind[0]} order {kind[1]}"))
        run.run("lb_general_tight", "general lower bound is attained by finite planes",
                lambda: _verdict(lb == gamma, f"lb = {lb}, gamma = {gamma}"))

    if p.lam == 1 and p.b > p.v:
        lo, hi = nonsymmetric_bracket(p)
        run.run("nonsymmetric_bracket", "2k - 1 <= gamma <= (v - k^2)(v - 1)/(k(k - 1)) + 2k - 1",
                lambda: _verdict(lo <= gamma <= hi and hi == nonsymmetric_upper_fraction(p),
                                 f"{lo} <= {gamma} <= {hi}"))

    def neat_closures():
        res = check_small_neat_closures(d)
        return _verdict(res.ok, f"{res.checked} point sets, {len(res.violations)} violations")

    run.run("small_neat_closures_dominate", "I_P dominates when |P| <= ceil(r/lambda) - 1", neat_closures)

    run.run("avoiding_blocks_in_witness", "blocks missing pi(S) belong to every dominating S",
            lambda: _verdict(avoiding_blocks_included(d, witness), "witness"))

    if p.lam == 2 and is_symmetric(d):
        line_box = {}

        def line_upper():
            upper, equality = check_biplane_line_bounds(d)
            line_box["equality"] = equality
            return _verdict(upper.ok, f"{upper.checked} point sets, {len(upper.violations)} violations")

        def line_equality():
            eq = line_box["equality"]
            sizes = sorted({P.bit_count() for P in eq.violations})
            return _verdict(eq.ok, f"{eq.checked} point sets, {len(eq.violations)} violations at |P| in {sizes}")

        run.run("biplane_line_upper", "|L(P)| <= l(2k-1-l)/2 + 1 and |I_P| >= f(l) for 2 <= l <= k", line_upper)
        if "equality" in line_box:
            run.run("biplane_line_equality", "|L(P)| = l(2k-1-l)/2 + 1 iff P lies inside a block", line_equality)
        if p.k >= 5:
            blb = lb_biplane_sum(p.k)
            run.run("biplane_sum_bound", "gamma >= k - 1 + sum floor((k-4)/2^(2i-1))",
                    lambda: _verdict(gamma >= blb, f"bound = {blb}, gamma = {gamma}, slack = {gamma - blb}"))
            run.run("biplane_sum_values", "bound values for k = 5..13",
                    lambda: _verdict(all(lb_biplane_sum(k) == v for k, v in BIPLANE_SUM_EXPECTED.items()),
                                     str({k: lb_biplane_sum(k) for k in BIPLANE_SUM_EXPECTED})))
        if p.k >= 4:
            entry.checks.append(Check("gamma_vs_k", "conjectured gamma = k for biplanes with k >= 4", FINDING, 0.0,
                                      f"gamma = {gamma}, k = {p.k}"))

    if g.n <= ENUMERATION_MAX_VERTICES:
        rep_box = {}

        def neatness():
            rep = classify_neatness(d, budget, threads)
            rep_box["rep"] = rep
            entry.neatness = {"count_mds": rep.count_mds, "count_neat": rep.count_neat,
                              "super_neat": rep.is_super_neat}
            detail = f"{rep.count_neat} of {rep.count_mds} minimum dominating sets neat"
            if kind:
                return _verdict(rep.is_super_neat, detail)
            return FINDING, detail

        anchor = "finite planes are super-neat" if kind else "neat / super-neat classification"
        if run.run("super_neat", anchor, neatness) in (PASS, FAIL, FINDING) and "rep" in rep_box:
            rep = rep_box["rep"]
            sufficient = superneat_sufficient(p, gamma)
            run.run("superneat_sufficient", "gamma < (ceil(r/lambda)(k-1) + v)/k implies super-neat",
                    lambda: _verdict(not sufficient or rep.is_super_neat, f"criterion = {sufficient}"))
            run.run("avoiding_blocks_in_mds", "blocks missing pi(S) belong to every dominating S",
                    lambda: _verdict(all(avoiding_blocks_included(d, S) for S in rep.sets),
                                     f"{len(rep.sets)} sets"))

            def epn():
                S = epn_certified_mds(g, rep.sets)
                return PASS, "members: " + " ".join(g.label(u) for u in range(g.n) if S >> u & 1)

            run.run("private_neighbours", "some minimum dominating set has external private neighbours everywhere",
                    epn)

    if is_symmetric(d):
        def dual_check():
            gd = minimum_domination(incidence_graph(dual(d)), budget, threads)
            if not gd.complete:
                raise BudgetExceeded("dual design")
            return _verdict(gd.gamma == gamma, f"gamma(dual) = {gd.gamma}")

        run.run("dual_invariance", "gamma(D) = gamma(dual D)", dual_check)

        if options.get("residuals"):
            transitive = bool(options.get("transitive"))

            def residual_check():
                rc = residual_relation_check(d, transitive, budget, gamma)
                detail = f"gamma(D) = {gamma}, residual gammas = {sorted(set(rc.residual_gammas))}"
                detail += f", equality {'holds' if rc.equality_holds else 'fails'} on all blocks"
                if rc.repeated_blocks:
                    detail += f", repeated blocks in {len(rc.repeated_blocks)} residuals"
                return rc.status, detail

            anchor = ("gamma(Res) = gamma(D) - 1 for block-transitive D" if transitive
                      else "gamma(Res) >= gamma(D) - 1")
            run.run("residual_relation", anchor, residual_check)

            if d.v - d.k + d.b - 1 <= ORACLE_MAX_VERTICES:
                def residual_oracle():
                    bad = []
                    for b0 in range(d.b):
                        rg = incidence_graph(residual(d, b0))
                        if minimum_domination(rg, budget).gamma != exhaustive_gamma_oracle(rg):
                            bad.append(b0)
                    return _verdict(not bad, f"{d.b} residuals, mismatches at {bad}")

                run.run("residual_oracle_equivalence", "branch and bound agrees with exhaustive subset scan",
                        residual_oracle)
    return entry


def load_design_entry(path: Path) -> tuple[Design | None, DesignEntry | None]:
    try:
        return decode(path.read_text(encoding="utf-8"), name=str(path)), None
    except (OSError, DesignError) as exc:
        entry = DesignEntry(str(path), None)
        entry.checks.append(Check("load", "design file parses and validates as a 2-design", ERROR, 0.0, str(exc)))
        return None, entry


def verify_paper(
    max_q: int = 3,
    extra_designs: list[Path] | None = None,
    budget: int | None = None,
    threads: int = 1,
    progress: Callable[[DesignEntry], None] | None = None,
) -> RunReport:
    report = RunReport()
    jobs: list[tuple[Design, dict]] = list(standard_designs(max_q))
    for path in extra_designs or []:
        d, failed = load_design_entry(path)
        if failed is not None:
            report.entries.append(failed)
            if progress:
                progress(failed)
        else:
            jobs.append((d, {"residuals": is_symmetric(d) and d.v <= 31}))
    for d, opts in jobs:
        entry = verify_design(d, opts, budget, threads)
        report.entries.append(entry)
        if progress:
            progress(entry)
    return report
