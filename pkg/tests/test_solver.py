import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import Bounds, LinearConstraint, milp

from dominion.designs import dual, is_symmetric, mask_of, residual
from dominion.incidence import IncidenceGraph, external_private_neighbours, incidence_graph, is_dominating
from dominion.solver import (
    GraphTooLarge,
    all_dominating_sets_of_size,
    classify_neatness,
    enumerate_minimum_dominating_sets,
    epn_certified_mds,
    exhaustive_gamma_oracle,
    greedy_dominating_set,
    minimum_domination,
)

from conftest import ag, biplane7, fano, paley, pg, sts13, sts15


def star(n):
    return IncidenceGraph.from_blocks(n, [(1 << n) - 1])


def k2():
    return IncidenceGraph.from_blocks(1, [1])


def milp_gamma(g):
    """Integer program: minimise |S| subject to every closed neighbourhood meeting S."""
    n = g.n
    A = np.array([[(g.closed_nbhd[u] >> w) & 1 for w in range(n)] for u in range(n)])
    res = milp(np.ones(n), constraints=LinearConstraint(A, lb=np.ones(n), ub=np.inf),
               integrality=np.ones(n), bounds=Bounds(0, 1))
    return round(res.fun)


def test_small_graphs():
    assert exhaustive_gamma_oracle(star(5)) == 1
    assert minimum_domination(star(5)).gamma == 1
    assert enumerate_minimum_dominating_sets(k2()) == [0b01, 0b10]
    assert epn_certified_mds(k2()) == 0b01


def test_oracle_values():
    assert exhaustive_gamma_oracle(incidence_graph(ag(2))) == 3
    assert exhaustive_gamma_oracle(incidence_graph(fano())) == 4
    with pytest.raises(GraphTooLarge):
        exhaustive_gamma_oracle(incidence_graph(pg(4)))


@pytest.mark.parametrize("d, gamma", [(pg(2), 4), (ag(3), 5), (biplane7(), 4), (paley(), 5)],
                         ids=lambda x: getattr(x, "name", str(x)))
def test_gamma_with_oracle(d, gamma):
    g = incidence_graph(d)
    res = minimum_domination(g)
    assert res.complete
    assert res.gamma == gamma == exhaustive_gamma_oracle(g)
    assert is_dominating(g, res.witness) and res.witness.bit_count() == gamma
    for u in range(g.n):
        assert is_dominating(g, res.witness | 1 << u)


@pytest.mark.parametrize("d", [pg(4), ag(4), sts13(), sts15()], ids=lambda d: d.name)
def test_gamma_matches_integer_program(d):
    g = incidence_graph(d)
    assert minimum_domination(g).gamma == milp_gamma(g)


@pytest.mark.parametrize("d, size, count", [(fano(), 4, 21), (ag(2), 3, 6), (biplane7(), 4, 98)],
                         ids=lambda x: getattr(x, "name", str(x)))
def test_enumeration_matches_brute_force(d, size, count):
    g = incidence_graph(d)
    brute = all_dominating_sets_of_size(g, size)
    assert len(brute) == count
    found = enumerate_minimum_dominating_sets(g)
    assert found == sorted(brute, key=lambda S: [u for u in range(g.n) if S >> u & 1])
    assert len(set(found)) == len(found)


@pytest.mark.parametrize("d, count", [(pg(3), 52), (ag(3), 12), (paley(), 110)], ids=lambda x: getattr(x, "name", str(x)))
def test_enumeration_counts(d, count):
    # counts frozen from a full C(n, gamma) subset scan
    sets = enumerate_minimum_dominating_sets(incidence_graph(d))
    assert len(sets) == count


def test_deterministic_across_threads():
    for d in (pg(3), sts13(), paley()):
        g = incidence_graph(d)
        one = minimum_domination(g)
        assert minimum_domination(g).witness == one.witness
        two = minimum_domination(g, threads=2)
        assert two.gamma == one.gamma
        assert enumerate_minimum_dominating_sets(g, threads=2) == enumerate_minimum_dominating_sets(g)


def test_budget_flags_incomplete():
    g = incidence_graph(sts15())
    res = minimum_domination(g, budget=3)
    assert not res.complete
    assert res.lower_bound <= 10 <= res.gamma
    assert is_dominating(g, res.witness)


def test_budget_env(monkeypatch):
    monkeypatch.setenv("DOMINION_NODE_BUDGET", "2")
    assert not minimum_domination(incidence_graph(sts13())).complete


def test_greedy_is_dominating():
    for d in (pg(4), sts15()):
        g = incidence_graph(d)
        assert is_dominating(g, greedy_dominating_set(g.closed_nbhd))


def test_classify_neatness():
    for d in (pg(2), ag(3), pg(3), ag(2)):
        rep = classify_neatness(d)
        assert rep.is_super_neat and rep.is_neat_design
        assert rep.count_neat == rep.count_mds >= 1
    rep = classify_neatness(paley())
    assert rep.count_mds >= 1 and rep.gamma == 5
    rep = classify_neatness(biplane7())
    assert rep.is_neat_design and not rep.is_super_neat


@pytest.mark.parametrize("d", [fano(), ag(3), pg(3), paley()], ids=lambda d: d.name)
def test_epn_certified(d):
    g = incidence_graph(d)
    S = epn_certified_mds(g)
    assert S.bit_count() == minimum_domination(g).gamma
    assert all(external_private_neighbours(g, S, u) for u in range(g.n) if S >> u & 1)


@pytest.mark.parametrize("d", [fano(), biplane7(), paley(), pg(3), pg(4)], ids=lambda d: d.name)
def test_dual_invariance(d):
    assert is_symmetric(d)
    assert minimum_domination(incidence_graph(d)).gamma == minimum_domination(incidence_graph(dual(d))).gamma


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 7), st.integers(1, 8), st.data())
def test_random_incidence_structures_match_oracle(v, b, data):
    blocks = [data.draw(st.integers(1, (1 << v) - 1)) for _ in range(b)]
    g = IncidenceGraph.from_blocks(v, blocks)
    res = minimum_domination(g)
    assert res.gamma == exhaustive_gamma_oracle(g)
    sets = enumerate_minimum_dominating_sets(g, res.gamma)
    assert sets == sorted(all_dominating_sets_of_size(g, res.gamma),
                          key=lambda S: [u for u in range(g.n) if S >> u & 1])


def test_residual_graphs_match_oracle():
    for b0 in range(11):
        g = incidence_graph(residual(paley(), b0))
        assert minimum_domination(g).gamma == exhaustive_gamma_oracle(g)


def test_witness_monotone_in_supersets():
    g = incidence_graph(sts13())
    w = minimum_domination(g).witness
    for extra in itertools.combinations(range(g.n), 2):
        assert is_dominating(g, w | mask_of(extra))
