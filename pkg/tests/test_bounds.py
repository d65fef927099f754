from fractions import Fraction

import pytest

from dominion.bounds import (
    NOT_APPLICABLE,
    SATISFIED,
    VIOLATED,
    avoiding_blocks_included,
    biplane_line_bounds,
    check_small_neat_closures,
    evaluate_bounds,
    expected_gamma_plane,
    lb_biplane_sum,
    lb_general,
    lb_point_count,
    neat_upper,
    nonsymmetric_bracket,
    nonsymmetric_upper_fraction,
    residual_relation_check,
    superneat_sufficient,
    superneat_threshold,
)
from dominion.designs import DesignError, DesignParams, mask_of
from dominion.incidence import incidence_graph
from dominion.solver import minimum_domination

from conftest import ag, biplane7, fano, paley, pg, sts13, sts15


def P(v, k, lam):
    r = lam * (v - 1) // (k - 1)
    return DesignParams(v, k, lam, v * r // k, r)


def test_lb_general_examples():
    assert lb_general(P(7, 3, 1)) == 4
    assert lb_general(P(13, 4, 1)) == 6
    assert lb_general(P(11, 5, 2)) == 4


def test_lb_general_matches_fraction_form():
    for p in (P(7, 3, 1), P(11, 5, 2), P(7, 4, 2), P(13, 3, 1), P(16, 6, 2), P(9, 6, 5)):
        exact = (2 * p.v - 1 - Fraction(p.k - 1, p.lam)) / p.k
        assert lb_general(p) == -(-exact.numerator // exact.denominator)


@pytest.mark.parametrize("q", range(2, 17))
def test_lb_general_tight_on_plane_parameters(q):
    assert lb_general(P(q * q + q + 1, q + 1, 1)) == 2 * q
    assert lb_general(P(q * q, q, 1)) == 2 * q - 1


def test_lb_point_count():
    assert lb_point_count(P(7, 3, 1), 0) == 3
    assert lb_point_count(P(7, 3, 1), 2) == 4
    for q in range(2, 10):
        assert lb_point_count(P(q * q, q, 1), q - 1) == 2 * q - 1
    with pytest.raises(ValueError):
        lb_point_count(P(7, 3, 1), 8)


def test_nonsymmetric_bracket():
    assert nonsymmetric_bracket(ag(3).params) == (5, 5)
    assert nonsymmetric_bracket(sts13().params) == (5, 13)
    assert nonsymmetric_bracket(sts15().params) == (5, 19)
    for d in (ag(2), ag(3), ag(4), sts13(), sts15()):
        assert nonsymmetric_bracket(d.params)[1] == nonsymmetric_upper_fraction(d.params)
    with pytest.raises(DesignError):
        nonsymmetric_bracket(fano().params)
    with pytest.raises(DesignError):
        nonsymmetric_bracket(paley().params)


def test_neat_upper():
    assert neat_upper(fano(), mask_of([0, 1])) == 4
    for q in (2, 3, 4):
        d = ag(q)
        assert neat_upper(d, d.blocks[0]) == 2 * q - 1
    assert neat_upper(paley(), 0) == 11
    assert neat_upper(fano(), mask_of([0, 1, 2])) is None


def test_biplane_line_bounds_values():
    assert biplane_line_bounds(4, 2) == (6, 3)
    assert biplane_line_bounds(5, 2) == (8, 5)
    assert biplane_line_bounds(5, 5)[0] == 11
    with pytest.raises(ValueError):
        biplane_line_bounds(5, 6)


def test_lb_biplane_sum():
    assert lb_biplane_sum(5) == 4
    assert lb_biplane_sum(9) == 10
    assert lb_biplane_sum(13) == 17
    for k in range(5, 60):
        direct = k - 1 + sum((k - 4) // 2 ** (2 * i - 1) for i in range(1, 12))
        assert lb_biplane_sum(k) == direct
    with pytest.raises(ValueError):
        lb_biplane_sum(4)


def test_superneat_sufficient():
    for q in range(2, 12):
        proj = P(q * q + q + 1, q + 1, 1)
        assert superneat_threshold(proj) == 2 * q + Fraction(1, q + 1)
        assert superneat_sufficient(proj, 2 * q)
        aff = P(q * q, q, 1)
        assert superneat_threshold(aff) == 2 * q - Fraction(1, q)
        assert superneat_sufficient(aff, 2 * q - 1)
    assert not superneat_sufficient(P(7, 3, 1), 5)


def test_expected_gamma_plane():
    assert expected_gamma_plane("projective", 2) == 4
    assert expected_gamma_plane("affine", 4) == 7
    assert expected_gamma_plane("projective", 5) == 10


def test_evaluate_bounds_statuses():
    rep = evaluate_bounds(ag(3), 5)
    assert rep.status["lb_general"] == SATISFIED
    assert rep.status["nonsymmetric_bracket"] == SATISFIED
    assert rep.status["plane_gamma"] == SATISFIED
    assert rep.status["biplane_sum"] == NOT_APPLICABLE
    assert rep.superneat_sufficient
    assert evaluate_bounds(ag(3), 4).status["lb_general"] == VIOLATED
    rep = evaluate_bounds(paley(), 5)
    assert rep.biplane_lb == 4 and rep.status["biplane_sum"] == SATISFIED
    assert rep.to_json() == {"lb_general": 4, "biplane_lb": 4}
    assert evaluate_bounds(sts13()).to_json() == {"lb_general": 8, "bracket": [5, 13]}


@pytest.mark.parametrize("d", [fano(), ag(3), biplane7(), paley(), sts13()], ids=lambda d: d.name)
def test_general_lower_bound_sound(d):
    assert lb_general(d.params) <= minimum_domination(incidence_graph(d)).gamma


def test_small_neat_closures():
    for d in (fano(), biplane7(), paley()):
        res = check_small_neat_closures(d)
        assert res.ok and res.checked > 0


def test_avoiding_blocks_included():
    d = fano()
    g = incidence_graph(d)
    assert avoiding_blocks_included(d, minimum_domination(g).witness)
    assert not avoiding_blocks_included(d, mask_of([0, 1]))


def test_residual_relation_planes():
    rc = residual_relation_check(pg(2), assume_transitive=True)
    assert rc.gamma == 4 and rc.residual_gammas == [3] * 7 and rc.status == "pass"
    rc = residual_relation_check(pg(3), assume_transitive=True)
    assert rc.residual_gammas == [5] * 13 and rc.status == "pass"


def test_residual_relation_paley():
    rc = residual_relation_check(paley(), assume_transitive=True)
    assert len(rc.residual_gammas) == 11 and rc.all_equal
    assert rc.equality_holds and rc.status == "pass"


def test_residual_relation_requires_symmetric():
    with pytest.raises(DesignError):
        residual_relation_check(ag(3), assume_transitive=False)


def test_residual_check_without_transitivity_reports_finding():
    from dominion.bounds import ResidualCheck

    rc = ResidualCheck(gamma=4, residual_gammas=[3, 4], assume_transitive=False, transitive_violations=[1])
    assert rc.status == "finding"
    rc.assume_transitive = True
    assert rc.status == "fail"
    rc.inequality_violations = [0]
    assert rc.status == "fail"
