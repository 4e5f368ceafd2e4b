from __future__ import annotations

import pytest

from skewclifford.gsca import build_presentation
from skewclifford.pointcount import (
    PointPair,
    count_by_factorization,
    count_over,
    cross_validate,
    enumerate_gamma,
    stabilized_count,
)
from skewclifford.quadsys import QuadricSystem

from conftest import ring


def test_quantum_plane_relation_gamma():
    # Gamma of the single relator x1x2 + 2x2x1 over F5
    R = ring(5, 2, {(1, 2): 2})
    z1, z2 = R.gens()
    s = QuadricSystem.from_forms(R, [z1 * z1, z2 * z2])
    g = enumerate_gamma(build_presentation(s), s)
    expected = {PointPair((0, 1), (0, 1))} | {PointPair((1, c), (1, (-2 * c) % 5)) for c in range(5)}
    assert set(g.pairs) == expected and len(g) == 6


def test_fixture_counts(qplane):
    rep, gamma = count_over(qplane, 1)
    assert (rep.f1, rep.f2, rep.N, len(gamma), rep.match) == (2, 2, 6, 6, True)
    forms = {str(s.form): s.delta_mu for s in rep.strata}
    assert forms["z1^2"] and forms["z2^2"]


def test_cross_validate_detects_mutation(qplane):
    rep, gamma = count_over(qplane, 1)
    unique = next(s for s in rep.strata if s.delta_mu)
    rep.strata.remove(unique)
    rep.f1 -= 1
    ok, diag = cross_validate(rep, gamma, qplane)
    assert not ok
    f = unique.factorizations.factorizations[0]
    assert [list(f.left), list(f.right)] in diag["missing_from_factorizations"]


def test_quantum_plane_grows_with_extension(qplane):
    sc = stabilized_count(qplane, 2)
    assert [r.N for r in sc.history] == [6, 26]
    assert not sc.stable


def test_cv53_gamma_contains_q1_pairs(cv53):
    g = enumerate_gamma(build_presentation(cv53), cv53)
    assert ((1, 0, 0, 0), (0, 1, 0, 0)) in g
    assert ((0, 1, 0, 0), (1, 0, 0, 0)) in g
    assert len(g) == 5


def test_cv53_counts(cv53):
    rep = count_by_factorization(cv53)
    assert (rep.f1, rep.f2, rep.N) == (1, 2, 5)
    by_beta = {s.beta: s for s in rep.strata}
    assert str(by_beta[(0, 1, 0, 0)].form) == "z3^2" and by_beta[(0, 1, 0, 0)].delta_mu
    assert str(by_beta[(1, 0, 0, 0)].form) == "z1*z2"
    assert len(by_beta[(0, 1, 0, 4)].factorizations) == 2


def test_vvw_base_field_counts(vvw):
    rep, gamma = count_over(vvw, 1)
    assert (rep.f1, rep.f2, rep.N, len(gamma), rep.match) == (3, 2, 7, 7, True)
    unique = sorted(s.beta for s in rep.strata if s.delta_mu)
    assert unique == [(0, 1, 0, 6), (0, 1, 0, 7), (1, 0, 0, 0)]


def test_budget_error(vvw):
    from skewclifford.errors import BudgetExceeded

    with pytest.raises(BudgetExceeded):
        count_by_factorization(vvw, budget=100)
    with pytest.raises(BudgetExceeded):
        stabilized_count(vvw, 2, budget=1000)


def test_report_json_keys(qplane):
    rep, _ = count_over(qplane, 1)
    js = rep.to_json()
    assert list(js)[:7] == ["f1", "f2", "N", "gamma_count", "match", "extension_degree", "more_than_two"]
    assert js["strata"][0].keys() == {"beta", "form", "factorizations", "delta_mu"}
