import math

import numpy as np
import pytest

import rdl


def test_mirror_dual_is_ln2():
    d = rdl.solve_dual(rdl.fixture("mirror"))
    assert abs(d["objective"] - math.log(2)) <= 1e-6
    np.testing.assert_allclose(d["q"], [0.5, 0.5], atol=1e-5)


def test_problem_from_arrays_matches_fixture():
    p = rdl.Problem(np.array([[1.0], [1.0]]), [1, -1], [0.5, 0.5], "exp")
    d = rdl.solve_dual(p)
    np.testing.assert_allclose(d["q"], [1.0, 1.0], atol=1e-5)
    assert d["feas_residual"] <= 1e-8


def test_single_point_is_easy():
    p = rdl.fixture("single")
    assert rdl.difficult_set(p) == []
    assert abs(rdl.solve_dual(p)["objective"]) <= 1e-9


def test_difficult_fixture_line_is_difficult():
    p = rdl.fixture("difficult", "exp")
    assert rdl.difficult_set(p) == [2, 3, 4, 5, 6]
    assert rdl.canonical_difficult_set(p.with_loss("logistic")) == [2, 3, 4, 5, 6]


def test_minimize_and_eta():
    p = rdl.fixture("mixed")
    r = rdl.minimize(p, step_rule="newton", max_iters=200)
    dist = np.abs(rdl.eta_w(p, r["w"]) - rdl.eta_bar(p)) @ p.masses
    assert dist <= 1e-3


def test_zo_oscillation_rows():
    rows = rdl.zo_oscillation("0.5", 4)["rows"]
    assert [r["error_exact"] for r in rows] == pytest.approx([2 / 3, 1 / 3, 2 / 3, 1 / 3], abs=0)
    assert all(r["exact_match"] == 1.0 for r in rows)


def test_bound_audit_holds_on_difficult():
    p = rdl.fixture("difficult")
    w = rdl.minimize(p, max_iters=2000)["w"]
    audits = rdl.bound_audit(p, w)
    assert audits and all(a["holds"] for a in audits)


def test_luxemburg_power():
    f = np.array([1.0, 2.0, 3.0])
    mu = np.array([0.2, 0.3, 0.5])
    assert rdl.luxemburg_norm(f, mu, 2.0) == pytest.approx(math.sqrt(mu @ f**2), rel=1e-9)


def test_errors_are_typed():
    with pytest.raises(rdl.DomainError):
        rdl.Loss("banana")
    with pytest.raises(rdl.DimensionError):
        rdl.Problem(np.zeros((2, 1)), [1])
