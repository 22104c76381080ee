import math

import numpy as np
import pytest

import oracles
from contactmetric.contact import (
    bracket_normal_component,
    compatibility_check,
    contact_data,
    exterior_derivative,
    is_contact,
    reeb_field,
)
from contactmetric.errors import NotContact, NotPositiveDefinite
from contactmetric.exprfield import eval_jet2
from contactmetric.local import OneFormField, local_geometry
from contactmetric.riemann import MetricField
from contactmetric.rng import SplitMix64

DZ_X_DY = OneFormField.from_strings(["0", "x", "1"])
DZ_MINUS = OneFormField.from_strings(["0", "-x", "1"])
TORUS_FORM = OneFormField.from_strings(["cos(z)", "sin(z)", "0"])
DZ = OneFormField.from_strings(["0", "0", "1"])


def test_exterior_derivative_examples():
    D = exterior_derivative(DZ_X_DY, (0.3, -0.4, 1.2)).m
    expect = np.zeros((3, 3))
    expect[0, 1], expect[1, 0] = 1.0, -1.0
    assert np.array_equal(D, expect)
    z = 0.9
    D = exterior_derivative(TORUS_FORM, (0.1, 0.2, z)).m
    assert D[2, 0] == pytest.approx(-math.sin(z)) and D[2, 1] == pytest.approx(math.cos(z))
    assert D[0, 1] == 0.0
    assert np.array_equal(D, -D.T)
    assert not exterior_derivative(DZ, (1, 2, 3)).m.any()


def test_two_form_evaluation():
    w = exterior_derivative(DZ_X_DY, (0, 0, 0))
    assert w((1, 0, 0), (0, 1, 0)) == 1.0
    assert w((0, 1, 0), (1, 0, 0)) == -1.0


def test_is_contact_examples():
    pts = [(0.1, 0.2, 0.3), (-1.0, 2.0, 0.5)]
    assert all(ok and d == pytest.approx(1.0) for d, ok in is_contact(DZ_X_DY, pts))
    # alpha ^ d(alpha) = -(cos^2 z + sin^2 z) dx^dy^dz: a negative contact form
    assert all(ok and d == pytest.approx(-1.0) for d, ok in is_contact(TORUS_FORM, pts))
    assert not any(ok for _, ok in is_contact(DZ, pts))
    with pytest.raises(ValueError):
        is_contact(DZ, [])


def test_reeb_examples():
    assert np.allclose(reeb_field(DZ_X_DY, (0.7, -0.3, 0.2)), [0, 0, 1])
    z = 1.1
    assert np.allclose(reeb_field(TORUS_FORM, (0.0, 0.0, z)), [math.cos(z), math.sin(z), 0.0])
    with pytest.raises(NotContact):
        reeb_field(DZ, (0, 0, 0))


def test_reeb_against_svd_oracle():
    alpha = OneFormField.from_strings(["y + sin(z)", "exp(x)*z", "1 + x*y"])
    rng = np.random.default_rng(5)
    for _ in range(10):
        p = tuple(rng.uniform(-0.5, 0.5, 3))
        a = np.array([eval_jet2(c, p).v for c in alpha.components])
        D = exterior_derivative(alpha, p).m
        N = reeb_field(alpha, p)
        assert np.allclose(N, oracles.reeb_by_svd(a, D), atol=1e-12)
        assert a @ N == pytest.approx(1.0, abs=1e-12)
        assert np.abs(D.T @ N).max() < 1e-12


def test_flat_torus_compatible(flat_torus):
    pts = flat_torus.sample(SplitMix64(7), 100)
    rep = compatibility_check(flat_torus, pts, SplitMix64(8))
    assert rep.is_compatible and rep.failed_predicates == []
    assert abs(rep.k) == pytest.approx(1.0, abs=1e-9)
    assert rep.k_spread < 1e-8
    for r in rep.points:
        assert r.J_squared_error < 1e-10 and r.dalpha_J_error < 1e-9


def test_counterexample_compatible(counterexample):
    rep = compatibility_check(counterexample, counterexample.sample(SplitMix64(1), 100))
    assert rep.is_compatible
    assert rep.k == pytest.approx(1.0, abs=1e-9)
    assert rep.k_spread < 1e-8


def test_hyperbolic_not_compatible(hyperbolic):
    rep = compatibility_check(hyperbolic, hyperbolic.sample(SplitMix64(2), 20))
    assert not rep.is_compatible
    assert "unit-normal" in rep.failed_predicates
    r = rep.points[0]
    x, _, z = r.point
    assert np.allclose(r.alpha_sharp, [0, z * z * x, z * z])
    assert r.unit_normal_error == pytest.approx(abs(z * math.sqrt(1 + x * x) - 1), abs=1e-12)


def test_printed_sign_of_form_is_not_compatible(counterexample):
    # dz - x dy against the same metric: the metric dual of alpha is not the Reeb field
    pair = counterexample.with_alpha(DZ_MINUS)
    rep = compatibility_check(pair, [(0.2, 0.0, 0.1), (-0.3, 0.1, 0.0)])
    assert "reeb-dual" in rep.failed_predicates


def test_scaling_alpha_breaks_compatibility(flat_torus):
    doubled = OneFormField.from_strings(["2*cos(z)", "2*sin(z)", "0"])
    p = (0.3, 0.1, 0.7)
    assert np.allclose(reeb_field(doubled, p), 0.5 * reeb_field(TORUS_FORM, p))
    rep = compatibility_check(flat_torus.with_alpha(doubled), [p])
    assert not rep.is_compatible
    assert "unit-normal" in rep.failed_predicates


def test_not_contact_reported(euclidean_dz):
    rep = compatibility_check(euclidean_dz, [(0, 0, 0)])
    assert rep.failed_predicates[0] == "contact"
    assert rep.points[0].error.startswith("NotContact")


def test_not_positive_definite_propagates(counterexample):
    bad = counterexample.with_metric(MetricField.from_strings([["1", "2", "0"], [None, "1", "0"], [None, None, "1"]]))
    with pytest.raises(NotPositiveDefinite):
        compatibility_check(bad, [(0, 0, 0)])


def test_contact_data_invariants(counterexample):
    rng = np.random.default_rng(17)
    for _ in range(10):
        p = tuple(rng.uniform(-0.4, 0.4, 3))
        lg = local_geometry(counterexample, p)
        cd = contact_data(lg)
        e2, e3 = cd.xi_frame
        assert np.allclose(cd.J @ cd.J, -np.eye(2), atol=1e-15)
        assert np.allclose(cd.J.T @ cd.J, np.eye(2), atol=1e-15)
        assert lg.inner(cd.reeb, e2) == pytest.approx(0, abs=1e-9)
        assert lg.inner(cd.reeb, e3) == pytest.approx(0, abs=1e-9)
        assert lg.inner(cd.reeb, cd.reeb) == pytest.approx(1, abs=1e-9)
        for _ in range(20):
            a, b = rng.normal(size=2), rng.normal(size=2)
            u, v = a[0] * e2 + a[1] * e3, b[0] * e2 + b[1] * e3
            assert cd.k * lg.inner(u, cd.J_apply(v)) == pytest.approx(float(u @ lg.dalpha @ v), abs=1e-9)


def test_bracket_normal_component(flat_torus, counterexample):
    for p in [(0.3, 0.1, 0.7), (1.0, 2.0, 4.0)]:
        assert abs(bracket_normal_component(flat_torus, p)) == pytest.approx(1.0, abs=1e-6)
    b = bracket_normal_component(counterexample, (0, 0, 0))
    assert abs(b) == pytest.approx(1.0, abs=1e-6)
    assert bracket_normal_component(counterexample, (0, 0, 0), flip_e3=True) == pytest.approx(-b, abs=1e-6)
