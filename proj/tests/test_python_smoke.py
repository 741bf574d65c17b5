"""Smoke tests for the Python bindings (PYTHONPATH points at the built module)."""

import json

import numpy as np
import pytest

import qfiber_py


def test_version_string():
    assert isinstance(qfiber_py.__version__, str)
    assert qfiber_py.__version__.count(".") == 2


def test_catalog_shape():
    checks = qfiber_py.list_checks()
    assert len(checks) >= 30
    ids = [c["id"] for c in checks]
    assert ids == sorted(ids)
    assert len(set(ids)) == len(ids)
    assert "ccr.commutator.eq5_27" in ids
    assert "grassmann.car.lemma4_3" in ids
    for c in checks:
        assert c["paper_ref"]
        assert c["summary"]


def test_run_checks_deterministic_subset():
    ids = [
        "clifford.dimension.sec2",
        "geometry.trace_direction.sec4",
        "grassmann.inner.eq4_58",
    ]
    a = qfiber_py.run_checks(ids=ids, seed=5)
    b = qfiber_py.run_checks(ids=ids, seed=5)
    assert a == b
    assert a["summary"]["pass"] is True
    assert a["summary"]["total"] == 3
    assert [c["id"] for c in a["checks"]] == sorted(ids)


def test_run_checks_tolerance_override_fails_inexact_check():
    rep = qfiber_py.run_checks(
        ids=["geometry.trace_direction.sec4"],
        tolerances={"geometry.trace_direction.sec4": 0.0},
    )
    assert rep["summary"]["pass"] is False
    assert rep["checks"][0]["measured"] > 0.0


def test_run_checks_params_are_strict():
    rep = qfiber_py.run_checks(
        ids=["clifford.dimension.sec2"],
        params={"clifford.dimension.sec2": json.dumps({"bogus": 1})},
    )
    assert rep["summary"]["pass"] is False
    assert "bogus" in rep["checks"][0]["error"]


def test_gamma_matrices_anticommute():
    rep = qfiber_py.gamma_matrices(2)
    assert rep["n1"] == 4
    gammas, eta = rep["gamma"], rep["eta"]
    dim = rep["n1"]
    for a, ga in enumerate(gammas):
        for b, gb in enumerate(gammas):
            anti = ga @ gb + gb @ ga
            want = 2.0 * (eta[a] if a == b else 0.0) * np.eye(dim)
            assert np.allclose(anti, want, atol=0.0)
    assert qfiber_py.check_clifford(3) == []


def test_car_check_passes():
    rep = qfiber_py.car_check(sites=2, n2=2, n1=2)
    assert rep["pass"] is True
    assert rep["max_violation"] == 0.0
    assert rep["generators"] == 8


def test_real_imag_identity():
    ok, violation = qfiber_py.real_imag_check(n1=2, n2=1)
    assert ok is True
    assert violation == 0.0


def test_dewitt_signature_and_trace():
    rng = np.random.default_rng(3)
    for n in (2, 3):
        a = rng.normal(size=(n, n))
        g = a @ a.T + n * np.eye(n)
        rep = qfiber_py.dewitt(g)
        assert rep["negative"] == 1
        assert rep["trace_value"] == pytest.approx(n - n * n, rel=1e-12)
        assert qfiber_py.dewitt_trace_value(g) == pytest.approx(n - n * n, rel=1e-12)


def test_conformal_factor_scaling():
    rng = np.random.default_rng(4)
    a = rng.normal(size=(3, 3))
    g = a @ a.T + 3 * np.eye(3)
    rho = np.eye(3)
    c = 1.7
    assert qfiber_py.conformal_factor(c * c * g, rho) == pytest.approx(
        c**3 * qfiber_py.conformal_factor(g, rho), rel=1e-12
    )


def test_green_field_support():
    den = 32
    field = qfiber_py.green_field(
        den + 1, den, 1.0 / den, 1.0 / den, 1.0, "retarded", 0.25, 0.4, 0.4, 0.6
    )
    assert field.shape == (den + 1, den)
    # retarded solutions vanish strictly before the source switches on
    assert np.all(field[: den // 8, :] == 0.0)
    assert np.max(np.abs(field)) > 0.0
