import math

import numpy as np
import pytest

import sqwell


def test_ground_state():
    lvl = sqwell.solve_level(0, 1.0, 1.0)
    assert lvl["s"] == pytest.approx(1.6321181284233419676, rel=1e-14)
    assert lvl["branch"] == "POSITIVE_PRODUCT"
    assert abs(lvl["residual"]) <= 1e-12


def test_spectrum_truncates_past_merger():
    sp = sqwell.spectrum(5.0, 5.0, 3)
    assert sp["truncated"]
    assert sp["lost_level"] == 0
    assert sp["levels"] == []


def test_errors_carry_codes():
    with pytest.raises(sqwell.SqwellError) as info:
        sqwell.solve_level(0, 5.0, 5.0)
    assert info.value.code == "ROOT_LOST"
    with pytest.raises(sqwell.SqwellError):
        sqwell.solve_level(0, 1.0, 1.0, tol=0.0)


def test_critical_coupling():
    r = sqwell.critical_coupling(0, 1e-6)
    assert r["c_crit"] == pytest.approx(4.475308602, abs=1e-6)


def test_perturbative():
    exact = sqwell.solve_level(9, 1.0, 1.0)["eps"]
    assert abs(exact - sqwell.perturbative_eps(9, 1.0, 1.0, 2)) / exact <= 1e-4
    assert sqwell.perturbative_eps(0, 1.0, 1.0, 1) == pytest.approx(2 / math.pi**3)


def test_metric_positive_and_hermitian():
    theta = sqwell.theta_metric(1.0, 1.0, 4)
    assert theta.shape == (8, 8)
    assert np.array_equal(theta, theta.conj().T)
    assert np.linalg.eigvalsh(theta).min() > 0
    b = sqwell.biorthogonality_matrix(1.0, 1.0, 3)
    assert np.all(np.real(np.diag(b)) > 0)


def test_oracle_close_to_analytic():
    ev = sqwell.oracle_eigenvalues(1.0, 1.0, 128)
    assert ev.dtype == np.complex128
    assert np.max(np.abs(ev[:8].imag)) < 1e-6
    assert ev[0].real == pytest.approx(2.5699590331232940547, rel=5e-3)


def test_invariant_suite():
    rows = sqwell.invariant_suite(1.0, 1.0, 3, 64)
    assert all(r["passed"] for r in rows)
