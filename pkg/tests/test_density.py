import math

import numpy as np
import pytest

from qslbound import (DerivativeMethod, ModelParams, NormalizationMode, NotHermitian,
                      drho_dt, eigenvalues_2x2, m_basis, norms, rho_S)
from qslbound.amplitudes import env_factor
from qslbound.density import DerivativeMatrix


def test_m_basis_order():
    np.testing.assert_array_equal(m_basis(0.5), [0.5, -0.5])
    np.testing.assert_array_equal(m_basis(1.5), [1.5, 0.5, -0.5, -1.5])


def test_rho_at_zero_is_uniform_coherent_state(eta):
    p = ModelParams(eta=eta, n_max=5)
    r = rho_S(0.0, p)
    np.testing.assert_allclose(r.matrix, np.full((2, 2), 0.5), atol=1e-14)


def test_rho_structure():
    p = ModelParams(eta=1.0, n_max=5, omega=1.7)
    t = 1.3
    r = rho_S(t, p).matrix
    om = env_factor(p.j, p.j, t, p).value
    assert r[0, 0] == pytest.approx(om / 2)
    assert r[1, 1] == pytest.approx(om / 2)
    assert r[0, 1] == pytest.approx(np.exp(-1j * p.omega * t) * om / 2)
    np.testing.assert_allclose(r, r.conj().T, atol=1e-15)


def test_total_trace_mode_has_unit_trace():
    p = ModelParams(eta=1.0, n_max=5)
    r = rho_S(4.0, p, NormalizationMode.TOTAL_TRACE).matrix
    assert np.trace(r).real == pytest.approx(1.0, abs=1e-13)


def test_higher_spin():
    p = ModelParams(eta=0.1, j=1.0, n_max=2)
    r = rho_S(0.5, p).matrix
    assert r.shape == (3, 3)
    np.testing.assert_allclose(r, r.conj().T, atol=1e-15)
    d = drho_dt(0.5, p)
    assert len(d.eigenvalues) == 3


@pytest.mark.parametrize("t", [0.0, 0.03, 0.5, 3.3, 12.0])
def test_analytic_vs_finite_difference(eta, t):
    p = ModelParams(eta=eta, n_max=5)
    a = drho_dt(t, p, DerivativeMethod.ANALYTIC).matrix
    f = drho_dt(t, p, DerivativeMethod.FINITE_DIFF).matrix
    scale = np.abs(a).max()
    assert np.abs(a - f).max() <= 1e-6 * scale


def test_derivative_at_zero_weak():
    # at t = 0 only the spin phase rotates: d rho/dt = -i omega dm / 2
    p = ModelParams(eta=0.1, n_max=0)
    d = drho_dt(0.0, p).matrix
    np.testing.assert_allclose(d, [[0, -0.5j], [0.5j, 0]], atol=1e-14)


def test_eigenvalues_2x2_against_numpy(rng):
    for _ in range(50):
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        h = a + a.conj().T
        want = np.sort(np.linalg.eigvalsh(h))[::-1]
        np.testing.assert_allclose(eigenvalues_2x2(h), want, atol=1e-12)


def test_eigenvalues_2x2_examples():
    assert eigenvalues_2x2(np.diag([1.0, 3.0])) == (3.0, 1.0)
    assert eigenvalues_2x2(np.array([[0, 1], [1, 0]])) == (1.0, -1.0)
    assert eigenvalues_2x2(np.zeros((2, 2))) == (0.0, 0.0)
    l1, l2 = eigenvalues_2x2(np.array([[0, -1j], [1j, 0]]))
    assert (l1, l2) == pytest.approx((1.0, -1.0))


def test_eigenvalues_2x2_tiny_offdiagonal_no_cancellation():
    l1, l2 = eigenvalues_2x2(np.array([[1.0, 1e-9], [1e-9, 1.0]]))
    assert l1 - l2 == pytest.approx(2e-9, rel=1e-12)


def test_eigenvalues_2x2_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        eigenvalues_2x2(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        eigenvalues_2x2(np.array([[1j, 0.0], [0.0, 1.0]]))


def test_norms_from_eigenvalues():
    D = DerivativeMatrix(0.0, None, (3.0, -4.0))
    op, tr, hs = norms(D)
    assert (op, tr, hs) == (4.0, 7.0, 5.0)


def test_norm_ordering_along_trajectory(eta):
    p = ModelParams(eta=eta, n_max=5)
    for t in np.linspace(0, 8, 17):
        op, tr, hs = norms(drho_dt(t, p))
        assert op <= hs + 1e-15 <= tr + 2e-15
        assert hs <= math.sqrt(2) * op + 1e-15
