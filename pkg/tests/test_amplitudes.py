import math

import numpy as np
import pytest

from qslbound import (IndexOutOfRange, ModelParams, NonConvergence, NormalizationMode,
                      amplitude_E, amplitude_E_conj, amplitude_E_series, amplitude_table,
                      env_factor, normalization_N)
from qslbound.amplitudes import initial_env_weights, initial_norm
from qslbound.oracle import env_propagator


@pytest.mark.parametrize("t", [0.0, 0.15, 1.0, 2.7, 6.0])
def test_table_matches_exponentiated_single_mode_hamiltonian(eta, t):
    p = ModelParams(eta=eta, n_max=5)
    U = env_propagator(t, p)[:6, :6]
    np.testing.assert_allclose(amplitude_table(t, p), U, atol=1e-9)


def test_table_at_zero_is_identity():
    p = ModelParams(eta=1.0, n_max=4)
    np.testing.assert_allclose(amplitude_table(0.0, p), np.eye(5), atol=1e-15)


def test_zero_coupling_is_free_rotation():
    p = ModelParams(eta=0.0, n_max=3)
    E = amplitude_table(0.8, p)
    np.testing.assert_allclose(E, np.diag(np.exp(-0.8j * np.arange(4))), atol=1e-15)


def test_columns_unitary_when_enough_rows():
    p = ModelParams(eta=1.0, n_max=3)
    E = amplitude_table(1.7, p, rows=60)
    np.testing.assert_allclose(np.sum(np.abs(E) ** 2, axis=0), 1.0, atol=1e-12)


@pytest.mark.parametrize("n,m", [(0, 0), (0, 3), (2, 1), (3, 3), (5, 4)])
def test_series_reference_agrees(n, m):
    p = ModelParams(eta=1.0, n_max=5)
    for t in (0.4, 2.2):
        assert amplitude_E_series(n, m, p.j, t, p) == pytest.approx(
            amplitude_E(n, m, p.j, t, p), abs=1e-12)


def test_conjugate_identity():
    p = ModelParams(eta=5.0, n_max=3)
    for n in range(4):
        for m in range(4):
            assert amplitude_E_conj(n, m, p.j, 0.6, p) == pytest.approx(
                np.conj(amplitude_E(n, m, p.j, 0.6, p)), abs=1e-15)


def test_index_out_of_range():
    p = ModelParams(n_max=2)
    with pytest.raises(IndexOutOfRange):
        amplitude_E(3, 0, p.j, 1.0, p)
    with pytest.raises(IndexError):
        amplitude_E_conj(0, -1, p.j, 1.0, p)


def test_nonconvergence_when_cap_too_small():
    p = ModelParams(eta=5.0, n_max=2, n3_cap=10)
    with pytest.raises(NonConvergence):
        amplitude_table(math.pi, p)
    with pytest.raises(NonConvergence):
        amplitude_E_series(0, 0, p.j, math.pi, p)
    with pytest.raises(NonConvergence):
        env_factor(p.j, p.j, math.pi, p)


def test_derivative_table_matches_difference_quotient():
    p = ModelParams(eta=1.0, n_max=4)
    t, h = 1.1, 1e-5
    _, dE = amplitude_table(t, p, derivative=True)
    fd = (amplitude_table(t + h, p) - amplitude_table(t - h, p)) / (2 * h)
    np.testing.assert_allclose(dE, fd, atol=1e-8)


def test_initial_weights_and_norm():
    c = initial_env_weights(3)
    np.testing.assert_allclose(c, [1, 1, 1 / math.sqrt(2), 1 / math.sqrt(6)])
    assert initial_norm(3) == pytest.approx(1 + 1 + 0.5 + 1 / 6)
    assert initial_norm(0) == 1.0
    assert not c.flags.writeable


def test_env_factor_at_zero(eta):
    p = ModelParams(eta=eta, n_max=5)
    for mode in NormalizationMode:
        assert env_factor(p.j, p.j, 0.0, p, mode).value == pytest.approx(1.0, abs=1e-14)


def test_env_factor_initial_unit_decays_and_bounded(eta):
    p = ModelParams(eta=eta, n_max=5)
    for t in np.linspace(0, 10, 21):
        v = env_factor(p.j, p.j, t, p).value
        assert abs(v.imag) < 1e-14
        assert -1e-14 <= v.real <= 1 + 1e-14


def test_total_trace_mode_is_unit_on_diagonal():
    p = ModelParams(eta=1.0, n_max=5)
    f = env_factor(p.j, p.j, 2.0, p, NormalizationMode.TOTAL_TRACE)
    assert f.value == pytest.approx(1.0, abs=1e-14)
    assert f.normalization == pytest.approx(
        normalization_N(2.0, p, NormalizationMode.TOTAL_TRACE))


def test_normalization_modes():
    p = ModelParams(eta=1.0, n_max=5)
    assert normalization_N(3.0, p) == initial_norm(5)
    retained = normalization_N(3.0, p, NormalizationMode.TOTAL_TRACE)
    assert 0 < retained < initial_norm(5)
    assert normalization_N(0.0, p, NormalizationMode.TOTAL_TRACE) == pytest.approx(initial_norm(5))


def test_env_factor_equal_coupling_for_all_m_of_fixed_j():
    # gamma depends on j only, so the factor between two spin states of the same j
    # equals the diagonal one
    p = ModelParams(eta=1.0, n_max=2, j=1.5)
    a = env_factor(1.5, 1.5, 1.3, p).value
    assert a == pytest.approx(env_factor(p.j, p.j, 1.3, p).value)


def test_env_factor_rate(eta):
    p = ModelParams(eta=eta, n_max=5)
    t, h = 0.9, 1e-6
    for mode in NormalizationMode:
        r = env_factor(p.j, p.j, t, p, mode, derivative=True).rate
        fd = (env_factor(p.j, p.j, t + h, p, mode).value
              - env_factor(p.j, p.j, t - h, p, mode).value) / (2 * h)
        assert r == pytest.approx(fd, abs=1e-7)


def test_env_factor_different_j():
    p = ModelParams(eta=1.0, n_max=3, j=0.5)
    f = env_factor(0.5, 1.5, 0.7, p, derivative=True)
    assert f.value != env_factor(0.5, 0.5, 0.7, p).value
    h = 1e-6
    fd = (env_factor(0.5, 1.5, 0.7 + h, p).value - env_factor(0.5, 1.5, 0.7 - h, p).value) / (2 * h)
    assert f.rate == pytest.approx(fd, abs=1e-7)
