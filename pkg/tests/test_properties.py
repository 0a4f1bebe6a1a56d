import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from qslbound import (ModelParams, amplitude_E, amplitude_E_conj, bures_angle, drho_dt,
                      eigenvalues_2x2, env_factor, fidelity_model, norms, rho_S)
from qslbound import _kernels_py, kernels

times = st.floats(0.0, 30.0, allow_nan=False)
etas = st.sampled_from([0.0, 0.1, 0.5, 1.0, 2.5, 5.0])
nmaxes = st.integers(0, 10)
reals = st.floats(-10, 10, allow_nan=False)

FAST = settings(max_examples=60, deadline=None)


@FAST
@given(reals, reals, reals, reals)
def test_eigenvalues_2x2_hermitian(a, d, re, im):
    h = np.array([[a, re + 1j * im], [re - 1j * im, d]])
    l1, l2 = eigenvalues_2x2(h)
    want = np.linalg.eigvalsh(h)
    assert l1 >= l2
    assert math.isclose(l1, want[1], abs_tol=1e-12 * max(1, abs(want).max()))
    assert math.isclose(l2, want[0], abs_tol=1e-12 * max(1, abs(want).max()))


@FAST
@given(times, etas, nmaxes)
def test_env_factor_real_and_in_unit_interval(t, eta, n_max):
    v = env_factor(0.5, 0.5, t, ModelParams(eta=eta, n_max=n_max)).value
    assert abs(v.imag) < 1e-12
    assert -1e-12 <= v.real <= 1 + 1e-12


@FAST
@given(times, etas, nmaxes)
def test_rho_hermitian_and_fidelity_in_range(t, eta, n_max):
    p = ModelParams(eta=eta, n_max=n_max)
    r = rho_S(t, p).matrix
    assert np.abs(r - r.conj().T).max() < 1e-12
    F = fidelity_model(t, p)
    assert -1e-10 <= F <= 1 + 1e-10
    assert abs(abs(math.cos(bures_angle(F)) - 1) - abs(F - 1)) < 1e-12


@FAST
@given(times, etas, nmaxes)
def test_norm_chain(t, eta, n_max):
    op, tr, hs = norms(drho_dt(t, ModelParams(eta=eta, n_max=n_max)))
    assert op <= hs * (1 + 1e-12) and hs <= tr * (1 + 1e-12)


@FAST
@given(times, st.sampled_from([0.1, 1.0, 5.0]), st.integers(0, 5), st.integers(0, 5))
def test_conjugation_identity(t, eta, a, b):
    p = ModelParams(eta=eta, n_max=5)
    assert amplitude_E_conj(a, b, 0.5, t, p) == np.conj(amplitude_E(a, b, 0.5, t, p))


@FAST
@given(st.floats(-8, 8), st.floats(0, 8), st.integers(1, 11))
def test_backends_agree(alpha, zeta, rows):
    V = np.ones((rows, 1), dtype=complex)
    a = _kernels_py.displacement_apply(alpha, zeta, rows, V, 200, 1e-14)
    b = kernels.displacement_apply(alpha, zeta, rows, V, 200, 1e-14)
    assert a[3] > 0 and b[3] > 0
    for x, y in zip(a[:3], b[:3]):
        assert np.abs(x - y).max() < 1e-11
