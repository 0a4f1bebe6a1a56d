import math

import pytest

from qslbound import DegenerateCoupling, ModelParams, aux_at, gamma
from qslbound.params import aux_rates, default_fock_dim


def test_defaults():
    p = ModelParams()
    assert (p.omega, p.beta, p.eta, p.j, p.n_max) == (1.0, 1.0, 0.1, 0.5, 0)
    assert p.spin_dim == 2
    assert p.gamma == pytest.approx(0.075)


@pytest.mark.parametrize("kw", [
    dict(beta=0.0), dict(beta=-1.0), dict(eta=-0.1), dict(j=0.3), dict(j=0.0),
    dict(n_max=-1), dict(n_max=1.5), dict(n_max=3, fock_dim=3), dict(n3_cap=0),
])
def test_invalid(kw):
    with pytest.raises(ValueError):
        ModelParams(**kw)


def test_gamma_values():
    assert gamma(0.5, 1.0) == 0.75
    assert gamma(1.0, 2.0) == 4.0
    assert gamma(0.5, 0.0) == 0.0


def test_fock_default_grows_with_coupling():
    assert default_fock_dim(ModelParams(eta=0.1)) == 40
    assert default_fock_dim(ModelParams(eta=5.0)) > 150
    assert ModelParams(eta=5.0, fock_dim=60).fock == 60
    assert ModelParams(n_max=20).fock == 80


def test_aux_at_zero():
    a = aux_at(0.0, ModelParams(eta=1.0))
    assert (a.alpha, a.zeta, a.psi, a.phase) == (0.0, 0.0, 0.0, 0.0)


def test_aux_at_quarter_and_full_period():
    p = ModelParams(eta=1.0)
    a = aux_at(math.pi / 2, p)
    assert a.alpha == pytest.approx(p.gamma)
    assert a.zeta == pytest.approx(p.gamma)
    a = aux_at(2 * math.pi, p)
    assert abs(a.alpha) < 1e-14 and abs(a.zeta) < 1e-14
    # the phase keeps accumulating: g^2 * 2 pi
    assert a.phase == pytest.approx(p.gamma**2 * 2 * math.pi)


def test_aux_psi_is_minus_half_displacement():
    a = aux_at(1.3, ModelParams(eta=5.0))
    assert a.psi == pytest.approx(-0.5 * (a.alpha**2 + a.zeta**2))


def test_aux_printed_variant_swaps_beta_gamma():
    p = ModelParams(eta=1.0, beta=2.0)
    t = 0.7
    a = aux_at(t, p, printed=True)
    assert a.zeta == pytest.approx(p.beta * (1 - math.cos(p.gamma * t)) / p.gamma)
    assert a.alpha == pytest.approx(aux_at(t, p).alpha)


def test_aux_printed_zero_coupling():
    p = ModelParams(eta=0.0)
    assert aux_at(1.0, p, printed=True).zeta == 0.0
    with pytest.raises(DegenerateCoupling):
        aux_at(1.0, p, printed=True, raw=True)
    with pytest.raises(ZeroDivisionError):
        aux_at(1.0, p, printed=True, raw=True)


def test_aux_rates_match_finite_differences():
    p = ModelParams(eta=1.0, beta=1.3)
    t, h = 0.9, 1e-6
    r = aux_rates(t, p)
    lo, hi = aux_at(t - h, p), aux_at(t + h, p)
    assert r.alpha == pytest.approx((hi.alpha - lo.alpha) / (2 * h), rel=1e-8)
    assert r.zeta == pytest.approx((hi.zeta - lo.zeta) / (2 * h), rel=1e-8)
    assert r.psi == pytest.approx((hi.psi - lo.psi) / (2 * h), rel=1e-7)
    assert r.phase == pytest.approx((hi.phase - lo.phase) / (2 * h), rel=1e-7)


def test_with_returns_new_instance():
    p = ModelParams()
    q = p.with_(eta=5.0)
    assert q.eta == 5.0 and p.eta == 0.1 and q.fock > p.fock


def test_printed_zeta_vanishes_after_coupling_period():
    p = ModelParams(eta=1.0)
    assert abs(aux_at(2 * math.pi / p.gamma, p, printed=True).zeta) < 1e-14


def test_periodicity_and_sign_on_grid():
    p = ModelParams(eta=1.0, beta=1.3)
    T_b, T_g = 2 * math.pi / p.beta, 2 * math.pi / p.gamma
    for t in [0.1 * i for i in range(60)]:
        a, b = aux_at(t, p), aux_at(t + T_b, p)
        assert a.alpha == pytest.approx(b.alpha, abs=1e-12)
        assert a.zeta == pytest.approx(b.zeta, abs=1e-12)
        assert a.psi <= 0.0 and 0 < math.exp(a.psi) <= 1
        pa, pb = aux_at(t, p, printed=True), aux_at(t + T_g, p, printed=True)
        assert pa.zeta == pytest.approx(pb.zeta, abs=1e-12)
        assert pa.psi <= 0.0


def test_same_j_gives_identical_functions():
    p = ModelParams(eta=5.0)
    assert aux_at(0.7, p, 0.5) == aux_at(0.7, p)
