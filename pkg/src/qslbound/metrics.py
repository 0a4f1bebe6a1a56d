"""Fidelity, Bures angle, time-averaged energies and the speed-limit bound."""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import integrate, linalg

from .amplitudes import env_factor
from .density import DerivativeMethod, ReducedDensity, drho_dt, eigenvalues_2x2, norms
from .errors import NotPositive, QslError, attach_time, OutOfDomain, QuadratureFailure, ZeroDenominator
from .params import ModelParams, NormalizationMode, gamma

log = logging.getLogger(__name__)

_FLAG_TOL = 1e-10


class NormKind(enum.IntEnum):
    OP = 0
    TR = 1
    HS = 2


@dataclass(frozen=True)
class QslRecord:
    t: float
    F: float
    B: float
    delta_op: float
    delta_tr: float
    delta_hs: float
    t_LB: float

    @property
    def t_lb_over_t(self) -> float:
        return self.t_LB / self.t if self.t > 0 else 0.0

    def as_dict(self) -> dict:
        return asdict(self)


def fidelity_model(t: float, params: ModelParams,
                   mode: NormalizationMode = NormalizationMode.INITIAL_UNIT) -> float:
    """F(t) = 2 Omega_E(j, j; t) (1 + cos omega t) / (2j + 1)^2 for j = 1/2."""
    if params.j != 0.5:
        raise ValueError("the closed-form fidelity holds for j = 1/2 only")
    om = env_factor(params.j, params.j, t, params, mode).value.real
    return 2.0 * om * (1.0 + math.cos(params.omega * t)) / (2 * params.j + 1) ** 2


def _as_matrix(rho) -> np.ndarray:
    return np.asarray(rho.matrix if isinstance(rho, ReducedDensity) else rho)


def fidelity_uhlmann(rho_initial, rho_t) -> float:
    """Uhlmann fidelity ``(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2``.

    For 2x2 inputs this is ``Tr(rho sigma) + 2 sqrt(det rho det sigma)``.
    """
    r, s = _as_matrix(rho_initial), _as_matrix(rho_t)
    if r.shape == (2, 2):
        for m in (r, s):
            if min(eigenvalues_2x2(m)) < -_FLAG_TOL:
                raise NotPositive("density matrix has a negative eigenvalue")
        det_r = max(np.linalg.det(r).real, 0.0)
        det_s = max(np.linalg.det(s).real, 0.0)
        return float(np.trace(r @ s).real + 2.0 * math.sqrt(det_r * det_s))
    for m in (r, s):
        if np.linalg.eigvalsh(m).min() < -_FLAG_TOL:
            raise NotPositive("density matrix has a negative eigenvalue")
    sr = linalg.sqrtm(r)
    return float(np.trace(linalg.sqrtm(sr @ s @ sr)).real ** 2)


def bures_angle(F: float) -> float:
    """arccos(F), with inputs within 1e-10 of [0, 1] clipped onto it."""
    if F < -_FLAG_TOL or F > 1.0 + _FLAG_TOL:
        raise OutOfDomain(f"fidelity {F} outside [0, 1]")
    return math.acos(min(max(F, 0.0), 1.0))


def norm_vector(t: float, params: ModelParams,
                mode: NormalizationMode = NormalizationMode.INITIAL_UNIT,
                method: DerivativeMethod = DerivativeMethod.ANALYTIC) -> np.ndarray:
    """(op, tr, hs) norms of d rho_S / dt at ``t``."""
    try:
        return np.array(norms(drho_dt(t, params, method, mode)))
    except QslError as exc:
        raise attach_time(exc, t)


def _seed_points(a: float, b: float, params: ModelParams) -> np.ndarray:
    periods = [2 * math.pi / params.beta]
    if params.omega:
        periods.append(2 * math.pi / abs(params.omega))
    g = gamma(params.j, params.eta)
    if g:
        periods.append(2 * math.pi / g)
    quarter = min(periods) / 4
    n = max(1, math.ceil((b - a) / quarter))
    return np.linspace(a, b, n + 1)


def _integrate(a: float, b: float, params: ModelParams, mode, method) -> np.ndarray:
    """Integral of the norm vector over [a, b], absolute error <= quad_tol (b - a)."""
    total = np.zeros(3)
    if b <= a:
        return total
    f = lambda s: norm_vector(s, params, mode, method)  # noqa: E731
    neval = 0
    edges = _seed_points(a, b, params)
    for lo, hi in zip(edges[:-1], edges[1:]):
        res, err, info = integrate.quad_vec(
            f, lo, hi, epsabs=params.quad_tol * (hi - lo), epsrel=0.0,
            norm="max", full_output=True)
        neval += info.neval
        if not info.success or neval > params.quad_budget:
            raise QuadratureFailure(
                f"quadrature on [{lo:.6g}, {hi:.6g}] failed "
                f"(err={err:.2e}, evaluations={neval})")
        total += res
    return total


def deltas(t: float, params: ModelParams,
           mode: NormalizationMode = NormalizationMode.INITIAL_UNIT,
           method: DerivativeMethod = DerivativeMethod.ANALYTIC) -> np.ndarray:
    """(Delta_op, Delta_tr, Delta_hs) = (1/t) int_0^t norms; the t -> 0 limit at t = 0."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t == 0:
        return norm_vector(0.0, params, mode, method)
    return _integrate(0.0, t, params, mode, method) / t


def delta_k(t: float, params: ModelParams, k: NormKind = NormKind.OP,
            mode: NormalizationMode = NormalizationMode.INITIAL_UNIT,
            method: DerivativeMethod = DerivativeMethod.ANALYTIC) -> float:
    return float(deltas(t, params, mode, method)[NormKind(k)])


def bound_from(F: float, dvec) -> float:
    """t_LB = max_k(1/Delta_k) |cos(B) - 1| with B = arccos(F)."""
    dvec = np.asarray(dvec, dtype=float)
    if not np.any(dvec > 0):
        raise ZeroDenominator("all averaged energies vanish")
    recip = np.where(dvec > 0, 1.0 / np.where(dvec > 0, dvec, 1.0), 0.0)
    return float(recip.max() * abs(math.cos(bures_angle(F)) - 1.0))


def _record(t: float, F: float, dvec) -> QslRecord:
    if F > 1.0 + _FLAG_TOL or F < -_FLAG_TOL:
        log.warning("fidelity %r at t=%r lies outside [0, 1]", F, t)
    return QslRecord(t, F, bures_angle(F), float(dvec[0]), float(dvec[1]),
                     float(dvec[2]), bound_from(F, dvec) if t > 0 else 0.0)


def t_lower_bound(t: float, params: ModelParams,
                  mode: NormalizationMode = NormalizationMode.INITIAL_UNIT,
                  method: DerivativeMethod = DerivativeMethod.ANALYTIC) -> float:
    if t == 0:
        return 0.0
    return bound_from(fidelity_model(t, params, mode), deltas(t, params, mode, method))


def qsl_record(t: float, params: ModelParams,
               mode: NormalizationMode = NormalizationMode.INITIAL_UNIT,
               method: DerivativeMethod = DerivativeMethod.ANALYTIC) -> QslRecord:
    return _record(t, fidelity_model(t, params, mode), deltas(t, params, mode, method))


def _cumulative(times: list[float], params: ModelParams, mode, method) -> np.ndarray:
    """Integrals of the norm vector from 0 to each grid time, one adaptive pass.

    The grid (plus quarter-period seeds) is passed as breakpoints and the
    global absolute tolerance is ``quad_tol * t_min``, so every running
    average carries an error of at most ``quad_tol``.
    """
    out = np.zeros((len(times), 3))
    pos = [t for t in times if t > 0]
    if not pos:
        return out
    t_end = pos[-1]
    seeds = _seed_points(0.0, t_end, params)
    brk = np.union1d(np.asarray(pos[:-1]), seeds[1:-1])
    f = lambda s: norm_vector(s, params, mode, method)  # noqa: E731
    res, err, info = integrate.quad_vec(
        f, 0.0, t_end, epsabs=params.quad_tol * pos[0], epsrel=0.0, norm="max",
        points=brk if brk.size else None, full_output=True,
        limit=max(10_000, 4 * brk.size))
    if not info.success or info.neval > params.quad_budget:
        raise QuadratureFailure(
            f"quadrature on [0, {t_end:.6g}] failed (err={err:.2e}, "
            f"evaluations={info.neval})")
    ends = info.intervals[:, 1]
    order = np.argsort(ends)
    ends = ends[order]
    run = np.cumsum(info.integrals[order], axis=0)
    for i, t in enumerate(times):
        if t > 0:
            # every grid time is a breakpoint, so some interval ends exactly there
            k = int(np.searchsorted(ends, t * (1 - 1e-14)))
            out[i] = run[k]
    return out


def qsl_series(times, params: ModelParams,
               mode: NormalizationMode = NormalizationMode.INITIAL_UNIT,
               method: DerivativeMethod = DerivativeMethod.ANALYTIC) -> list[QslRecord]:
    """Records on an ascending grid from a single adaptive integration."""
    times = [float(t) for t in times]
    if any(b <= a for a, b in zip(times[:-1], times[1:])) or (times and times[0] < 0):
        raise ValueError("times must be nonnegative and strictly increasing")
    cum = _cumulative(times, params, mode, method)
    out = []
    for t, acc in zip(times, cum):
        try:
            dvec = acc / t if t > 0 else norm_vector(0.0, params, mode, method)
            out.append(_record(t, fidelity_model(t, params, mode), dvec))
        except QslError as exc:
            raise attach_time(exc, t)
    return out
