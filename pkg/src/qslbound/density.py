"""Reduced density matrix of the spin, its time derivative and norms."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .amplitudes import env_factor
from .errors import NotHermitian, StepUnderflow
from .params import ModelParams, NormalizationMode


class DerivativeMethod(enum.Enum):
    ANALYTIC = "analytic"
    FINITE_DIFF = "finite-diff"


def m_basis(j: float) -> np.ndarray:
    """Spin projections ordered ``+j, ..., -j``."""
    return j - np.arange(int(round(2 * j + 1)))


@lru_cache(maxsize=16)
def _dm(j: float) -> np.ndarray:
    m = m_basis(j)
    dm = m[:, None] - m[None, :]
    dm.setflags(write=False)
    return dm


@dataclass(frozen=True)
class ReducedDensity:
    t: float
    m_basis: np.ndarray
    matrix: np.ndarray


@dataclass(frozen=True)
class DerivativeMatrix:
    t: float
    matrix: np.ndarray
    eigenvalues: tuple


def _phase_matrix(t: float, params: ModelParams) -> np.ndarray:
    dm = _dm(params.j)
    return np.exp(-1j * params.omega * dm * t) / (2 * params.j + 1), dm


def rho_S(t: float, params: ModelParams,
          mode: NormalizationMode = NormalizationMode.INITIAL_UNIT) -> ReducedDensity:
    """rho[m1, m2] = exp(-i omega (m1 - m2) t) Omega_E(j, j; t) / (2j + 1)."""
    P, _ = _phase_matrix(t, params)
    om = env_factor(params.j, params.j, t, params, mode).value
    return ReducedDensity(t, m_basis(params.j), P * om)


def _analytic_derivative(t, params, mode):
    P, dm = _phase_matrix(t, params)
    ef = env_factor(params.j, params.j, t, params, mode, derivative=True)
    return P * (ef.rate - 1j * params.omega * dm * ef.value)


def _richardson(f, t, h0, tol, one_sided):
    """Richardson-extrapolated first derivative of a matrix-valued ``f``."""
    if one_sided:
        # second-order forward stencil, error series in h^2, h^3, ...
        stencil = lambda h: (-3 * f(t) + 4 * f(t + h) - f(t + 2 * h)) / (2 * h)  # noqa: E731
        powers = lambda k: 2.0 ** (k + 2)  # noqa: E731
    else:
        stencil = lambda h: (f(t + h) - f(t - h)) / (2 * h)  # noqa: E731
        powers = lambda k: 4.0 ** (k + 1)  # noqa: E731
    h = h0
    prev_row = [stencil(h)]
    best, best_err = prev_row[0], math.inf
    for _ in range(12):
        h /= 2
        if h < 1e-10:
            break
        row = [stencil(h)]
        for k, p in enumerate(prev_row):
            fac = powers(k)
            row.append(row[k] + (row[k] - p) / (fac - 1))
        scale = max(np.abs(row[-1]).max(), 1e-300)
        err = np.abs(row[-1] - prev_row[-1]).max() / scale
        if err < best_err:
            best, best_err = row[-1], err
        if err < tol:
            return row[-1]
        prev_row = row
    if best_err < math.sqrt(tol):
        return best
    raise StepUnderflow(f"finite-difference derivative at t={t} stalled at rel. error {best_err:.2e}")


def drho_dt(t: float, params: ModelParams,
            method: DerivativeMethod = DerivativeMethod.ANALYTIC,
            mode: NormalizationMode = NormalizationMode.INITIAL_UNIT) -> DerivativeMatrix:
    if method is DerivativeMethod.ANALYTIC:
        D = _analytic_derivative(t, params, mode)
    else:
        h0 = 0.05
        D = _richardson(lambda s: rho_S(s, params, mode).matrix, t, h0, 1e-10,
                        one_sided=t < 2 * h0)
    if D.shape == (2, 2):
        ev = eigenvalues_2x2(D)
    else:
        ev = tuple(np.sort(np.linalg.eigvalsh(0.5 * (D + D.conj().T)))[::-1])
    return DerivativeMatrix(t, D, ev)


def eigenvalues_2x2(M: np.ndarray, tol: float = 1e-10) -> tuple[float, float]:
    """Closed-form eigenvalues of a 2x2 Hermitian matrix, descending."""
    (p, q), (r, s) = np.asarray(M).tolist()
    p, q, r, s = complex(p), complex(q), complex(r), complex(s)
    scale = max(1.0, abs(p), abs(q), abs(r), abs(s))
    if max(abs(p.imag), abs(s.imag), abs(q - r.conjugate())) > tol * scale:
        raise NotHermitian("matrix is not Hermitian within tolerance")
    half_tr = 0.5 * (p.real + s.real)
    # sqrt((tr/2)^2 - det) written without cancellation
    rad = math.hypot(0.5 * (p.real - s.real), abs(q))
    return half_tr + rad, half_tr - rad


def norms(D: DerivativeMatrix) -> tuple[float, float, float]:
    """(operator, trace, Hilbert-Schmidt) norms from the eigenvalue magnitudes."""
    lam = [abs(float(x)) for x in D.eigenvalues]
    return max(lam), math.fsum(lam), math.sqrt(math.fsum(x * x for x in lam))
