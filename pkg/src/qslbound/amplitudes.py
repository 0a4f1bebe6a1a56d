"""Boson amplitudes E_{n,n'}(j, t), the environment factor and its normalisation.

``E_{n,n'}`` is the Fock-basis matrix element <n|exp(-i h t)|n'> of the
single-mode environment Hamiltonian ``h = beta b^+b + gamma(j) (b + b^+)``.
It is evaluated in closed form as a phase times a sum over an intermediate
occupation ``n3`` of two displacement matrix elements,

    E_{n,n'} = e^{i phase} e^{-i beta t n'} sum_{n3} <n|D(-i alpha)|n3> <n3|D(-zeta)|n'>,

each displacement element being a finite sum over ``n2`` (resp. ``n4``).
The ``n3`` sum is truncated once three consecutive terms drop below
``params.n3_tol``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import IndexOutOfRange, NonConvergence
from .params import ModelParams, NormalizationMode, aux_at, aux_rates, gamma


@dataclass(frozen=True)
class BosonAmplitude:
    n: int
    n_prime: int
    value: complex


@dataclass(frozen=True)
class EnvFactor:
    j1: float
    j2: float
    t: float
    value: complex
    normalization: float
    rate: complex = 0.0


@lru_cache(maxsize=64)
def initial_env_weights(n_max: int) -> np.ndarray:
    """Coefficients ``1/sqrt(n!)`` of the (unnormalised) initial boson state."""
    c = np.array([1.0 / math.sqrt(math.factorial(n)) for n in range(n_max + 1)])
    c.setflags(write=False)
    return c


@lru_cache(maxsize=64)
def _occupations(size: int) -> np.ndarray:
    occ = np.arange(size, dtype=float)
    occ.setflags(write=False)
    return occ


@lru_cache(maxsize=64)
def initial_norm(n_max: int) -> float:
    """N(0) = sum_{n <= n_max} 1/n!."""
    c = initial_env_weights(n_max)
    return float(c @ c)


def amplitude_table(t: float, params: ModelParams, j: float | None = None,
                    *, rows: int | None = None, cols: int | None = None,
                    derivative: bool = False):
    """Matrix ``E[n, n']`` for ``n < rows``, ``n' < cols`` (default ``n_max + 1``).

    With ``derivative=True`` returns ``(E, dE/dt)``, the time derivative being
    assembled from the chain rule on alpha, zeta and the phase.
    """
    rows = params.n_max + 1 if rows is None else rows
    cols = params.n_max + 1 if cols is None else cols
    aux = aux_at(t, params, j)
    M, M_a, M_z, used = kernels.displacement_product(
        aux.alpha, aux.zeta, rows, cols, params.n3_cap, params.n3_tol)
    if used < 0:
        raise NonConvergence(
            f"n3 sum not converged within cap {params.n3_cap} at t={t} "
            f"(alpha={aux.alpha:.3g}, zeta={aux.zeta:.3g})")
    th = params.beta * t
    rot = np.exp(-1j * th * np.arange(cols))
    pre = np.exp(1j * aux.phase)
    E = pre * M * rot
    if not derivative:
        return E
    r = aux_rates(t, params, j)
    dE = (1j * r.phase) * E + pre * (M_a * r.alpha + M_z * r.zeta) * rot
    dE += E * (-1j * params.beta * np.arange(cols))
    return E, dE


def _check_index(n: int, params: ModelParams):
    if not 0 <= n <= params.n_max:
        raise IndexOutOfRange(f"occupation index {n} outside 0..{params.n_max}")


def amplitude_E(n: int, n_prime: int, j: float, t: float, params: ModelParams) -> complex:
    _check_index(n, params)
    _check_index(n_prime, params)
    return complex(amplitude_table(t, params, j)[n, n_prime])


def amplitude_E_conj(n_dprime: int, n: int, j: float, t: float, params: ModelParams) -> complex:
    """Conjugate amplitude: equals ``conj(amplitude_E(n_dprime, n, ...))``."""
    _check_index(n_dprime, params)
    _check_index(n, params)
    return complex(np.conj(amplitude_table(t, params, j)[n_dprime, n]))


def amplitude_E_series(n: int, n_prime: int, j: float, t: float,
                       params: ModelParams) -> complex:
    """Reference evaluation of ``E_{n,n'}`` term by term with log-space factorials.

    Slow; used to cross-check the recurrence kernel.
    """
    _check_index(n, params)
    _check_index(n_prime, params)
    aux = aux_at(t, params, j)
    a, z = aux.alpha, aux.zeta
    lf = math.lgamma
    la = math.log(abs(a)) if a else None
    lz = math.log(z) if z else None
    sa = -1j if a >= 0 else 1j
    base = 0.5 * (lf(n + 1) + lf(n_prime + 1)) + aux.psi
    total = 0j
    small = 0
    start = max(n, n_prime) + 1
    for n3 in range(params.n3_cap + 1):
        term = 0j
        for n2 in range(min(n, n3) + 1):
            p = n + n3 - 2 * n2
            if p and la is None:
                continue
            for n4 in range(min(n3, n_prime) + 1):
                q = n3 + n_prime - 2 * n4
                if q and lz is None:
                    continue
                lg = (base + lf(n3 + 1) - lf(n2 + 1) - lf(n4 + 1) - lf(n - n2 + 1)
                      - lf(n3 - n2 + 1) - lf(n3 - n4 + 1) - lf(n_prime - n4 + 1))
                if p:
                    lg += p * la
                if q:
                    lg += q * lz
                term += sa**p * (-1) ** (n3 - n4) * math.exp(lg)
        total += term
        if n3 >= max(start, a * a + z * z) and abs(term) < params.n3_tol:
            small += 1
            if small == 3:
                break
        else:
            small = 0
    else:
        raise NonConvergence(f"n3 series not converged within cap {params.n3_cap}")
    return complex(np.exp(1j * aux.phase) * total * np.exp(-1j * params.beta * t * n_prime))


def _retained(t: float, params: ModelParams, j: float, derivative: bool):
    """Projected environment amplitudes ``A_n = sum_n' E_{n,n'} c_n'`` (and rates).

    Contracts with the initial weights inside the kernel instead of forming
    the full amplitude table.
    """
    c = initial_env_weights(params.n_max)
    cols = c.size
    aux = aux_at(t, params, j)
    occ = _occupations(cols)
    w = np.exp((-1j * params.beta * t) * occ) * c
    if derivative:
        V = np.empty((cols, 2), dtype=complex)
        V[:, 0] = w
        V[:, 1] = occ * w
    else:
        V = w[:, None]
    Y, Y_a, Y_z, used = kernels.displacement_apply(
        aux.alpha, aux.zeta, cols, V, params.n3_cap, params.n3_tol)
    if used < 0:
        raise NonConvergence(
            f"n3 sum not converged within cap {params.n3_cap} at t={t} "
            f"(alpha={aux.alpha:.3g}, zeta={aux.zeta:.3g})")
    pre = np.exp(1j * aux.phase)
    A = pre * Y[:, 0]
    if not derivative:
        return A, None
    r = aux_rates(t, params, j)
    dA = (1j * r.phase) * A + pre * (Y_a[:, 0] * r.alpha + Y_z[:, 0] * r.zeta
                                     - 1j * params.beta * Y[:, 1])
    return A, dA


def normalization_N(t: float, params: ModelParams,
                    mode: NormalizationMode = NormalizationMode.INITIAL_UNIT,
                    *, j: float | None = None) -> float:
    """Normalisation of the environment factor.

    ``INITIAL_UNIT``: the constant ``N(0) = sum 1/n!``.  ``TOTAL_TRACE``: the
    weight retained in occupations ``n <= n_max`` at time ``t``.
    """
    if mode is NormalizationMode.INITIAL_UNIT:
        return initial_norm(params.n_max)
    A, _ = _retained(t, params, params.j if j is None else j, False)
    return float(np.vdot(A, A).real)


def env_factor(j1: float, j2: float, t: float, params: ModelParams,
               mode: NormalizationMode = NormalizationMode.INITIAL_UNIT,
               *, derivative: bool = False) -> EnvFactor:
    """Environment factor Omega_E(j1, j2; t); ``rate`` is filled when ``derivative``."""
    A1, dA1 = _retained(t, params, j1, derivative)
    if gamma(j2, params.eta) == gamma(j1, params.eta):
        A2, dA2 = A1, dA1
    else:
        A2, dA2 = _retained(t, params, j2, derivative)
    S = complex(np.vdot(A2, A1))
    dS = complex(np.vdot(A2, dA1) + np.vdot(dA2, A1)) if derivative else 0j
    if mode is NormalizationMode.INITIAL_UNIT:
        N, dN = initial_norm(params.n_max), 0.0
    else:
        N1 = float(np.vdot(A1, A1).real)
        N2 = float(np.vdot(A2, A2).real)
        N = math.sqrt(N1 * N2)
        if derivative:
            dN1 = 2.0 * float(np.vdot(A1, dA1).real)
            dN2 = 2.0 * float(np.vdot(A2, dA2).real)
            dN = 0.5 * (dN1 * N2 + N1 * dN2) / N
        else:
            dN = 0.0
    value = S / N
    rate = (dS * N - S * dN) / N**2 if derivative else 0j
    return EnvFactor(j1, j2, t, value, N, rate)
