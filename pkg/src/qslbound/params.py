"""Model parameters and the auxiliary time functions of the displaced oscillator.

The environment of the spin is a single boson mode driven by
``beta b^+ b + gamma (b + b^+)`` with ``gamma = eta j (j + 1)``.  Its
propagator factorises into a phase, a displacement ``D(-zeta - i alpha)``
and a free rotation, and every quantity downstream is built from

    alpha(t) = gamma sin(beta t) / beta
    zeta(t)  = gamma (1 - cos(beta t)) / beta
    psi(t)   = -(alpha^2 + zeta^2) / 2
    phase(t) = (gamma / beta)^2 (beta t - sin(beta t)) - alpha zeta
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

from .errors import DegenerateCoupling


class NormalizationMode(enum.Enum):
    """How the environment factor is normalised.

    ``INITIAL_UNIT`` keeps the normalisation fixed at its ``t = 0`` value, so
    weight that leaks out of the retained occupations ``n <= n_max`` shows up
    as a decay of the coherence.  ``TOTAL_TRACE`` renormalises by the retained
    weight at every ``t``, which makes the reduced density matrix trace one.
    """

    INITIAL_UNIT = "initial-unit"
    TOTAL_TRACE = "total-trace"


def _is_half_integer(x: float) -> bool:
    return x >= 0 and abs(2 * x - round(2 * x)) < 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Physical knobs (hbar = 1) plus numerical controls.

    ``fock_dim`` is only used by the brute-force oracle; when left as
    ``None`` a size large enough for the displaced environment wave packet is
    chosen (see :func:`default_fock_dim`).
    """

    omega: float = 1.0
    beta: float = 1.0
    eta: float = 0.1
    j: float = 0.5
    n_max: int = 0
    fock_dim: int | None = None
    n3_cap: int = 200
    n3_tol: float = 1e-14
    quad_tol: float = 1e-8
    quad_budget: int = 100_000
    _resolved_fock: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        if not self.eta >= 0:
            raise ValueError(f"eta must be nonnegative, got {self.eta}")
        if not _is_half_integer(self.j) or self.j == 0:
            raise ValueError(f"j must be a positive half-integer, got {self.j}")
        if int(self.n_max) != self.n_max or self.n_max < 0:
            raise ValueError(f"n_max must be a nonnegative integer, got {self.n_max}")
        if self.n3_cap < 1:
            raise ValueError("n3_cap must be positive")
        fock = default_fock_dim(self) if self.fock_dim is None else int(self.fock_dim)
        if fock <= self.n_max:
            raise ValueError(f"fock_dim ({fock}) must exceed n_max ({self.n_max})")
        object.__setattr__(self, "_resolved_fock", fock)

    @property
    def fock(self) -> int:
        """Oracle Fock-space truncation actually in use."""
        return self._resolved_fock

    @property
    def spin_dim(self) -> int:
        return int(round(2 * self.j + 1))

    @property
    def gamma(self) -> float:
        return gamma(self.j, self.eta)

    def with_(self, **changes) -> "ModelParams":
        return replace(self, **changes)


def gamma(j: float, eta: float) -> float:
    """Effective boson displacement strength ``eta j (j + 1)``."""
    return eta * j * (j + 1)


def default_fock_dim(params: ModelParams) -> int:
    """Fock truncation for the oracle.

    The initial environment amplitude is at most 1 and the displacement
    reaches ``2 gamma / beta``; the truncation covers the mean occupation of
    the farthest excursion plus twelve standard deviations.
    """
    reach = 1.0 + 2.0 * gamma(params.j, params.eta) / params.beta
    need = reach**2 + 12.0 * reach + 20.0
    return int(max(40, 4 * params.n_max, math.ceil(need)))


@dataclass(frozen=True)
class AuxFunctions:
    alpha: float
    zeta: float
    gamma: float
    psi: float
    phase: float = 0.0


@dataclass(frozen=True)
class AuxRates:
    """Time derivatives of :class:`AuxFunctions`."""

    alpha: float
    zeta: float
    psi: float
    phase: float


def aux_at(t: float, params: ModelParams, j: float | None = None, *,
           printed: bool = False, raw: bool = False) -> AuxFunctions:
    """Auxiliary functions at time ``t`` for spin ``j`` (defaults to ``params.j``).

    With ``printed=True`` the variant with ``beta`` and ``gamma`` exchanged in
    ``zeta`` and ``psi`` is returned, ``zeta = beta (1 - cos gamma t) / gamma``.
    That form is kept for comparison only; it does not reproduce the exact
    propagator.  It divides by ``gamma``, so at zero coupling the analytic
    limit (zero) is used unless ``raw`` is set.
    """
    g = gamma(params.j if j is None else j, params.eta)
    b = params.beta
    th = b * t
    alpha = g * math.sin(th) / b
    if printed:
        if g == 0.0:
            if raw:
                raise DegenerateCoupling("zeta divides by gamma = 0")
            zeta = 0.0
        else:
            zeta = b * (1.0 - math.cos(g * t)) / g
        psi = -0.5 * (alpha**2 + zeta**2)
        return AuxFunctions(alpha, zeta, g, psi, 0.0)
    zeta = g * (1.0 - math.cos(th)) / b
    psi = -0.5 * (alpha**2 + zeta**2)
    phase = (g / b) ** 2 * (th - math.sin(th)) - alpha * zeta
    return AuxFunctions(alpha, zeta, g, psi, phase)


def aux_rates(t: float, params: ModelParams, j: float | None = None) -> AuxRates:
    g = gamma(params.j if j is None else j, params.eta)
    b = params.beta
    th = b * t
    alpha = g * math.sin(th) / b
    zeta = g * (1.0 - math.cos(th)) / b
    d_alpha = g * math.cos(th)
    d_zeta = g * math.sin(th)
    d_psi = -(alpha * d_alpha + zeta * d_zeta)
    d_phase = g * g / b * (1.0 - math.cos(th)) - (d_alpha * zeta + alpha * d_zeta)
    return AuxRates(d_alpha, d_zeta, d_psi, d_phase)
