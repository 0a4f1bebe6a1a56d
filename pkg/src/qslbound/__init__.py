"""Quantum speed limit bound for a spin dephased by a single boson mode.

The spin reduced density matrix is evaluated in closed form; a brute-force
propagation on the truncated spin x Fock space serves as an independent check.
"""
from .amplitudes import (BosonAmplitude, EnvFactor, amplitude_E, amplitude_E_conj,
                         amplitude_E_series, amplitude_table, env_factor, normalization_N)
from .density import (DerivativeMatrix, DerivativeMethod, ReducedDensity, drho_dt,
                      eigenvalues_2x2, m_basis, norms, rho_S)
from .errors import (DegenerateCoupling, DiagonalizationFailure, IndexOutOfRange,
                     NonConvergence, NotHermitian, NotPositive, OracleMismatch, OutOfDomain,
                     QslError, QuadratureFailure, StepUnderflow, ZeroDenominator)
from .kernels import BACKEND
from .metrics import (NormKind, QslRecord, bures_angle, delta_k, deltas, fidelity_model,
                      fidelity_uhlmann, qsl_record, qsl_series, t_lower_bound)
from .params import AuxFunctions, ModelParams, NormalizationMode, aux_at, gamma
from .runner import RunConfig, SweepSpec, emit, run_single, run_sweep

__version__ = "0.1.0"

__all__ = [
    "AuxFunctions", "BACKEND", "BosonAmplitude", "DegenerateCoupling", "DerivativeMatrix",
    "DerivativeMethod", "DiagonalizationFailure", "EnvFactor", "IndexOutOfRange",
    "ModelParams", "NonConvergence", "NormKind", "NormalizationMode", "NotHermitian",
    "NotPositive", "OracleMismatch", "OutOfDomain", "QslError", "QslRecord",
    "QuadratureFailure", "ReducedDensity", "RunConfig", "StepUnderflow", "SweepSpec",
    "ZeroDenominator", "amplitude_E", "amplitude_E_conj", "amplitude_E_series",
    "amplitude_table", "aux_at", "bures_angle", "delta_k", "deltas", "drho_dt",
    "eigenvalues_2x2", "emit", "env_factor", "fidelity_model", "fidelity_uhlmann", "gamma",
    "m_basis", "norms", "normalization_N", "qsl_record", "qsl_series", "rho_S",
    "run_single", "run_sweep", "t_lower_bound",
]
