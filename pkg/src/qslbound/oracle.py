"""Brute-force ground truth on spin x truncated Fock space.

Basis ordering is spin-major: index ``s * fock + n`` with ``s = 0`` for
``m = +j``.  Propagation uses one spectral decomposition per Hamiltonian.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import linalg

from .amplitudes import initial_env_weights
from .density import m_basis, rho_S
from .errors import DiagonalizationFailure, OracleMismatch
from .params import ModelParams, NormalizationMode


def annihilation(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1)


def env_hamiltonian(params: ModelParams, dim: int | None = None) -> np.ndarray:
    """Single-mode effective Hamiltonian ``beta b^+b + gamma (b + b^+)``."""
    dim = params.fock if dim is None else dim
    b = annihilation(dim)
    return params.beta * np.diag(np.arange(dim, dtype=float)) + params.gamma * (b + b.T)


def env_propagator(t: float, params: ModelParams, dim: int | None = None) -> np.ndarray:
    """exp(-i h t) on the truncated Fock space, by direct exponentiation."""
    return linalg.expm(-1j * t * env_hamiltonian(params, dim))


@dataclass(frozen=True)
class FullHamiltonian:
    params: ModelParams
    H_S: np.ndarray
    H_E: np.ndarray
    H_SE: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        return self.H_S + self.H_E + self.H_SE

    @property
    def dim(self) -> int:
        return self.H_S.shape[0]

    @property
    def fock(self) -> int:
        return self.dim // self.params.spin_dim

    @cached_property
    def spectrum(self):
        try:
            w, V = np.linalg.eigh(self.matrix)
        except np.linalg.LinAlgError as exc:
            raise DiagonalizationFailure(str(exc)) from exc
        return w, V


@dataclass(frozen=True)
class OracleState:
    t: float
    vector: np.ndarray
    fock: int

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))


def build_hamiltonian(params: ModelParams, fock_dim: int | None = None) -> FullHamiltonian:
    """H = omega Jz + beta b^+b + eta J^2 (b + b^+) on spin x Fock(fock_dim)."""
    fock = params.fock if fock_dim is None else fock_dim
    if fock < params.n_max + 10:
        raise ValueError(f"fock_dim {fock} leaves no headroom above n_max={params.n_max}")
    ns = params.spin_dim
    Jz = np.diag(m_basis(params.j))
    J2 = params.j * (params.j + 1) * np.eye(ns)
    b = annihilation(fock)
    one_e = np.eye(fock)
    H_S = params.omega * np.kron(Jz, one_e)
    H_E = params.beta * np.kron(np.eye(ns), np.diag(np.arange(fock, dtype=float)))
    H_SE = params.eta * np.kron(J2, b + b.T)
    return FullHamiltonian(params, H_S.astype(complex), H_E.astype(complex), H_SE.astype(complex))


def initial_state(params: ModelParams, fock_dim: int | None = None) -> OracleState:
    """Equal spin superposition times the boson state sum_{n<=n_max} |n>/sqrt(n!), normalised."""
    fock = params.fock if fock_dim is None else fock_dim
    env = np.zeros(fock)
    env[: params.n_max + 1] = initial_env_weights(params.n_max)
    env /= np.linalg.norm(env)
    spin = np.ones(params.spin_dim) / np.sqrt(params.spin_dim)
    return OracleState(0.0, np.kron(spin, env).astype(complex), fock)


def propagate(state0: OracleState, t: float, H: FullHamiltonian) -> OracleState:
    w, V = H.spectrum
    coeff = V.conj().T @ state0.vector
    return OracleState(state0.t + t, V @ (np.exp(-1j * w * t) * coeff), state0.fock)


def spectral_propagator(t: float, H: FullHamiltonian) -> np.ndarray:
    w, V = H.spectrum
    return (V * np.exp(-1j * w * t)) @ V.conj().T


def partial_trace_env(state: OracleState, n_max: int | None = None) -> np.ndarray:
    """rho[m1, m2] = sum_n <m1 n|psi><psi|m2 n>, optionally only over n <= n_max."""
    psi = state.vector.reshape(-1, state.fock)
    if n_max is not None:
        psi = psi[:, : n_max + 1]
    return psi @ psi.conj().T


def oracle_rho_S(t: float, params: ModelParams,
                 mode: NormalizationMode = NormalizationMode.INITIAL_UNIT,
                 fock_dim: int | None = None,
                 H: FullHamiltonian | None = None) -> np.ndarray:
    """Reduced density matrix from full propagation, aligned with ``mode``.

    The environment is traced over the retained occupations ``n <= n_max``;
    ``TOTAL_TRACE`` additionally rescales to unit trace.
    """
    H = build_hamiltonian(params, fock_dim) if H is None else H
    psi = propagate(initial_state(params, H.fock), t, H)
    rho = partial_trace_env(psi, params.n_max)
    if mode is NormalizationMode.TOTAL_TRACE:
        rho = rho / np.trace(rho).real
    return rho


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def zassenhaus_parts(H: FullHamiltonian):
    """Split into the free part H_S + H_E and the coupling H_SE."""
    return H.H_S + H.H_E, H.H_SE


def zassenhaus_propagator(t: float, H_parts, order: int = 4) -> np.ndarray:
    """Truncated Zassenhaus product for exp(-i t H), order 2 to 4.

    With X = -i t (H_S + H_E) and Y = -i t H_SE,

    e^{X+Y} ~ e^X e^Y e^{-[X,Y]/2} e^{(2[Y,[X,Y]] + [X,[X,Y]])/6}
              e^{-(3[[[X,Y],Y],Y] + 3[[[X,Y],X],Y] + [[[X,Y],X],X])/24}
    """
    if order not in (2, 3, 4):
        raise ValueError("order must be 2, 3 or 4")
    X, Y = (-1j * t * h for h in H_parts)
    out = linalg.expm(X) @ linalg.expm(Y)
    c2 = commutator(X, Y)
    out = out @ linalg.expm(-c2 / 2)
    if order >= 3:
        out = out @ linalg.expm((2 * commutator(Y, c2) + commutator(X, c2)) / 6)
    if order >= 4:
        c2y, c2x = commutator(c2, Y), commutator(c2, X)
        c4 = 3 * commutator(c2y, Y) + 3 * commutator(c2x, Y) + commutator(c2x, X)
        out = out @ linalg.expm(-c4 / 24)
    return out


@dataclass(frozen=True)
class OracleReport:
    max_error: float
    fock_dim: int
    fock_drift: float
    points: int


def oracle_check(params: ModelParams,
                 mode: NormalizationMode = NormalizationMode.INITIAL_UNIT,
                 t_max: float = 5.0, points: int = 25, tol: float = 1e-6,
                 double_fock: bool = True) -> OracleReport:
    """Compare the analytic rho_S with full propagation on ``points`` times in [0, t_max].

    With ``double_fock`` the oracle is re-run at twice the Fock dimension and
    its drift must also stay below ``tol``.  Raises OracleMismatch otherwise.
    """
    times = np.linspace(0.0, t_max, points)
    H = build_hamiltonian(params)
    H2 = build_hamiltonian(params, 2 * H.fock) if double_fock else None
    err = drift = 0.0
    for t in times:
        ref = oracle_rho_S(t, params, mode, H=H)
        err = max(err, float(np.abs(rho_S(t, params, mode).matrix - ref).max()))
        if H2 is not None:
            drift = max(drift, float(np.abs(oracle_rho_S(t, params, mode, H=H2) - ref).max()))
    report = OracleReport(err, H.fock, drift, points)
    if err > tol or drift > tol:
        raise OracleMismatch(
            f"analytic vs oracle rho_S differ by {err:.3e} (fock drift {drift:.3e}, "
            f"tolerance {tol:g}) for eta={params.eta}, n_max={params.n_max}")
    return report
