"""Pure numpy implementation of the displacement-product kernel.

Mirrors ``_kernels.pyx``; selected automatically when the compiled extension
is unavailable or ``QSLBOUND_PURE`` is set.

Matrix elements ``<n|D(x)|k>`` are generated column by column in ``k`` from
the closed-form column ``k = 0`` with

    D[n, k+1] = (sqrt(n) D[n-1, k] - conj(x) D[n, k]) / sqrt(k+1),

which follows from ``D b^+ = (b^+ - conj(x)) D``.  The recurrence amplifies
phase errors in the seed column, so column 0 is built by repeated exact
multiplication by ``x``, as in the compiled kernel, not via complex powers.
"""
import math

import numpy as np


class _Columns:
    """Successive columns of <n|D(s u)|k> and d/ds for n < rows; ``|u| = 1``."""

    def __init__(self, s, u, rows):
        self.s = s
        self.w = -np.conj(u)
        self.u = u
        self.sqn = np.sqrt(np.arange(rows, dtype=float))
        x = s * u
        col = np.empty(rows, dtype=complex)
        col[0] = math.exp(-0.5 * s * s)
        for n in range(1, rows):
            col[n] = col[n - 1] * x / self.sqn[n]
        dcol = -s * col
        dcol[1:] += u * self.sqn[1:] * col[:-1]
        self.col, self.dcol, self.k = col, dcol, 0

    def advance(self):
        col, dcol = self.col, self.dcol
        sw = self.s * self.w
        nxt = sw * col
        nxt[1:] += self.sqn[1:] * col[:-1]
        dnxt = sw * dcol + self.w * col
        dnxt[1:] += self.sqn[1:] * dcol[:-1]
        self.k += 1
        r = math.sqrt(self.k)
        self.col, self.dcol = nxt / r, dnxt / r


def _collect(alpha, zeta, rows, cols, cap, tol):
    """Columns of A = D(-i alpha) and Bt[n', k] = <n'|D(zeta)|k> up to the stop index."""
    A = _Columns(float(alpha), -1j, rows)
    B = _Columns(float(zeta), 1.0 + 0j, cols)
    start = max(rows, cols, int(alpha * alpha + zeta * zeta) + 1)
    acols, dacols, bcols, dbcols = [], [], [], []
    small = 0
    for k in range(cap + 1):
        if k:
            A.advance()
            B.advance()
        acols.append(A.col)
        dacols.append(A.dcol)
        bcols.append(B.col)
        dbcols.append(B.dcol)
        if k >= start and np.abs(A.col).max() * np.abs(B.col).max() < tol:
            small += 1
            if small == 3:
                return (np.array(acols).T, np.array(dacols).T,
                        np.array(bcols), np.array(dbcols), k + 1)
        else:
            small = 0
    return None


def displacement_product(alpha, zeta, rows, cols, cap, tol):
    """Sum over the intermediate occupation of <n|D(-i alpha)|k><k|D(-zeta)|n'>.

    Returns ``(M, dM/dalpha, dM/dzeta, n_terms)``; ``n_terms`` is -1 when the
    stopping rule was not met within ``cap + 1`` intermediate states.
    """
    got = _collect(alpha, zeta, rows, cols, cap, tol)
    if got is None:
        return None, None, None, -1
    A, dA, B, dB, stop = got
    # <k|D(-zeta)|n'> = <n'|D(zeta)|k>, real
    B, dB = B.real, dB.real
    return A @ B, dA @ B, A @ dB, stop


def displacement_apply(alpha, zeta, rows, V, cap, tol):
    """``(M @ V, dM/dalpha @ V, dM/dzeta @ V, n_terms)`` without forming ``M``."""
    V = np.asarray(V, dtype=complex)
    got = _collect(alpha, zeta, rows, V.shape[0], cap, tol)
    if got is None:
        return None, None, None, -1
    A, dA, B, dB, stop = got
    BV = B.real @ V
    dBV = dB.real @ V
    return A @ BV, dA @ BV, A @ dBV, stop
