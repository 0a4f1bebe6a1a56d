# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled displacement-product kernel; same contract as ``_kernels_py``.

Columns of the two displacement tables are generated one intermediate
occupation at a time, so work stops as soon as the truncation rule fires.
Column k + 1 follows from column k through
D[n, k+1] = (sqrt(n) D[n-1, k] - conj(x) D[n, k]) / sqrt(k+1).
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp

cnp.import_array()


cdef inline void _column(int k, int rows, double s, double complex u, double complex w,
                         double complex* prev, double complex* dprev,
                         double complex* cur, double complex* dcur,
                         double* sq):
    """Column k of <n|D(s u)|k> and d/ds, from column k - 1 (w = -conj(u))."""
    cdef double complex x = s * u
    cdef double complex sw = s * w
    cdef double r
    cdef int n
    if k == 0:
        cur[0] = exp(-0.5 * s * s)
        dcur[0] = -s * cur[0]
        for n in range(1, rows):
            cur[n] = x * cur[n - 1] * (1.0 / sq[n])
            dcur[n] = -s * cur[n] + u * sq[n] * cur[n - 1]
        return
    r = 1.0 / sq[k]
    cur[0] = sw * prev[0] * r
    dcur[0] = (w * prev[0] + sw * dprev[0]) * r
    for n in range(1, rows):
        cur[n] = (sq[n] * prev[n - 1] + sw * prev[n]) * r
        dcur[n] = (sq[n] * dprev[n - 1] + w * prev[n] + sw * dprev[n]) * r


_SQRT = np.sqrt(np.arange(4097, dtype=np.float64))


def _sqrt_table(int size):
    if size <= _SQRT.shape[0]:
        return _SQRT
    return np.sqrt(np.arange(size, dtype=np.float64))


def displacement_product(double alpha, double zeta, int rows, int cols,
                         int cap, double tol_in):
    cdef int K = cap + 1
    cdef int width = (rows if rows > cols else cols) + 1
    sq_arr = _sqrt_table(max(K, width) + 1)
    cdef double[::1] sq = sq_arr
    cdef double complex[:, ::1] a = np.zeros((2, rows), dtype=np.complex128)
    cdef double complex[:, ::1] da = np.zeros((2, rows), dtype=np.complex128)
    cdef double complex[:, ::1] b = np.zeros((2, cols), dtype=np.complex128)
    cdef double complex[:, ::1] db = np.zeros((2, cols), dtype=np.complex128)
    cdef double complex ua = -1j
    cdef double complex ub = 1.0
    cdef double complex w_a = -ua.conjugate()
    cdef double complex w_b = -ub.conjugate()

    M_arr = np.zeros((rows, cols), dtype=np.complex128)
    Ma_arr = np.zeros((rows, cols), dtype=np.complex128)
    Mz_arr = np.zeros((rows, cols), dtype=np.complex128)
    cdef double complex[:, ::1] M = M_arr
    cdef double complex[:, ::1] Ma = Ma_arr
    cdef double complex[:, ::1] Mz = Mz_arr
    cdef double tol = tol_in  # compared against squared magnitudes
    cdef double cutoff = alpha * alpha + zeta * zeta
    cdef int start = rows if rows > cols else cols
    cdef int small = 0
    cdef int k, n, m, c, p
    cdef double amax, bmax, v
    cdef double complex av, dav
    if cutoff + 1 > start:
        start = <int>cutoff + 1
    for k in range(K):
        c = k & 1
        p = 1 - c
        _column(k, rows, alpha, ua, w_a, &a[p, 0], &da[p, 0], &a[c, 0], &da[c, 0], &sq[0])
        _column(k, cols, zeta, ub, w_b, &b[p, 0], &db[p, 0], &b[c, 0], &db[c, 0], &sq[0])
        amax = 0.0
        bmax = 0.0
        for n in range(rows):
            v = a[c, n].real * a[c, n].real + a[c, n].imag * a[c, n].imag
            if v > amax:
                amax = v
        for m in range(cols):
            v = b[c, m].real * b[c, m].real + b[c, m].imag * b[c, m].imag
            if v > bmax:
                bmax = v
        for n in range(rows):
            av = a[c, n]
            dav = da[c, n]
            for m in range(cols):
                M[n, m] = M[n, m] + av * b[c, m]
                Ma[n, m] = Ma[n, m] + dav * b[c, m]
                Mz[n, m] = Mz[n, m] + av * db[c, m]
        if k >= start and amax * bmax < tol * tol:
            small += 1
            if small == 3:
                return M_arr, Ma_arr, Mz_arr, k + 1
        else:
            small = 0
    return None, None, None, -1


def displacement_apply(double alpha, double zeta, int rows, V_in, int cap, double tol_in):
    """``(M @ V, dM/dalpha @ V, dM/dzeta @ V, n_terms)`` without forming ``M``."""
    V_arr = np.ascontiguousarray(V_in, dtype=np.complex128)
    cdef double complex[:, ::1] V = V_arr
    cdef int cols = V.shape[0]
    cdef int nv = V.shape[1]
    cdef int K = cap + 1
    cdef int width = (rows if rows > cols else cols) + 1
    sq_arr = _sqrt_table(max(K, width) + 1)
    cdef double[::1] sq = sq_arr
    cdef double complex[:, ::1] a = np.zeros((2, rows), dtype=np.complex128)
    cdef double complex[:, ::1] da = np.zeros((2, rows), dtype=np.complex128)
    cdef double complex[:, ::1] b = np.zeros((2, cols), dtype=np.complex128)
    cdef double complex[:, ::1] db = np.zeros((2, cols), dtype=np.complex128)
    cdef double complex[::1] bv = np.zeros(nv, dtype=np.complex128)
    cdef double complex[::1] dbv = np.zeros(nv, dtype=np.complex128)
    cdef double complex ua = -1j
    cdef double complex ub = 1.0
    cdef double complex w_a = -ua.conjugate()
    cdef double complex w_b = -ub.conjugate()

    Y_arr = np.zeros((rows, nv), dtype=np.complex128)
    Ya_arr = np.zeros((rows, nv), dtype=np.complex128)
    Yz_arr = np.zeros((rows, nv), dtype=np.complex128)
    cdef double complex[:, ::1] Y = Y_arr
    cdef double complex[:, ::1] Ya = Ya_arr
    cdef double complex[:, ::1] Yz = Yz_arr
    cdef double tol = tol_in  # compared against squared magnitudes
    cdef double cutoff = alpha * alpha + zeta * zeta
    cdef int start = rows if rows > cols else cols
    cdef int small = 0
    cdef int k, n, m, c, p, q
    cdef double amax, bmax, v
    cdef double complex av, dav, s1, s2
    if cutoff + 1 > start:
        start = <int>cutoff + 1
    for k in range(K):
        c = k & 1
        p = 1 - c
        _column(k, rows, alpha, ua, w_a, &a[p, 0], &da[p, 0], &a[c, 0], &da[c, 0], &sq[0])
        _column(k, cols, zeta, ub, w_b, &b[p, 0], &db[p, 0], &b[c, 0], &db[c, 0], &sq[0])
        amax = 0.0
        bmax = 0.0
        for n in range(rows):
            v = a[c, n].real * a[c, n].real + a[c, n].imag * a[c, n].imag
            if v > amax:
                amax = v
        for m in range(cols):
            v = b[c, m].real * b[c, m].real + b[c, m].imag * b[c, m].imag
            if v > bmax:
                bmax = v
        for q in range(nv):
            s1 = 0
            s2 = 0
            for m in range(cols):
                s1 = s1 + b[c, m] * V[m, q]
                s2 = s2 + db[c, m] * V[m, q]
            bv[q] = s1
            dbv[q] = s2
        for n in range(rows):
            av = a[c, n]
            dav = da[c, n]
            for q in range(nv):
                Y[n, q] = Y[n, q] + av * bv[q]
                Ya[n, q] = Ya[n, q] + dav * bv[q]
                Yz[n, q] = Yz[n, q] + av * dbv[q]
        if k >= start and amax * bmax < tol * tol:
            small += 1
            if small == 3:
                return Y_arr, Ya_arr, Yz_arr, k + 1
        else:
            small = 0
    return None, None, None, -1
