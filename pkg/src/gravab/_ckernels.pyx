# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical kernels.

Signatures and semantics mirror ``_pykernels`` one to one.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, fabs, fmod, M_PI

from gravab._pykernels import KeplerConvergenceError

cnp.import_array()

cdef double TWO_PI = 2.0 * M_PI
cdef double KEPLER_TOL = 1e-13
cdef int KEPLER_MAX_ITER = 50
cdef double _BIG = 1e200
cdef double _SMALL = 1e-200


cdef inline double _bisect(double m, double e) nogil:
    cdef double lo = 0.0, hi = TWO_PI, mid = 0.0, f
    cdef int i
    for i in range(200):
        mid = 0.5 * (lo + hi)
        f = mid - e * sin(mid) - m
        if fabs(f) <= KEPLER_TOL or hi - lo < 1e-16:
            return mid
        if f > 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


cdef inline int _kepler_one(double m, double e, double *out) nogil:
    cdef double big_e, f
    cdef int i
    if e == 0.0:
        out[0] = m
        return 0
    big_e = M_PI if e >= 0.8 else m
    for i in range(KEPLER_MAX_ITER):
        f = big_e - e * sin(big_e) - m
        if fabs(f) <= KEPLER_TOL:
            out[0] = big_e
            return 0
        big_e = big_e - f / (1.0 - e * cos(big_e))
    f = big_e - e * sin(big_e) - m
    if fabs(f) <= KEPLER_TOL:
        out[0] = big_e
        return 0
    big_e = _bisect(m, e)
    out[0] = big_e
    f = big_e - e * sin(big_e) - m
    if not fabs(f) <= 1e-12:
        return 1
    return 0


def kepler_solve(mean_anomaly, double e):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] m = np.ascontiguousarray(
        mean_anomaly, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty_like(m)
    cdef Py_ssize_t i, n = m.shape[0]
    cdef double val
    for i in range(n):
        if _kepler_one(m[i], e, &val):
            raise KeplerConvergenceError(m[i], e, fabs(val - e * sin(val) - m[i]))
        out[i] = val
    return out.reshape(np.shape(mean_anomaly))


def bessel_jn_orders(int nmax, double x, int start):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(nmax + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] vals
    cdef double two_over_x, j_next, j_cur, j_prev, total, comp, y, t
    cdef int k, i
    if x == 0.0:
        out[0] = 1.0
        return out
    vals = np.zeros(start + 1)
    two_over_x = 2.0 / x
    j_next = 0.0
    j_cur = 1e-30
    vals[start] = j_cur
    k = start
    while k > 0:
        j_prev = k * two_over_x * j_cur - j_next
        k -= 1
        vals[k] = j_prev
        j_next = j_cur
        j_cur = j_prev
        if fabs(j_cur) > _BIG:
            for i in range(k, start + 1):
                vals[i] *= _SMALL
            j_cur *= _SMALL
            j_next *= _SMALL
    # Neumaier-compensated sum of the even orders
    total = 0.0
    comp = 0.0
    i = 2
    while i <= start:
        y = vals[i]
        t = total + y
        if fabs(total) >= fabs(y):
            comp += (total - t) + y
        else:
            comp += (y - t) + total
        total = t
        i += 2
    total = vals[0] + 2.0 * (total + comp)
    for i in range(nmax + 1):
        out[i] = vals[i] / total
    return out


def fft_radix2(x):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] a = np.array(x, dtype=np.complex128).ravel()
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, j, bit, size, half, start, k
    cdef double complex w, u, v, wstep
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] tw
    if n == 0 or (n & (n - 1)) != 0:
        raise ValueError(f"length {n} is not a power of two")
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            a[i], a[j] = a[j], a[i]
    # twiddles computed directly per stage, no recursive multiplication drift
    tw = np.exp(-2j * np.pi * np.arange(max(n // 2, 1)) / n)
    size = 2
    while size <= n:
        half = size // 2
        for start in range(0, n, size):
            for k in range(half):
                w = tw[k * (n // size)]
                u = a[start + k]
                v = a[start + k + half] * w
                a[start + k] = u + v
                a[start + k + half] = u - v
        size *= 2
    return a


def dft_direct(x):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] a = np.asarray(x, dtype=np.complex128).ravel()
    cdef Py_ssize_t n = a.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.zeros(n, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] tw = np.exp(-2j * np.pi * np.arange(n) / n)
    cdef Py_ssize_t k, j
    cdef double complex acc
    for k in range(n):
        acc = 0.0
        for j in range(n):
            acc = acc + a[j] * tw[(k * j) % n]
        out[k] = acc
    return out


def potential_midpoint_sum(double t0, double h, Py_ssize_t n, double mu, double r0,
                           double e, double period, bint exact):
    cdef Py_ssize_t k
    cdef double t, frac, m, big_e, phi, total = 0.0, comp = 0.0, s
    cdef double scale = mu / r0
    for k in range(n):
        t = t0 + (k + 0.5) * h
        frac = fmod(t / period, 1.0)
        if frac < 0.0:
            frac += 1.0
        m = TWO_PI * frac
        if exact:
            if _kepler_one(m, e, &big_e):
                raise KeplerConvergenceError(m, e, fabs(big_e - e * sin(big_e) - m))
            phi = -mu / (r0 * (1.0 - e * cos(big_e)))
        else:
            phi = -scale * (1.0 + e * cos(m))
        s = total + phi
        if fabs(total) >= fabs(phi):
            comp += (total - s) + phi
        else:
            comp += (phi - s) + total
        total = s
    return total + comp
