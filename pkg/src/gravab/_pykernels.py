"""Pure-Python/numpy implementations of the numerical kernels.

Every function here has a twin with the same signature in ``_ckernels.pyx``.
The compiled version is preferred when it is importable; see ``_kernels``.
"""

import math

import numpy as np

TWO_PI = 2.0 * math.pi

KEPLER_TOL = 1e-13
KEPLER_MAX_ITER = 50
_BIG = 1e200
_SMALL = 1e-200


class KeplerConvergenceError(ArithmeticError):
    def __init__(self, mean_anomaly, eccentricity, residual):
        super().__init__(
            f"Kepler solve did not converge for M={mean_anomaly!r}, e={eccentricity!r} "
            f"(residual {residual:.3e} rad)"
        )
        self.residual = residual


def _bisect_kepler(m, e):
    lo, hi = 0.0, TWO_PI
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f = mid - e * math.sin(mid) - m
        if abs(f) <= KEPLER_TOL or hi - lo < 1e-16:
            return mid
        if f > 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def kepler_solve(mean_anomaly, e):
    """Eccentric anomalies for an array of reduced mean anomalies in [0, 2pi).

    Newton from E0 = M (e < 0.8) or E0 = pi, vectorized across the array;
    elements that fail to converge fall back to bisection one at a time.
    """
    m = np.ascontiguousarray(mean_anomaly, dtype=np.float64)
    if e == 0.0:
        return m.copy()
    big_e = np.full_like(m, math.pi) if e >= 0.8 else m.copy()
    active = np.ones(m.shape, dtype=bool)
    for _ in range(KEPLER_MAX_ITER):
        f = big_e - e * np.sin(big_e) - m
        active = np.abs(f) > KEPLER_TOL
        if not active.any():
            break
        step = f / (1.0 - e * np.cos(big_e))
        big_e = np.where(active, big_e - step, big_e)
    f = big_e - e * np.sin(big_e) - m
    bad = ~(np.abs(f) <= KEPLER_TOL)
    for idx in np.flatnonzero(bad):
        mi = float(m.flat[idx])
        root = _bisect_kepler(mi, e)
        resid = root - e * math.sin(root) - mi
        if not abs(resid) <= 1e-12:
            raise KeplerConvergenceError(mi, e, abs(resid))
        big_e.flat[idx] = root
    return big_e


def bessel_jn_orders(nmax, x, start):
    """J_0(x) .. J_nmax(x) by Miller backward recurrence from order ``start``.

    Normalized with J_0 + 2 * sum(J_2k) = 1.  ``start`` must be even and
    well above both ``nmax`` and ``x``; the caller chooses it.
    """
    out = np.zeros(nmax + 1)
    if x == 0.0:
        out[0] = 1.0
        return out
    two_over_x = 2.0 / x
    j_next = 0.0
    j_cur = 1e-30
    vals = [0.0] * (start + 1)
    vals[start] = j_cur
    k = start
    while k > 0:
        j_prev = k * two_over_x * j_cur - j_next
        k -= 1
        vals[k] = j_prev
        j_next, j_cur = j_cur, j_prev
        if abs(j_cur) > _BIG:
            # rescale everything accumulated so far
            for i in range(k, start + 1):
                vals[i] *= _SMALL
            j_cur *= _SMALL
            j_next *= _SMALL
    total = vals[0] + 2.0 * math.fsum(vals[2 : start + 1 : 2])
    out[:] = vals[: nmax + 1]
    out /= total
    return out


def fft_radix2(x):
    """Unnormalized forward DFT of a power-of-two length array (iterative DIT)."""
    a = np.array(x, dtype=np.complex128)
    n = a.shape[0]
    levels = n.bit_length() - 1
    if 1 << levels != n:
        raise ValueError(f"length {n} is not a power of two")
    if n == 1:
        return a
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(levels):
        rev |= ((idx >> b) & 1) << (levels - 1 - b)
    a = a[rev]
    size = 2
    while size <= n:
        half = size // 2
        tw = np.exp(-2j * np.pi * np.arange(half) / size)
        blocks = a.reshape(n // size, size)
        even = blocks[:, :half].copy()
        odd = blocks[:, half:] * tw
        blocks[:, :half] = even + odd
        blocks[:, half:] = even - odd
        size *= 2
    return a


def dft_direct(x):
    """Unnormalized forward DFT by direct O(N^2) summation."""
    a = np.asarray(x, dtype=np.complex128)
    n = a.shape[0]
    k = np.arange(n)
    # exact integer reduction of k*j before scaling keeps the twiddles accurate
    phase = (np.outer(k, k) % n) * (-2.0 * np.pi / n)
    return np.exp(1j * phase) @ a


def potential_midpoint_sum(t0, h, n, mu, r0, e, period, exact):
    """Sum of the specific potential at n midpoints t0 + (k + 1/2) h.

    The sum is rounded once (``math.fsum``), so it is insensitive to
    summation order.
    """
    chunk = 1 << 16
    parts = []
    for start in range(0, n, chunk):
        k = np.arange(start, min(n, start + chunk), dtype=np.float64)
        frac = np.mod((t0 + (k + 0.5) * h) / period, 1.0)
        mean_anom = TWO_PI * frac
        if exact:
            big_e = kepler_solve(mean_anom, e)
            phi = -mu / (r0 * (1.0 - e * np.cos(big_e)))
        else:
            phi = -(mu / r0) * (1.0 + e * np.cos(mean_anom))
        parts.append(phi)
    return math.fsum(np.concatenate(parts)) if parts else 0.0
