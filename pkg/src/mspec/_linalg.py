"""Compiled kernels for the symmetric eigensolvers (eigenvalues only)."""
import math

import numpy as np
from numba import njit

_EPS = np.finfo(np.float64).eps


@njit(cache=True)
def tql_eigenvalues(d, e, max_sweeps):
    """Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix.

    ``d`` (length n) and ``e`` (length n, ``e[i]`` couples ``i`` and
    ``i + 1``, ``e[n-1]`` ignored) are overwritten; eigenvalues end up
    unsorted in ``d``.  Returns the index of the first eigenvalue that did
    not converge within ``max_sweeps`` sweeps, or -1.
    """
    n = d.shape[0]
    if n == 0:
        return -1
    e[n - 1] = 0.0
    anorm = 0.0
    for i in range(n):
        anorm = max(anorm, abs(d[i]) + abs(e[i]) + (abs(e[i - 1]) if i > 0 else 0.0))
    # absolute floor keeps zero-diagonal matrices (chain kernels) splittable
    floor = _EPS * anorm
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd or abs(e[m]) <= floor:
                    break
                m += 1
            if m == l:
                break
            if sweeps == max_sweeps:
                return l
            sweeps += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return -1


@njit(cache=True)
def householder_tridiagonal(A):
    """Reduce symmetric ``A`` (lower triangle read, overwritten) to tridiagonal form.

    Returns ``(d, e)`` with ``e`` of length ``n - 1``.
    """
    n = A.shape[0]
    d = np.empty(n)
    e = np.zeros(max(n - 1, 0))
    u = np.empty(n)
    p = np.empty(n)
    for k in range(n - 2):
        m = n - k - 1
        # x = A[k+1:, k]
        scale = 0.0
        for i in range(m):
            scale += abs(A[k + 1 + i, k])
        if scale == 0.0:
            d[k] = A[k, k]
            e[k] = 0.0
            continue
        sigma = 0.0
        for i in range(m):
            u[i] = A[k + 1 + i, k] / scale
            sigma += u[i] * u[i]
        alpha = math.sqrt(sigma)
        if u[0] > 0:
            alpha = -alpha
        # reflector H = I - u u^T / h with u = x - alpha e_1, h = |u|^2 / 2
        h = sigma - u[0] * alpha
        u[0] -= alpha
        d[k] = A[k, k]
        e[k] = alpha * scale
        # p = B u / h for the trailing block B (lower triangle, row access)
        for i in range(m):
            p[i] = 0.0
        for i in range(m):
            row = k + 1 + i
            acc = 0.0
            ui = u[i]
            for j in range(i):
                a = A[row, k + 1 + j]
                acc += a * u[j]
                p[j] += a * ui
            p[i] += acc + A[row, row] * ui
        for i in range(m):
            p[i] /= h
        kk = 0.0
        for i in range(m):
            kk += u[i] * p[i]
        kk /= 2.0 * h
        for i in range(m):
            p[i] -= kk * u[i]
        # B <- B - u q^T - q u^T
        for i in range(m):
            row = k + 1 + i
            ui = u[i]
            qi = p[i]
            for j in range(i + 1):
                A[row, k + 1 + j] -= ui * p[j] + qi * u[j]
    if n >= 2:
        d[n - 2] = A[n - 2, n - 2]
        e[n - 2] = A[n - 1, n - 2]
    if n >= 1:
        d[n - 1] = A[n - 1, n - 1]
    return d, e


@njit(cache=True)
def sturm_count(d, e, x):
    """Number of eigenvalues of the tridiagonal ``(d, e)`` strictly below ``x``."""
    n = d.shape[0]
    count = 0
    q = d[0] - x
    tiny = 1e-300
    for i in range(n):
        if i > 0:
            q = d[i] - x - e[i - 1] * e[i - 1] / q
        if q == 0.0:
            q = -tiny
        if q < 0.0:
            count += 1
    return count
