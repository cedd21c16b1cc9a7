"""Compiled numerical cores for the eigensolvers.

Plain-Python implementations written in loop-explicit, numba-friendly
style; when numba is importable (and PSRM_DISABLE_JIT is not set) they
are jit-compiled at import. The pure-Python path is functionally
identical, just slow for large ensembles.

Status codes returned by the iterative kernels: 0 = converged,
1 = iteration budget exhausted.
"""

import math
import os

import numpy as np

_EPS = float(np.finfo(np.float64).eps)


def _tridiag_ql(d, e, z, accumulate, max_sweeps):
    """Implicit QL with Wilkinson shifts on a symmetric tridiagonal.

    d: diagonal (n,), overwritten with eigenvalues (unsorted).
    e: subdiagonal (n,), e[n-1] is workspace; destroyed.
    z: (n, n) accumulator, rotated in place when accumulate is True.
    max_sweeps: per-eigenvalue sweep cap.
    """
    n = d.shape[0]
    if n == 1:
        return 0
    e[n - 1] = 0.0
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd:
                    break
                m += 1
            if m == l:
                break
            if sweeps >= max_sweeps:
                return 1
            sweeps += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            sgn = r if g >= 0.0 else -r
            g = d[m] - d[l] + e[l] / (g + sgn)
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
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
                if accumulate:
                    for k in range(n):
                        f = z[k, i + 1]
                        z[k, i + 1] = s * z[k, i] + c * f
                        z[k, i] = c * z[k, i] - s * f
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return 0


def _hessenberg(a, q, accumulate):
    """Householder reduction of a to upper Hessenberg form, in place.

    q: (n, n) array; filled with the accumulated orthogonal factor
    (a_in = q @ a_out @ q.T) when accumulate is True.
    """
    n = a.shape[0]
    v = np.empty(n)
    betas = np.empty(n)
    vs = np.zeros((n, n))
    for k in range(n - 2):
        # reflector annihilating a[k+2:, k]
        xnorm2 = 0.0
        for i in range(k + 1, n):
            xnorm2 += a[i, k] * a[i, k]
        xnorm = math.sqrt(xnorm2)
        if xnorm == 0.0:
            betas[k] = 0.0
            continue
        alpha = -xnorm if a[k + 1, k] >= 0.0 else xnorm
        vnorm2 = xnorm2 - a[k + 1, k] * alpha
        v[k + 1] = a[k + 1, k] - alpha
        for i in range(k + 2, n):
            v[i] = a[i, k]
        if vnorm2 <= 0.0:
            betas[k] = 0.0
            continue
        beta = 1.0 / vnorm2
        betas[k] = beta
        for i in range(k + 1, n):
            vs[k, i] = v[i]
        # a <- P a (rows k+1:)
        for j in range(k, n):
            s = 0.0
            for i in range(k + 1, n):
                s += v[i] * a[i, j]
            s *= beta
            for i in range(k + 1, n):
                a[i, j] -= v[i] * s
        # a <- a P (cols k+1:)
        for i in range(n):
            s = 0.0
            for j in range(k + 1, n):
                s += a[i, j] * v[j]
            s *= beta
            for j in range(k + 1, n):
                a[i, j] -= s * v[j]
        for i in range(k + 2, n):
            a[i, k] = 0.0
    if accumulate:
        for i in range(n):
            for j in range(n):
                q[i, j] = 1.0 if i == j else 0.0
        for k in range(n - 3, -1, -1):
            beta = betas[k]
            if beta == 0.0:
                continue
            for j in range(k + 1, n):
                s = 0.0
                for i in range(k + 1, n):
                    s += vs[k, i] * q[i, j]
                s *= beta
                for i in range(k + 1, n):
                    q[i, j] -= vs[k, i] * s
    return 0


def _balance(a, scale):
    """Diagonal similarity scaling equalizing row/column norms (radix 2)."""
    n = a.shape[0]
    radix = 2.0
    rad2 = radix * radix
    for i in range(n):
        scale[i] = 1.0
    done = False
    while not done:
        done = True
        for i in range(n):
            r = 0.0
            c = 0.0
            for j in range(n):
                if j != i:
                    c += abs(a[j, i])
                    r += abs(a[i, j])
            if c == 0.0 or r == 0.0:
                continue
            g = r / radix
            f = 1.0
            s = c + r
            while c < g:
                f *= radix
                c *= rad2
            g = r * radix
            while c > g:
                f /= radix
                c /= rad2
            if (c + r) / f < 0.95 * s:
                done = False
                scale[i] *= f
                ginv = 1.0 / f
                for j in range(n):
                    a[i, j] *= ginv
                for j in range(n):
                    a[j, i] *= f
    return 0


def _francis(h, z, wr, wi, accumulate, max_total_iter):
    """Francis double-shift QR on an upper Hessenberg matrix, in place.

    Drives h to real Schur form. Eigenvalues are stored in (wr, wi):
    wi[j] = 0 marks a real eigenvalue; a complex pair occupies slots
    (j-1, j) with wi[j-1] = +im, wi[j] = -im. When accumulate is True,
    similarity transforms span the full matrix and z picks up the
    orthogonal factor; otherwise updates stay inside the active window.
    """
    n = h.shape[0]
    hnorm = 0.0
    for i in range(n):
        for j in range(max(0, i - 1), n):
            hnorm += abs(h[i, j])
    en = n - 1
    t_shift = 0.0
    its = 0
    total = 0
    while en >= 0:
        # find l: start of the active block [l..en]
        l = en
        while l > 0:
            s = abs(h[l - 1, l - 1]) + abs(h[l, l])
            if s == 0.0:
                s = hnorm
            if abs(h[l, l - 1]) <= _EPS * s:
                h[l, l - 1] = 0.0
                break
            l -= 1
        x = h[en, en]
        if l == en:
            wr[en] = x + t_shift
            wi[en] = 0.0
            h[en, en] = wr[en]
            en -= 1
            its = 0
            continue
        y = h[en - 1, en - 1]
        w = h[en, en - 1] * h[en - 1, en]
        if l == en - 1:
            p = 0.5 * (y - x)
            q = p * p + w
            zz = math.sqrt(abs(q))
            x += t_shift
            h[en, en] = x
            h[en - 1, en - 1] = y + t_shift
            if q >= 0.0:
                # two real roots: rotate to split the 2x2 block
                zz = p + (zz if p >= 0.0 else -zz)
                wr[en - 1] = x + zz
                wr[en] = wr[en - 1]
                if zz != 0.0:
                    wr[en] = x - w / zz
                wi[en - 1] = 0.0
                wi[en] = 0.0
                xx = h[en, en - 1]
                s = abs(xx) + abs(zz)
                p = xx / s
                q = zz / s
                r = math.sqrt(p * p + q * q)
                p /= r
                q /= r
                jlo = l if not accumulate else 0
                for j in range(en - 1, n if accumulate else en + 1):
                    zz = h[en - 1, j]
                    h[en - 1, j] = q * zz + p * h[en, j]
                    h[en, j] = q * h[en, j] - p * zz
                for i in range(jlo, en + 1):
                    zz = h[i, en - 1]
                    h[i, en - 1] = q * zz + p * h[i, en]
                    h[i, en] = q * h[i, en] - p * zz
                if accumulate:
                    for i in range(n):
                        zz = z[i, en - 1]
                        z[i, en - 1] = q * zz + p * z[i, en]
                        z[i, en] = q * z[i, en] - p * zz
                h[en, en - 1] = 0.0
            else:
                wr[en - 1] = x + p
                wr[en] = x + p
                wi[en - 1] = math.sqrt(-q)
                wi[en] = -wi[en - 1]
            en -= 2
            its = 0
            continue
        if total >= max_total_iter:
            return 1
        if its == 10 or its == 20:
            # exceptional shift
            t_shift += x
            for i in range(en + 1):
                h[i, i] -= x
            s = abs(h[en, en - 1]) + abs(h[en - 1, en - 2])
            x = 0.75 * s
            y = x
            w = -0.4375 * s * s
        its += 1
        total += 1
        # look for two consecutive small subdiagonals
        m = en - 2
        while m >= l:
            zz = h[m, m]
            r = x - zz
            s = y - zz
            p = (r * s - w) / h[m + 1, m] + h[m, m + 1]
            q = h[m + 1, m + 1] - zz - r - s
            r = h[m + 2, m + 1]
            s = abs(p) + abs(q) + abs(r)
            p /= s
            q /= s
            r /= s
            if m == l:
                break
            tst = abs(p) * (abs(h[m - 1, m - 1]) + abs(zz) + abs(h[m + 1, m + 1]))
            if abs(h[m, m - 1]) * (abs(q) + abs(r)) <= _EPS * tst:
                break
            m -= 1
        for i in range(m + 2, en + 1):
            h[i, i - 2] = 0.0
        for i in range(m + 3, en + 1):
            h[i, i - 3] = 0.0
        # double QR sweep on rows l..en, bulge chase from m
        for k in range(m, en):
            notlast = k != en - 1
            if k != m:
                p = h[k, k - 1]
                q = h[k + 1, k - 1]
                r = h[k + 2, k - 1] if notlast else 0.0
                x = abs(p) + abs(q) + abs(r)
                if x == 0.0:
                    continue
                p /= x
                q /= x
                r /= x
            s = math.sqrt(p * p + q * q + r * r)
            if p < 0.0:
                s = -s
            if k != m:
                h[k, k - 1] = -s * x
            elif l != m:
                h[k, k - 1] = -h[k, k - 1]
            p += s
            x = p / s
            y = q / s
            zz = r / s
            q /= p
            r /= p
            # row modification
            jmax = n if accumulate else en + 1
            for j in range(k, jmax):
                p = h[k, j] + q * h[k + 1, j]
                if notlast:
                    p += r * h[k + 2, j]
                    h[k + 2, j] -= p * zz
                h[k + 1, j] -= p * y
                h[k, j] -= p * x
            # column modification
            imax = min(en, k + 3) + 1
            imin = l if not accumulate else 0
            for i in range(imin, imax):
                p = x * h[i, k] + y * h[i, k + 1]
                if notlast:
                    p += zz * h[i, k + 2]
                    h[i, k + 2] -= p * r
                h[i, k + 1] -= p * q
                h[i, k] -= p
            if accumulate:
                for i in range(n):
                    p = x * z[i, k] + y * z[i, k + 1]
                    if notlast:
                        p += zz * z[i, k + 2]
                        z[i, k + 2] -= p * r
                    z[i, k + 1] -= p * q
                    z[i, k] -= p
    return 0


_JIT = False
if not os.environ.get("PSRM_DISABLE_JIT"):
    try:
        from numba import njit

        _opts = dict(cache=True, nogil=True)
        _tridiag_ql = njit(**_opts)(_tridiag_ql)
        _hessenberg = njit(**_opts)(_hessenberg)
        _balance = njit(**_opts)(_balance)
        _francis = njit(**_opts)(_francis)
        _JIT = True
    except ImportError:  # pragma: no cover
        pass
