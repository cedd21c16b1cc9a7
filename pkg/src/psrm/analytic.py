"""Closed-form reference curves and the 2x2 spacing law.

The 2x2 ensemble weights the three free entries of the constructed
matrix with a Gaussian in its squared Frobenius norm, which makes the
source-matrix entries anisotropic Gaussians: variance 1/lam^2 on the
diagonal entries and 1/(1 + lam^4) off it. Integrating the eigenvalue
angle out of that weight gives a Bessel-type joint density and a
one-parameter spacing law controlled by

    kappa = lam^2 + 1/lam^2   (>= 2, with equality at |lam| = 1)

which also makes the law invariant under lam -> 1/lam, matching the
Monte-Carlo behaviour of the ensemble. At |lam| = 1 the law reduces
exactly to the classic surmise (pi/2) s exp(-pi s^2 / 4).

Special functions are evaluated in house: the modified Bessel function
by power series below |x| = 15 and its asymptotic expansion beyond,
the complete elliptic integral by adaptive Gauss-Legendre quadrature
of the defining integral (parameter convention, E(0) = pi/2, any
m <= 1 including negative).
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

I0_OVERFLOW = 700.0
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


def _i0_series(x):
    # all-positive terms, no cancellation; converges for any x
    t = 0.25 * x * x
    term = 1.0
    total = 1.0
    k = 0
    while term > 1e-18 * total:
        k += 1
        term *= t / (k * k)
        total += term
    return total


def _i0_asymptotic_scaled(ax):
    # e^{-x} I0(x) ~ (2 pi x)^{-1/2} sum_k ((2k-1)!!)^2 / (k! (8x)^k);
    # sum until terms stop decreasing (optimal truncation) or vanish
    term = 1.0
    total = 1.0
    k = 0
    while True:
        k += 1
        new = term * (2 * k - 1.0) ** 2 / (8.0 * k * ax)
        if new >= term:
            break
        term = new
        total += term
        if term < 1e-18 * total:
            break
    return total / math.sqrt(2.0 * math.pi * ax)


def bessel_i0(x):
    """Modified Bessel function of the first kind, order zero.

    Even in x; raises for |x| > 700 where exp overflows double range.
    """
    ax = abs(float(x))
    if ax > I0_OVERFLOW:
        raise ValueError(f"|x| = {ax} exceeds the overflow guard {I0_OVERFLOW}")
    if ax <= 15.0:
        return _i0_series(ax)
    return math.exp(ax) * _i0_asymptotic_scaled(ax)


def bessel_i0_scaled(x):
    """exp(-|x|) I0(x): bounded on the whole real line."""
    ax = abs(float(x))
    if ax <= 15.0:
        return math.exp(-ax) * _i0_series(ax)
    return _i0_asymptotic_scaled(ax)


def _gl_panel(f, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    return half * float(np.sum(_GL_WEIGHTS * f(mid + half * _GL_NODES)))


def _adaptive_gl(f, a, b, tol=1e-14, depth=0):
    whole = _gl_panel(f, a, b)
    mid = 0.5 * (a + b)
    left = _gl_panel(f, a, mid)
    right = _gl_panel(f, mid, b)
    if abs(left + right - whole) <= tol * max(1.0, abs(left + right)) or depth > 30:
        return left + right
    return (_adaptive_gl(f, a, mid, tol, depth + 1)
            + _adaptive_gl(f, mid, b, tol, depth + 1))


def elliptic_e(m):
    """Complete elliptic integral of the second kind, parameter form:
    E(m) = int_0^{pi/2} sqrt(1 - m sin^2 t) dt, for any m <= 1."""
    m = float(m)
    if m > 1.0:
        raise ValueError(f"parameter m must be <= 1, got {m}")
    return _adaptive_gl(lambda t: np.sqrt(1.0 - m * np.sin(t) ** 2),
                        0.0, 0.5 * math.pi)


def wigner_surmise(s):
    """(pi/2) s exp(-pi s^2/4); unit normalization and unit mean."""
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise ValueError("spacing must be nonnegative")
    out = 0.5 * math.pi * s * np.exp(-0.25 * math.pi * s * s)
    return float(out) if out.ndim == 0 else out


def semicircle(eps):
    """(2/pi) sqrt(1 - eps^2) on [-1, 1], zero outside."""
    eps = np.asarray(eps, dtype=float)
    out = np.where(np.abs(eps) <= 1.0,
                   2.0 / math.pi * np.sqrt(np.clip(1.0 - eps * eps, 0.0, None)),
                   0.0)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class TwoByTwoParams:
    """Derived constants of the 2x2 spacing law for one lam."""

    lam: float

    def __post_init__(self):
        if self.lam == 0:
            raise ValueError("lam must be nonzero")

    @property
    def kappa(self):
        l2 = self.lam * self.lam
        return l2 + 1.0 / l2

    @property
    def m(self):
        return (self.kappa - 2.0) / self.kappa

    @property
    def gamma(self):
        return _gamma_cached(round(self.kappa, 15))


@lru_cache(maxsize=256)
def _gamma_cached(kappa):
    return elliptic_e((kappa - 2.0) / kappa)


def eig2x2(a11, a12, a22, lam):
    """Eigenvalues and gap of the 2x2 "q1" matrix with entries from
    (a11, a12, a22): E = lam (a11 + a22 -/+ root)/2, unconditionally
    real. Vectorized over the entries."""
    if lam == 0:
        raise ValueError("lam must be nonzero")
    a11 = np.asarray(a11, dtype=float)
    a12 = np.asarray(a12, dtype=float)
    a22 = np.asarray(a22, dtype=float)
    root = np.sqrt(4.0 * a12 * a12 + (a11 - a22) ** 2)
    t = a11 + a22
    e1 = 0.5 * lam * (t - root)
    e2 = 0.5 * lam * (t + root)
    gap = np.abs(e2 - e1)
    if e1.ndim == 0:
        return float(e1), float(e2), float(gap)
    return e1, e2, gap


@lru_cache(maxsize=256)
def _jpdf_norm(lam):
    """Normalizer of the unnormalized joint density, by 2-d tensor
    Gauss-Legendre over (gap, sum) with Gaussian-tail truncation."""
    kappa = TwoByTwoParams(lam).kappa
    xs, xw = np.polynomial.legendre.leggauss(220)
    smax, tmax = 16.0, 16.0
    s = 0.5 * smax * (xs + 1.0)
    ws = 0.5 * smax * xw
    t = tmax * xs
    wt = tmax * xw
    scaled = np.array([bessel_i0_scaled((kappa - 2.0) * v * v / 16.0) for v in s])
    fs = s * np.exp(-s * s / 4.0) * scaled  # exp terms merged, see jpdf_2x2
    ft = np.exp(-t * t / 4.0)
    total = 0.5 * float(np.sum(ws * fs)) * float(np.sum(wt * ft))
    return 1.0 / total


def jpdf_2x2(e1, e2, lam):
    """Joint eigenvalue density of the 2x2 ensemble, normalized to 1
    over the half-plane e1 <= e2."""
    if e1 > e2:
        raise ValueError("convention requires e1 <= e2")
    kappa = TwoByTwoParams(lam).kappa
    gap = e2 - e1
    tot = e1 + e2
    # exp(-(k+2) gap^2/16) I0((k-2) gap^2/16) computed in scaled form
    x = gap * gap / 16.0
    value = gap * math.exp(-4.0 * x - tot * tot / 4.0) * bessel_i0_scaled((kappa - 2.0) * x)
    return _jpdf_norm(float(lam)) * value


def spacing_2x2(s, lam):
    """Normalized 2x2 spacing density p(s; lam): unit mass, unit mean.

    p = (sqrt(2 kappa)/pi) gamma^2 s exp(-(kappa+2) x) I0((kappa-2) x)
    with x = s^2 gamma^2 / (4 pi) and gamma = E((kappa-2)/kappa).
    Reduces to the classic surmise at |lam| = 1.
    """
    params = TwoByTwoParams(lam)
    kappa, gamma = params.kappa, params.gamma
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise ValueError("spacing must be nonnegative")
    x = s * s * gamma * gamma / (4.0 * math.pi)
    scaled = np.array([bessel_i0_scaled((kappa - 2.0) * v) for v in np.atleast_1d(x)])
    out = (math.sqrt(2.0 * kappa) / math.pi * gamma * gamma
           * s * np.exp(-4.0 * x) * scaled.reshape(x.shape))
    return float(out) if out.ndim == 0 else out


def sample_spacings_2x2(lam, count, rng, convention="weight"):
    """Monte-Carlo oracle for the 2x2 spacing law.

    convention='weight' draws the entries from the Frobenius-norm
    Gaussian weight of the 2x2 ensemble (diagonal entries with sigma
    1/|lam|, off-diagonal 1/sqrt(1+lam^4)); convention='iid' uses the
    n x n element convention instead (diagonal variance doubled,
    lam-independent). Returns spacings normalized to unit mean.
    """
    if convention not in ("weight", "iid"):
        raise ValueError(f"unknown convention {convention!r}")
    z = rng.gaussians(3 * count).reshape(3, count)
    if convention == "weight":
        sd_diag = 1.0 / abs(lam)
        sd_off = 1.0 / math.sqrt(1.0 + lam ** 4)
    else:
        sd_diag = math.sqrt(2.0)
        sd_off = 1.0
    _, _, gap = eig2x2(z[0] * sd_diag, z[1] * sd_off, z[2] * sd_diag, lam)
    return gap / gap.mean()
