"""Spectral observables: unfolding, spacing samples, densities, KS.

Unfolding maps a sorted spectrum through a smooth fit of its staircase
function so the local mean spacing becomes 1. Two smooth models are
available: a least-squares polynomial in the levels (default degree 7,
fitted per spectrum or to the ensemble-pooled staircase) and the
integrated semicircle density for ensembles known to follow it.
"""

import math
from dataclasses import dataclass

import numpy as np
import numpy.polynomial.polynomial as npoly

NLSD_RANGE = (0.0, 4.0)
DENSITY_RANGE = (-1.2, 1.2)
DEFAULT_BINS = 50


@dataclass(frozen=True)
class UnfoldConfig:
    """method: 'polynomial' or 'semicircle'; degree and trim_fraction
    apply to the polynomial staircase fit (trim is per spectrum edge)."""

    method: str = "polynomial"
    degree: int = 7
    trim_fraction: float = 0.02

    def __post_init__(self):
        if self.method not in ("polynomial", "semicircle"):
            raise ValueError(f"unknown unfolding method {self.method!r}")
        if self.degree < 1:
            raise ValueError("degree must be >= 1")
        if not 0.0 <= self.trim_fraction <= 0.2:
            raise ValueError("trim_fraction must lie in [0, 0.2]")


@dataclass(frozen=True)
class SpacingSample:
    """Pooled unfolded nearest-neighbour spacings, mean exactly 1."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))


@dataclass(frozen=True)
class Histogram:
    """Density-normalized binned data.

    densities integrate to 1 over the binned range; samples outside
    [bin_edges[0], bin_edges[-1]] are only counted in n_out_of_range.
    """

    bin_edges: np.ndarray
    densities: np.ndarray
    n_samples: int
    n_out_of_range: int = 0

    @property
    def centers(self):
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])

    @property
    def widths(self):
        return np.diff(self.bin_edges)


def _trim(levels, trim_fraction):
    m = levels.size
    t = int(math.floor(m * trim_fraction))
    return levels[t: m - t] if t > 0 else levels


def _monotone_cleanup(e):
    """Drop inverted adjacent fitted values; error if they exceed 5%."""
    inversions = int(np.sum(np.diff(e) < 0))
    if inversions > 0.05 * e.size:
        raise ValueError(
            f"staircase fit non-monotone at {inversions}/{e.size} points; "
            "lower the fit degree")
    return np.maximum.accumulate(e)


def _rescale_unit_mean(e):
    """Affine rescale so the mean spacing is exactly 1."""
    if e.size > 1 and e[-1] > e[0]:
        return e * ((e.size - 1) / (e[-1] - e[0]))
    return e


def _fit_staircase(levels, counts, degree):
    """Least-squares polynomial for the staircase, on scaled abscissae.

    Returns a callable mapping raw levels to smoothed counts.
    """
    lo, hi = levels[0], levels[-1]
    if hi <= lo:
        raise ValueError("levels must span a nonzero range")
    scale = 2.0 / (hi - lo)

    def to_x(v):
        return (v - lo) * scale - 1.0

    coef = npoly.polyfit(to_x(levels), counts, degree)
    return lambda v: npoly.polyval(to_x(v), coef)


def semicircle_cdf(eps):
    """Integral of the unit semicircle density from -1 to eps."""
    eps = np.clip(np.asarray(eps, dtype=float), -1.0, 1.0)
    return 0.5 + (eps * np.sqrt(1.0 - eps * eps) + np.arcsin(eps)) / math.pi


def unfold(levels, cfg=UnfoldConfig()):
    """Unfold one sorted spectrum; returns the mapped (trimmed) levels.

    Polynomial method: fit the per-spectrum staircase N(E_i) = i + 1/2
    of degree cfg.degree and evaluate it at the levels. Semicircle
    method: rescale the levels to unit half-width and map through the
    integrated semicircle density. Either way the result is made
    non-decreasing and rescaled to unit mean spacing.
    """
    levels = np.asarray(levels, dtype=float)
    if np.any(np.diff(levels) < 0):
        raise ValueError("levels must be sorted ascending")
    lv = _trim(levels, cfg.trim_fraction)
    if cfg.method == "polynomial":
        if lv.size < cfg.degree + 2:
            raise ValueError(
                f"need at least degree+2={cfg.degree + 2} levels, have {lv.size}")
        fit = _fit_staircase(lv, np.arange(lv.size) + 0.5, cfg.degree)
        e = _monotone_cleanup(fit(lv))
    else:
        if lv.size < 2:
            raise ValueError("need at least 2 levels")
        center = lv.mean()
        radius = 2.0 * lv.std()
        if radius == 0.0:
            raise ValueError("levels have zero variance")
        e = lv.size * semicircle_cdf((lv - center) / radius)
    return _rescale_unit_mean(e)


def unfold_ensemble(spectra, cfg=UnfoldConfig()):
    """Unfold many spectra through one shared staircase fit.

    The smooth level count is fitted to the pooled, per-spectrum-
    normalized staircase, then applied to each spectrum separately.
    Appropriate when individual spectra are too short to fit alone
    (e.g. the real subsets in the mixed regime). Spacings taken within
    each returned spectrum pool to unit mean after spacings().
    """
    spectra = [np.asarray(s, dtype=float) for s in spectra if len(s) >= 2]
    if not spectra:
        raise ValueError("no spectra with at least 2 levels")
    pool = np.sort(np.concatenate(spectra))
    if pool.size < cfg.degree + 2:
        raise ValueError("pooled levels too few for the fit degree")
    counts = (np.arange(pool.size) + 0.5) / len(spectra)
    fit = _fit_staircase(pool, counts, cfg.degree)
    _monotone_cleanup(fit(pool))  # 5% non-monotonicity guard on the pool
    out = [np.maximum.accumulate(fit(s)) for s in spectra]
    # one global rescale keeps relative spacings while pinning the mean
    gaps = np.concatenate([np.diff(e) for e in out if e.size > 1])
    mean = gaps.mean()
    if mean <= 0:
        raise ValueError("degenerate ensemble staircase fit")
    return [e / mean for e in out]


def spacings(unfolded):
    """Nearest-neighbour gaps, pooled over one or many unfolded spectra."""
    if isinstance(unfolded, np.ndarray) and unfolded.ndim == 1:
        unfolded = [unfolded]
    gaps = [np.diff(np.asarray(e, dtype=float)) for e in unfolded]
    values = np.concatenate(gaps) if gaps else np.empty(0)
    return SpacingSample(values)


def density_rescale(all_eigs):
    """Map pooled eigenvalues to the semicircle's natural coordinate.

    eps = (E - mean) / (2 std): a semicircle of radius R has standard
    deviation R/2, so a semicircle-distributed pool lands on [-1, 1].
    Affine-invariant by construction.
    """
    e = np.asarray(all_eigs, dtype=float)
    if e.size == 0:
        raise ValueError("empty eigenvalue pool")
    sd = e.std()
    if sd == 0.0:
        raise ValueError("eigenvalue pool has zero variance")
    return (e - e.mean()) / (2.0 * sd)


def make_histogram(data, bins=DEFAULT_BINS, hist_range=None):
    """Density-normalized histogram; out-of-range samples are counted,
    not binned."""
    data = np.asarray(data, dtype=float)
    if data.size == 0:
        raise ValueError("empty data")
    if bins < 1:
        raise ValueError("bins must be >= 1")
    if hist_range is None:
        hist_range = (float(data.min()), float(data.max()))
    lo, hi = hist_range
    if not lo < hi:
        raise ValueError("histogram range must satisfy lo < hi")
    inside = data[(data >= lo) & (data <= hi)]
    counts, edges = np.histogram(inside, bins=bins, range=(lo, hi))
    widths = np.diff(edges)
    total = counts.sum()
    dens = counts / (total * widths) if total else np.zeros(bins)
    return Histogram(edges, dens, int(data.size), int(data.size - inside.size))


def ks_distance(sample, cdf):
    """sup_x |F_n(x) - cdf(x)| over the sample points, both one-sided gaps."""
    s = np.sort(np.asarray(sample, dtype=float))
    if s.size == 0:
        raise ValueError("empty sample")
    f = np.asarray(cdf(s), dtype=float)
    i = np.arange(1, s.size + 1)
    return float(max(np.max(i / s.size - f), np.max(f - (i - 1) / s.size)))


def ks_two_sample(a, b):
    """Two-sample Kolmogorov-Smirnov distance."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    if a.size == 0 or b.size == 0:
        raise ValueError("empty sample")
    grid = np.concatenate([a, b])
    fa = np.searchsorted(a, grid, side="right") / a.size
    fb = np.searchsorted(b, grid, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def wigner_cdf(s):
    s = np.asarray(s, dtype=float)
    return 1.0 - np.exp(-math.pi * s * s / 4.0)


def poisson_cdf(s):
    s = np.asarray(s, dtype=float)
    return 1.0 - np.exp(-s)
