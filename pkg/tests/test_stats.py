import numpy as np
import pytest

from psrm.ensemble import ElementPdf, make_rng, sample_symmetric
from psrm.families import family_spec, fastpath_spectrum
from psrm.stats import (Histogram, UnfoldConfig, density_rescale, ks_distance,
                        ks_two_sample, make_histogram, poisson_cdf,
                        semicircle_cdf, spacings, unfold, unfold_ensemble,
                        wigner_cdf)


def semicircle_quantiles(n):
    """Exact semicircle quantile levels via bisection of the CDF."""
    ps = (np.arange(n) + 0.5) / n
    lo = np.full(n, -1.0)
    hi = np.full(n, 1.0)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        below = semicircle_cdf(mid) < ps
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


class TestUnfold:
    def test_uniform_grid_spacings_near_one(self):
        e = unfold(np.linspace(0.0, 99.0, 100))
        gaps = np.diff(e)
        assert np.abs(gaps - 1.0).max() < 1e-3
        assert abs(gaps.mean() - 1.0) < 1e-6

    def test_mean_spacing_exactly_one(self, rng):
        levels = np.sort(rng.normal(size=300))
        gaps = np.diff(unfold(levels))
        assert abs(gaps.mean() - 1.0) < 1e-6

    def test_idempotence_on_unfolded(self):
        once = unfold(np.linspace(-3.0, 3.0, 200))
        twice = unfold(once)
        assert np.abs(np.diff(twice) - 1.0).max() < 1e-3

    def test_semicircle_method_on_exact_quantiles(self):
        lv = semicircle_quantiles(2000)
        e = unfold(lv, UnfoldConfig(method="semicircle", trim_fraction=0.0))
        gaps = np.diff(e)
        assert np.abs(gaps - 1.0).max() < 0.02
        assert abs(gaps.mean() - 1.0) < 1e-9

    def test_too_few_levels(self):
        with pytest.raises(ValueError):
            unfold(np.arange(5.0), UnfoldConfig(degree=7))

    def test_unsorted_rejected(self):
        with pytest.raises(ValueError):
            unfold(np.array([0.0, 2.0, 1.0] + list(range(3, 12))))

    def test_nonmonotone_fit_rejected(self):
        rng = np.random.default_rng(3)
        a = np.sort(rng.normal(size=9))
        lv = np.sort(np.concatenate([a, a[-1] + 1e4 + np.sort(rng.normal(size=3))]))
        with pytest.raises(ValueError, match="non-monotone"):
            unfold(lv, UnfoldConfig(degree=7, trim_fraction=0.0))

    def test_trim_drops_edges(self):
        levels = np.linspace(0.0, 1.0, 100)
        e = unfold(levels, UnfoldConfig(degree=3, trim_fraction=0.05))
        assert e.size == 90

    def test_config_validation(self):
        with pytest.raises(ValueError):
            UnfoldConfig(method="spline")
        with pytest.raises(ValueError):
            UnfoldConfig(trim_fraction=0.3)
        with pytest.raises(ValueError):
            UnfoldConfig(degree=0)


class TestUnfoldEnsemble:
    def test_shared_map_mean_one(self, rng):
        spectra = [np.sort(rng.normal(size=rng.integers(5, 15))) for _ in range(80)]
        unfolded = unfold_ensemble(spectra)
        sample = spacings(unfolded)
        assert abs(sample.values.mean() - 1.0) < 1e-9

    def test_matches_per_spectrum_on_long_spectra(self, rng):
        # for long i.i.d.-shaped spectra both routes give similar NLSDs
        base = [np.sort(rng.normal(size=400)) for _ in range(20)]
        per = spacings([unfold(s) for s in base]).values
        ens = spacings(unfold_ensemble(base)).values
        assert ks_two_sample(per, ens) < 0.05

    def test_empty_input_rejected(self):
        with pytest.raises(ValueError):
            unfold_ensemble([np.array([1.0])])


class TestSpacings:
    def test_simple_diffs(self):
        np.testing.assert_array_equal(spacings(np.array([0.0, 1.0, 3.0])).values,
                                      [1.0, 2.0])

    def test_degenerate_constant(self):
        np.testing.assert_array_equal(spacings(np.zeros(4)).values, np.zeros(3))

    def test_pooling_count(self):
        sample = spacings([np.arange(7.0), np.arange(7.0)])
        assert sample.values.size == 12


class TestDensityRescale:
    def test_exact_half_std(self, rng):
        eps = density_rescale(rng.normal(size=1000))
        assert abs(eps.std() - 0.5) < 1e-12

    def test_affine_invariance(self, rng):
        e = rng.normal(size=500)
        np.testing.assert_allclose(density_rescale(e), density_rescale(3.0 * e - 7.0),
                                   atol=1e-12)

    def test_family_scaling_invariance(self, rng):
        m = sample_symmetric(50, ElementPdf(), make_rng(4, 0))
        base = fastpath_spectrum(family_spec("r1", 1.0, n=50), m).real_eigs
        scaled = fastpath_spectrum(family_spec("q1", 2.5, n=50), m).real_eigs
        np.testing.assert_allclose(density_rescale(base), density_rescale(scaled),
                                   atol=1e-9)

    def test_guards(self):
        with pytest.raises(ValueError):
            density_rescale(np.empty(0))
        with pytest.raises(ValueError):
            density_rescale(np.ones(5))


class TestHistogram:
    def test_uniform_density(self, rng):
        h = make_histogram(rng.uniform(2.0, 4.0, 200_000), 20, (2.0, 4.0))
        np.testing.assert_allclose(h.densities, 0.5, atol=0.02)

    def test_normalization_invariant(self, rng):
        h = make_histogram(rng.normal(size=5000), 37, (-2.0, 2.0))
        assert np.sum(h.densities * h.widths) == pytest.approx(1.0, abs=1e-12)

    def test_out_of_range_counted(self):
        h = make_histogram(np.array([0.1, 0.5, 5.0, -3.0]), 4, (0.0, 1.0))
        assert h.n_out_of_range == 2 and h.n_samples == 4

    def test_guards(self):
        with pytest.raises(ValueError):
            make_histogram(np.empty(0), 4, (0, 1))
        with pytest.raises(ValueError):
            make_histogram(np.ones(3), 0, (0, 1))
        with pytest.raises(ValueError):
            make_histogram(np.ones(3), 4, (1, 1))


class TestKs:
    def test_self_drawn_sample_is_small(self, rng):
        # inverse-transform sample of the surmise law vs its own cdf
        u = rng.random(10_000)
        s = np.sqrt(-4.0 * np.log1p(-u) / np.pi)
        assert ks_distance(s, wigner_cdf) < 0.02

    def test_point_mass_against_itself(self):
        # a degenerate sample vs an identically degenerate one
        assert ks_two_sample(np.full(5, 2.0), np.full(9, 2.0)) == 0.0

    def test_wigner_sample_vs_poisson_cdf(self, rng):
        u = rng.random(200_000)
        s = np.sqrt(-4.0 * np.log1p(-u) / np.pi)
        assert ks_distance(s, poisson_cdf) >= 0.2

    def test_two_sample_symmetry(self, rng):
        a, b = rng.normal(size=300), rng.normal(size=400)
        assert ks_two_sample(a, b) == ks_two_sample(b, a)

    def test_empty_guard(self):
        with pytest.raises(ValueError):
            ks_distance(np.empty(0), wigner_cdf)


class TestCrossValidation:
    def test_polynomial_vs_semicircle_unfolding_agree(self):
        # same all-real ensemble through both unfolding models
        spec = family_spec("q1", 0.9, n=100)
        poly, semi = [], []
        pdf = ElementPdf()
        for i in range(200):
            ev = fastpath_spectrum(spec, sample_symmetric(100, pdf, make_rng(77, i))).real_eigs
            poly.append(unfold(ev))
            semi.append(unfold(ev, UnfoldConfig(method="semicircle")))
        d = ks_two_sample(spacings(poly).values, spacings(semi).values)
        assert d <= 0.02
