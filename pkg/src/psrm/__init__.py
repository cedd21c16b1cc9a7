"""Pseudo-symmetric random matrices and their spectral statistics."""

__version__ = "0.1.0"

from .analytic import (TwoByTwoParams, bessel_i0, eig2x2, elliptic_e,
                       jpdf_2x2, sample_spacings_2x2, semicircle, spacing_2x2,
                       wigner_surmise)
from .ensemble import ElementPdf, RngStream, make_rng, sample_symmetric
from .families import (FAMILY_NAMES, FamilySpec, Metric, construct,
                       diagonalizer, family_spec, fastpath_spectrum,
                       orthogonality_metric, pauli_block, similarity_metric)
from .linalg import (ConvergenceError, SchurForm, Spectrum, frobenius_norm,
                     frobenius_residual, general_eigen, real_schur, sym_eigen)
from .stats import (Histogram, SpacingSample, UnfoldConfig, density_rescale,
                    ks_distance, ks_two_sample, make_histogram, poisson_cdf,
                    semicircle_cdf, spacings, unfold, unfold_ensemble,
                    wigner_cdf)
from .verify import (RealityReport, ResidualReport, check_pseudo_orthogonality,
                     check_pseudo_symmetry, classify_reality)

__all__ = [name for name in dir() if not name.startswith("_")]
