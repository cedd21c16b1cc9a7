"""Numerical witnesses of the family identities.

Residual checks for pseudo-symmetry and pseudo-orthogonality, plus the
structural real/complex classification of a spectrum. Tolerances are
relative: the default 1e-12 is for identities that are exact in exact
arithmetic, 1e-10 for identities involving a computed diagonalizer.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import Spectrum, as_square_matrix, frobenius_norm

ALGEBRAIC_TOL = 1e-12
SOLVER_TOL = 1e-10


@dataclass(frozen=True)
class ResidualReport:
    check_name: str
    residual: float
    scale: float
    tol: float

    @property
    def passed(self):
        return self.residual <= self.tol * self.scale

    def __str__(self):
        status = "ok" if self.passed else "FAIL"
        return (f"{self.check_name}: residual={self.residual:.3e} "
                f"scale={self.scale:.3e} tol={self.tol:.1e} [{status}]")


@dataclass(frozen=True)
class RealityReport:
    n_real: int
    n_pairs: int

    @property
    def n(self):
        return self.n_real + 2 * self.n_pairs

    @property
    def fraction_real(self):
        return self.n_real / self.n


def check_pseudo_symmetry(h, eta, tol=ALGEBRAIC_TOL):
    """Residual of eta H eta^{-1} = H^T, scaled by ||H||_F."""
    h = as_square_matrix(h, "H")
    if eta.diag.shape[0] != h.shape[0]:
        raise ValueError("metric dimension does not match H")
    residual = frobenius_norm(eta.conjugate(h) - h.T)
    return ResidualReport("pseudo-symmetry", residual, frobenius_norm(h), tol)


def check_pseudo_orthogonality(dcal, zeta, tol=SOLVER_TOL):
    """Residual of D^T zeta D = zeta, scaled by ||zeta||_F."""
    dcal = as_square_matrix(dcal, "D")
    if zeta.diag.shape[0] != dcal.shape[0]:
        raise ValueError("metric dimension does not match D")
    residual = frobenius_norm(zeta.sandwich(dcal) - zeta.matrix)
    scale = float(np.linalg.norm(zeta.diag))
    return ResidualReport("pseudo-orthogonality", residual, scale, tol)


def classify_reality(spectrum: Spectrum) -> RealityReport:
    """Count real eigenvalues and conjugate pairs; purely structural."""
    return RealityReport(int(spectrum.real_eigs.size),
                         int(spectrum.complex_pairs.shape[0]))
