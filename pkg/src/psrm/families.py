"""Pseudo-symmetric matrix families built from a symmetric source M.

A family conjugates M by Pauli-like block-scaling matrices: the "q"
kinds use the same factor on both sides, the "r" kinds use the factor
and its inverse, and the "gq"/"gr" kinds generalize with independent
left/right scale parameters (lam, mu). Every constructed matrix H is
real and pseudo-symmetric, eta H eta^{-1} = H^T, under a constant
diagonal metric eta. For lam*mu > 0 each H is similar to a real
symmetric matrix, so its spectrum is entirely real and reachable
through the symmetric eigensolver alone (the fast path); for
lam*mu < 0 complex conjugate pairs appear.

All construction runs in real block arithmetic, including k=2 whose
defining block matrix is complex; the explicit complex products exist
only in pauli_block for cross-checking.
"""

import math
from dataclasses import dataclass

import numpy as np

from .linalg import Spectrum, as_square_matrix, sym_eigen

_VALID_K = {"q": (1, 2), "gq": (1, 2), "r": (1, 2, 3), "gr": (1, 2, 3)}

FAMILY_NAMES = ("q1", "q2", "r1", "r2", "r3", "gq1", "gq2", "gr1", "gr2", "gr3")


@dataclass(frozen=True)
class FamilySpec:
    """Which pseudo-symmetric family to build.

    kind: 'q' | 'r' (single parameter; mu is forced equal to lam) or
    'gq' | 'gr' (independent lam, mu). k selects the block matrix:
    {1, 2} for q/gq, {1, 2, 3} for r/gr. n is the (even) dimension.
    """

    kind: str
    k: int
    lam: float
    mu: float = None
    n: int = 2

    def __post_init__(self):
        if self.kind not in _VALID_K:
            raise ValueError(f"unknown family kind {self.kind!r}")
        if self.k not in _VALID_K[self.kind]:
            raise ValueError(f"k={self.k} invalid for kind {self.kind!r}")
        if self.lam == 0:
            raise ValueError("lam must be nonzero")
        mu = self.mu
        if self.kind in ("q", "r"):
            if mu is not None and mu != self.lam:
                raise ValueError(f"kind {self.kind!r} requires mu == lam")
            mu = self.lam
        elif mu is None or mu == 0:
            raise ValueError("mu must be nonzero for gq/gr families")
        object.__setattr__(self, "mu", float(mu))
        object.__setattr__(self, "lam", float(self.lam))
        if self.n < 2 or self.n % 2:
            raise ValueError(f"n must be even and >= 2, got {self.n}")

    @property
    def name(self):
        return f"{self.kind}{self.k}"

    @property
    def real_regime(self):
        """True iff lam*mu > 0, i.e. the spectrum is provably all-real."""
        return self.lam * self.mu > 0


def family_spec(name, lam, mu=None, n=2):
    """Build a FamilySpec from a short name like 'q1' or 'gr3'."""
    name = name.lower()
    if name not in FAMILY_NAMES:
        raise ValueError(f"unknown family {name!r}; expected one of {FAMILY_NAMES}")
    kind, k = name[:-1], int(name[-1])
    if kind in ("q", "r"):
        mu = None
    return FamilySpec(kind, k, lam, mu, n)


@dataclass(frozen=True)
class Metric:
    """Constant diagonal metric, stored as its diagonal.

    role is 'similarity' (mediates H vs H^T) or 'orthogonality'
    (preserved by the diagonalizing matrices).
    """

    diag: np.ndarray
    role: str

    def __post_init__(self):
        d = np.asarray(self.diag, dtype=float)
        if d.ndim != 1 or np.any(d == 0):
            raise ValueError("metric diagonal must be 1-d and invertible")
        object.__setattr__(self, "diag", d)

    @property
    def matrix(self):
        return np.diag(self.diag)

    def conjugate(self, h):
        """eta @ h @ inv(eta) for diagonal eta."""
        return (self.diag[:, None] * h) / self.diag[None, :]

    def sandwich(self, a):
        """a^T @ eta @ a for diagonal eta."""
        return a.T @ (self.diag[:, None] * a)


def pauli_block(k, lam, n):
    """Explicit 2x2-block scaling matrix; complex for k=2 (test use)."""
    if n < 2 or n % 2:
        raise ValueError(f"n must be even and >= 2, got {n}")
    h = n // 2
    eye = np.eye(h)
    zero = np.zeros((h, h))
    if k == 1:
        return np.block([[zero, lam * eye], [eye, zero]])
    if k == 2:
        return np.block([[zero, -1j * lam * eye], [1j * eye, zero]])
    if k == 3:
        return np.block([[lam * eye, zero], [zero, -eye]])
    raise ValueError(f"k must be 1, 2 or 3, got {k}")


def _blocks(m, n):
    h = n // 2
    return m[:h, :h], m[:h, h:], m[h:, h:]


def construct(spec, m):
    """The family matrix H for source M (symmetric, dimension spec.n).

    Real block formulas, equal to the explicit two-sided block-matrix
    products for every (k, lam, mu) including k=2.
    """
    m = as_square_matrix(m, "M")
    if m.shape[0] != spec.n:
        raise ValueError(f"M has dimension {m.shape[0]}, spec.n is {spec.n}")
    lam, mu = spec.lam, spec.mu
    a, b, c = _blocks(m, spec.n)
    bt = b.T
    if spec.kind in ("q", "gq"):
        sign = 1.0 if spec.k == 1 else -1.0
        return np.block([[lam * c, sign * lam * mu * bt], [sign * b, mu * a]])
    # r / gr kinds
    if spec.k == 3:
        return np.block([[(lam / mu) * a, -lam * b], [-bt / mu, c]])
    sign = 1.0 if spec.k == 1 else -1.0
    return np.block([[(lam / mu) * c, sign * lam * bt], [sign * b / mu, a]])


def similarity_metric(spec):
    """Diagonal eta with eta H eta^{-1} = H^T, valid for all (lam, mu)."""
    h = spec.n // 2
    d = np.empty(spec.n)
    if spec.kind in ("q", "gq"):
        d[:h] = 1.0 / spec.lam
        d[h:] = spec.mu
    else:
        d[:h] = 1.0 / (spec.lam * spec.mu)
        d[h:] = 1.0
    return Metric(d, "similarity")


def orthogonality_metric(spec):
    """Diagonal zeta preserved by the diagonalizer: D^T zeta D = zeta.

    q/gq kinds carry the transpose-first product of the block matrix
    with itself at parameter lam; r/gr kinds its two-sided inverse.
    Preservation holds whenever |mu| == |lam| (always for q/r); no
    constant metric exists otherwise.
    """
    h = spec.n // 2
    lam2 = spec.lam * spec.lam
    d = np.empty(spec.n)
    if spec.kind in ("q", "gq"):
        sign = 1.0 if spec.k == 1 else -1.0
        d[:h] = sign
        d[h:] = sign * lam2
    elif spec.k == 3:
        d[:h] = 1.0 / lam2
        d[h:] = 1.0
    else:
        sign = 1.0 if spec.k == 1 else -1.0
        d[:h] = sign / lam2
        d[h:] = sign
    return Metric(d, "orthogonality")


def diagonalizer(spec, d):
    """Transport an orthogonal diagonalizer D of M to the family matrix.

    Returns the real matrix equal to inv(S(lam)) @ D @ S(mu) for q/gq
    and S(lam) @ D @ inv(S(mu)) for r/gr. It diagonalizes construct(
    spec, M) when lam == mu and satisfies the orthogonality-metric
    identity whenever |mu| == |lam|.
    """
    d = as_square_matrix(d, "D")
    if d.shape[0] != spec.n:
        raise ValueError(f"D has dimension {d.shape[0]}, spec.n is {spec.n}")
    h = spec.n // 2
    lam, mu = spec.lam, spec.mu
    d11, d12 = d[:h, :h], d[:h, h:]
    d21, d22 = d[h:, :h], d[h:, h:]
    if spec.kind in ("q", "gq"):
        s = 1.0 if spec.k == 1 else -1.0
        return np.block([[d22, s * mu * d21], [s * d12 / lam, (mu / lam) * d11]])
    if spec.k == 3:
        return np.block([[(lam / mu) * d11, -lam * d12], [-d21 / mu, d22]])
    s = 1.0 if spec.k == 1 else -1.0
    return np.block([[(lam / mu) * d22, s * lam * d21], [s * d12 / mu, d11]])


def fastpath_spectrum(spec, m):
    """All-real spectrum through the symmetric solver only.

    q: lam * eig(M). r: eig(M). gq: sgn(mu) * eig(J M J) with
    J = diag(sqrt|mu| I, sqrt|lam| I). gr: eig(K M K) with K the
    diagonal square root of inv(S(mu)) S(lam). Requires lam*mu > 0
    (automatic for q/r); raises ValueError in the mixed regime.
    """
    m = as_square_matrix(m, "M")
    if m.shape[0] != spec.n:
        raise ValueError(f"M has dimension {m.shape[0]}, spec.n is {spec.n}")
    if not spec.real_regime:
        raise ValueError("fast path requires lam*mu > 0; use general_eigen")
    h = spec.n // 2
    lam, mu = spec.lam, spec.mu
    if spec.kind == "q":
        eigs = lam * sym_eigen(m, vectors=False)[0]
    elif spec.kind == "r":
        eigs = sym_eigen(m, vectors=False)[0]
    elif spec.kind == "gq":
        j = np.concatenate([np.full(h, math.sqrt(abs(mu))),
                            np.full(h, math.sqrt(abs(lam)))])
        sym = j[:, None] * m * j[None, :]
        eigs = math.copysign(1.0, mu) * sym_eigen(sym, vectors=False)[0]
    else:
        r = math.sqrt(lam / mu)
        k = (np.concatenate([np.full(h, r), np.ones(h)]) if spec.k == 3
             else np.concatenate([np.ones(h), np.full(h, r)]))
        sym = k[:, None] * m * k[None, :]
        eigs = sym_eigen(sym, vectors=False)[0]
    return Spectrum(np.sort(eigs), np.empty((0, 2)))
