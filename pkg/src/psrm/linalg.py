"""Dense real matrix utilities and the two in-house eigensolvers.

The symmetric path is Householder tridiagonalization followed by
implicit-shift QL with Wilkinson shifts. The general path reduces to
upper Hessenberg form and runs Francis double-shift QR down to the real
Schur form, so complex conjugate eigenvalue pairs are read off 2x2
diagonal blocks without any complex arithmetic.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels


class ConvergenceError(RuntimeError):
    """An iterative eigensolver exhausted its iteration budget."""


def as_square_matrix(a, name="matrix"):
    """Validate and return a float64 square 2-d array with finite entries."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ValueError(f"{name} contains non-finite entries")
    return a


def frobenius_norm(a):
    return float(np.linalg.norm(a, "fro"))


def frobenius_residual(a, b):
    """||A - B||_F; dimensions must agree."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b, "fro"))


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of a real matrix: real values plus conjugate pairs.

    real_eigs is sorted ascending; each conjugate pair is stored once
    with positive imaginary part. len(real_eigs) + 2*len(complex_pairs)
    equals the matrix dimension.
    """

    real_eigs: np.ndarray
    complex_pairs: np.ndarray  # shape (m, 2): columns (re, im > 0)

    def __post_init__(self):
        re = np.asarray(self.real_eigs, dtype=float)
        cp = np.asarray(self.complex_pairs, dtype=float).reshape(-1, 2)
        if re.size > 1 and np.any(np.diff(re) < 0):
            raise ValueError("real_eigs must be sorted ascending")
        if cp.size and np.any(cp[:, 1] <= 0):
            raise ValueError("complex pairs must carry im > 0")
        object.__setattr__(self, "real_eigs", re)
        object.__setattr__(self, "complex_pairs", cp)

    @property
    def n(self):
        return self.real_eigs.size + 2 * self.complex_pairs.shape[0]

    @property
    def all_real(self):
        return self.complex_pairs.shape[0] == 0

    def trace(self):
        return float(self.real_eigs.sum() + 2.0 * self.complex_pairs[:, 0].sum())


def spectrum_from_parts(wr, wi):
    """Assemble a Spectrum from (wr, wi) arrays as emitted by the QR kernel."""
    wr = np.asarray(wr, dtype=float)
    wi = np.asarray(wi, dtype=float)
    real = np.sort(wr[wi == 0.0])
    pos = wi > 0.0
    pairs = np.column_stack([wr[pos], wi[pos]]) if pos.any() else np.empty((0, 2))
    if pairs.size:
        order = np.lexsort((pairs[:, 1], pairs[:, 0]))
        pairs = pairs[order]
    return Spectrum(real, pairs)


@dataclass
class SchurForm:
    """Real Schur decomposition H = Z T Z^T.

    T is quasi-upper-triangular: 1x1 diagonal blocks hold real
    eigenvalues and 2x2 blocks hold complex conjugate pairs. Z is only
    populated when the factorization was accumulated.
    """

    T: np.ndarray
    Z: np.ndarray | None = None
    block_starts: list = field(default_factory=list)  # index + size per block

    def spectrum(self):
        wr, wi = _eigs_from_quasi_triangular(self.T, self.block_starts)
        return spectrum_from_parts(wr, wi)


def _eigs_from_quasi_triangular(t, blocks):
    n = t.shape[0]
    wr = np.empty(n)
    wi = np.empty(n)
    for start, size in blocks:
        if size == 1:
            wr[start] = t[start, start]
            wi[start] = 0.0
        else:
            a, b = t[start, start], t[start, start + 1]
            c, d = t[start + 1, start], t[start + 1, start + 1]
            p = 0.5 * (a + d)
            disc = 0.25 * (a - d) ** 2 + b * c
            im = np.sqrt(-disc)
            wr[start] = wr[start + 1] = p
            wi[start] = im
            wi[start + 1] = -im
    return wr, wi


def sym_eigen(a, vectors=True, max_sweeps=30):
    """Eigendecomposition of a real symmetric matrix.

    Returns (eigs, d): eigs ascending, d orthogonal with columns the
    matching eigenvectors (None when vectors=False). The input is
    symmetrized as (A + A^T)/2 before reduction; callers are expected
    to pass data that is symmetric up to roundoff.

    Raises ConvergenceError if the QL iteration fails to deflate within
    max_sweeps sweeps per eigenvalue.
    """
    a = as_square_matrix(a)
    n = a.shape[0]
    work = 0.5 * (a + a.T)
    if n == 1:
        return np.array([work[0, 0]]), (np.eye(1) if vectors else None)
    d, e, q = _tridiagonalize(work, accumulate=vectors)
    z = q if vectors else np.empty((1, 1))
    status = _kernels._tridiag_ql(d, e, z, vectors, max_sweeps)
    if status != 0:
        raise ConvergenceError("QL iteration did not converge")
    order = np.argsort(d, kind="stable")
    eigs = d[order]
    return (eigs, z[:, order]) if vectors else (eigs, None)


def _tridiagonalize(a, accumulate):
    """Householder reduction of symmetric a to tridiagonal (d, e[, q])."""
    n = a.shape[0]
    vs = []
    for k in range(n - 2):
        x = a[k + 1:, k]
        xnorm = np.linalg.norm(x)
        if xnorm == 0.0:
            vs.append(None)
            continue
        alpha = -np.copysign(xnorm, x[0])
        v = x.copy()
        v[0] -= alpha
        beta = 1.0 / (xnorm * xnorm - x[0] * alpha)  # == 2 / ||v||^2
        sub = a[k + 1:, k + 1:]
        p = beta * (sub @ v)
        w = p - (0.5 * beta * (p @ v)) * v
        sub -= np.outer(v, w) + np.outer(w, v)
        a[k + 1, k] = alpha
        a[k, k + 1] = alpha
        a[k + 2:, k] = 0.0
        a[k, k + 2:] = 0.0
        vs.append((v, beta))
    d = np.ascontiguousarray(np.diag(a))
    e = np.zeros(n)
    e[: n - 1] = np.diag(a, -1)
    q = None
    if accumulate:
        q = np.eye(n)
        for k in range(n - 3, -1, -1):
            if vs[k] is None:
                continue
            v, beta = vs[k]
            block = q[k + 1:, k + 1:]
            block -= np.outer(beta * v, v @ block)
    return d, e, q


def real_schur(h, accumulate=True, balance=False, max_iter_factor=40):
    """Real Schur form of a general real square matrix.

    With accumulate=True returns T and the orthogonal Z with
    H = Z T Z^T (balancing is refused in that mode since it would break
    orthogonality of Z). Entries of T below the block pattern are
    zeroed exactly after convergence.
    """
    h = as_square_matrix(h).copy()
    n = h.shape[0]
    if accumulate and balance:
        raise ValueError("balancing is incompatible with an orthogonal Z")
    if n == 1:
        return SchurForm(h, np.eye(1) if accumulate else None, [(0, 1)])
    if balance:
        _kernels._balance(h, np.empty(n))
    q = np.empty((n, n))
    _kernels._hessenberg(h, q, accumulate)
    z = q if accumulate else np.empty((1, 1))
    wr = np.empty(n)
    wi = np.empty(n)
    status = _kernels._francis(h, z, wr, wi, accumulate, max_iter_factor * n)
    if status != 0:
        raise ConvergenceError("QR iteration did not converge")
    blocks = []
    i = 0
    while i < n:
        if wi[i] == 0.0:
            blocks.append((i, 1))
            i += 1
        else:
            blocks.append((i, 2))
            i += 2
    # exact zeros below the block subdiagonal
    for start, size in blocks:
        h[start + size:, start: start + size] = 0.0
    return SchurForm(h, z if accumulate else None, blocks)


def general_eigen(h, balance=True, max_iter_factor=40):
    """Spectrum of a general real square matrix via the real Schur form.

    Classification of real versus complex-pair eigenvalues is
    structural: 1x1 diagonal blocks are real, 2x2 blocks are pairs.
    Raises ConvergenceError after max_iter_factor * n QR iterations.
    """
    h = as_square_matrix(h).copy()
    n = h.shape[0]
    if n == 1:
        return Spectrum(np.array([h[0, 0]]), np.empty((0, 2)))
    if balance:
        _kernels._balance(h, np.empty(n))
    q = np.empty((1, 1))
    _kernels._hessenberg(h, q, False)
    z = np.empty((1, 1))
    wr = np.empty(n)
    wi = np.empty(n)
    status = _kernels._francis(h, z, wr, wi, False, max_iter_factor * n)
    if status != 0:
        raise ConvergenceError("QR iteration did not converge")
    return spectrum_from_parts(wr, wi)
