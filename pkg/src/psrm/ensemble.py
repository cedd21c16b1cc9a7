"""Seeded, stream-indexed generation of the symmetric source matrices.

Each matrix sample owns an independent counter-based RNG stream keyed
by (seed, stream_index), so ensembles regenerate bit-identically no
matter how samples are scheduled across threads. Gaussian variates are
produced by Box-Muller over the stream's uniforms.
"""

import math
from dataclasses import dataclass

import numpy as np


class RngStream:
    """Deterministic variate stream for one matrix sample.

    Identical (seed, stream_index) produce identical sequences.
    draws_consumed counts the variates handed out, which the sampler
    uses to enforce its draw-count contract.
    """

    def __init__(self, seed, stream_index=0):
        self.seed = int(seed)
        self.stream_index = int(stream_index)
        key = (self.stream_index << 64) | (self.seed & 0xFFFFFFFFFFFFFFFF)
        self._gen = np.random.Generator(np.random.Philox(key=key))
        self.draws_consumed = 0

    def uniforms(self, count):
        """count iid uniforms on [0, 1)."""
        self.draws_consumed += count
        return self._gen.random(count)

    def gaussians(self, count):
        """count iid standard normals via Box-Muller.

        Uniform pairs are drawn in one block; an odd request discards
        the spare variate so the stream position depends only on count.
        """
        pairs = (count + 1) // 2
        u = self._gen.random((2, pairs))
        r = np.sqrt(-2.0 * np.log1p(-u[0]))  # 1 - u in (0, 1], log finite
        phi = 2.0 * math.pi * u[1]
        z = np.concatenate([r * np.cos(phi), r * np.sin(phi)])[:count]
        self.draws_consumed += count
        return z


def make_rng(seed, stream_index=0):
    return RngStream(seed, stream_index)


@dataclass(frozen=True)
class ElementPdf:
    """Element distribution: zero mean, off-diagonal variance sigma^2,
    diagonal variance 2 sigma^2. tag is 'gaussian' or 'uniform'."""

    tag: str = "gaussian"
    sigma: float = 1.0

    def __post_init__(self):
        if self.tag not in ("gaussian", "uniform"):
            raise ValueError(f"unknown element pdf {self.tag!r}")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")

    def standard_variates(self, count, rng):
        """count iid zero-mean, unit-variance variates from the stream."""
        if self.tag == "gaussian":
            return rng.gaussians(count)
        return math.sqrt(3.0) * (2.0 * rng.uniforms(count) - 1.0)


def sample_symmetric(n, pdf, rng):
    """Draw the symmetric source matrix M.

    Consumes exactly n(n+1)/2 variates: the first n fill the diagonal
    (scaled to variance 2 sigma^2), the rest fill the upper triangle
    row-major (variance sigma^2) and are mirrored.
    """
    if n < 2 or n % 2:
        raise ValueError(f"dimension must be even and >= 2, got {n}")
    total = n * (n + 1) // 2
    draws = pdf.standard_variates(total, rng)
    m = np.zeros((n, n))
    m[np.diag_indices(n)] = draws[:n] * (math.sqrt(2.0) * pdf.sigma)
    iu = np.triu_indices(n, 1)
    off = draws[n:] * pdf.sigma
    m[iu] = off
    m[(iu[1], iu[0])] = off
    return m
