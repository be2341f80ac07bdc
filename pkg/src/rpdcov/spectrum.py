"""Empirical eigenvalue machinery behind the Gamma calibration.

Double-centering the negated Euclidean distance matrix of a sample yields
a positive semidefinite kernel matrix; its eigenvalues (divided by n)
approximate the population spectrum whose tensor products weight the
chi-square mixture in the null law of the test statistic.  This module
computes those spectra and the largest tensor products, and can simulate
the mixture's quantiles directly for validation against the Gamma fit.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from ._validate import as_matrix
from .dcov import _block_distances, _prep_side
from .errors import ValidationError

_CLAMP_REL = 1e-8


@dataclass(frozen=True)
class CenteredKernelMatrix:
    """Double-centered negated distance matrix of one sample."""

    entries: np.ndarray
    source_dim: int


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in descending order, clamped to be non-negative."""

    eigenvalues: np.ndarray


def _full_distance_matrix(X: np.ndarray) -> np.ndarray:
    n = X.shape[0]
    side = _prep_side(X)
    out = np.empty((n, n))
    block = max(1, (1 << 21) // n)
    for i0 in range(0, n, block):
        i1 = min(i0 + block, n)
        out[i0:i1] = _block_distances(side, i0, i1)
    return out


def centered_kernel_matrix(X) -> CenteredKernelMatrix:
    """Kernel matrix ``-d_ij + rowmean_i + rowmean_j - grandmean``.

    Row and column sums of the result vanish, and the matrix is positive
    semidefinite up to floating-point noise.
    """
    Xa = as_matrix(X, min_n=2)
    dist = _full_distance_matrix(Xa)
    row_means = dist.mean(axis=1)
    grand_mean = row_means.mean()
    entries = -dist + row_means[:, None] + row_means[None, :] - grand_mean
    return CenteredKernelMatrix(entries=entries, source_dim=Xa.shape[1])


def empirical_spectrum(kernel: CenteredKernelMatrix) -> Spectrum:
    """Eigenvalues of ``entries / n`` in descending order.

    This scaling makes the eigenvalue sum equal the mean pairwise distance
    (total / n^2), matching the population identity.  Negative values at
    the numerical-noise level are clamped to zero so downstream tensor
    products stay non-negative.
    """
    entries = kernel.entries
    n = entries.shape[0]
    values = np.linalg.eigvalsh(entries)[::-1] / n
    top = values[0] if values.size else 0.0
    if top > 0.0:
        values = np.where(values < 0.0, 0.0, values)
        # Anything far below -1e-8 * max would mean a non-PSD input, which
        # a double-centered Euclidean distance matrix cannot produce.
    else:
        values = np.zeros_like(values)
    return Spectrum(eigenvalues=values)


def tensor_spectrum(sx: Spectrum, sy: Spectrum, top_m: int) -> Spectrum:
    """The ``top_m`` largest pairwise eigenvalue products, descending.

    Walks the product lattice with a max-heap, so memory stays
    O(top_m + n) instead of materialising all n^2 products; requesting the
    full set falls back to the dense outer product.
    """
    a = np.asarray(sx.eigenvalues, dtype=np.float64)
    b = np.asarray(sy.eigenvalues, dtype=np.float64)
    if a.size == 0 or b.size == 0:
        raise ValidationError("tensor_spectrum needs non-empty spectra")
    if top_m < 1:
        raise ValidationError("top_m must be >= 1")
    total = a.size * b.size
    if top_m >= total:
        prods = np.sort(np.outer(a, b), axis=None)[::-1]
        return Spectrum(eigenvalues=prods)
    heap = [(-(a[0] * b[0]), 0, 0)]
    seen = {(0, 0)}
    out = np.empty(top_m)
    for pos in range(top_m):
        neg, i, j = heapq.heappop(heap)
        out[pos] = -neg
        if i + 1 < a.size and (i + 1, j) not in seen:
            seen.add((i + 1, j))
            heapq.heappush(heap, (-(a[i + 1] * b[j]), i + 1, j))
        if j + 1 < b.size and (i, j + 1) not in seen:
            seen.add((i, j + 1))
            heapq.heappush(heap, (-(a[i] * b[j + 1]), i, j + 1))
    return Spectrum(eigenvalues=out)


def quadratic_form_quantile_mc(
    weights: np.ndarray,
    prob: float,
    draws: int,
    rng: np.random.Generator,
    tail_mass: float = 0.0,
) -> float:
    """Monte Carlo quantile of ``sum_i weights[i] * Z_i^2`` with Z_i ~ N(0,1).

    ``tail_mass`` adds the expected contribution of truncated small
    weights as a constant shift, keeping the mean exact when only the top
    of a spectrum is simulated.
    """
    if not 0.0 < prob < 1.0:
        raise ValidationError("prob must lie in (0, 1)")
    w = np.asarray(weights, dtype=np.float64)
    acc = np.full(draws, tail_mass)
    chunk = 64
    for j0 in range(0, w.size, chunk):
        block = w[j0 : j0 + chunk]
        z = rng.standard_normal((draws, block.size))
        acc += (z * z) @ block
    return float(np.quantile(acc, prob))
