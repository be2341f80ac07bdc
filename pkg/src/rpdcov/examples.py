"""Synthetic data generators for the simulation studies.

Seven joint laws, numbered 1-7, covering independent squared uniforms,
low-dimensional squared dependence, correlated Gaussians, a noisy
log-square link, and a dependence that switches on partway through the
sample.  Generation is deterministic in the seed, with a fixed draw order
per example, so identical specs yield byte-identical samples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import ValidationError
from .projection import RngSeed, stream_rng

EXAMPLE_IDS = (1, 2, 3, 4, 5, 6, 7)


@dataclass(frozen=True)
class PairedSample:
    """A matched (X: n x p, Y: n x q) pair sharing the observation index."""

    x: np.ndarray
    y: np.ndarray


@dataclass(frozen=True)
class ExampleSpec:
    """Which example to draw, at what size, with which parameters.

    ``params`` carries the per-example knobs: ``rho`` (example 5, default
    0.0), ``sigma`` (example 6, default 1.0), and ``t_frac`` (example 7,
    change point as a fraction of n, default 0.5).
    """

    example: int
    n: int
    p: int = 10
    q: int = 10
    params: Mapping[str, float] = field(default_factory=dict)
    seed: RngSeed = field(default_factory=lambda: RngSeed(0))


def _validate(spec: ExampleSpec) -> None:
    if spec.example not in EXAMPLE_IDS:
        raise ValidationError(f"unknown example id {spec.example}; expected 1..7")
    if spec.n < 4:
        raise ValidationError("examples need n >= 4")
    if spec.p < 1 or spec.q < 1:
        raise ValidationError("dimensions must be >= 1")
    if spec.example == 2 and (spec.p < 2 or spec.q < 2):
        raise ValidationError("example 2 needs p >= 2 and q >= 2")
    if spec.example == 4 and (spec.p < 5 or spec.q < 5):
        raise ValidationError("example 4 needs p >= 5 and q >= 5")
    if spec.example == 5 and spec.p != spec.q:
        raise ValidationError("example 5 pairs coordinates and needs p == q")
    if spec.example in (6, 7) and spec.q > spec.p:
        raise ValidationError("examples 6 and 7 map X coordinates and need q <= p")
    if spec.example == 5:
        rho = float(spec.params.get("rho", 0.0))
        if not -1.0 < rho < 1.0:
            raise ValidationError("rho must lie in (-1, 1)")
    if spec.example == 6 and float(spec.params.get("sigma", 1.0)) < 0.0:
        raise ValidationError("sigma must be >= 0")
    if spec.example == 7:
        t_frac = float(spec.params.get("t_frac", 0.5))
        if not 0.0 < t_frac < 1.0:
            raise ValidationError("t_frac must lie in (0, 1)")


def generate_example(spec: ExampleSpec) -> PairedSample:
    """Draw one deterministic sample of the specified joint law."""
    _validate(spec)
    rng = stream_rng(spec.seed.master, spec.seed.stream_index)
    n, p, q = spec.n, spec.p, spec.q

    if spec.example in (1, 3):
        # Independent: uniform entries vs squared independent uniforms.
        x = rng.uniform(size=(n, p))
        y = rng.uniform(size=(n, q)) ** 2
    elif spec.example == 2:
        x = rng.uniform(size=(n, p))
        y = rng.uniform(size=(n, q)) ** 2
        y = y.copy()
        y[:, 0] = x[:, 0] ** 2
        y[:, 1] = x[:, 1] ** 2
    elif spec.example == 4:
        # Five shared squared coordinates buried in arbitrary dimensions.
        x = rng.uniform(size=(n, p))
        y = rng.uniform(size=(n, q)) ** 2
        y = y.copy()
        y[:, :5] = x[:, :5] ** 2
    elif spec.example == 5:
        rho = float(spec.params.get("rho", 0.0))
        x = rng.standard_normal((n, p))
        noise = rng.standard_normal((n, q))
        y = rho * x + np.sqrt(1.0 - rho * rho) * noise
    elif spec.example == 6:
        sigma = float(spec.params.get("sigma", 1.0))
        x = rng.standard_normal((n, p))
        eps = rng.standard_normal((n, q))
        y = np.log(x[:, :q] ** 2) + sigma * eps
    else:  # example 7
        t_frac = float(spec.params.get("t_frac", 0.5))
        t_change = int(round(t_frac * n))
        x = rng.standard_normal((n, p))
        z = rng.standard_normal((n, q))
        eps = rng.standard_normal((n, q))
        y = np.empty((n, q))
        y[:t_change] = np.log(z[:t_change] ** 2) + eps[:t_change]
        y[t_change:] = np.log(x[t_change:, :q] ** 2) + eps[t_change:]
    return PairedSample(x=x, y=y)
