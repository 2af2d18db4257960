"""Gaussian-kernel density estimation and the power weights it induces.

The weights ``w_j = ghat(y_j)^(beta - 1)`` are the only place the
nonparametric density estimate enters the estimators, so they are computed
once per (sample, beta) and carried around in a :class:`WeightedSample`.
``beta = 1`` gives exact unit weights without ever touching the KDE, which
keeps the bandwidth-free reductions exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .divergences import ScalarDensity
from .errors import DegenerateSample


@dataclass(frozen=True)
class KdeEstimate:
    """Fitted Gaussian KDE: immutable, safe for concurrent evaluation."""

    centers: np.ndarray
    bandwidth: float

    def evaluate(self, y):
        y = np.asarray(y, dtype=float)
        vals = _kernels.gauss_kde_eval(y.ravel(), self.centers, self.bandwidth)
        return vals.reshape(y.shape) if y.ndim else float(vals[0])

    __call__ = evaluate

    def as_density(self) -> ScalarDensity:
        lo, hi = float(self.centers.min()), float(self.centers.max())
        spread = max(hi - lo, self.bandwidth)
        return ScalarDensity(
            pdf=self.evaluate,
            support=(-np.inf, np.inf),
            kind="continuous",
            loc=0.5 * (lo + hi),
            scale=spread,
        )


@dataclass(frozen=True)
class WeightedSample:
    """Observations (sorted ascending) with their power weights.

    The weights are a pointwise function of the observation values, so any
    joint reordering (e.g. by distance from a known location) stays
    consistent.
    """

    values: np.ndarray
    weights: np.ndarray
    beta: float

    def __post_init__(self):
        if self.values.shape != self.weights.shape:
            raise ValueError("values and weights must align")
        if not np.all(np.isfinite(self.weights)) or np.any(self.weights <= 0):
            raise ValueError("weights must be finite and positive")

    @property
    def n(self) -> int:
        return self.values.size

    def reordered_by(self, key: np.ndarray) -> "WeightedSample":
        order = np.argsort(key, kind="stable")
        return WeightedSample(self.values[order], self.weights[order], self.beta)


def silverman_bandwidth(sample) -> float:
    """0.9 * min(sd, IQR/1.34) * n^(-1/5), skipping whichever scale is zero."""
    x = np.asarray(sample, dtype=float)
    if x.size < 2:
        raise DegenerateSample("Silverman's rule needs at least two points")
    sd = float(np.std(x, ddof=1))
    q75, q25 = np.percentile(x, [75, 25])
    iqr_scale = float(q75 - q25) / 1.34
    candidates = [s for s in (sd, iqr_scale) if s > 0]
    if not candidates:
        raise DegenerateSample("sample has zero spread (sd = IQR = 0)")
    return 0.9 * min(candidates) * x.size ** (-0.2)


def kde_fit(sample, bandwidth_rule="silverman") -> KdeEstimate:
    """Fit a Gaussian KDE; bandwidth_rule is "silverman" or a positive float."""
    x = np.sort(np.asarray(sample, dtype=float))
    if bandwidth_rule == "silverman":
        h = silverman_bandwidth(x)
    else:
        h = float(bandwidth_rule)
        if not h > 0:
            raise DegenerateSample(f"fixed bandwidth must be positive, got {h}")
    return KdeEstimate(centers=x, bandwidth=h)


def power_weights(sample, ghat: KdeEstimate | None, beta: float) -> WeightedSample:
    """WeightedSample with w_j = ghat(y_j)^(beta - 1).

    ``ghat`` may be omitted when beta == 1 (weights are exactly one).
    """
    values = np.sort(np.asarray(sample, dtype=float))
    if beta == 1.0:
        return WeightedSample(values, np.ones(values.size), beta)
    if ghat is None:
        raise ValueError("a KDE is required for beta != 1")
    weights = ghat.evaluate(values) ** (beta - 1.0)
    return WeightedSample(values, weights, beta)


def weighted_sample(sample, beta: float, bandwidth_rule="silverman") -> WeightedSample:
    """One-call convenience: fit the KDE (if needed) and build the weights."""
    if beta == 1.0:
        return power_weights(sample, None, beta)
    return power_weights(sample, kde_fit(sample, bandwidth_rule), beta)
