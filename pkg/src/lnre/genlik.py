"""Generalized likelihood functions and exact deformed distributions.

Four sample objectives are supported, one per divergence: the usual average
log-likelihood, the Basu (DPD) and Jones (LDPD) objectives, and the
norm-relative-entropy objective

    L(y; lam) = 1/(a-b) * log[(1/n) sum_j w_j f_lam(y_j)^(a-b)] - log ||f_lam||_a

whose maximizer is the minimum-LNRE estimate.  ``a == b`` is evaluated as
the limit (weighted mean of log f minus the norm term, dropping an additive
constant that does not depend on the parameter).

On a finite outcome space the deformed distribution proportional to
exp(objective) over n-tuples is computed by exact enumeration; it is the
measure under which the generalized Rao-Blackwell and Cramer-Rao statements
of the sufficiency module hold.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .divergences import ScalarDensity, TuningPair, _quad
from .errors import (
    AllOutsideSupport,
    DegenerateNormalizer,
    EnumerationTooLarge,
    LogOfNonPositive,
    NonIntegrable,
)
from .kde import WeightedSample

ENUMERATION_BOUND = 1_000_000


@dataclass(frozen=True)
class GenLikKind:
    """Which generalized likelihood to use; carries its tuning.

    ML needs no tuning, DPD/LDPD carry alpha only, LNRE carries (alpha, beta).
    """

    name: str
    alpha: float | None = None
    beta: float | None = None

    @classmethod
    def ml(cls) -> "GenLikKind":
        return cls("ml")

    @classmethod
    def dpd(cls, alpha: float) -> "GenLikKind":
        return cls("dpd", alpha=alpha)

    @classmethod
    def ldpd(cls, alpha: float) -> "GenLikKind":
        return cls("ldpd", alpha=alpha)

    @classmethod
    def lnre(cls, tuning: TuningPair) -> "GenLikKind":
        return cls("lnre", alpha=tuning.alpha, beta=tuning.beta)


def power_mass(density: ScalarDensity, alpha: float) -> float:
    """integral (or sum) of density**alpha over its support."""
    if density.kind == "discrete":
        vals = density.pdf(density.points)
        mask = vals > 0
        return float(np.sum(vals[mask] ** alpha))

    def integrand(y):
        v = float(np.asarray(density.pdf(np.asarray([y], dtype=float)), dtype=float)[0])
        return v**alpha if v > 0 else 0.0

    val, _ = _quad(integrand, density.support[0], density.support[1])
    if val <= 0:
        raise NonIntegrable("power mass came out non-positive")
    return val


def alpha_norm(model: Callable, lam, alpha: float) -> float:
    """||f_lam||_alpha = [integral f_lam^alpha]^(1/alpha)."""
    return power_mass(model(lam), alpha) ** (1.0 / alpha)


def generalized_likelihood(kind: GenLikKind, ws: WeightedSample, model: Callable, lam) -> float:
    """Scalar value of the chosen generalized likelihood at parameter lam.

    ``model`` maps a parameter to a :class:`ScalarDensity`; the sample and
    its power weights travel in ``ws``.
    """
    dens = model(lam)
    fv = np.asarray(dens.pdf(ws.values), dtype=float)
    if np.all(fv <= 0):
        raise AllOutsideSupport("no observation lies inside the model support")

    if kind.name == "ml" or (kind.name in ("dpd", "ldpd") and kind.alpha == 1.0):
        with np.errstate(divide="ignore"):
            return float(np.mean(np.log(fv)))

    if kind.name == "dpd":
        a = kind.alpha
        term = np.mean((a * fv ** (a - 1.0) - 1.0) / (a - 1.0))
        return float(term - power_mass(dens, a))

    if kind.name == "ldpd":
        a = kind.alpha
        inner = float(np.mean(fv ** (a - 1.0)))
        if inner <= 0:
            raise LogOfNonPositive("mean f^(alpha-1) is not positive")
        return float(math.log(inner) / (a - 1.0) - math.log(power_mass(dens, a)) / a)

    if kind.name == "lnre":
        a, b = kind.alpha, kind.beta
        if ws.beta != b:
            raise ValueError(
                f"weights were built with beta={ws.beta}, tuning has beta={b}"
            )
        norm_term = math.log(power_mass(dens, a)) / a
        if a == b:
            # limit branch, up to an additive lambda-free constant
            with np.errstate(divide="ignore"):
                logs = np.log(fv)
            return float(np.sum(ws.weights * logs) / np.sum(ws.weights) - norm_term)
        with np.errstate(over="ignore"):
            powered = np.where(fv > 0, fv, 1.0) ** (a - b)
        powered = np.where(fv > 0, powered, 0.0 if a > b else np.inf)
        inner = float(np.mean(ws.weights * powered))
        if not math.isfinite(inner):
            raise NonIntegrable("observation outside support with negative exponent")
        if inner <= 0:
            raise LogOfNonPositive("weighted mean of f^(alpha-beta) is not positive")
        return float(math.log(inner) / (a - b) - norm_term)

    raise ValueError(f"unknown likelihood kind: {kind.name!r}")


def eq14_residual(ws: WeightedSample, model: Callable, lam, t: TuningPair, score: Callable):
    """Estimating-equation residual (left minus right side), per component.

    Left: weighted sample score average with weights w_j f^(a-b)(y_j).
    Right: integral f^a u / integral f^a.  A diagnostic, not a solver; it
    vanishes at the exact minimum-LNRE estimate.
    """
    dens = model(lam)
    fv = np.asarray(dens.pdf(ws.values), dtype=float)
    inside = fv > 0
    if not np.any(inside):
        raise AllOutsideSupport("no observation lies inside the model support")
    u = np.asarray(score(ws.values[inside], lam), dtype=float)
    if u.ndim == 1:
        u = u[None, :]
    factor = ws.weights[inside] * fv[inside] ** (t.alpha - t.beta)
    lhs = (u * factor).sum(axis=1) / factor.sum()

    denom = power_mass(dens, t.alpha)
    rhs = np.empty(u.shape[0])
    for k in range(u.shape[0]):

        def integrand(y):
            arr = np.asarray([y], dtype=float)
            f = float(dens.pdf(arr)[0])
            if f <= 0:
                return 0.0
            return f**t.alpha * float(np.asarray(score(arr, lam))[k, 0])

        num, _ = _quad(integrand, dens.support[0], dens.support[1])
        rhs[k] = num / denom
    return lhs - rhs


@dataclass(frozen=True)
class DeformedPMF:
    """Exact deformed distribution over the enumeration of S^n."""

    n: int
    support: np.ndarray  # the m points of S
    outcomes: np.ndarray  # (m^n, n) outcome values
    probs: np.ndarray  # (m^n,)
    kind: GenLikKind

    def outcome_weights(self) -> np.ndarray:
        """The power weights attached to each coordinate of each outcome."""
        return _empirical_weights(self.outcomes, self.support, self.kind)


def _empirical_weights(rows: np.ndarray, support: np.ndarray, kind: GenLikKind) -> np.ndarray:
    """ghat^(beta-1) with ghat the empirical pmf of each enumerated tuple.

    beta == 1 (and the non-LNRE kinds) short-circuit to exact ones.
    """
    if kind.name != "lnre" or kind.beta == 1.0:
        return np.ones_like(rows, dtype=float)
    n = rows.shape[1]
    occ = np.stack([(rows == v).sum(axis=1) for v in support], axis=1)
    idx = np.searchsorted(support, rows)
    counts = np.take_along_axis(occ, idx, axis=1)
    return (counts / n) ** (kind.beta - 1.0)


def _outcome_logscore(kind: GenLikKind, fvals: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Per-outcome log of the unnormalized deformed density.

    Parameter-free additive terms (norms, the Basu integral) are dropped;
    they cancel in the normalization.  The ML branch uses the full joint
    log-density sum, so the deformed law is exactly the product measure.
    """
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if kind.name == "ml" or (kind.name in ("dpd", "ldpd") and kind.alpha == 1.0):
            return np.where(fvals > 0, np.log(np.where(fvals > 0, fvals, 1.0)), -np.inf).sum(axis=1)
        if kind.name == "dpd":
            a = kind.alpha
            return ((a * fvals ** (a - 1.0) - 1.0) / (a - 1.0)).mean(axis=1)
        if kind.name == "ldpd":
            a = kind.alpha
            inner = (fvals ** (a - 1.0)).mean(axis=1)
            return np.log(inner) / (a - 1.0)
        if kind.name == "lnre":
            a, b = kind.alpha, kind.beta
            if a == b:
                logs = np.where(fvals > 0, np.log(np.where(fvals > 0, fvals, 1.0)), -np.inf)
                return (weights * logs).sum(axis=1) / weights.sum(axis=1)
            powered = np.where(fvals > 0, np.where(fvals > 0, fvals, 1.0) ** (a - b), 0.0 if a > b else np.inf)
            inner = (weights * powered).mean(axis=1)
            return np.log(inner) / (a - b)
    raise ValueError(f"unknown likelihood kind: {kind.name!r}")


def deformed_pmf(kind: GenLikKind, family: Callable, n: int, lam) -> DeformedPMF:
    """Deformed distribution proportional to exp(objective) over S^n.

    ``family(lam)`` must be a discrete density on a finite point set S with
    |S|^n within the enumeration bound.  For discrete data the weights use
    the empirical pmf of each enumerated tuple (beta == 1 needs none).
    """
    dens = family(lam)
    if dens.kind != "discrete":
        raise ValueError("deformed distributions require a finite discrete support")
    support = dens.points
    m = support.size
    if m**n > ENUMERATION_BOUND:
        raise EnumerationTooLarge(f"|S|^n = {m**n} exceeds {ENUMERATION_BOUND}")
    idx = np.array(list(itertools.product(range(m), repeat=n)), dtype=np.intp)
    outcomes = support[idx]
    fvals = np.asarray(dens.pdf(support), dtype=float)[idx]
    weights = _empirical_weights(outcomes, support, kind)
    logscore = _outcome_logscore(kind, fvals, weights)
    if np.any(np.isposinf(logscore)):
        raise DegenerateNormalizer("deformed density diverges on some outcome")
    top = np.max(logscore)
    if not math.isfinite(top):
        raise DegenerateNormalizer("all outcomes have zero deformed density")
    raw = np.exp(logscore - top)
    total = raw.sum()
    if not math.isfinite(total) or total <= 0:
        raise DegenerateNormalizer("deformed normalizer is not finite and positive")
    return DeformedPMF(n=n, support=support, outcomes=outcomes, probs=raw / total, kind=kind)
