"""Density-based divergences between scalar densities.

Four measures are provided: the Kullback-Leibler divergence, the density
power divergence (DPD), its logarithmic variant (LDPD) and the two-parameter
logarithmic norm relative entropy (LNRE) that generalizes the LDPD.  All of
them are evaluated either by adaptive quadrature (continuous supports, with
infinite tails handled by QUADPACK's rational transformation) or by exact
summation (finite discrete supports).

Conventions
-----------
* ``alpha = 1`` branches of DPD/LDPD and the ``alpha = beta = 1`` branch of
  LNRE delegate to the KL divergence, matching their limiting definitions.
* ``alpha = beta`` (away from 1) is evaluated with the explicit limit
  formula rather than by numerically approaching the limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import (
    LogOfNonPositive,
    NonIntegrable,
    QuadratureFailure,
    SupportMismatch,
)

QUAD_EPSABS = 1e-10
QUAD_ERR_TOL = 1e-7

# Densities below this are treated as zero mass in the far tails, where the
# other density may have underflowed to exactly 0 in float64.
NEGLIGIBLE = 1e-250
# Looser cutoff for g log(g/f) integrands: the log factor is bounded by a few
# thousand for any sane density pair, so mass below this contributes < 1e-25.
LOG_TAIL_CUTOFF = 1e-30


@dataclass(frozen=True)
class ScalarDensity:
    """A one-dimensional probability density with explicit support.

    Parameters
    ----------
    pdf : callable
        Vectorized density; must return 0 outside the support.
    support : tuple
        ``(lower, upper)`` for continuous densities (either bound may be
        infinite) or the sorted tuple of outcome points for discrete ones.
    kind : str
        ``"continuous"`` or ``"discrete"``.
    loc, scale : float
        Optional location/scale hints used by quadrature and CDF routines
        on infinite supports.
    """

    pdf: Callable
    support: tuple
    kind: str = "continuous"
    loc: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in ("continuous", "discrete"):
            raise ValueError(f"unknown density kind: {self.kind!r}")
        if self.kind == "discrete" and len(self.support) == 0:
            raise ValueError("discrete density needs at least one point")

    @property
    def points(self) -> np.ndarray:
        if self.kind != "discrete":
            raise ValueError("points are defined for discrete densities only")
        return np.asarray(self.support, dtype=float)

    def __call__(self, y):
        return self.pdf(np.asarray(y, dtype=float))

    def total_mass(self) -> float:
        """Integral (or sum) of the pdf over the support; should be ~1."""
        if self.kind == "discrete":
            return float(np.sum(self.pdf(self.points)))
        val, _ = _quad(self.pdf, self.support[0], self.support[1])
        return val


@dataclass(frozen=True)
class TuningPair:
    """Divergence tuning parameters (alpha, beta) with alpha > 0."""

    alpha: float
    beta: float = 1.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")

    @property
    def is_limit(self) -> bool:
        """True on the alpha == beta branch of the LNRE."""
        return self.alpha == self.beta


@dataclass(frozen=True)
class DivergenceValue:
    value: float
    method: str  # "quadrature" | "exact-sum"
    abs_error_estimate: float = 0.0

    def __float__(self):
        return self.value


def _quad(fn, lo, hi, err_tol=QUAD_ERR_TOL):
    """Adaptive quadrature with divergence/accuracy checks."""
    out = integrate.quad(
        fn, lo, hi, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSABS, limit=200, full_output=1
    )
    val, err = out[0], out[1]
    if not math.isfinite(val):
        raise NonIntegrable(f"integral over ({lo}, {hi}) is not finite")
    if err > err_tol:
        raise QuadratureFailure(
            f"quadrature error estimate {err:.3e} exceeds tolerance {err_tol:.1e}"
        )
    return val, err


def _powers(values, exponent):
    """values**exponent with 0**positive = 0, 0**0 = 1 and 0**negative = inf."""
    v = np.asarray(values, dtype=float)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        out = np.where(v > 0, v, 1.0) ** exponent
    if exponent > 0:
        zero_val = 0.0
    elif exponent == 0:
        zero_val = 1.0
    else:
        zero_val = np.inf
    return np.where(v > 0, out, zero_val)


def _contains(outer, inner, tol=1e-12):
    return outer[0] - tol <= inner[0] and inner[1] <= outer[1] + tol


def _intersection(a, b):
    lo, hi = max(a[0], b[0]), min(a[1], b[1])
    if lo >= hi:
        raise SupportMismatch("densities have disjoint supports")
    return lo, hi


def _check_pair(g: ScalarDensity, f: ScalarDensity):
    if g.kind != f.kind:
        raise SupportMismatch(
            f"cannot mix {g.kind} and {f.kind} densities in a divergence"
        )
    if g.kind == "discrete" and not np.array_equal(g.points, f.points):
        raise SupportMismatch("discrete densities must share their outcome set")


def _cross_integral(g, f, a, b):
    """integral of g**a * f**b, with divergence detection.

    The region of integration is the intersection of the supports whose
    exponent is positive; any density entering with a negative exponent must
    cover that region (otherwise the integrand blows up on positive measure).
    """
    if g.kind == "discrete":
        term = _powers(g.pdf(g.points), a) * _powers(f.pdf(f.points), b)
        if not np.all(np.isfinite(term)):
            raise NonIntegrable("discrete power sum has an infinite term")
        return float(term.sum()), 0.0

    region = None
    for dens, expo in ((g, a), (f, b)):
        if expo > 0:
            region = dens.support if region is None else _intersection(region, dens.support)
    if region is None:  # cannot happen for alpha > 0, kept for safety
        raise NonIntegrable("no positive-exponent factor to anchor the region")
    for dens, expo in ((g, a), (f, b)):
        if expo < 0 and not _contains(dens.support, region):
            raise NonIntegrable(
                "negative-power density vanishes inside the integration region"
            )

    def integrand(y):
        arr = np.asarray([y], dtype=float)
        vals = ((float(g.pdf(arr)[0]), a), (float(f.pdf(arr)[0]), b))
        # log-space evaluation; positive-exponent factors in the deep tail
        # kill the term before a vanished negative-exponent factor can blow up
        log_term = 0.0
        for v, expo in vals:
            if expo > 0:
                if v < NEGLIGIBLE:
                    return 0.0
                log_term += expo * math.log(v)
        for v, expo in vals:
            if expo < 0:
                if v <= 0.0:
                    return np.inf
                log_term += expo * math.log(v)
        return math.exp(log_term) if log_term < 700.0 else np.inf

    return _quad(integrand, region[0], region[1])


def _power_integral(dens, alpha):
    """integral (or sum) of dens**alpha over its own support."""
    if dens.kind == "discrete":
        return float(np.sum(_powers(dens.pdf(dens.points), alpha))), 0.0

    def integrand(y):
        arr = np.asarray([y], dtype=float)
        return float(_powers(dens.pdf(arr), alpha)[0])

    return _quad(integrand, dens.support[0], dens.support[1])


def _log_positive(value, what):
    if value <= 0:
        raise LogOfNonPositive(f"{what} = {value:.6g} is not positive")
    return math.log(value)


def kld(g: ScalarDensity, f: ScalarDensity) -> DivergenceValue:
    """Kullback-Leibler divergence: integral of g * log(g / f).

    Requires f > 0 wherever g > 0; raises SupportMismatch otherwise.
    """
    _check_pair(g, f)
    if g.kind == "discrete":
        gv, fv = g.pdf(g.points), f.pdf(f.points)
        if np.any((gv > 0) & (fv <= 0)):
            raise SupportMismatch("g puts mass where f vanishes")
        mask = gv > 0
        value = float(np.sum(gv[mask] * np.log(gv[mask] / fv[mask])))
        return DivergenceValue(value, "exact-sum", 0.0)

    if not _contains(f.support, g.support):
        raise SupportMismatch("support of g is not contained in support of f")

    def integrand(y):
        arr = np.asarray([y], dtype=float)
        gv = float(g.pdf(arr)[0])
        if gv < LOG_TAIL_CUTOFF:
            return 0.0
        fv = float(f.pdf(arr)[0])
        if fv <= 0.0:
            raise SupportMismatch(f"f vanishes at y={y:.6g} where g > 0")
        return gv * (math.log(gv) - math.log(fv))

    value, err = _quad(integrand, g.support[0], g.support[1])
    return DivergenceValue(value, "quadrature", err)


def dpd(g: ScalarDensity, f: ScalarDensity, t: TuningPair) -> DivergenceValue:
    """Density power divergence with tuning alpha (beta is unused).

    B_alpha = alpha/(1-alpha) * I[g f^(alpha-1)] - 1/(1-alpha) * I[g^alpha]
              + I[f^alpha];  alpha = 1 delegates to the KLD.
    """
    _check_pair(g, f)
    a = t.alpha
    if a == 1.0:
        return kld(g, f)
    i_gf, e1 = _cross_integral(g, f, 1.0, a - 1.0)
    i_ga, e2 = _power_integral(g, a)
    i_fa, e3 = _power_integral(f, a)
    c = a / (1.0 - a)
    value = c * i_gf - (1.0 / (1.0 - a)) * i_ga + i_fa
    err = abs(c) * e1 + abs(1.0 / (1.0 - a)) * e2 + e3
    method = "exact-sum" if g.kind == "discrete" else "quadrature"
    return DivergenceValue(value, method, err)


def ldpd(g: ScalarDensity, f: ScalarDensity, t: TuningPair) -> DivergenceValue:
    """Logarithmic density power divergence with tuning alpha."""
    _check_pair(g, f)
    a = t.alpha
    if a == 1.0:
        return kld(g, f)
    i_gf, e1 = _cross_integral(g, f, 1.0, a - 1.0)
    i_ga, e2 = _power_integral(g, a)
    i_fa, e3 = _power_integral(f, a)
    c = a / (1.0 - a)
    value = (
        c * _log_positive(i_gf, "integral g*f^(alpha-1)")
        - (1.0 / (1.0 - a)) * _log_positive(i_ga, "integral g^alpha")
        + _log_positive(i_fa, "integral f^alpha")
    )
    err = abs(c) * e1 / i_gf + abs(1.0 / (1.0 - a)) * e2 / i_ga + e3 / i_fa
    method = "exact-sum" if g.kind == "discrete" else "quadrature"
    return DivergenceValue(value, method, err)


def _lnre_limit(g, f, alpha):
    """alpha == beta branch:

    RE = I[g^alpha log(g/f)] / I[g^alpha] + (1/alpha) log(I[f^alpha]/I[g^alpha]).
    """
    if g.kind == "discrete":
        gv, fv = g.pdf(g.points), f.pdf(f.points)
        if np.any((gv > 0) & (fv <= 0)):
            raise SupportMismatch("g puts mass where f vanishes")
        mask = gv > 0
        i_log = float(np.sum(gv[mask] ** alpha * np.log(gv[mask] / fv[mask])))
        e1 = 0.0
    else:
        if not _contains(f.support, g.support):
            raise SupportMismatch("support of g is not contained in support of f")

        def integrand(y):
            arr = np.asarray([y], dtype=float)
            gv = float(g.pdf(arr)[0])
            if gv < LOG_TAIL_CUTOFF:
                return 0.0
            fv = float(f.pdf(arr)[0])
            if fv <= 0.0:
                raise SupportMismatch(f"f vanishes at y={y:.6g} where g > 0")
            return gv**alpha * (math.log(gv) - math.log(fv))

        i_log, e1 = _quad(integrand, g.support[0], g.support[1])
    i_ga, e2 = _power_integral(g, alpha)
    i_fa, e3 = _power_integral(f, alpha)
    if i_ga <= 0:
        raise LogOfNonPositive("integral g^alpha is not positive")
    value = i_log / i_ga + (1.0 / alpha) * (
        _log_positive(i_fa, "integral f^alpha") - math.log(i_ga)
    )
    err = e1 / i_ga + e2 * (abs(i_log) / i_ga**2 + 1.0 / (alpha * i_ga)) + e3 / (
        alpha * i_fa
    )
    return value, err


def lnre(g: ScalarDensity, f: ScalarDensity, t: TuningPair) -> DivergenceValue:
    """Logarithmic norm relative entropy with tuning (alpha, beta).

    RE = alpha/(beta(beta-alpha)) log I[g^beta f^(alpha-beta)]
         - 1/(beta-alpha) log I[g^alpha] + (1/beta) log I[f^alpha]

    for alpha != beta; the alpha == beta branch uses the explicit limit
    formula, and alpha == beta == 1 delegates to the KLD.
    """
    _check_pair(g, f)
    a, b = t.alpha, t.beta
    if b == 0.0:
        raise ValueError("beta = 0 lies outside the LNRE definition")
    if a == b:
        if a == 1.0:
            return kld(g, f)
        value, err = _lnre_limit(g, f, a)
        method = "exact-sum" if g.kind == "discrete" else "quadrature"
        return DivergenceValue(value, method, err)
    i_cross, e1 = _cross_integral(g, f, b, a - b)
    i_ga, e2 = _power_integral(g, a)
    i_fa, e3 = _power_integral(f, a)
    c1 = a / (b * (b - a))
    c2 = 1.0 / (b - a)
    c3 = 1.0 / b
    value = (
        c1 * _log_positive(i_cross, "integral g^beta f^(alpha-beta)")
        - c2 * _log_positive(i_ga, "integral g^alpha")
        + c3 * _log_positive(i_fa, "integral f^alpha")
    )
    err = abs(c1) * e1 / i_cross + abs(c2) * e2 / i_ga + abs(c3) * e3 / i_fa
    method = "exact-sum" if g.kind == "discrete" else "quadrature"
    return DivergenceValue(value, method, err)
