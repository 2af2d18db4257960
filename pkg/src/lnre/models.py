"""Parametric density families.

The central object is the two-sided Student family indexed by a degrees of
freedom parameter nu != 0:

* nu > 0 gives the usual Student's t density on the whole real line;
* nu < 0 gives the compactly supported Student's r density on
  {y : ((y - mu)/sigma)^2 < -nu}.

Both share the kernel ``[1 + (y - mu)^2 / (nu sigma^2)]_+ ^ (-(nu+1)/2)``.
The r-branch normalizing constant is
``Gamma(1 - nu/2) / (Gamma((1 - nu)/2) * sqrt(-pi nu sigma^2))``, the unique
constant under which the kernel integrates to one (a Beta-function identity;
validated against quadrature in the test suite).

Also provided: normal and Bernoulli helpers, contamination mixtures, and the
power-law family representation ``N(lam) [h(y) + w(lam)^T f(y)]^(1/(a-b))``
of the Student family used by the sufficiency machinery.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special

from .divergences import ScalarDensity, TuningPair, _quad
from .errors import InvalidParams, InvalidTuning, OutsideSupport


@dataclass(frozen=True)
class StudentParams:
    """Location mu, squared scale sigma2 > 0 and degrees of freedom nu != 0."""

    mu: float
    sigma2: float
    nu: float

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise InvalidParams(f"sigma2 must be positive, got {self.sigma2}")
        if self.nu == 0:
            raise InvalidParams("nu must be nonzero")

    @property
    def sigma(self) -> float:
        return float(np.sqrt(self.sigma2))

    @property
    def is_t_branch(self) -> bool:
        return self.nu > 0

    @property
    def support(self) -> tuple:
        """(lower, upper); the whole line for nu > 0, compact for nu < 0."""
        if self.nu > 0:
            return (-np.inf, np.inf)
        half = self.sigma * np.sqrt(-self.nu)
        return (self.mu - half, self.mu + half)


def _student_normalizer(nu: float, sigma2: float) -> float:
    if nu > 0:
        return float(
            np.exp(special.gammaln((nu + 1) / 2) - special.gammaln(nu / 2))
            / np.sqrt(np.pi * nu * sigma2)
        )
    return float(
        np.exp(special.gammaln(1 - nu / 2) - special.gammaln((1 - nu) / 2))
        / np.sqrt(-np.pi * nu * sigma2)
    )


def student_pdf(y, p: StudentParams):
    """Density of the Student family; zero outside the r-branch support."""
    y = np.asarray(y, dtype=float)
    bracket = 1.0 + (y - p.mu) ** 2 / (p.nu * p.sigma2)
    coef = _student_normalizer(p.nu, p.sigma2)
    expo = -(p.nu + 1) / 2
    with np.errstate(invalid="ignore", divide="ignore"):
        vals = np.where(bracket > 0, coef * np.maximum(bracket, 0.0) ** expo, 0.0)
    return vals if vals.ndim else float(vals)


def student_score(y, p: StudentParams):
    """Gradient of log density in (mu, sigma2), at points strictly inside
    the support.

    Components: [(nu+1)(y-mu) / (nu sigma^2 B), ((y-mu)^2 - sigma^2) /
    (2 sigma^4 B)] with B = 1 + (y-mu)^2/(nu sigma^2).
    """
    y = np.asarray(y, dtype=float)
    bracket = 1.0 + (y - p.mu) ** 2 / (p.nu * p.sigma2)
    if np.any(bracket <= 0):
        raise OutsideSupport("score requested outside the open support")
    d_mu = (p.nu + 1) * (y - p.mu) / (p.nu * p.sigma2 * bracket)
    d_s2 = ((y - p.mu) ** 2 - p.sigma2) / (2 * p.sigma2**2 * bracket)
    return np.stack([d_mu, d_s2])


def _student_draw(rng: np.random.Generator, n: int, p: StudentParams) -> np.ndarray:
    if p.nu > 0:
        # ratio construction Z / sqrt(V/nu) via the generator primitive
        return p.mu + p.sigma * rng.standard_t(p.nu, size=n)
    # exact rejection-free draw: U = 2B - 1, B ~ Beta((1-nu)/2, (1-nu)/2),
    # scaled to the compact support
    a = (1 - p.nu) / 2
    u = 2.0 * rng.beta(a, a, size=n) - 1.0
    return p.mu + p.sigma * np.sqrt(-p.nu) * u


def student_sample(n: int, p: StudentParams, seed: int) -> np.ndarray:
    """n i.i.d. draws, deterministic given the seed."""
    if n < 1:
        raise InvalidParams("need n >= 1 draws")
    rng = np.random.default_rng(seed)
    return _student_draw(rng, n, p)


def student_density(p: StudentParams) -> ScalarDensity:
    return ScalarDensity(
        pdf=lambda y: student_pdf(y, p),
        support=p.support,
        kind="continuous",
        loc=p.mu,
        scale=p.sigma,
    )


def normal_pdf(y, mean: float, var: float):
    y = np.asarray(y, dtype=float)
    return np.exp(-((y - mean) ** 2) / (2 * var)) / np.sqrt(2 * np.pi * var)


def normal_density(mean: float, var: float) -> ScalarDensity:
    if not var > 0:
        raise InvalidParams("variance must be positive")
    return ScalarDensity(
        pdf=lambda y: normal_pdf(y, mean, var),
        support=(-np.inf, np.inf),
        kind="continuous",
        loc=mean,
        scale=float(np.sqrt(var)),
    )


def bernoulli_density(p: float) -> ScalarDensity:
    if not 0 <= p <= 1:
        raise InvalidParams("Bernoulli parameter must lie in [0, 1]")

    def pmf(y):
        y = np.asarray(y, dtype=float)
        return np.where(y == 1.0, p, np.where(y == 0.0, 1.0 - p, 0.0))

    return ScalarDensity(pdf=pmf, support=(0.0, 1.0), kind="discrete")


@dataclass(frozen=True)
class MixtureSpec:
    """(1 - eta) * Student(base) + eta * N(cont_mean, cont_var)."""

    eta: float
    base: StudentParams
    cont_mean: float = 0.0
    cont_var: float = 16.0

    def __post_init__(self):
        if not 0 <= self.eta <= 1:
            raise InvalidParams(f"eta must lie in [0, 1], got {self.eta}")
        if not self.cont_var > 0:
            raise InvalidParams("contaminant variance must be positive")


def mixture_pdf(y, m: MixtureSpec):
    y = np.asarray(y, dtype=float)
    vals = (1.0 - m.eta) * student_pdf(y, m.base) + m.eta * normal_pdf(
        y, m.cont_mean, m.cont_var
    )
    return vals if vals.ndim else float(vals)


def mixture_draw(rng: np.random.Generator, n: int, m: MixtureSpec) -> np.ndarray:
    """Component-choice sampling with a caller-owned generator."""
    pick = rng.random(n) < m.eta
    base = _student_draw(rng, n, m.base)
    cont = rng.normal(m.cont_mean, np.sqrt(m.cont_var), size=n)
    return np.where(pick, cont, base)


def mixture_sample(n: int, m: MixtureSpec, seed: int) -> np.ndarray:
    if n < 1:
        raise InvalidParams("need n >= 1 draws")
    return mixture_draw(np.random.default_rng(seed), n, m)


def mixture_density(m: MixtureSpec) -> ScalarDensity:
    if m.eta == 0:
        return student_density(m.base)
    scale = max(m.base.sigma, float(np.sqrt(m.cont_var)))
    return ScalarDensity(
        pdf=lambda y: mixture_pdf(y, m),
        support=(-np.inf, np.inf),
        kind="continuous",
        loc=(1 - m.eta) * m.base.mu + m.eta * m.cont_mean,
        scale=scale,
    )


@dataclass(frozen=True)
class MabRepresentation:
    """Power-law family form N(lam) [h(y) + w(lam)^T f(y)]^(1/(alpha-beta)).

    Anchored at a concrete Student parameter point; ``w`` remains callable
    on arbitrary (mu, sigma2) pairs for likelihood work.
    """

    h: Callable
    f_vec: tuple
    w: Callable
    tuning: TuningPair
    support: tuple
    normalizer: float
    params: StudentParams

    def bracket(self, y, lam=None):
        """h(y) + w(lam)^T f(y); defaults to the anchored parameters."""
        y = np.asarray(y, dtype=float)
        lam = (self.params.mu, self.params.sigma2) if lam is None else lam
        coeffs = self.w(lam)
        out = self.h(y).astype(float)
        for c, fi in zip(coeffs, self.f_vec):
            out = out + c * fi(y)
        return out

    def density(self, y):
        """Evaluated density at the anchored parameters."""
        y = np.asarray(y, dtype=float)
        expo = 1.0 / (self.tuning.alpha - self.tuning.beta)
        br = self.bracket(y)
        inside = (y >= self.support[0]) & (y <= self.support[1]) & (br > 0)
        with np.errstate(invalid="ignore"):
            vals = np.where(inside, self.normalizer * np.maximum(br, 0.0) ** expo, 0.0)
        return vals if vals.ndim else float(vals)


def student_tuning(nu: float, beta: float) -> TuningPair:
    """The (alpha, beta) pair tied to the Student family: alpha = beta - 2/(nu+1)."""
    alpha = beta - 2.0 / (nu + 1.0)
    if alpha <= 0:
        raise InvalidTuning(
            f"alpha = beta - 2/(nu+1) = {alpha:.6g} must be positive"
        )
    return TuningPair(alpha=alpha, beta=beta)


def represent_student_as_mab(p: StudentParams, beta: float) -> MabRepresentation:
    """Student density in power-law family form.

    With l = 1/nu the kernel expands as

        [1 + (y-mu)^2/(nu sigma^2)]^(-(nu+1)/2)
            = ((sigma^2 + l mu^2)/sigma^2)^(1/(a-b))
              * [1 + y^2 l/(sigma^2 + l mu^2) - y 2 l mu/(sigma^2 + l mu^2)]^(1/(a-b))

    so h = 1, f = [y^2, y] and the two w components read off the bracket.

    The t branch requires nu > 1 (the representation's tuning pairing); the
    density itself is defined for any nu > 0.
    """
    if 0 < p.nu <= 1:
        raise InvalidParams("the power-law representation needs nu > 1 on the t branch")
    t = student_tuning(p.nu, beta)
    l = 1.0 / p.nu

    def w(lam):
        mu, sigma2 = lam
        denom = sigma2 + l * mu**2
        return np.array([l / denom, -2.0 * l * mu / denom])

    front = _student_normalizer(p.nu, p.sigma2)
    # N(lam) soaks up the lambda-dependent factor pulled out of the bracket
    normalizer = front * (1.0 + p.mu**2 / (p.nu * p.sigma2)) ** (-(p.nu + 1) / 2)
    return MabRepresentation(
        h=lambda y: np.ones_like(np.asarray(y, dtype=float)),
        f_vec=(lambda y: np.asarray(y, dtype=float) ** 2,
               lambda y: np.asarray(y, dtype=float)),
        w=w,
        tuning=t,
        support=p.support,
        normalizer=normalizer,
        params=p,
    )


def student_power_integral(p: StudentParams, power: float) -> float:
    """Quadrature of student_pdf**power over the support."""
    dens = student_density(p)
    val, _ = _quad(lambda y: student_pdf(y, p) ** power, *dens.support)
    return val
