"""Minimum-LNRE estimators for the Student families.

Student's t (nu > 0): closed form.  The location estimate is the weighted
mean T1 and the scale estimate is

    sigma2_hat = (1 - C1)/(1 + nu C1) * (T2 - T1^2),

with C1 = 1 - ((nu+1)/nu) (m - 3/2)/(m - 1), m = (nu+1) beta / 2, valid for
beta > 3/(nu+1).  At beta = 1 this reduces to the minimum-DPD/LDPD estimate
((nu-2)/nu) times the raw variance.

Student's r (nu < -1): the support depends on the parameter, so the
objective carries per-observation indicators.  The feasible range splits
into elementary cells on which the active observation set is constant; on
each cell the objective is unimodal and the local maximizer is the median
of {cell lower bound, cell upper bound, interior stationary point}.  The
global estimate is the best local maximizer.  Cells are built by a sweep
over sorted interval endpoints, which reproduces the nested set-difference
construction exactly.

Objectives for the r branch are reported on the scale

    psi(lam) = (sigma^2)^(-(a-b)/(2a)) * sum_active w_j [1 + l (y_j-mu)^2/sigma^2],

a parameter-free monotone transform of the LNRE objective (l = 1/nu).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .divergences import _quad
from .errors import (
    DegenerateSample,
    EmptyInput,
    InvalidParams,
    NoFeasibleCell,
    TuningOutOfRange,
)
from .kde import WeightedSample, weighted_sample

ARGMAX_TIE_TOL = 1e-12


@dataclass(frozen=True)
class Cell:
    lower: float
    upper: float
    active: tuple  # 0-based indices of observations whose interval covers the cell


@dataclass(frozen=True)
class IntervalPartition:
    """Disjoint elementary cells with constant active sets."""

    breakpoints: np.ndarray
    cells: tuple

    def __len__(self):
        return len(self.cells)


@dataclass
class LocalMax:
    cell_index: int
    cell: Cell
    candidate: float
    objective: float


@dataclass
class EstimateRecord:
    """An estimate plus the evidence that produced it."""

    estimate: object  # float, or (mu, sigma2) for the joint t fit
    beta: float
    alpha: float
    objective: float
    local_maximizers: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)


def c1_constant(nu: float, beta: float) -> float:
    """The scale-equation constant C1 for the t branch.

    C1 = [I (t^2-1)(nu+t^2)^(-m) dt] / [I (nu+t^2)^(1-m) dt]
       = 1 - ((nu+1)/nu) (m - 3/2) / (m - 1),     m = (nu+1) beta / 2,

    finite exactly when beta > 3/(nu+1).
    """
    if nu <= 0:
        raise InvalidParams("C1 is defined for the t branch (nu > 0)")
    if not beta > 3.0 / (nu + 1.0):
        raise TuningOutOfRange(
            f"beta must exceed 3/(nu+1) = {3.0 / (nu + 1.0):.6g}, got {beta}"
        )
    m = (nu + 1.0) * beta / 2.0
    return 1.0 - ((nu + 1.0) / nu) * (m - 1.5) / (m - 1.0)


def c1_quadrature(nu: float, beta: float) -> float:
    """Independent evaluation of C1 by direct quadrature of its definition."""
    m = (nu + 1.0) * beta / 2.0
    num, _ = _quad(lambda t: (t * t - 1.0) * (nu + t * t) ** (-m), -np.inf, np.inf)
    den, _ = _quad(lambda t: (nu + t * t) ** (1.0 - m), -np.inf, np.inf)
    return num / den


def scale_shrink_factor(nu: float, beta: float) -> float:
    """(1 - C1)/(1 + nu C1); equals (nu-2)/nu at beta = 1."""
    c1 = c1_constant(nu, beta)
    return (1.0 - c1) / (1.0 + nu * c1)


def mlnree_student_t(
    sample,
    nu: float,
    beta: float,
    bandwidth_rule="silverman",
    weights: WeightedSample | None = None,
) -> EstimateRecord:
    """Closed-form minimum-LNRE fit of (mu, sigma2) for Student's t.

    ``weights`` may be supplied to reuse a cached KDE; otherwise they are
    built here (beta = 1 needs no KDE at all).
    """
    if nu <= 1:
        raise InvalidParams("the t-branch estimator requires nu > 1")
    y = np.asarray(sample, dtype=float)
    if y.size < 2:
        raise DegenerateSample("need at least two observations")
    shrink = scale_shrink_factor(nu, beta)  # validates beta > 3/(nu+1)
    ws = weights if weights is not None else weighted_sample(y, beta, bandwidth_rule)
    wsum = ws.weights.sum()
    t1 = float(np.dot(ws.weights, ws.values) / wsum)
    t2 = float(np.dot(ws.weights, ws.values**2) / wsum)
    spread = t2 - t1 * t1
    if spread <= 0:
        raise DegenerateSample("weighted variance T2 - T1^2 is not positive")
    sigma2 = shrink * spread
    alpha = beta - 2.0 / (nu + 1.0)
    return EstimateRecord(
        estimate=(t1, sigma2),
        beta=beta,
        alpha=alpha,
        objective=math.nan,
        diagnostics={
            "c1": c1_constant(nu, beta),
            "shrink": shrink,
            "t1": t1,
            "t2": t2,
            "nu": nu,
        },
    )


def build_partition(intervals: Sequence) -> IntervalPartition:
    """Sweep-line decomposition of a union of intervals into elementary cells.

    Collect the 2n endpoints, sort them, and form one cell per consecutive
    pair; a cell's active set is every interval containing it.  Cells
    covered by no interval (gaps) are dropped.  A trailing unbounded cell is
    added when some interval is right-unbounded.
    """
    if len(intervals) == 0:
        raise EmptyInput("no intervals to partition")
    lowers = np.array([iv[0] for iv in intervals], dtype=float)
    uppers = np.array([iv[1] for iv in intervals], dtype=float)
    if np.any(lowers >= uppers):
        raise InvalidParams("each interval needs lower < upper")
    finite = np.concatenate([lowers, uppers[np.isfinite(uppers)]])
    points = np.unique(finite)
    cells = []
    for lo, hi in zip(points[:-1], points[1:]):
        active = tuple(np.nonzero((lowers <= lo) & (uppers >= hi))[0])
        if active:
            cells.append(Cell(float(lo), float(hi), active))
    if np.any(np.isinf(uppers)):
        lo = float(points[-1])
        active = tuple(np.nonzero((lowers <= lo) & np.isinf(uppers))[0])
        if active:
            cells.append(Cell(lo, np.inf, active))
    if not cells:
        raise NoFeasibleCell("every elementary cell is empty")
    return IntervalPartition(breakpoints=points, cells=tuple(cells))


def _median3(lo: float, hi: float, stat: float) -> float:
    return min(max(stat, lo), hi) if math.isfinite(hi) else max(stat, lo)


def _pick_global(local: list) -> LocalMax:
    best = None
    for lm in local:
        if best is None or lm.objective > best.objective + ARGMAX_TIE_TOL:
            best = lm
        elif abs(lm.objective - best.objective) <= ARGMAX_TIE_TOL:
            if lm.candidate < best.candidate:  # deterministic tie-break
                best = lm
    return best


def _r_branch_tuning(nu: float, beta: float) -> float:
    if nu >= -1:
        raise InvalidParams(
            "the r-branch piecewise estimators require nu < -1 "
            "(the density exponent must be positive)"
        )
    alpha = beta - 2.0 / (nu + 1.0)
    if alpha <= 0:
        raise TuningOutOfRange(
            f"alpha = beta - 2/(nu+1) = {alpha:.6g} must be positive"
        )
    return alpha


def mlnree_student_r_location(
    sample,
    nu: float,
    sigma2: float,
    beta: float,
    bandwidth_rule="silverman",
    weights: WeightedSample | None = None,
) -> EstimateRecord:
    """Piecewise maximization of the location objective, scale known.

    The observation intervals are I_j = [y_j - sigma d, y_j + sigma d] with
    d = sqrt(-nu).  On each cell the objective is concave quadratic, so the
    local maximizer is the weighted mean of the active observations clipped
    to the cell.
    """
    alpha = _r_branch_tuning(nu, beta)
    if not sigma2 > 0:
        raise InvalidParams("known sigma2 must be positive")
    y = np.asarray(sample, dtype=float)
    if y.size == 0:
        raise EmptyInput("empty sample")
    ws = weights if weights is not None else weighted_sample(y, beta, bandwidth_rule)
    vals, wts = ws.values, ws.weights
    sigma = math.sqrt(sigma2)
    half = sigma * math.sqrt(-nu)
    part = build_partition([(v - half, v + half) for v in vals])
    l = 1.0 / nu

    local = []
    for i, cell in enumerate(part.cells):
        idx = np.asarray(cell.active, dtype=np.intp)
        w = wts[idx]
        v = vals[idx]
        wsum = w.sum()
        mean = float(np.dot(w, v) / wsum)
        cand = _median3(cell.lower, cell.upper, mean)
        obj = float(np.sum(w * (1.0 + l * (v - cand) ** 2 / sigma2)))
        local.append(LocalMax(i, cell, cand, obj))
    best = _pick_global(local)
    return EstimateRecord(
        estimate=best.candidate,
        beta=beta,
        alpha=alpha,
        objective=best.objective,
        local_maximizers=local,
        diagnostics={
            "nu": nu,
            "l": l,
            "d": math.sqrt(-nu),
            "sigma2": sigma2,
            "cell": (best.cell.lower, best.cell.upper),
            "partition": part,
        },
    )


def scale_stationary_factor(nu: float, beta: float) -> float:
    """(1 - alpha(nu+1)) / (-nu): the coefficient of the weighted squared
    deviation mean at the interior stationary point of the scale objective.

    Specializations: (3 + 2 beta)/3 at nu = -3 and (3 + 6 beta)/7 at nu = -7.
    """
    alpha = _r_branch_tuning(nu, beta)
    return (1.0 - alpha * (nu + 1.0)) / (-nu)


def _scale_objective_exponent(nu: float, beta: float) -> float:
    alpha = beta - 2.0 / (nu + 1.0)
    return (alpha - beta) / (2.0 * alpha)


def mlnree_student_r_scale(
    sample,
    nu: float,
    mu: float,
    beta: float,
    bandwidth_rule="silverman",
    weights: WeightedSample | None = None,
) -> EstimateRecord:
    """Piecewise maximization of the scale objective, location known.

    The observation intervals are K_j = [(y_j - mu)^2 / (-nu), inf); cells
    are swept in order of |y_j - mu|.  On each cell the objective rises to
    the stationary point s* = factor * weighted mean of (y_j - mu)^2 and
    falls beyond it, so the local maximizer is median{L, U, s*}.
    """
    alpha = _r_branch_tuning(nu, beta)
    y = np.asarray(sample, dtype=float)
    if y.size == 0:
        raise EmptyInput("empty sample")
    ws = weights if weights is not None else weighted_sample(y, beta, bandwidth_rule)
    ws = ws.reordered_by(np.abs(ws.values - mu))
    vals, wts = ws.values, ws.weights
    dev2 = (vals - mu) ** 2
    if dev2[-1] == 0.0:
        raise DegenerateSample("all observations equal the known location")
    if dev2[0] == 0.0:
        raise DegenerateSample(
            "an observation coincides with the known location: "
            "the scale likelihood is unbounded as sigma2 -> 0"
        )
    lowers = dev2 / (-nu)
    part = build_partition([(lo, np.inf) for lo in lowers])
    l = 1.0 / nu
    a = _scale_objective_exponent(nu, beta)
    factor = (1.0 - alpha * (nu + 1.0)) / (-nu)

    local = []
    for i, cell in enumerate(part.cells):
        idx = np.asarray(cell.active, dtype=np.intp)
        w = wts[idx]
        d2 = dev2[idx]
        wsum = w.sum()
        stat = factor * float(np.dot(w, d2) / wsum)
        cand = _median3(cell.lower, cell.upper, stat)
        obj = float(cand ** (-a) * np.sum(w * (1.0 + l * d2 / cand)))
        local.append(LocalMax(i, cell, cand, obj))
    best = _pick_global(local)
    return EstimateRecord(
        estimate=best.candidate,
        beta=beta,
        alpha=alpha,
        objective=best.objective,
        local_maximizers=local,
        diagnostics={
            "nu": nu,
            "l": l,
            "d": math.sqrt(-nu),
            "mu": mu,
            "stationary_factor": factor,
            "objective_exponent": a,
            "cell": (best.cell.lower, best.cell.upper),
            "partition": part,
        },
    )


def r_location_objective(mu_grid, ws: WeightedSample, nu: float, sigma2: float):
    """Full indicator-bearing location objective on a grid (oracle use)."""
    mu_grid = np.asarray(mu_grid, dtype=float)
    l = 1.0 / nu
    half = math.sqrt(sigma2) * math.sqrt(-nu)
    terms = 1.0 + l * (ws.values[None, :] - mu_grid[:, None]) ** 2 / sigma2
    inside = np.abs(ws.values[None, :] - mu_grid[:, None]) <= half
    return (ws.weights[None, :] * terms * inside).sum(axis=1)


def r_scale_objective(s2_grid, ws: WeightedSample, nu: float, mu: float, beta: float):
    """Full indicator-bearing scale objective on a grid (oracle use)."""
    s2_grid = np.asarray(s2_grid, dtype=float)
    l = 1.0 / nu
    a = _scale_objective_exponent(nu, beta)
    dev2 = (ws.values - mu) ** 2
    terms = 1.0 + l * dev2[None, :] / s2_grid[:, None]
    inside = dev2[None, :] <= (-nu) * s2_grid[:, None]
    inner = (ws.weights[None, :] * terms * inside).sum(axis=1)
    return s2_grid ** (-a) * inner
