"""Area multipliers of the circumscribed/inscribed axis rectangles and the
shape function solving ``rho_t(theta, sigma) = rho0``.

All multipliers are expressed relative to the area of the rotated
rectangle, as functions of the angle ``theta`` of its long side and its
shape ``sigma = long / short``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .errors import DegenerateShape, EmptyInput, Infeasible

SOLVER_MAX_ITER = 200
SOLVER_RTOL = 1e-10


def feasibility_floor(t: float) -> float:
    """Smallest admissible ``rho0`` for a given ``t``: ``4((1-t)/(1-2t))^2``."""
    return 4.0 * ((1.0 - t) / (1.0 - 2.0 * t)) ** 2


@dataclass(frozen=True)
class ShapeLawParams:
    t: float
    rho0: float

    def __post_init__(self):
        if not 0.0 < self.t < 0.5:
            raise ValueError(f"t must lie in (0, 1/2), got {self.t}")
        if not math.isfinite(self.rho0):
            raise ValueError("rho0 must be finite")
        if self.rho0 < feasibility_floor(self.t):
            raise ValueError(
                f"rho0={self.rho0} is below the feasibility floor {feasibility_floor(self.t):.6g} for t={self.t}"
            )

    @property
    def sigma_min(self) -> float:
        return 1.0 / (1.0 - 2.0 * self.t)


@dataclass(frozen=True)
class GrowthFit:
    c1: float
    c2: float

    @property
    def spread(self) -> float:
        return self.c2 / self.c1


def area_multipliers(t: float, theta: float, sigma: float) -> tuple[float, float]:
    """Return ``(|R_hat|/|R|, |R_check|/|R|)``.

    The second value is not clamped; it is nonpositive once ``sigma`` reaches
    the critical shape.
    """
    a = 1.0 - 2.0 * t
    s2, c2 = math.sin(2.0 * theta), math.cos(2.0 * theta)
    a_hat = 1.0 + 0.5 * (sigma + 1.0 / sigma) * s2
    a_check = a * c2 + 0.5 * (1.0 / sigma - a * a * sigma) * s2
    return a_hat, a_check


def sigma_star(t: float, theta: float) -> float:
    """Critical shape at which the inscribed rectangle degenerates."""
    cot = math.cos(2.0 * theta) / math.sin(2.0 * theta)
    return (cot + math.sqrt(1.0 + cot * cot)) / (1.0 - 2.0 * t)


def _require_subcritical(t, theta, sigma):
    a_hat, a_check = area_multipliers(t, theta, sigma)
    if a_check <= 0.0 or sigma >= sigma_star(t, theta):
        raise DegenerateShape(
            f"sigma={sigma!r} is not below the critical shape {sigma_star(t, theta)!r} (t={t}, theta={theta})"
        )
    return a_hat, a_check


def rho(t: float, theta: float, sigma: float) -> float:
    a_hat, a_check = _require_subcritical(t, theta, sigma)
    return a_hat / a_check


def rho_partials(t: float, theta: float, sigma: float) -> tuple[float, float]:
    """Closed-form ``(d rho / d sigma, d rho / d theta)``."""
    _, a_check = _require_subcritical(t, theta, sigma)
    a = 1.0 - 2.0 * t
    s2, c2, s4 = math.sin(2 * theta), math.cos(2 * theta), math.sin(4 * theta)
    inv2 = 1.0 / (sigma * sigma)
    d_sigma = (
        s2 * s2 * (1 + a * a) / (2 * sigma)
        + 0.25 * a * s4 * (1 - inv2)
        + 0.5 * s2 * (inv2 + a * a)
    )
    d_theta = a * (sigma + 1 / sigma) + 2 * a * s2 + (a * a * sigma - 1 / sigma) * c2
    sq = a_check * a_check
    return d_sigma / sq, d_theta / sq


def solve_sigma(params: ShapeLawParams, theta: float) -> float:
    """Shape ``sigma`` with ``rho_t(theta, sigma) = rho0``, by bisection.

    The bracket is ``[1/(1-2t), sigma_star)``; ``rho`` is increasing in
    ``sigma`` there and blows up at the right end.
    """
    if not 0.0 < theta <= math.pi / 6:
        raise ValueError(f"theta must lie in (0, pi/6], got {theta}")
    t, rho0 = params.t, params.rho0
    lo = params.sigma_min
    hi = sigma_star(t, theta)
    r_lo = rho(t, theta, lo)
    if r_lo > rho0:
        raise Infeasible(f"rho at sigma={lo} is {r_lo} > rho0={rho0}")
    if abs(r_lo - rho0) <= SOLVER_RTOL * rho0:
        return lo
    for _ in range(SOLVER_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        _, a_check = area_multipliers(t, theta, mid)
        if a_check <= 0.0:
            hi = mid
            continue
        if rho(t, theta, mid) < rho0:
            lo = mid
        else:
            hi = mid
    # bisect to floating-point resolution, then take the better end
    residuals = []
    for s in (lo, hi):
        try:
            residuals.append((abs(rho(t, theta, s) - rho0), s))
        except DegenerateShape:
            pass
    err, best = min(residuals)
    if err > SOLVER_RTOL * rho0:
        raise Infeasible(f"bisection did not reach rho0={rho0} at theta={theta}")
    return best


def sigma_lower_bound(t: float, rho0: float, theta: float) -> float:
    a = 1.0 - 2.0 * t
    c2 = math.cos(2.0 * theta)
    return (a * rho0 - 1.0 / c2) / (a * a * rho0 + 1.0) * (c2 / math.sin(2.0 * theta))


def growth_fit(samples: Iterable[tuple[float, float]]) -> GrowthFit:
    """Envelope constants ``c1 <= theta * sigma(theta) <= c2`` over the samples."""
    products = []
    for theta, sigma in samples:
        if theta <= 0:
            raise ValueError("angles must be positive")
        products.append(theta * sigma)
    if not products:
        raise EmptyInput("growth_fit needs at least one sample")
    return GrowthFit(min(products), max(products))
