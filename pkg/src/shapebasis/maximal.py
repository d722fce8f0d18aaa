"""Rectangle averages, finite-family maximal values and weak-type probes.

Every family here is finite, so superlevel measures computed from it are
lower bounds for those of the full maximal operator.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import PhiMassZero, WindowTooSmall
from .geometry import Point2, Rectangle, check_rect, clip_convex, hat_rect, polygon_area, rect_polygon
from .orlicz import SimpleFunction, YoungFunction, phi_integral
from .sampling import MeasureEstimate, stratified_fraction

SLACK = 1e-12


@dataclass(frozen=True)
class RectFamily:
    members: tuple[Rectangle, ...]
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


@dataclass(frozen=True)
class WeakTypeReport:
    lam: float
    superlevel: MeasureEstimate
    phiMass: float

    @property
    def cLower(self) -> float:
        return self.superlevel.value / self.phiMass


def average_over(r: Rectangle, f: SimpleFunction) -> float:
    """Exact mean of ``f`` over ``r`` via polygon clipping."""
    # clip in a frame centered on r to keep rounding relative to r's size
    cx, cy = r.center
    poly = rect_polygon(Rectangle(Point2(0.0, 0.0), r.theta, r.long, r.short))
    total = 0.0
    for c, support in f.terms:
        if c:
            total += c * polygon_area(clip_convex(support.translated(-cx, -cy), poly))
    return total / r.area


def family_averages(fam: RectFamily, f: SimpleFunction) -> np.ndarray:
    return np.array([average_over(r, f) for r in fam.members])


def _maximal_values(fam: RectFamily, averages: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Finite-family maximal function at each point; NaN where no member contains it."""
    out = np.full(len(pts), -np.inf)
    for r, a in zip(fam.members, averages):
        inside = r.contains(pts[:, 0], pts[:, 1])
        np.maximum(out, np.where(inside, a, -np.inf), out=out)
    out[np.isneginf(out)] = np.nan
    return out


def maximal_at(x: Point2, fam: RectFamily, f: SimpleFunction) -> float | None:
    best = None
    for r in fam.members:
        if bool(r.contains(x[0], x[1])):
            a = average_over(r, f)
            if best is None or a > best:
                best = a
    return best


def _check_window(fam: RectFamily, window: Rectangle):
    for i, r in enumerate(fam.members):
        vs = np.array(r.vertices())
        scale = max(window.long, 1.0)
        if not np.all(window.contains(vs[:, 0], vs[:, 1], tol=1e-12 * scale)):
            raise WindowTooSmall(f"family member {i} is not inside the sampling window")


def superlevel_measure(
    fam: RectFamily,
    f: SimpleFunction,
    lam: float,
    window: Rectangle,
    nSamples: int,
    seed: int,
    workers: int = 1,
) -> MeasureEstimate:
    """Monte Carlo estimate of ``|{x : M f(x) > lam}|`` for the finite family."""
    if nSamples < 1000:
        raise ValueError("nSamples must be at least 1000")
    _check_window(fam, window)
    averages = family_averages(fam, f)
    active = [r for r, a in zip(fam.members, averages) if a > lam]

    def indicator(pts):
        hit = np.zeros(len(pts), dtype=bool)
        for r in active:
            hit |= r.contains(pts[:, 0], pts[:, 1])
        return hit

    return stratified_fraction(window, indicator, nSamples, seed, workers)


def sandwich_check(r: Rectangle, t: float, rho0: float, f: SimpleFunction) -> tuple[bool, bool]:
    """Per-rectangle comparison of averages over ``check_rect(r)``, ``r`` and ``hat_rect(r)``."""
    inner = average_over(check_rect(r, t), f)
    mid = average_over(r, f)
    outer = average_over(hat_rect(r), f)
    scale = max(1.0, abs(inner), abs(mid), abs(outer))
    lhs_ok = inner <= rho0 * mid + SLACK * scale
    rhs_ok = mid <= rho0 * outer + SLACK * scale
    return lhs_ok, rhs_ok


def weak_type_probe(
    fam: RectFamily,
    f: SimpleFunction,
    phi: YoungFunction,
    lambdas: Sequence[float],
    window: Rectangle,
    nSamples: int,
    seed: int,
    workers: int = 1,
) -> list[WeakTypeReport]:
    reports = []
    for lam in lambdas:
        if not lam > 0:
            raise ValueError("lambda values must be positive")
        mass = phi_integral(phi, f, lam)
        if not mass > 0:
            raise PhiMassZero(f"Phi-mass of f at lambda={lam} is zero")
        est = superlevel_measure(fam, f, lam, window, nSamples, seed, workers)
        reports.append(WeakTypeReport(lam, est, mass))
    return reports
