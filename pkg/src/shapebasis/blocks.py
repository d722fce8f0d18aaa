"""The rotated block families ``R_k^i``, the test square ``Theta_k`` and
the checks showing that the block basis fails a weak-type Phi estimate.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .basis import BlockConfig, block_angles, check_angle_condition
from .errors import ContainmentFailed
from .geometry import ConvexPolygon, Point2, Rectangle, rect_polygon
from .maximal import RectFamily, _maximal_values, family_averages
from .orlicz import SimpleFunction, YoungFunction, necessity_ratio
from .sampling import MeasureEstimate, stratified_fraction, uniform_in_rectangle

ORIGIN = Point2(0.0, 0.0)


@dataclass(frozen=True)
class BlockFamily:
    k: int
    rects: tuple[Rectangle, ...]
    theta_set: ConvexPolygon
    config: BlockConfig

    @property
    def sigma(self) -> float:
        return self.config.sigmas[self.k]

    @property
    def count(self) -> int:
        return self.config.counts[self.k]

    def family(self) -> RectFamily:
        return RectFamily(self.rects, f"block k={self.k}")

    def test_function(self) -> SimpleFunction:
        """``sigma_k`` times the indicator of ``Theta_k``."""
        return SimpleFunction.indicator(self.theta_set, self.sigma)

    def bounding_window(self) -> Rectangle:
        boxes = np.array([r.bounding_box() for r in self.rects])
        x0, y0 = boxes[:, 0].min(), boxes[:, 1].min()
        x1, y1 = boxes[:, 2].max(), boxes[:, 3].max()
        return Rectangle.axis((0.5 * (x0 + x1), 0.5 * (y0 + y1)), x1 - x0, y1 - y0)


def rotated_unit_square(angle: float) -> ConvexPolygon:
    c, s = math.cos(angle), math.sin(angle)
    return ConvexPolygon(((0.0, 0.0), (c, s), (c - s, s + c), (-s, c)))


def build_family(cfg: BlockConfig, k: int) -> BlockFamily:
    angles = block_angles(cfg, k)
    if not check_angle_condition(cfg, k):
        warnings.warn(f"block {k} violates sin(gap) >= 4/sigma; overlap bounds may fail", stacklevel=2)
    sigma = cfg.sigmas[k]
    rects = tuple(Rectangle(ORIGIN, a, 2.0 * sigma, 2.0) for a in angles)
    return BlockFamily(k, rects, rotated_unit_square(cfg.thetas[k + 1]), cfg)


def containment_check(fam: BlockFamily, tol: float = 1e-12) -> bool:
    """Every vertex of ``Theta_k`` lies in every ``R_k^i``.

    ``tol`` absorbs rounding in the rotation only (absolute, in the unit of
    the short half-side).
    """
    vs = np.array(fam.theta_set.vertices)
    return all(bool(np.all(r.contains(vs[:, 0], vs[:, 1], tol=tol))) for r in fam.rects)


def uncovered_strip_check(fam: BlockFamily, nSamplesPerRect: int, seed: int) -> bool:
    """Points of ``R_k^i`` with long-axis coordinate beyond ``sigma_k/2`` meet no other ``R_k^j``."""
    if len(fam.rects) < 2:
        return True
    half = 0.5 * fam.sigma
    for i, r in enumerate(fam.rects):
        pts = uniform_in_rectangle(r, nSamplesPerRect, seed + i)
        u, _ = r.local(pts[:, 0], pts[:, 1])
        far = pts[np.abs(u) > half]
        for j, other in enumerate(fam.rects):
            if j != i and np.any(other.contains(far[:, 0], far[:, 1])):
                return False
    return True


def _union_indicator(rects):
    def indicator(pts):
        hit = np.zeros(len(pts), dtype=bool)
        for r in rects:
            hit |= r.contains(pts[:, 0], pts[:, 1])
        return hit

    return indicator


def union_area(fam: BlockFamily, nSamples: int, seed: int, workers: int = 1) -> MeasureEstimate:
    """Monte Carlo area of ``Y_k``, the union of the family, over its bounding box."""
    return stratified_fraction(fam.bounding_window(), _union_indicator(fam.rects), nSamples, seed, workers)


def rects_union_area(rects, window: Rectangle, nSamples: int, seed: int, workers: int = 1) -> MeasureEstimate:
    return stratified_fraction(window, _union_indicator(rects), nSamples, seed, workers)


def half_area_check(fam: BlockFamily, nSamples: int, seed: int, workers: int = 1) -> tuple[bool, float]:
    est = union_area(fam, nSamples, seed, workers)
    total = fam.count * 4.0 * fam.sigma
    ratio = est.value / total
    return ratio >= 0.5 - est.halfWidth95 / total, ratio


def quarter_bound_check(fam: BlockFamily, nSamples: int, seed: int) -> bool:
    """At sampled points of ``Y_k`` the family's maximal average of ``sigma_k 1_Theta`` is >= 1/4."""
    if not containment_check(fam):
        raise ContainmentFailed(f"Theta_{fam.k} is not contained in every R_k^i")
    family = fam.family()
    averages = family_averages(family, fam.test_function())
    window = fam.bounding_window()
    pts = uniform_in_rectangle(window, nSamples, seed)
    values = _maximal_values(family, averages, pts)
    covered = ~np.isnan(values)
    return bool(np.all(values[covered] >= 0.25 - 1e-12))


@dataclass(frozen=True)
class DivergenceRow:
    k: int
    necessity_ratio: float
    angle_ok: bool


def divergence_report(cfg: BlockConfig, phi: YoungFunction, kMax: int) -> tuple[list[DivergenceRow], float]:
    """Necessity ratios for ``k <= kMax`` and the growth summary last/first."""
    rows = [
        DivergenceRow(k, necessity_ratio(cfg, phi, k), check_angle_condition(cfg, k))
        for k in range(kMax + 1)
    ]
    growth = rows[-1].necessity_ratio / rows[0].necessity_ratio
    return rows, growth
