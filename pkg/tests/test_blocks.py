import math
import warnings

import numpy as np
import pytest

from shapebasis.basis import BlockConfig, corollary_config
from shapebasis.blocks import (
    BlockFamily,
    build_family,
    containment_check,
    divergence_report,
    half_area_check,
    quarter_bound_check,
    rects_union_area,
    rotated_unit_square,
    uncovered_strip_check,
    union_area,
)
from shapebasis.errors import ContainmentFailed
from shapebasis.geometry import Point2, Rectangle, polygon_area, rect_polygon
from shapebasis.maximal import average_over
from shapebasis.orlicz import identity_young, llogl

SQUARES = corollary_config([max(1, k * k) for k in range(9)], 8)


class TestBuildFamily:
    def test_single(self):
        cfg = corollary_config([1, 1, 1], 2)
        fam = build_family(cfg, 1)
        assert len(fam.rects) == 1
        assert fam.rects[0].theta == cfg.thetas[2]

    @pytest.mark.parametrize("k", range(2, 9))
    def test_areas_and_angles(self, k):
        fam = build_family(SQUARES, k)
        sigma = SQUARES.sigmas[k]
        gap = (SQUARES.thetas[k] - SQUARES.thetas[k + 1]) / SQUARES.counts[k]
        assert len(fam.rects) == SQUARES.counts[k]
        for i, r in enumerate(fam.rects):
            assert r.area == pytest.approx(4 * sigma, rel=1e-12)
            assert polygon_area(rect_polygon(r)) == pytest.approx(4 * sigma, rel=1e-12)
            assert r.theta == pytest.approx(SQUARES.thetas[k + 1] + i * gap, rel=1e-12)
            assert r.center == (0, 0) and bool(r.contains(0.0, 0.0))
        assert polygon_area(fam.theta_set) == pytest.approx(1, rel=1e-12)

    @pytest.mark.parametrize("angle", [0.0, 0.3, 2.0])
    def test_theta_set_area(self, angle):
        assert polygon_area(rotated_unit_square(angle)) == pytest.approx(1, rel=1e-12)

    def test_warns_on_violation(self):
        cfg = BlockConfig((0.2, 0.1), (20,), (4.0,))
        with pytest.warns(UserWarning):
            build_family(cfg, 0)


class TestContainment:
    @pytest.mark.parametrize("k", range(0, 9))
    def test_corollary(self, k):
        assert containment_check(build_family(SQUARES, k))

    def test_failing_family(self):
        # relative angle near pi/2 with sigma = 1: the rotated unit square pokes out
        cfg = BlockConfig((1.5, 0.01), (2,), (1.0,))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            fam = build_family(cfg, 0)
        assert not containment_check(fam)
        with pytest.raises(ContainmentFailed):
            quarter_bound_check(fam, 1000, 0)

    def test_single_rect(self):
        cfg = corollary_config([1, 1], 1)
        assert containment_check(build_family(cfg, 1))

    @pytest.mark.parametrize("k", range(2, 9))
    def test_quarter_average_exact(self, k):
        fam = build_family(SQUARES, k)
        f = fam.test_function()
        for r in fam.rects:
            assert average_over(r, f) == pytest.approx(0.25, rel=1e-12)


class TestUncoveredStrip:
    def test_two_rect_strip_geometry(self):
        # points in both strips satisfy |u| sin(beta) <= 2
        sigma, beta = 40.0, 0.2
        a = Rectangle(Point2(0, 0), 0.0, 2 * sigma, 2)
        b = Rectangle(Point2(0, 0), beta, 2 * sigma, 2)
        rng = np.random.default_rng(0)
        pts = rng.uniform(-sigma, sigma, (200_000, 2)) * np.array([1, 1 / sigma])
        both = a.contains(pts[:, 0], pts[:, 1]) & b.contains(pts[:, 0], pts[:, 1])
        u, _ = a.local(pts[both, 0], pts[both, 1])
        assert np.all(np.abs(u) * math.sin(beta) <= 2 + 1e-12)
        assert 2 / math.sin(beta) <= sigma / 2

    def test_single_is_vacuous(self):
        cfg = corollary_config([1, 1], 1)
        assert uncovered_strip_check(build_family(cfg, 1), 1000, 0)

    @pytest.mark.parametrize("k", range(2, 9))
    def test_corollary(self, k):
        assert uncovered_strip_check(build_family(SQUARES, k), 10_000, k)

    def test_violating_family_detected(self):
        cfg = BlockConfig((0.2, 0.1), (20,), (400.0,))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            fam = build_family(cfg, 0)
        assert not uncovered_strip_check(fam, 10_000, 0)


class TestUnionArea:
    def test_single(self):
        cfg = corollary_config([1, 1, 1], 2)
        fam = build_family(cfg, 2)
        est = union_area(fam, 100_000, 1)
        assert abs(est.value - 4 * fam.sigma) <= est.halfWidth95 + 1e-9

    def test_disjoint_copies(self):
        rects = [Rectangle(Point2(3 * i, 0), 0.4, 2, 1) for i in range(4)]
        window = Rectangle.axis((4.5, 0), 14, 4)
        est = rects_union_area(rects, window, 200_000, 2)
        assert abs(est.value - 8) <= est.halfWidth95

    def test_half_area_k4(self):
        cfg = corollary_config([1, 1, 4, 9, 16], 4)
        fam = build_family(cfg, 4)
        est = union_area(fam, 200_000, 3)
        assert est.value + est.halfWidth95 >= 0.5 * fam.count * 4 * fam.sigma

    @pytest.mark.parametrize("k", range(2, 9))
    def test_half_area_check(self, k):
        passed, ratio = half_area_check(build_family(SQUARES, k), 100_000, 10 + k)
        assert passed and ratio > 0.5

    def test_half_area_single(self):
        cfg = corollary_config([1, 1], 1)
        _, ratio = half_area_check(build_family(cfg, 1), 100_000, 0)
        assert ratio == pytest.approx(1, abs=0.02)

    def test_violating_family_reports(self):
        cfg = BlockConfig((0.2, 0.1), (50,), (4.0,))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            fam = build_family(cfg, 0)
        passed, ratio = half_area_check(fam, 100_000, 0)
        # the half-area bound is only guaranteed under the angle condition
        assert 0 < ratio <= 1
        assert isinstance(passed, bool)

    @pytest.mark.parametrize("k", range(2, 9))
    def test_ci_below_one_percent(self, k):
        fam = build_family(SQUARES, k)
        est = union_area(fam, 1_000_000, k)
        assert est.halfWidth95 < 0.01 * fam.count * 4 * fam.sigma


class TestQuarterBound:
    def test_k4(self):
        cfg = corollary_config([1, 1, 4, 9, 16], 4)
        assert quarter_bound_check(build_family(cfg, 4), 10_000, 0)


class TestDivergence:
    def test_identity(self):
        cfg = corollary_config([1, 2, 5, 7], 3)
        rows, growth = divergence_report(cfg, identity_young(), 3)
        assert [r.necessity_ratio for r in rows] == pytest.approx([1, 2, 5, 7])
        assert growth == pytest.approx(7)

    def test_squares(self):
        cfg = corollary_config([max(1, k * k) for k in range(41)], 40)
        rows, growth = divergence_report(cfg, llogl(1), 40)
        assert rows[20].necessity_ratio == pytest.approx(17.4, rel=0.01)
        assert rows[40].necessity_ratio == pytest.approx(41.9, rel=0.01)
        assert all(r.angle_ok for r in rows)
        assert growth > 1

    def test_constant_tends_to_zero(self):
        cfg = corollary_config([1] * 61, 60)
        rows, growth = divergence_report(cfg, llogl(1), 60)
        ratios = [r.necessity_ratio for r in rows]
        assert np.all(np.diff(ratios) < 0) and ratios[-1] < 0.03
