import math

import numpy as np
import pytest

from shapebasis.basis import corollary_config
from shapebasis.geometry import ConvexPolygon, Point2, Rectangle, rect_polygon
from shapebasis.orlicz import (
    SimpleFunction,
    identity_young,
    llogl,
    midpoint_convexity_violations,
    necessity_ratio,
    phi_integral,
)

UNIT = ConvexPolygon(((0, 0), (1, 0), (1, 1), (0, 1)))


class TestLlogl:
    def test_values(self):
        phi = llogl(1)
        assert phi(1.0) == 1.0
        assert phi(math.e) == pytest.approx(2 * math.e)
        assert phi(0) == 0

    @pytest.mark.parametrize("alpha", [0.5, 1, 2, 3.7])
    def test_linear_below_one(self, alpha):
        assert llogl(alpha)(0.5) == 0.5

    def test_rejects_nonpositive_alpha(self):
        with pytest.raises(ValueError):
            llogl(0)

    def test_vectorized(self):
        xs = np.array([0.0, 0.5, 1.0, math.e])
        assert np.allclose(llogl(1)(xs), [0, 0.5, 1, 2 * math.e])

    @pytest.mark.parametrize("alpha", [1, 1.5, 2, 3])
    def test_convex_nondecreasing(self, alpha):
        phi = llogl(alpha)
        rng = np.random.default_rng(int(alpha * 10))
        pairs = rng.uniform(0, 50, (1000, 2))
        assert midpoint_convexity_violations(phi, pairs) == 0
        xs = np.sort(rng.uniform(0, 1e6, 1000))
        assert np.all(np.diff(phi(xs)) >= 0)

    def test_small_alpha_not_convex_near_one(self):
        # t(1 + log^a t) has negative curvature just above t = 1 when a < 1
        phi = llogl(0.5)
        assert midpoint_convexity_violations(phi, [(1.0, 1.2)]) == 1


class TestSimpleFunction:
    def test_rejects_overlap(self):
        with pytest.raises(ValueError):
            SimpleFunction(((1.0, UNIT), (2.0, UNIT.translated(0.5, 0))))

    def test_touching_supports_allowed(self):
        SimpleFunction(((1.0, UNIT), (2.0, UNIT.translated(1.0, 0))))

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            SimpleFunction(((-1.0, UNIT),))


class TestPhiIntegral:
    def test_indicator_mass(self):
        sigma = 123.0
        theta_set = rect_polygon(Rectangle(Point2(0.3, 0.2), 0.4, 1, 1))
        f = SimpleFunction.indicator(theta_set, sigma)
        phi = llogl(2)
        assert phi_integral(phi, f, 1.0) == pytest.approx(phi(sigma), rel=1e-12)

    def test_zero(self):
        assert phi_integral(llogl(1), SimpleFunction.zero(), 1.0) == 0

    def test_decreasing_in_lambda(self):
        f = SimpleFunction(((5.0, UNIT), (0.3, UNIT.translated(2, 0))))
        values = [phi_integral(llogl(1), f, lam) for lam in np.geomspace(0.01, 1e6, 40)]
        assert np.all(np.diff(values) < 0) and values[-1] < 1e-5

    @pytest.mark.parametrize("lam", [0.1, 1.0, 7.5])
    def test_scaling(self, lam):
        f = SimpleFunction(((5.0, UNIT), (0.3, UNIT.translated(2, 0))))
        phi = llogl(1.5)
        assert phi_integral(phi, f, lam) == pytest.approx(phi_integral(phi, f.scaled(1 / lam), 1.0), rel=1e-12)


class TestNecessityRatio:
    def test_identity_gives_counts(self):
        cfg = corollary_config([1, 2, 3, 4], 3)
        for k in range(4):
            assert necessity_ratio(cfg, identity_young(), k) == pytest.approx(cfg.counts[k])

    def test_frozen_values(self):
        # direct evaluation: sigma_k = 4/sin(2^-(k+1)/k^2), ratio = k^2/(1 + ln sigma_k)
        cfg = corollary_config([max(1, k * k) for k in range(41)], 40)
        phi = llogl(1)
        r20 = necessity_ratio(cfg, phi, 20)
        r40 = necessity_ratio(cfg, phi, 40)
        assert cfg.sigmas[20] == pytest.approx(4 * 400 * 2**21, rel=1e-12)
        assert r20 == pytest.approx(17.441467753241252, rel=1e-12)
        assert r40 == pytest.approx(41.903368678078174, rel=1e-12)
        assert r20 == pytest.approx(17.4, rel=0.01) and r40 == pytest.approx(41.9, rel=0.01)
        assert r40 > r20

    @pytest.mark.parametrize("alpha", [0.5, 1, 2])
    def test_eventually_increasing(self, alpha):
        counts = [1] + [math.ceil(k ** (alpha + 1)) for k in range(1, 41)]
        cfg = corollary_config(counts, 40)
        ratios = [necessity_ratio(cfg, llogl(alpha), k) for k in range(5, 41)]
        assert np.all(np.diff(ratios) > 0)
