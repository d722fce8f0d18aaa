import math

import numpy as np
import pytest

from shapebasis.geometry import Point2, Rectangle
from shapebasis.sampling import (
    CHUNK,
    derive_seed,
    sample_chunk,
    stratified_fraction,
    uniform_in_rectangle,
)

WINDOW = Rectangle.axis((0, 0), 4, 2)


def disk(pts):
    return pts[:, 0] ** 2 + pts[:, 1] ** 2 <= 1


def test_points_inside_window():
    w = Rectangle(Point2(3, -2), 0.7, 5, 1)
    pts = uniform_in_rectangle(w, 20_000, 1)
    assert pts.shape == (20_000, 2)
    assert np.all(w.contains(pts[:, 0], pts[:, 1], tol=1e-12))


def test_disk_area_within_ci():
    est = stratified_fraction(WINDOW, disk, 200_000, 9)
    assert abs(est.value - math.pi) <= est.halfWidth95
    assert est.samples == 200_000 and est.seed == 9


def test_full_and_empty():
    full = stratified_fraction(WINDOW, lambda p: np.ones(len(p), bool), 5000, 0)
    empty = stratified_fraction(WINDOW, lambda p: np.zeros(len(p), bool), 5000, 0)
    assert full.value == pytest.approx(8.0) and full.halfWidth95 == 0
    assert empty.value == 0


def test_deterministic_and_worker_independent():
    n = 3 * CHUNK + 123
    a = stratified_fraction(WINDOW, disk, n, 42, workers=1)
    b = stratified_fraction(WINDOW, disk, n, 42, workers=4)
    c = stratified_fraction(WINDOW, disk, n, 42, workers=1)
    assert a == b == c
    d = stratified_fraction(WINDOW, disk, n, 43)
    assert d != a


def test_sample_depends_only_on_seed_and_index():
    n = 2 * CHUNK + 10
    pts, _ = sample_chunk(WINDOW, 5, 1, n)
    again, _ = sample_chunk(WINDOW, 5, 1, n)
    assert np.array_equal(pts, again)
    # the same chunk is unaffected by the total length as long as it is full
    longer, _ = sample_chunk(WINDOW, 5, 1, 10 * n)
    assert np.array_equal(pts, longer)


def test_derive_seed_distinct():
    seeds = {derive_seed(3, k, j) for k in range(20) for j in range(2)}
    assert len(seeds) == 40
    assert derive_seed(3, 1, 0) == derive_seed(3, 1, 0)


def test_negative_seed_rejected():
    with pytest.raises(ValueError):
        stratified_fraction(WINDOW, disk, 1000, -1)
