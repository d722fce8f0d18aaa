"""Angle sets and shape functions.

Covers the geometric angle set ``{2^-k}``, uniformly filled blocks between
consecutive angles of a decreasing sequence, the block configuration with
``sigma_k = 4 / sin(2^(-k-1) / N_k)``, shape functions built by the solver,
the unit-area witness rectangles and the pairwise incomparable dyadic family.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import IndexOutOfRange, PreconditionViolated
from .geometry import Point2, Rectangle
from .shape_law import ShapeLawParams, solve_sigma

SOLVER_BUILT = "solver-built"
BLOCK_CONSTANT = "block-constant"
EXPLICIT = "explicit"


@dataclass(frozen=True)
class BlockConfig:
    """Block basis data.

    ``thetas[k] > thetas[k+1]``; ``counts[k]`` and ``sigmas[k]`` describe the
    block between ``thetas[k+1]`` and ``thetas[k]``, so both have one entry
    fewer than ``thetas``.
    """

    thetas: tuple[float, ...]
    counts: tuple[int, ...]
    sigmas: tuple[float, ...]

    def __post_init__(self):
        thetas = tuple(float(x) for x in self.thetas)
        counts = tuple(int(n) for n in self.counts)
        sigmas = tuple(float(s) for s in self.sigmas)
        object.__setattr__(self, "thetas", thetas)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "sigmas", sigmas)
        if len(thetas) < 2:
            raise ValueError("need at least two angles")
        if any(b <= 0 or a <= b for a, b in zip(thetas, thetas[1:])):
            raise ValueError("thetas must be strictly decreasing and positive")
        if len(counts) != len(thetas) - 1 or len(sigmas) != len(thetas) - 1:
            raise ValueError("counts and sigmas need one entry per consecutive pair of thetas")
        if any(n < 1 for n in counts):
            raise ValueError("block counts must be >= 1")
        if any(not s >= 1 for s in sigmas):
            raise ValueError("block shapes must be >= 1")

    @property
    def n_blocks(self) -> int:
        return len(self.counts)

    def _check_index(self, k: int):
        if not 0 <= k < self.n_blocks:
            raise IndexOutOfRange(f"block index {k} outside [0, {self.n_blocks - 1}]")


@dataclass(frozen=True)
class ShapeFunction:
    entries: Mapping[float, float] = field(default_factory=dict)
    provenance: str = EXPLICIT

    def __post_init__(self):
        if any(s < 1 for s in self.entries.values()):
            raise ValueError("shapes must be >= 1")

    def items(self):
        return sorted(self.entries.items(), reverse=True)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, theta: float) -> float:
        return self.entries[theta]


def geometric_angles(K: int) -> tuple[float, ...]:
    if K < 0:
        raise ValueError("K must be >= 0")
    return tuple(math.ldexp(1.0, -k) for k in range(K + 1))


def block_angles(cfg: BlockConfig, k: int) -> tuple[float, ...]:
    cfg._check_index(k)
    hi, lo = cfg.thetas[k], cfg.thetas[k + 1]
    n = cfg.counts[k]
    return tuple(lo + i * (hi - lo) / n for i in range(n))


def angle_gap(cfg: BlockConfig, k: int) -> float:
    cfg._check_index(k)
    return (cfg.thetas[k] - cfg.thetas[k + 1]) / cfg.counts[k]


def check_angle_condition(cfg: BlockConfig, k: int, rtol: float = 1e-12) -> bool:
    """``sin(gap_k) >= 4 / sigma_k``, with a relative slack for the equality case."""
    lhs = math.sin(angle_gap(cfg, k))
    rhs = 4.0 / cfg.sigmas[k]
    return lhs >= rhs * (1.0 - rtol)


def corollary_config(N: Mapping[int, int] | Sequence[int], K: int) -> BlockConfig:
    """``theta_k = 2^-k`` for ``0 <= k <= K+1`` and ``sigma_k = 4/sin(2^(-k-1)/N_k)``."""
    counts = tuple(int(N[k]) for k in range(K + 1))
    thetas = tuple(math.ldexp(1.0, -k) for k in range(K + 2))
    sigmas = tuple(4.0 / math.sin((thetas[k] - thetas[k + 1]) / counts[k]) for k in range(K + 1))
    return BlockConfig(thetas, counts, sigmas)


def block_shape_function(cfg: BlockConfig, kmax: int | None = None) -> ShapeFunction:
    kmax = cfg.n_blocks - 1 if kmax is None else kmax
    entries = {}
    for k in range(kmax + 1):
        for a in block_angles(cfg, k):
            entries[a] = cfg.sigmas[k]
    return ShapeFunction(entries, BLOCK_CONSTANT)


def shape_from_solver(angles: Sequence[float], params: ShapeLawParams) -> ShapeFunction:
    entries = {float(a): solve_sigma(params, a) for a in angles}
    ordered = sorted(entries.items())
    for (a0, s0), (a1, s1) in zip(ordered, ordered[1:]):
        if not s0 > s1:
            raise ArithmeticError(f"solver shapes not decreasing at theta={a0}, {a1}")
    return ShapeFunction(entries, SOLVER_BUILT)


def moriyon_witness(theta: float, sigma: float) -> tuple[Rectangle, float]:
    """Unit-area rectangle centered at the origin with shape ``sigma`` and angle ``theta``.

    Returns the rectangle and the distance from the origin to its farthest point.
    """
    if sigma < 1:
        raise ValueError("sigma must be >= 1")
    long = math.sqrt(sigma)
    r = Rectangle(Point2(0.0, 0.0), theta, long, 1.0 / long)
    return r, 0.5 * math.sqrt(sigma + 1.0 / sigma)


def stokolos_intervals(sigma0: float, sigmas: Sequence[float], n: int) -> list[Rectangle]:
    """``Q_k = [0, 2^k sigma0] x [0, 2^k sigma0 / sigma_k]`` for ``0 <= k <= n``."""
    if sigma0 < 1:
        raise PreconditionViolated("sigma0 must be >= 1")
    if n + 1 > len(sigmas):
        raise PreconditionViolated(f"need {n + 1} shapes, got {len(sigmas)}")
    seq = [float(s) for s in sigmas[: n + 1]]
    for k in range(n):
        if not seq[k + 1] > seq[k]:
            raise PreconditionViolated(f"sigmas not strictly increasing at k={k}")
        if not math.ldexp(seq[k + 1], -(k + 1)) > math.ldexp(seq[k], -k):
            raise PreconditionViolated(f"sigma_k 2^-k not strictly increasing at k={k}")
    out = []
    for k, s in enumerate(seq):
        w = math.ldexp(sigma0, k)
        h = w / s
        out.append(Rectangle.axis((0.5 * w, 0.5 * h), w, h))
    return out
