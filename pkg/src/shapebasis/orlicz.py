"""Young functions, simple functions and the block necessity ratio."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .basis import BlockConfig
from .geometry import ConvexPolygon, clip_convex, polygon_area

OVERLAP_RTOL = 1e-9


@dataclass(frozen=True)
class YoungFunction:
    evaluator: Callable[[float], float]
    label: str
    alpha: float | None = None

    def __call__(self, x):
        return self.evaluator(x)


def _log_plus(x):
    return np.log(np.maximum(x, 1.0))


def llogl(alpha: float) -> YoungFunction:
    """``t (1 + log_+^alpha t)`` with the natural logarithm."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")

    def phi(x):
        x = np.asarray(x, dtype=float)
        out = x * (1.0 + _log_plus(x) ** alpha)
        return float(out) if out.ndim == 0 else out

    return YoungFunction(phi, f"LlogL^{alpha:g}", alpha)


def identity_young() -> YoungFunction:
    """``Phi(t) = t``; the L^1 endpoint."""

    def phi(x):
        x = np.asarray(x, dtype=float)
        return float(x) if x.ndim == 0 else x.copy()

    return YoungFunction(phi, "L1", 0.0)


@dataclass(frozen=True)
class SimpleFunction:
    """Nonnegative combination of indicators of pairwise disjoint convex sets."""

    terms: tuple[tuple[float, ConvexPolygon], ...]

    def __post_init__(self):
        terms = tuple((float(c), p) for c, p in self.terms)
        object.__setattr__(self, "terms", terms)
        for c, _ in terms:
            if not (c >= 0 and math.isfinite(c)):
                raise ValueError("coefficients must be finite and nonnegative")
        for i in range(len(terms)):
            pi = terms[i][1]
            for j in range(i + 1, len(terms)):
                pj = terms[j][1]
                overlap = polygon_area(clip_convex(pi, pj))
                if overlap > OVERLAP_RTOL * min(pi.area, pj.area):
                    raise ValueError(f"supports {i} and {j} overlap (area {overlap:.3g})")

    @classmethod
    def indicator(cls, p: ConvexPolygon, c: float = 1.0) -> "SimpleFunction":
        return cls(((c, p),))

    @classmethod
    def zero(cls) -> "SimpleFunction":
        return cls(())

    def scaled(self, factor: float) -> "SimpleFunction":
        return SimpleFunction(tuple((c * factor, p) for c, p in self.terms))

    @property
    def sup(self) -> float:
        return max((c for c, p in self.terms if not p.is_empty), default=0.0)


def phi_integral(phi: YoungFunction, f: SimpleFunction, lam: float) -> float:
    """``sum_i Phi(c_i / lam) |support_i|``."""
    if not lam > 0:
        raise ValueError("lambda must be positive")
    return float(sum(phi(c / lam) * p.area for c, p in f.terms))


def necessity_ratio(cfg: BlockConfig, phi: YoungFunction, k: int) -> float:
    """``N_k sigma_k / Phi(sigma_k)``."""
    cfg._check_index(k)
    s = cfg.sigmas[k]
    return cfg.counts[k] * s / phi(s)


def midpoint_convexity_violations(phi: YoungFunction, pairs: Sequence[tuple[float, float]]) -> int:
    bad = 0
    for a, b in pairs:
        fa, fb = phi(a), phi(b)
        if phi(0.5 * (a + b)) > 0.5 * (fa + fb) + 1e-12 * (fa + fb):
            bad += 1
    return bad
