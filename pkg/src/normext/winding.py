"""The winding norms on R and the summed norm on finite-support vectors.

|x|_k is the Euclidean distance from the origin's image to the image of x on
the helix t -> (cos pi t, sin pi t, 2^-(k+1) t).  Doubling e_k lands back near
the start of the helix, so |2e_k|_k = 2^-k while |e_k|_k > 2: halving is not
continuous for the summed norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np


def _check_k(k: int) -> None:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")


def winding_norm(k: int, x: float) -> float:
    _check_k(k)
    c = math.cos(math.pi * x)
    return math.hypot(c - 1.0, math.sin(math.pi * x), x / 2 ** (k + 1))


def winding_point(k: int, t: float) -> tuple[float, float, float]:
    return (math.cos(math.pi * t), math.sin(math.pi * t), t / 2 ** (k + 1))


def pair_distance(k: int, t: float, s: float) -> float:
    _check_k(k)
    return math.dist(winding_point(k, t), winding_point(k, s))


def winding_norm_array(k, x: np.ndarray) -> np.ndarray:
    """Vectorised winding_norm; k may be an array broadcasting against x."""
    x = np.asarray(x, dtype=float)
    scale = np.ldexp(1.0, -(np.asarray(k) + 1))
    return np.sqrt((np.cos(np.pi * x) - 1.0) ** 2 + np.sin(np.pi * x) ** 2 + (x * scale) ** 2)


def pair_distance_array(k, t: np.ndarray, s: np.ndarray) -> np.ndarray:
    scale = np.ldexp(1.0, -(np.asarray(k) + 1))
    return np.sqrt(
        (np.cos(np.pi * t) - np.cos(np.pi * s)) ** 2
        + (np.sin(np.pi * t) - np.sin(np.pi * s)) ** 2
        + ((t - s) * scale) ** 2
    )


@dataclass(frozen=True)
class FinSupportVector:
    """Finitely supported element of the direct sum of copies of R."""

    entries: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self):
        for k in self.entries:
            _check_k(k)

    @classmethod
    def unit(cls, k: int, scale: float = 1.0) -> "FinSupportVector":
        return cls({k: scale})

    def __add__(self, other: "FinSupportVector") -> "FinSupportVector":
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, 0.0) + v
        return FinSupportVector(out)


def sum_norm(v) -> float:
    entries = v.entries if isinstance(v, FinSupportVector) else v
    return math.fsum(winding_norm(k, x) for k, x in sorted(entries.items()))


@dataclass(frozen=True)
class DiscontinuityRow:
    k: int
    e_norm: float
    two_e_norm: float

    @property
    def ratio(self) -> float:
        return self.e_norm / self.two_e_norm


def discontinuity_report(K: int) -> list[DiscontinuityRow]:
    """|e_k| and |2e_k| for k = 1..K."""
    if K < 1:
        raise ValueError("K must be >= 1")
    return [DiscontinuityRow(k, winding_norm(k, 1.0), winding_norm(k, 2.0)) for k in range(1, K + 1)]


@dataclass(frozen=True)
class TriangleSummary:
    k: int
    samples: int
    max_excess: float  # max of |t-s| - |t| - |s|, should stay <= tolerance
    max_identity_error: float  # max |pair_distance(t, s) - |t-s||

    def ok(self, tol: float = 1e-12) -> bool:
        return self.max_excess <= tol and self.max_identity_error <= tol


def triangle_sample(k: int, samples: int, rng: np.random.Generator, spread: float = 10.0) -> TriangleSummary:
    """Sample (t, s) uniformly from [-spread, spread]^2 and test both norm facts."""
    _check_k(k)
    t = rng.uniform(-spread, spread, samples)
    s = rng.uniform(-spread, spread, samples)
    d = winding_norm_array(k, t - s)
    excess = d - winding_norm_array(k, t) - winding_norm_array(k, s)
    ident = np.abs(pair_distance_array(k, t, s) - d)
    return TriangleSummary(k, samples, float(excess.max()), float(ident.max()))
