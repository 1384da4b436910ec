"""Transmission-range distributions shared by the analytic game and the simulator."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["RangeSpec"]


@dataclass(frozen=True)
class RangeSpec:
    """Distribution of the tx-rx distance.

    ``kind`` is one of ``"fixed"`` (every link has range ``value``),
    ``"uniform_disc"`` (rx uniform on the disc of radius ``value`` around its
    tx) or ``"second_moment"`` (only ``E[d^2] = value`` is known; analytic use
    only).
    """

    kind: str
    value: float

    def __post_init__(self):
        if self.kind not in ("fixed", "uniform_disc", "second_moment"):
            raise ValueError(f"unknown range kind {self.kind!r}")
        if not (self.value > 0 and math.isfinite(self.value)):
            raise ValueError("range parameter must be positive and finite")

    @classmethod
    def fixed(cls, d: float) -> "RangeSpec":
        return cls("fixed", d)

    @classmethod
    def uniform_disc(cls, radius: float) -> "RangeSpec":
        return cls("uniform_disc", radius)

    @classmethod
    def second_moment(cls, m2: float) -> "RangeSpec":
        return cls("second_moment", m2)

    @property
    def mean_square(self) -> float:
        if self.kind == "fixed":
            return self.value ** 2
        if self.kind == "uniform_disc":
            # density 2r/R^2 on [0, R]
            return self.value ** 2 / 2.0
        return self.value

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.kind == "fixed":
            return np.full(size, self.value)
        if self.kind == "uniform_disc":
            return self.value * np.sqrt(rng.random(size))
        raise ValueError("a bare second moment cannot be sampled")
