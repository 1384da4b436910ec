"""Planar placement of tx-rx pairs for two networks on the unit square."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace
from typing import List, Optional, Union

import numpy as np

from ..geometry import RangeSpec
from . import rng as rngmod

__all__ = ["Link", "Topology", "TopologySpec", "generate_topology", "churn_topology"]


@dataclass(frozen=True)
class Link:
    tx_position: tuple
    rx_position: tuple
    network: int  # 0 for network 1, 1 for network 2
    range: float
    power_weight: float


@dataclass(frozen=True)
class Topology:
    """Links as parallel arrays; index ``i`` is a stable link identifier.

    ``network`` holds 0 for network 1 and 1 for network 2.  Receivers may sit
    outside the square; only links whose tx lies in the interior band
    ``[margin, side - margin]**2`` are measured.
    """

    tx: np.ndarray
    rx: np.ndarray
    network: np.ndarray
    ranges: np.ndarray
    area_side: float = 1.0
    margin: float = 0.1
    power_control: bool = False
    rng_seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.margin < 0.5 * self.area_side:
            raise ValueError("margin must lie in [0, side/2)")

    def __len__(self) -> int:
        return len(self.network)

    @property
    def counts(self) -> tuple:
        return int(np.sum(self.network == 0)), int(np.sum(self.network == 1))

    def power_weights(self, alpha: float) -> np.ndarray:
        if self.power_control:
            return self.ranges ** alpha
        return np.ones(len(self))

    def interior_mask(self) -> np.ndarray:
        lo, hi = self.margin, self.area_side - self.margin
        return np.all((self.tx >= lo) & (self.tx <= hi), axis=1)

    def link(self, i: int, alpha: Optional[float] = None) -> Link:
        weight = float(self.ranges[i] ** alpha) if (self.power_control and alpha is not None) else 1.0
        return Link(tuple(self.tx[i]), tuple(self.rx[i]), int(self.network[i]),
                    float(self.ranges[i]), weight)

    def links(self, alpha: Optional[float] = None) -> List[Link]:
        return [self.link(i, alpha) for i in range(len(self))]

    def with_margin(self, margin: float) -> "Topology":
        return replace(self, margin=margin)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["idx", "network", "tx_x", "tx_y", "rx_x", "rx_y", "range"])
        for i in range(len(self)):
            w.writerow([i, int(self.network[i]) + 1]
                       + [f"{v:.12g}" for v in (*self.tx[i], *self.rx[i], self.ranges[i])])
        return buf.getvalue()


@dataclass(frozen=True)
class TopologySpec:
    count1: int
    count2: int
    range_spec: RangeSpec
    power_control: bool = False
    margin: float = 0.1

    def build(self, seed: int) -> Topology:
        return generate_topology(self.count1, self.count2, self.range_spec,
                                 self.power_control, seed, margin=self.margin)


def _place(rng: np.random.Generator, range_spec: RangeSpec, n: int, side: float):
    tx = side * rng.random((n, 2))
    d = range_spec.sample(rng, n)
    theta = 2.0 * np.pi * rng.random(n)
    rx = tx + d[:, None] * np.column_stack((np.cos(theta), np.sin(theta)))
    return tx, rx, np.hypot(*(rx - tx).T)


def generate_topology(count1: int, count2: int, range_spec: RangeSpec,
                      power_control: bool = False, seed: int = 0, *,
                      margin: float = 0.1, area_side: float = 1.0) -> Topology:
    """Uniform tx positions; each rx at a random bearing and a range drawn from ``range_spec``."""
    if count1 < 0 or count2 < 0:
        raise ValueError("link counts must be non-negative")
    if range_spec.kind == "second_moment":
        raise ValueError("topology generation needs a samplable range distribution")
    rng = rngmod.stream(seed, rngmod.TOPOLOGY)
    n = count1 + count2
    tx, rx, ranges = _place(rng, range_spec, n, area_side)
    network = np.repeat(np.array([0, 1], dtype=np.int8), [count1, count2])
    return Topology(tx, rx, network, ranges, area_side=area_side, margin=margin,
                    power_control=power_control, rng_seed=int(seed))


def churn_topology(topology: Topology, churn: int, range_spec: RangeSpec,
                   rng: np.random.Generator) -> Topology:
    """Replace ``churn`` random links of each network with freshly placed ones (indices kept)."""
    if churn <= 0:
        return topology
    tx, rx, ranges = topology.tx.copy(), topology.rx.copy(), topology.ranges.copy()
    for net in (0, 1):
        members = np.flatnonzero(topology.network == net)
        k = min(churn, len(members))
        if k == 0:
            continue
        leave = rng.choice(members, size=k, replace=False)
        tx[leave], rx[leave], ranges[leave] = _place(rng, range_spec, k, topology.area_side)
    return replace(topology, tx=tx, rx=rx, ranges=ranges)


TopologyLike = Union[Topology, TopologySpec]
