"""Signal-to-interference ratios and per-slot link rates."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .topology import Topology

__all__ = ["SirModel", "gain_matrix", "compute_sir", "link_rates", "VR_SIR_CAP"]

# SIR ceiling for variable-rate crediting when no interferer is active
VR_SIR_CAP = 1e12
_MIN_DISTANCE = 1e-12


@dataclass(frozen=True)
class SirModel:
    """How a receiver's SIR and its credited rate are computed.

    ``mode`` is ``"dominant"`` (strongest single interferer) or ``"full"``
    (sum over all active transmitters).  ``betas`` selects fixed-rate
    crediting with per-network target SIRs; ``None`` means variable rate.
    """

    alpha: float
    mode: str = "full"
    betas: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        if self.mode not in ("dominant", "full"):
            raise ValueError(f"unknown interference mode {self.mode!r}")
        if not self.alpha > 2:
            raise ValueError("pathloss exponent must exceed 2")
        if self.betas is not None:
            if len(self.betas) != 2 or min(self.betas) <= 0:
                raise ValueError("fixed-rate target SIRs must be two positive values")
            object.__setattr__(self, "betas", (float(self.betas[0]), float(self.betas[1])))

    @property
    def fixed_rate(self) -> bool:
        return self.betas is not None


def gain_matrix(topology: Topology, alpha: float, rows: Optional[np.ndarray] = None) -> np.ndarray:
    """``G[j, k] = w_k |tx_k - rx_j|**-alpha`` for receivers ``rows`` (all by default)."""
    rx = topology.rx if rows is None else topology.rx[rows]
    diff = rx[:, None, :] - topology.tx[None, :, :]
    dist = np.maximum(np.hypot(diff[..., 0], diff[..., 1]), _MIN_DISTANCE)
    return topology.power_weights(alpha)[None, :] * dist ** (-alpha)


def compute_sir(topology: Topology, schedule, link_index: int, model: SirModel) -> float:
    """SIR of one active link; ``inf`` when no other link transmits."""
    active = np.zeros(len(topology), dtype=bool)
    active[list(schedule.active)] = True
    if not active[link_index]:
        raise ValueError(f"link {link_index} is not scheduled")
    g = gain_matrix(topology, model.alpha, rows=np.array([link_index]))[0]
    signal = g[link_index]
    active[link_index] = False
    terms = g[active]
    if terms.size == 0:
        return math.inf
    interference = terms.max() if model.mode == "dominant" else terms.sum()
    return float(signal / interference)


def link_rates(topology: Topology, active: np.ndarray, rows: np.ndarray, model: SirModel,
               gains: Optional[np.ndarray] = None) -> np.ndarray:
    """Per-slot rates (nats) credited to links ``rows`` for a block of schedules.

    ``active`` is a ``(slots, n)`` boolean matrix.  Unscheduled links earn 0.
    Returns a ``(slots, len(rows))`` array.
    """
    rows = np.asarray(rows, dtype=np.intp)
    g = gain_matrix(topology, model.alpha, rows) if gains is None else gains
    signal = g[np.arange(len(rows)), rows]
    cross = g.copy()
    cross[np.arange(len(rows)), rows] = 0.0
    own_active = active[:, rows]

    if model.fixed_rate:
        beta = np.asarray(model.betas)[topology.network[rows]]
        if model.mode == "dominant":
            # success iff no single interferer exceeds signal / beta
            killers = (cross >= (signal / beta)[:, None]).astype(np.float32)
            hits = active.astype(np.float32) @ killers.T
            ok = hits < 0.5
        else:
            interference = active.astype(float) @ cross.T
            ok = signal[None, :] > beta[None, :] * interference
        return np.where(own_active & ok, np.log1p(beta)[None, :], 0.0)

    if model.mode == "full":
        interference = active.astype(float) @ cross.T
    else:
        interference = np.empty(own_active.shape)
        chunk = max(1, 20_000_000 // max(1, cross.size))
        for start in range(0, active.shape[0], chunk):
            block = active[start:start + chunk]
            interference[start:start + chunk] = np.max(
                np.where(block[:, None, :], cross[None, :, :], 0.0), axis=2)
    with np.errstate(divide="ignore"):
        sir = np.where(interference > 0, signal[None, :] / interference, VR_SIR_CAP)
    return np.where(own_active, np.log1p(np.minimum(sir, VR_SIR_CAP)), 0.0)
