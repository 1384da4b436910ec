"""Slot schedulers: i.i.d. random access and token-priority CSMA.

CSMA admission: links are visited in a random priority order each slot.  A
candidate transmits iff, at every already-admitted receiver, the receiver's
own signal exceeds the candidate's interference there by at least the
silencing threshold (dB).  By default the threshold belongs to the
candidate's network; ``gamma_owner="protected"`` uses the threshold of the
protected receiver's network instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet

import numpy as np
from numba import njit

from . import rng as rngmod
from .sir import gain_matrix
from .topology import Topology

__all__ = [
    "GAMMA_MIN_DB",
    "GAMMA_MAX_DB",
    "SlotSchedule",
    "CsmaTable",
    "schedule_random_access",
    "schedule_csma",
    "random_access_block",
    "csma_block",
    "admit",
]

GAMMA_MIN_DB = -30.0
GAMMA_MAX_DB = 30.0


@dataclass(frozen=True)
class SlotSchedule:
    active: FrozenSet[int]
    slot_index: int = 0

    @classmethod
    def from_mask(cls, mask: np.ndarray, slot_index: int = 0) -> "SlotSchedule":
        return cls(frozenset(int(i) for i in np.flatnonzero(mask)), slot_index)


def _check_probability(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"access probability must lie in [0, 1], got {p}")
    return float(p)


def _check_gamma(g: float) -> float:
    if not GAMMA_MIN_DB <= g <= GAMMA_MAX_DB:
        raise ValueError(f"silencing threshold must lie in [{GAMMA_MIN_DB}, {GAMMA_MAX_DB}] dB")
    return float(g)


def random_access_block(topology: Topology, p1: float, p2: float, seed: int,
                        slots: int, start: int = 0) -> np.ndarray:
    """``(slots, n)`` activity matrix; row ``t`` equals ``schedule_random_access(..., start + t)``."""
    p = np.array([_check_probability(p1), _check_probability(p2)])[topology.network]
    n = len(topology)
    bg = rngmod.bit_generator(seed, rngmod.RANDOM_ACCESS)
    bg.advance(start * n)
    u = np.random.Generator(bg).random((slots, n))
    return u < p[None, :]


def schedule_random_access(topology: Topology, p1: float, p2: float, seed: int,
                           slot_index: int = 0) -> SlotSchedule:
    """Each link active independently with its network's access probability."""
    return SlotSchedule.from_mask(random_access_block(topology, p1, p2, seed, 1, slot_index)[0],
                                  slot_index)


class CsmaTable:
    """Pairwise dB margins of a topology, sorted per protected receiver.

    ``margin[k, c]`` is receiver k's own signal over the interference from
    transmitter c, in dB.  Rows are stored sorted so that admitting a link
    only touches the candidates its threshold can actually block.
    """

    def __init__(self, topology: Topology, alpha: float):
        g = gain_matrix(topology, alpha)
        signal = np.diag(g).copy()
        with np.errstate(divide="ignore"):
            margin = 10.0 * (np.log10(signal)[:, None] - np.log10(g))
        self._setup(topology, margin)

    @classmethod
    def from_margins(cls, topology: Topology, margin_db: np.ndarray) -> "CsmaTable":
        """Table from an explicit ``(n, n)`` margin matrix (diagonal ignored)."""
        margin = np.array(margin_db, dtype=float)
        if margin.shape != (len(topology), len(topology)):
            raise ValueError("margin matrix must be n x n")
        table = cls.__new__(cls)
        table._setup(topology, margin)
        return table

    def _setup(self, topology: Topology, margin: np.ndarray) -> None:
        np.fill_diagonal(margin, np.inf)
        self.topology = topology
        self.order = np.argsort(margin, axis=1, kind="stable").astype(np.int64)
        self.sorted_margin = np.take_along_axis(margin, self.order, axis=1)

    def thresholds(self, gamma1: float, gamma2: float, gamma_owner: str = "candidate"):
        gam = np.array([_check_gamma(gamma1), _check_gamma(gamma2)])[self.topology.network]
        zeros = np.zeros(len(gam))
        if gamma_owner == "candidate":
            cand, prot = gam, zeros
        elif gamma_owner == "protected":
            cand, prot = zeros, gam
        else:
            raise ValueError(f"unknown gamma owner {gamma_owner!r}")
        # row k can only block candidates whose margin - prot[k] < max candidate threshold
        cutoff = (cand.max() if len(cand) else 0.0) + prot
        lengths = np.sum(self.sorted_margin < cutoff[:, None], axis=1).astype(np.int64)
        return cand, prot, lengths


@njit(cache=True)
def _admit_slots(priorities, order, sorted_margin, lengths, cand, prot):
    slots, n = priorities.shape
    active = np.zeros((slots, n), dtype=np.bool_)
    worst = np.empty(n)
    for s in range(slots):
        visit = np.argsort(priorities[s])
        worst[:] = np.inf
        for c in visit:
            if worst[c] >= cand[c]:
                active[s, c] = True
                shift = prot[c]
                for m in range(lengths[c]):
                    k = order[c, m]
                    v = sorted_margin[c, m] - shift
                    if v < worst[k]:
                        worst[k] = v
    return active


def csma_block(table: CsmaTable, gamma1: float, gamma2: float, seed: int, slots: int,
               start: int = 0, gamma_owner: str = "candidate") -> np.ndarray:
    """``(slots, n)`` activity matrix; row ``t`` equals ``schedule_csma(..., start + t)``."""
    n = len(table.topology)
    bg = rngmod.bit_generator(seed, rngmod.CSMA)
    bg.advance(start * n)
    priorities = np.random.Generator(bg).random((slots, n))
    return admit(table, priorities, gamma1, gamma2, gamma_owner)


def admit(table: CsmaTable, priorities: np.ndarray, gamma1: float, gamma2: float,
          gamma_owner: str = "candidate") -> np.ndarray:
    """Admission for given ``(slots, n)`` priorities; smaller value means higher priority."""
    priorities = np.atleast_2d(np.asarray(priorities, dtype=float))
    if priorities.shape[1] != len(table.topology):
        raise ValueError("one priority per link is required")
    cand, prot, lengths = table.thresholds(gamma1, gamma2, gamma_owner)
    return _admit_slots(priorities, table.order, table.sorted_margin, lengths, cand, prot)


def schedule_csma(topology: Topology, gamma1_db: float, gamma2_db: float, seed: int,
                  slot_index: int = 0, *, alpha: float = 4.0,
                  gamma_owner: str = "candidate") -> SlotSchedule:
    """Token-priority CSMA schedule for one slot (fresh random priorities per slot)."""
    table = CsmaTable(topology, alpha)
    mask = csma_block(table, gamma1_db, gamma2_db, seed, 1, slot_index, gamma_owner)[0]
    return SlotSchedule.from_mask(mask, slot_index)
