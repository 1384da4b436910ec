"""Greedy hill-climbing of access probabilities or silencing thresholds.

Each iteration network 1 measures its throughput with its strategy nudged up
and down by ``delta``, keeps the better direction (ties go down), and network
2 then does the same against network 1's new value.  Probes that would leave
the strategy bounds are evaluated at the bound.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from . import rng as rngmod
from .measure import measure_throughput
from .scheduling import GAMMA_MAX_DB, GAMMA_MIN_DB, CsmaTable
from .sir import SirModel
from .topology import Topology, TopologySpec, churn_topology

__all__ = [
    "AdaptationStep",
    "AdaptationTrace",
    "run_greedy_adaptation",
    "scheduled_fraction",
    "strategy_bounds",
    "TRACE_HEADER",
]

TRACE_HEADER = ("iter", "strategy1", "strategy2", "r1", "r2", "f1", "f2")


def strategy_bounds(protocol: str) -> Tuple[float, float]:
    if protocol == "ra":
        return 0.0, 1.0
    if protocol == "csma":
        return GAMMA_MIN_DB, GAMMA_MAX_DB
    raise ValueError(f"unknown protocol {protocol!r}")


@dataclass(frozen=True)
class AdaptationStep:
    t: int
    strategy1: float
    strategy2: float
    measured_r1: float
    measured_r2: float
    fraction1: float
    fraction2: float


@dataclass
class AdaptationTrace:
    protocol: str
    delta: float
    steps: List[AdaptationStep] = field(default_factory=list)

    def strategies(self) -> np.ndarray:
        return np.array([(s.strategy1, s.strategy2) for s in self.steps])

    def fractions(self) -> np.ndarray:
        return np.array([(s.fraction1, s.fraction2) for s in self.steps])

    def tail_mean(self, last: int = 100, what: str = "strategy") -> Tuple[float, float]:
        data = self.strategies() if what == "strategy" else self.fractions()
        m = data[-last:].mean(axis=0)
        return float(m[0]), float(m[1])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TRACE_HEADER)
        for s in self.steps:
            w.writerow([s.t] + [f"{v:.12g}" for v in (s.strategy1, s.strategy2, s.measured_r1,
                                                      s.measured_r2, s.fraction1, s.fraction2)])
        return buf.getvalue()


def _clamp(x: float, lo: float, hi: float) -> float:
    # rounding keeps repeated +/- delta steps on a clean grid
    return float(min(hi, max(lo, round(x, 12))))


def run_greedy_adaptation(topology: Union[Topology, TopologySpec], protocol: str,
                          init1: float, init2: float, delta: float, iterations: int,
                          slots_per_estimate: int, churn: int, seed: int, *,
                          model: SirModel, gamma_owner: str = "candidate") -> AdaptationTrace:
    """Run the alternating greedy algorithm and record every committed strategy.

    ``topology`` may be a ready topology or a spec built from ``seed``.  With
    ``churn > 0`` that many links per network are re-placed uniformly at the
    start of every iteration.  ``measured_r*`` is the estimate of the branch
    each network committed to; for CSMA ``fraction*`` is the mean scheduled
    fraction over the iteration's four probes, for random access it is the
    committed access probability.
    """
    lo, hi = strategy_bounds(protocol)
    if not delta > 0:
        raise ValueError("step size must be positive")
    if iterations < 1 or slots_per_estimate < 1 or churn < 0:
        raise ValueError("need iterations >= 1, slots_per_estimate >= 1, churn >= 0")
    for v in (init1, init2):
        if not lo <= v <= hi:
            raise ValueError(f"initial strategy {v} outside [{lo}, {hi}]")

    if isinstance(topology, TopologySpec):
        spec = topology
        topo = spec.build(rngmod.derive_seed(seed, rngmod.TOPOLOGY))
        range_spec = spec.range_spec
    else:
        topo = topology
        range_spec = None
        if churn > 0:
            raise ValueError("churn needs a TopologySpec to draw replacement links from")

    s = [float(init1), float(init2)]
    trace = AdaptationTrace(protocol, float(delta))
    table: Optional[CsmaTable] = None
    for t in range(1, iterations + 1):
        if churn > 0:
            topo = churn_topology(topo, churn, range_spec, rngmod.stream(seed, rngmod.CHURN, t))
            table = None
        if protocol == "csma" and table is None:
            table = CsmaTable(topo, model.alpha)
        gains: dict = {}
        chosen_rate = [0.0, 0.0]
        frac_sum = np.zeros(2)
        for net in (0, 1):
            est = {}
            for sign, direction in ((1, +1.0), (0, -1.0)):
                trial = list(s)
                trial[net] = _clamp(s[net] + direction * delta, lo, hi)
                probe = measure_throughput(
                    topo, trial, model, protocol, slots_per_estimate,
                    rngmod.derive_seed(seed, rngmod.PROBE, t, net, sign),
                    networks=(net,), csma_table=table, gamma_owner=gamma_owner,
                    gain_cache=gains)
                est[direction] = probe.per_network_rate[net]
                frac_sum += probe.scheduled_fraction
            up = est[+1.0] > est[-1.0]
            s[net] = _clamp(s[net] + (delta if up else -delta), lo, hi)
            chosen_rate[net] = est[+1.0] if up else est[-1.0]
        if protocol == "ra":
            f1, f2 = s
        else:
            f1, f2 = frac_sum / 4.0
        trace.steps.append(AdaptationStep(t, s[0], s[1], chosen_rate[0], chosen_rate[1],
                                          float(f1), float(f2)))
    return trace


def scheduled_fraction(trace: AdaptationTrace) -> List[Tuple[float, float]]:
    """Per-iteration fraction of each network's links scheduled."""
    if not trace.steps:
        raise ValueError("empty trace")
    if trace.protocol == "ra":
        return [(st.strategy1, st.strategy2) for st in trace.steps]
    return [(st.fraction1, st.fraction2) for st in trace.steps]
