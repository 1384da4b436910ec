"""Slotted Monte Carlo simulator for two networks sharing a band."""

from .adaptation import (AdaptationStep, AdaptationTrace, run_greedy_adaptation,
                         scheduled_fraction, strategy_bounds)
from .measure import ThroughputEstimate, measure_throughput
from .scheduling import (GAMMA_MAX_DB, GAMMA_MIN_DB, CsmaTable, SlotSchedule, admit,
                         csma_block, random_access_block, schedule_csma,
                         schedule_random_access)
from .sir import SirModel, compute_sir, gain_matrix, link_rates
from .topology import Link, Topology, TopologySpec, churn_topology, generate_topology

__all__ = [
    "AdaptationStep", "AdaptationTrace", "run_greedy_adaptation", "scheduled_fraction",
    "strategy_bounds", "ThroughputEstimate", "measure_throughput", "GAMMA_MAX_DB",
    "GAMMA_MIN_DB", "CsmaTable", "admit", "csma_block", "random_access_block", "SlotSchedule", "schedule_csma", "schedule_random_access",
    "SirModel", "compute_sir", "gain_matrix", "link_rates", "Link", "Topology",
    "TopologySpec", "churn_topology", "generate_topology",
]
