"""Two-network random access game: utilities, best responses and equilibria.

Network 1 is, by convention, the sparser network (``n1 <= n2``).  Every
public entry point accepts configurations in either order; they are
canonicalized internally and results are reported in the caller's labels.
Utilities are in nats per transmission disc per slot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from . import numerics as nm
from .geometry import RangeSpec

__all__ = [
    "Model",
    "Regime",
    "GameConfig",
    "LabelMap",
    "StrategyPair",
    "Equilibrium",
    "utility_fixed",
    "utility_random_access",
    "utility_transformed",
    "utility_variable",
    "game_utility",
    "fixed_rate_response",
    "best_response",
    "solve_equilibrium",
    "classify_regime",
    "regime_label",
    "asymptotic_equilibrium",
    "equilibrium_utility_asymptote",
    "cooperative_baseline",
    "price_of_anarchy",
    "deviation_gains",
    "verify_equilibrium",
    "effective_nodes_per_disc",
]


class Model(str, Enum):
    FIXED = "fixed"
    VARIABLE = "variable"


class Regime(str, Enum):
    FULL_FULL = "FullFull"
    FULL_PARTIAL = "FullPartial"
    PARTIAL_PARTIAL = "PartialPartial"


@dataclass(frozen=True)
class LabelMap:
    """Mapping between the caller's network labels and the canonical ones."""

    swapped: bool = False

    def to_caller(self, a, b):
        return (b, a) if self.swapped else (a, b)

    to_canonical = to_caller


@dataclass(frozen=True)
class GameConfig:
    alpha: float
    n1: float
    n2: float
    model: Model = Model.FIXED

    def __post_init__(self):
        nm.check_alpha(self.alpha)
        for n in (self.n1, self.n2):
            if not (n > 0 and math.isfinite(n)):
                raise ValueError(f"nodes per disc must be positive and finite, got {n}")
        object.__setattr__(self, "model", Model(self.model))

    def canonical(self) -> Tuple["GameConfig", LabelMap]:
        if self.n1 <= self.n2:
            return self, LabelMap(False)
        return GameConfig(self.alpha, self.n2, self.n1, self.model), LabelMap(True)


@dataclass(frozen=True)
class StrategyPair:
    lambda1: float
    lambda2: float
    beta1: Optional[float] = None
    beta2: Optional[float] = None


@dataclass(frozen=True)
class Equilibrium:
    regime: Regime
    lambda1: float
    lambda2: float
    p1: float
    p2: float
    beta1: Optional[float]
    beta2: Optional[float]
    u1: float
    u2: float
    model: Model
    canonical_swap: bool = False
    u_e: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "u_e", self.u1 + self.u2)

    @property
    def regime_label(self) -> str:
        return regime_label(self.regime, self.canonical_swap)


def regime_label(regime: Regime, swapped: bool) -> str:
    """Regime name in the caller's network order (``PartialFull`` when network 1 is the partial one)."""
    if regime is Regime.FULL_PARTIAL and swapped:
        return "PartialFull"
    return regime.value


# ---------------------------------------------------------------------------
# Utilities
# ---------------------------------------------------------------------------

def utility_fixed(strategies: StrategyPair, cfg: GameConfig) -> Tuple[float, float]:
    """Fixed-rate payoffs with explicit target SIRs."""
    if strategies.beta1 is None or strategies.beta2 is None:
        raise ValueError("fixed-rate utilities need both target SIRs")
    a = cfg.alpha
    total = strategies.lambda1 + strategies.lambda2
    u1 = strategies.lambda1 * math.log1p(strategies.beta1) * math.exp(-total * strategies.beta1 ** (2 / a))
    u2 = strategies.lambda2 * math.log1p(strategies.beta2) * math.exp(-total * strategies.beta2 ** (2 / a))
    return u1, u2


def utility_random_access(lambda1, lambda2, alpha: float):
    """Fixed-rate payoffs with each network's target SIR maximized for the current densities."""
    l1 = np.asarray(lambda1, dtype=float)
    l2 = np.asarray(lambda2, dtype=float)
    gain = nm.fixed_rate_gain(l1 + l2, alpha)
    u1, u2 = l1 * gain, l2 * gain
    if u1.ndim == 0:
        return float(u1), float(u2)
    return u1, u2


def _transformed(own: float, other: float, alpha: float) -> float:
    if own <= 0:
        return 0.0
    return own * math.log1p(own ** (-alpha / 2)) * math.exp(-other / own - 1.0)


def utility_transformed(lambda1: float, lambda2: float, alpha: float) -> Tuple[float, float]:
    """Payoffs of the transformed game, whose equilibria coincide with the fixed-rate game's.

    A zero density has utility 0 (the limit from above).
    """
    nm.check_alpha(alpha)
    return _transformed(lambda1, lambda2, alpha), _transformed(lambda2, lambda1, alpha)


def utility_variable(lambda1: float, lambda2: float, alpha: float) -> Tuple[float, float]:
    total = lambda1 + lambda2
    if not total > 0:
        raise ValueError("variable-rate utility needs a positive total density")
    k = nm.vr_kernel(total, alpha)
    return lambda1 * k, lambda2 * k


def game_utility(lambda1: float, lambda2: float, cfg: GameConfig) -> Tuple[float, float]:
    if cfg.model is Model.FIXED:
        return utility_random_access(lambda1, lambda2, cfg.alpha)
    return utility_variable(lambda1, lambda2, cfg.alpha)


# ---------------------------------------------------------------------------
# Best responses
# ---------------------------------------------------------------------------

def _fixed_response_gap(lam: float, other: float, alpha: float) -> float:
    return lam * (alpha / (2.0 * nm.phi(lam ** (alpha / 2))) - 1.0) - other


def fixed_rate_response(lambda_other: float, alpha: float) -> float:
    """Unconstrained fixed-rate best response: the ``L`` with
    ``L * (alpha / (2 phi(L**(alpha/2))) - 1) = lambda_other``.

    The left side is negative below ``lambda_star``, zero at it and increasing
    above it, so the root is searched on ``[lambda_star, inf)``.
    """
    alpha = nm.check_alpha(alpha)
    lo = nm.solve_lambda_star(alpha)
    if lambda_other <= 0:
        return lo
    hi = 10.0 * max(2.0 * lambda_other / (alpha - 2.0), 1.0)
    while _fixed_response_gap(hi, lambda_other, alpha) <= 0:
        hi *= 10.0
    return nm.brentq(_fixed_response_gap, lo, hi, args=(lambda_other, alpha),
                     xtol=nm._XTOL, rtol=nm._RTOL, maxiter=500)


def _vr_response(lambda_other: float, alpha: float) -> float:
    if lambda_other <= 0:
        return nm.solve_lambda_prime(alpha)
    return nm._find_root(lambda lam: nm.vr_best_response_residual(lam, lambda_other, alpha))


def _unconstrained_response(lambda_other: float, alpha: float, model: Model) -> float:
    if model is Model.FIXED:
        return fixed_rate_response(lambda_other, alpha)
    return _vr_response(lambda_other, alpha)


def best_response(lambda_other: float, n_self: float, cfg: GameConfig) -> float:
    """Density in ``[0, n_self]`` maximizing the responder's utility against ``lambda_other``."""
    if lambda_other < 0 or not n_self > 0:
        raise ValueError("need lambda_other >= 0 and n_self > 0")
    return min(n_self, _unconstrained_response(lambda_other, cfg.alpha, cfg.model))


# ---------------------------------------------------------------------------
# Equilibrium
# ---------------------------------------------------------------------------

def _interior_threshold(alpha: float, model: Model) -> Optional[float]:
    """Symmetric interior equilibrium density, ``None`` when it does not exist (alpha <= 4)."""
    if alpha <= 4.0:
        return None
    if model is Model.FIXED:
        return math.sqrt(nm.solve_lambda_star(alpha / 2.0))
    return nm.solve_lambda_double_prime(alpha)


def _canonical_densities(c: GameConfig) -> Tuple[Regime, float, float]:
    thr = _interior_threshold(c.alpha, c.model)
    if thr is not None and c.n1 > thr:
        return Regime.PARTIAL_PARTIAL, thr, thr
    response = _unconstrained_response(c.n1, c.alpha, c.model)
    if response >= c.n2:
        return Regime.FULL_FULL, c.n1, c.n2
    return Regime.FULL_PARTIAL, c.n1, response


def solve_equilibrium(cfg: GameConfig) -> Equilibrium:
    """Unique Nash equilibrium of the fixed- or variable-rate game."""
    c, labels = cfg.canonical()
    regime, l1, l2 = _canonical_densities(c)
    beta = nm.optimal_beta(l1 + l2, c.alpha) if c.model is Model.FIXED else None
    u1, u2 = game_utility(l1, l2, c)
    l1, l2 = labels.to_caller(l1, l2)
    u1, u2 = labels.to_caller(u1, u2)
    return Equilibrium(
        regime=regime, lambda1=l1, lambda2=l2,
        p1=min(1.0, l1 / cfg.n1), p2=min(1.0, l2 / cfg.n2),
        beta1=beta, beta2=beta, u1=u1, u2=u2, model=c.model,
        canonical_swap=labels.swapped,
    )


def classify_regime(cfg: GameConfig) -> Regime:
    return _canonical_densities(cfg.canonical()[0])[0]


def asymptotic_equilibrium(cfg: GameConfig) -> StrategyPair:
    """Large-``n1`` equilibrium for ``2 < alpha < 4`` (identical for both models)."""
    if not cfg.alpha < 4.0:
        raise ValueError("asymptotic equilibrium is defined for 2 < alpha < 4")
    c, labels = cfg.canonical()
    cap = 2.0 * c.n1 / (c.alpha - 2.0)
    return StrategyPair(*labels.to_caller(c.n1, min(c.n2, cap)))


def equilibrium_utility_asymptote(cfg: GameConfig) -> float:
    """Large-``n1`` total equilibrium utility for ``2 < alpha < 4``.

    With ``S`` the total equilibrium density, the system utility tends to
    ``C / S**(alpha/2 - 1)`` where ``C = (alpha/2)**(alpha/2) e**(-alpha/2)``
    (fixed rate) or ``Gamma(alpha/2 + 1)`` (variable rate).  When the denser
    network saturates at ``2 n1 / (alpha - 2)`` this collapses to
    ``c1 / n1**(alpha/2 - 1)``; otherwise both networks are full and
    ``S = n1 + n2``.
    """
    if not cfg.alpha < 4.0:
        raise ValueError("utility asymptote is defined for 2 < alpha < 4")
    c, _ = cfg.canonical()
    h = c.alpha / 2.0
    if c.model is Model.FIXED:
        c2 = h ** h * math.exp(-h)
    else:
        c2 = math.gamma(h + 1.0)
    if c.n2 >= 2.0 * c.n1 / (c.alpha - 2.0):
        c1 = c2 * ((h - 1.0) / h) ** (h - 1.0)
        return c1 / c.n1 ** (h - 1.0)
    return c2 / (c.n1 + c.n2) ** (h - 1.0)


def cooperative_baseline(cfg: GameConfig) -> Tuple[StrategyPair, float]:
    """Joint optimum when both networks act as one: total density split in proportion to ``n_i``."""
    a = cfg.alpha
    if cfg.model is Model.FIXED:
        total = min(nm.solve_lambda_star(a), cfg.n1 + cfg.n2)
        beta = nm.optimal_beta(total, a)
        u_c = total * math.log1p(beta) * math.exp(-total * beta ** (2 / a))
    else:
        total = min(nm.solve_lambda_prime(a), cfg.n1 + cfg.n2)
        beta = None
        u_c = total * nm.vr_kernel(total, a)
    share = cfg.n1 / (cfg.n1 + cfg.n2)
    pair = StrategyPair(share * total, (1.0 - share) * total, beta, beta)
    return pair, u_c


def price_of_anarchy(cfg: GameConfig) -> float:
    """Ratio of cooperative to equilibrium system utility (>= 1)."""
    u_e = solve_equilibrium(cfg).u_e
    if not u_e > 0:
        raise ZeroDivisionError("equilibrium utility is zero")
    return cooperative_baseline(cfg)[1] / u_e


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

def _own_utility_grid(grid: np.ndarray, other: float, cfg: GameConfig) -> np.ndarray:
    if cfg.model is Model.FIXED:
        return utility_random_access(grid, np.full_like(grid, other), cfg.alpha)[0]
    return np.array([lam * nm.vr_kernel(lam + other, cfg.alpha) if lam + other > 0 else 0.0
                     for lam in grid])


def deviation_gains(eq: Equilibrium, cfg: GameConfig, points: int = 1000) -> Tuple[float, float]:
    """Largest relative utility gain either network gets from a unilateral grid deviation."""
    gains = []
    for own, other, n, u in ((eq.lambda1, eq.lambda2, cfg.n1, eq.u1),
                             (eq.lambda2, eq.lambda1, cfg.n2, eq.u2)):
        grid = np.linspace(0.0, n, points)
        best = float(np.max(_own_utility_grid(grid, other, cfg)))
        gains.append((best - u) / abs(u))
    return gains[0], gains[1]


def verify_equilibrium(eq: Equilibrium, cfg: GameConfig, rtol: float = 1e-6,
                       points: int = 1000) -> bool:
    return max(deviation_gains(eq, cfg, points)) <= rtol


def effective_nodes_per_disc(density: float, range_spec: RangeSpec) -> float:
    """``pi * density * E[d^2]``: nodes per transmission disc for random link ranges."""
    if not density > 0:
        raise ValueError("node density must be positive")
    return math.pi * density * range_spec.mean_square
