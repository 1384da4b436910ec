"""Scalar and vectorized solvers for the threshold functions of the spectrum game.

All transmit densities are measured in transmissions per transmission disc and
all rates in nats.  The transcendental equations solved here are:

* ``lambda_star``: single-network optimal density under fixed-rate coding,
  ``alpha/2 = (1 + L**(alpha/2)) * log(1 + L**(-alpha/2))``.
* ``optimal_beta``: best target SIR for a given total transmit density.
* ``lambda_prime`` / ``lambda_double_prime``: single-network optimum and
  symmetric two-network equilibrium under variable-rate coding.

The variable-rate kernel ``int_0^inf exp(-S x**(2/alpha)) dx / (1 + x)`` is
evaluated after the substitution ``t = S * x**(2/alpha)``, which turns it into
``(alpha/2) S**(-alpha/2) int_0^T t**(alpha/2 - 1) e**-t / (1 + (t/S)**(alpha/2)) dt``
with the tail cut at ``T = 40``.
"""

from __future__ import annotations

import math
import warnings
from typing import Callable, Optional

import numpy as np
from numba import cfunc, types
from scipy import LowLevelCallable
from scipy.integrate import IntegrationWarning, quad
from scipy.optimize import brentq

__all__ = [
    "TAIL_CUTOFF",
    "check_alpha",
    "phi",
    "solve_lambda_star",
    "lambda_star_residual",
    "optimal_beta",
    "fixed_rate_gain",
    "solve_beta_star",
    "vr_kernel",
    "vr_moment",
    "f_ratio",
    "solve_lambda_prime",
    "lambda_prime_residual",
    "solve_lambda_double_prime",
    "lambda_double_prime_residual",
    "vr_best_response_residual",
    "gamma",
]

TAIL_CUTOFF = 40.0
_XTOL = 1e-12
_RTOL = 4 * np.finfo(float).eps
_QUAD_RTOL = 1e-12
_BRACKET_LO = 1e-6
_BRACKET_HI = 1e6


def check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not alpha > 2.0 or not math.isfinite(alpha):
        raise ValueError(f"pathloss exponent must be finite and > 2, got {alpha}")
    return alpha


def phi(x):
    """``(1 + x) * log(1 + 1/x)``; strictly decreasing from +inf to 1 on x > 0."""
    x = np.asarray(x, dtype=float)
    out = (1.0 + x) * np.log1p(1.0 / x)
    return out if out.ndim else float(out)


def _find_root(fun: Callable[[float], float], lo: float = _BRACKET_LO,
               hi: float = _BRACKET_HI, *, limit_lo: float = 1e-300,
               limit_hi: float = 1e300) -> float:
    """Brent's method on a bracket grown geometrically until ``fun`` changes sign."""
    flo, fhi = fun(lo), fun(hi)
    while np.sign(flo) == np.sign(fhi) and flo != 0.0:
        if lo <= limit_lo and hi >= limit_hi:
            raise ValueError("root bracket expansion failed")
        if lo > limit_lo:
            lo /= 10.0
            flo = fun(lo)
        if np.sign(flo) == np.sign(fhi) and hi < limit_hi:
            hi *= 10.0
            fhi = fun(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    return brentq(fun, lo, hi, xtol=_XTOL, rtol=_RTOL, maxiter=500)


# ---------------------------------------------------------------------------
# Fixed-rate thresholds
# ---------------------------------------------------------------------------

def lambda_star_residual(lam: float, alpha: float) -> float:
    """Residual of the defining equation of ``lambda_star`` at ``lam``."""
    return phi(lam ** (alpha / 2.0)) - alpha / 2.0


def solve_lambda_star(alpha: float) -> float:
    """Optimal transmissions per disc for an isolated fixed-rate network."""
    alpha = check_alpha(alpha)
    return _find_root(lambda lam: lambda_star_residual(lam, alpha))


def _beta_equation(y, log_rhs, alpha):
    # log of alpha/(2 S beta^(2/alpha)) minus log of (1 + 1/beta) log(1 + beta), y = log beta
    return (log_rhs - (2.0 / alpha) * y
            - np.logaddexp(0.0, -y) - np.log(np.logaddexp(0.0, y)))


def optimal_beta(total_density, alpha: float):
    """Target SIR maximizing ``log(1 + b) * exp(-S b**(2/alpha))`` for total density S.

    Accepts a scalar or an array of totals.  The optimality condition
    ``alpha / (2 S b**(2/alpha)) = (1 + 1/b) log(1 + b)`` is solved in
    ``log b``; scalars use Brent's method, arrays a vectorized bisection run
    to floating-point resolution.
    """
    alpha = check_alpha(alpha)
    s = np.asarray(total_density, dtype=float)
    if np.any(~(s > 0)):
        raise ValueError("total density must be positive")
    log_rhs = np.log(alpha / (2.0 * s))
    center = 0.5 * alpha * log_rhs
    if s.ndim == 0:
        fun = lambda y: float(_beta_equation(y, float(log_rhs), alpha))
        lo, hi, step = float(center) - 1.0, float(center) + 1e-9, 1.0
        while fun(lo) <= 0.0:
            step *= 2.0
            lo -= step
        y = brentq(fun, lo, hi, xtol=1e-15, rtol=_RTOL, maxiter=500)
        return math.exp(y)

    lo = center - 1.0
    hi = center + 1e-9
    step = np.ones_like(lo)
    bad = _beta_equation(lo, log_rhs, alpha) <= 0.0
    while np.any(bad):
        step[bad] *= 2.0
        lo[bad] -= step[bad]
        bad = _beta_equation(lo, log_rhs, alpha) <= 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        pos = _beta_equation(mid, log_rhs, alpha) > 0.0
        lo = np.where(pos, mid, lo)
        hi = np.where(pos, hi, mid)
        if np.all(hi - lo <= 1e-15 * np.maximum(1.0, np.abs(lo))):
            break
    return np.exp(0.5 * (lo + hi))


def fixed_rate_gain(total_density, alpha: float):
    """``max_b log(1 + b) exp(-S b**(2/alpha))``: fixed-rate utility per unit density."""
    beta = optimal_beta(total_density, alpha)
    s = np.asarray(total_density, dtype=float)
    out = np.log1p(beta) * np.exp(-s * np.asarray(beta) ** (2.0 / alpha))
    return out if out.ndim else float(out)


def solve_beta_star(n_per_disc: float, alpha: float) -> float:
    """Optimal target SIR for an isolated network with ``n_per_disc`` nodes per disc.

    Dense networks (``n > lambda_star``) run at density ``lambda_star`` with
    ``beta = lambda_star**(-alpha/2)``; sparse ones schedule every link and
    tune beta to the full density.
    """
    alpha = check_alpha(alpha)
    if not n_per_disc > 0:
        raise ValueError("nodes per disc must be positive")
    lam = solve_lambda_star(alpha)
    if n_per_disc > lam:
        return lam ** (-alpha / 2.0)
    return optimal_beta(float(n_per_disc), alpha)


# ---------------------------------------------------------------------------
# Variable-rate kernel
# ---------------------------------------------------------------------------

@cfunc(types.float64(types.intc, types.CPointer(types.float64)), cache=True)
def _kernel_integrand(n, xx):  # pragma: no cover - compiled
    t = xx[0]
    half = xx[1]
    s = xx[2]
    extra = xx[3]
    return t ** (half - 1.0 + extra) * math.exp(-t) / (1.0 + (t / s) ** half)


_KERNEL = LowLevelCallable(_kernel_integrand.ctypes)


def _scaled_integral(s: float, alpha: float, extra_power: float) -> float:
    points = [s] if s < TAIL_CUTOFF else None
    with warnings.catch_warnings():
        # roundoff warnings fire near machine precision, well past the tolerance we need
        warnings.simplefilter("ignore", IntegrationWarning)
        value, _ = quad(_KERNEL, 0.0, TAIL_CUTOFF, args=(alpha / 2.0, s, extra_power),
                        epsabs=0.0, epsrel=_QUAD_RTOL, limit=400, points=points)
    return value


def vr_kernel(lambda_sum: float, alpha: float) -> float:
    """``int_0^inf exp(-S x**(2/alpha)) dx / (1 + x)``, the variable-rate utility per unit density."""
    alpha = check_alpha(alpha)
    s = float(lambda_sum)
    if not s > 0:
        raise ValueError("variable-rate kernel diverges for total density <= 0")
    half = alpha / 2.0
    return half * s ** (-half) * _scaled_integral(s, alpha, 0.0)


def vr_moment(lambda_sum: float, alpha: float) -> float:
    """``int_0^inf x**(2/alpha) exp(-S x**(2/alpha)) dx / (1 + x)``, minus the derivative of the kernel."""
    alpha = check_alpha(alpha)
    s = float(lambda_sum)
    if not s > 0:
        raise ValueError("total density must be positive")
    half = alpha / 2.0
    return half * s ** (-half - 1.0) * _scaled_integral(s, alpha, 1.0)


def f_ratio(s_self: float, s_other: float, alpha: float) -> float:
    """Kernel over density-weighted moment; a variable-rate best response sits where this is 1."""
    if not s_self > 0 or not s_other >= 0:
        raise ValueError("need s_self > 0 and s_other >= 0")
    total = s_self + s_other
    return vr_kernel(total, alpha) / (s_self * vr_moment(total, alpha))


def vr_best_response_residual(lam: float, other: float, alpha: float) -> float:
    """``int (1 - lam x**(2/alpha)) / (1 + x) exp(-(lam + other) x**(2/alpha)) dx``.

    Positive below the best response to ``other`` and negative above it.
    """
    total = lam + other
    return vr_kernel(total, alpha) - lam * vr_moment(total, alpha)


def lambda_prime_residual(lam: float, alpha: float) -> float:
    return vr_best_response_residual(lam, 0.0, alpha)


def lambda_double_prime_residual(lam: float, alpha: float) -> float:
    return vr_best_response_residual(lam, lam, alpha)


def solve_lambda_prime(alpha: float) -> float:
    """Unconstrained maximizer of ``L * vr_kernel(L, alpha)``."""
    alpha = check_alpha(alpha)
    return _find_root(lambda lam: lambda_prime_residual(lam, alpha))


def solve_lambda_double_prime(alpha: float) -> Optional[float]:
    """Symmetric interior variable-rate equilibrium density, or ``None`` when alpha <= 4.

    ``None`` stands for the +infinity of the theory: for alpha <= 4 the ratio
    ``f(s, s)`` stays above ``4/alpha >= 1`` and never reaches 1.
    """
    alpha = check_alpha(alpha)
    if alpha <= 4.0:
        return None
    return _find_root(lambda lam: lambda_double_prime_residual(lam, alpha))


def gamma(x: float) -> float:
    return math.gamma(x)
