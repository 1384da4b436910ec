"""Independent reference computations used as test oracles.

Nothing here imports the package: every quantity is recomputed from its
defining formula with plain numpy (grid scans, trapezoid rules, bisection,
golden-section search).
"""

import math

import numpy as np

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def bisect(fun, lo, hi, iters=200):
    flo = fun(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = fun(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def golden_max(fun, lo, hi, tol=1e-10):
    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = fun(c), fun(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = fun(d)
    return 0.5 * (a + b)


def eq3_residual(lam, alpha):
    x = np.asarray(lam, dtype=float) ** (alpha / 2.0)
    return (1.0 + x) * np.log1p(1.0 / x) - alpha / 2.0


def lambda_star_scan(alpha, step=1e-6, top=10.0):
    """Sign change of the residual on the grid ``step, 2 step, ..., top``, refined linearly."""
    grid = np.arange(1, int(round(top / step)) + 1) * step
    r = eq3_residual(grid, alpha)
    i = int(np.flatnonzero(np.sign(r[:-1]) != np.sign(r[1:]))[0])
    x0, x1, r0, r1 = grid[i], grid[i + 1], r[i], r[i + 1]
    return x0 - r0 * (x1 - x0) / (r1 - r0)


def _log_grid(total, alpha, points):
    # x = e^u; upper end where total * x^(2/alpha) = 60, lower tail below e^-45 is negligible
    u_hi = (alpha / 2.0) * math.log(60.0 / total)
    return np.linspace(-45.0, u_hi, points)


def kernel(total, alpha, power=0.0, points=40001):
    """``int_0^inf x^(2 power/alpha) exp(-total x^(2/alpha)) / (1 + x) dx`` by trapezoid in ``log x``."""
    u = _log_grid(total, alpha, points)
    x = np.exp(u)
    y = x ** (2.0 * power / alpha) * np.exp(-total * x ** (2.0 / alpha)) * x / (1.0 + x)
    return float(np.trapezoid(y, u)) if hasattr(np, "trapezoid") else float(np.trapz(y, u))


def kernel_brute(total, alpha, step=1e-4, chunk=2_000_000):
    """Plain trapezoid in ``x`` with the tail cut where the exponent drops below -40."""
    x_max = (40.0 / total) ** (alpha / 2.0)
    n = int(math.ceil(x_max / step))
    acc = 0.0
    for start in range(0, n, chunk):
        k = np.arange(start, min(n, start + chunk) + 1)
        x = k * step
        y = np.exp(-total * x ** (2.0 / alpha)) / (1.0 + x)
        w = np.ones_like(y)
        w[0] = w[-1] = 0.5
        acc += float(np.dot(w, y)) * step
    return acc


def f_ratio(s1, s2, alpha):
    return kernel(s1 + s2, alpha) / (s1 * kernel(s1 + s2, alpha, power=1.0))


def lambda_prime(alpha):
    return golden_max(lambda lam: lam * kernel(lam, alpha), 1e-3, 60.0, tol=1e-9)


def lambda_double_prime(alpha):
    return bisect(lambda s: f_ratio(s, s, alpha) - 1.0, 1e-2, 50.0, iters=80)


def fixed_gain(total, alpha):
    """``max_beta log(1+beta) exp(-total beta^(2/alpha))`` by golden section in ``log beta``."""
    def obj(y):
        b = math.exp(y)
        return math.log(math.log1p(b)) - total * b ** (2.0 / alpha)
    y = golden_max(obj, -40.0, 40.0, tol=1e-11)
    return math.exp(obj(y)), math.exp(y)


def fixed_gain_vec(total, alpha, iters=120):
    """Vectorised golden section over an array of total densities."""
    total = np.asarray(total, dtype=float)
    a = np.full_like(total, -40.0)
    b = np.full_like(total, 40.0)

    def obj(y):
        return np.log(np.log1p(np.exp(y))) - total * np.exp(2.0 * y / alpha)

    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = obj(c), obj(d)
    for _ in range(iters):
        left = fc > fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        c_new = np.where(left, b - GOLDEN * (b - a), d)
        d_new = np.where(left, c, a + GOLDEN * (b - a))
        c, d = c_new, d_new
        fc, fd = obj(c), obj(d)
    y = 0.5 * (a + b)
    return np.exp(obj(y))
