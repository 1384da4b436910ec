"""Command-line front end: thresholds, equilibria, regime maps, price of anarchy, simulation.

Every command writes machine-readable data (JSON or CSV) with 12 significant
digits.  Exit status is 0 on success, 2 on invalid input, 1 on internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from . import numerics as nm
from .game import (GameConfig, Model, cooperative_baseline, regime_label, solve_equilibrium,
                   verify_equilibrium)
from .geometry import RangeSpec
from .simulator import SirModel, TopologySpec, run_greedy_adaptation
from .simulator import rng as rngmod

__all__ = ["main", "build_parser", "cmd_thresholds", "cmd_equilibrium", "cmd_regime_map",
           "cmd_poa_curve", "cmd_simulate"]

DIGITS = 12
TAIL = 100


class UsageError(ValueError):
    """Invalid command-line input (exit status 2)."""


def _round(x: Any) -> Any:
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if not math.isfinite(x) else float(f"{x:.{DIGITS}g}")
    if isinstance(x, dict):
        return {k: _round(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round(v) for v in x]
    return x


def _cell(x: Any) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.{DIGITS}g}"
    return str(x)


def to_json(data: Any) -> str:
    return json.dumps(_round(data), indent=2) + "\n"


def to_csv(rows: Sequence[Dict[str, Any]], header: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(r[h]) for h in header])
    return buf.getvalue()


def _render(data, fmt: str) -> str:
    """A record (dict) or a table (list of dicts) in the requested format."""
    if fmt == "json":
        return to_json(data)
    rows = [data] if isinstance(data, dict) else data
    header = list(rows[0].keys()) if rows else []
    return to_csv(rows, header)


# ---------------------------------------------------------------------------
# Commands return plain data; main() handles formatting and output.


def cmd_thresholds(alpha: float) -> Dict[str, Optional[float]]:
    nm.check_alpha(alpha)
    lam = nm.solve_lambda_star(alpha)
    half = alpha / 2.0
    return {
        "alpha": alpha,
        "lambda_star": lam,
        "beta_star_unconstrained": lam ** (-alpha / 2.0),
        "lambda_prime": nm.solve_lambda_prime(alpha),
        "lambda_double_prime": nm.solve_lambda_double_prime(alpha),
        "sqrt_lambda_star_half_alpha": math.sqrt(nm.solve_lambda_star(half)) if half > 2 else None,
    }


def cmd_equilibrium(alpha: float, n1: float, n2: float, model: str = "fixed",
                    verify: bool = False) -> Dict[str, Any]:
    cfg = GameConfig(alpha, n1, n2, Model(model))
    eq = solve_equilibrium(cfg)
    u_c = cooperative_baseline(cfg)[1]
    return {
        "alpha": alpha,
        "n1": n1,
        "n2": n2,
        "model": cfg.model.value,
        "regime": eq.regime_label,
        "canonical_swap": eq.canonical_swap,
        "lambda1": eq.lambda1,
        "lambda2": eq.lambda2,
        "p1": eq.p1,
        "p2": eq.p2,
        "beta1": eq.beta1,
        "beta2": eq.beta2,
        "u1": eq.u1,
        "u2": eq.u2,
        "u_e": eq.u_e,
        "u_c": u_c,
        "price_of_anarchy": u_c / eq.u_e if eq.u_e > 0 else None,
        "verified": verify_equilibrium(eq, cfg) if verify else None,
    }


def _grid(n_max: float, steps: int) -> np.ndarray:
    # cell centres: a network with zero nodes is not a game
    return (np.arange(steps) + 0.5) * n_max / steps


def cmd_regime_map(alpha: float, n_max: float, grid_steps: int,
                   model: str = "fixed") -> List[Dict[str, Any]]:
    nm.check_alpha(alpha)
    if grid_steps < 2:
        raise UsageError("grid_steps must be at least 2")
    if not (n_max > 0 and math.isfinite(n_max)):
        raise UsageError("n_max must be positive")
    rows = []
    for a in _grid(n_max, grid_steps):
        for b in _grid(n_max, grid_steps):
            cfg = GameConfig(alpha, float(a), float(b), Model(model))
            eq = solve_equilibrium(cfg)
            rows.append({"n1": float(a), "n2": float(b), "regime": eq.regime_label})
    return rows


def cmd_poa_curve(alpha: float, n1_min: float, n1_max: float, points: int,
                  n2_ratio: float = 1.0, model: str = "fixed") -> List[Dict[str, Any]]:
    """Price of anarchy along ``n2 = n2_ratio * n1`` for log-spaced ``n1``."""
    nm.check_alpha(alpha)
    if points < 2 or not 0 < n1_min < n1_max or not n2_ratio > 0:
        raise UsageError("need points >= 2, 0 < n1_min < n1_max and n2_ratio > 0")
    rows = []
    for a in np.geomspace(n1_min, n1_max, points):
        cfg = GameConfig(alpha, float(a), float(a) * n2_ratio, Model(model))
        eq = solve_equilibrium(cfg)
        u_c = cooperative_baseline(cfg)[1]
        rows.append({"n1": float(a), "n2": cfg.n2, "regime": eq.regime_label,
                     "u_e": eq.u_e, "u_c": u_c, "price_of_anarchy": u_c / eq.u_e})
    return rows


def _default_beta(args, alpha: float) -> float:
    # full-load optimum for the configured node counts
    m2 = RangeSpec.uniform_disc(args.radius).mean_square
    total = math.pi * (args.n1_count + args.n2_count) * m2
    return float(nm.optimal_beta(total, alpha))


def cmd_simulate(args: argparse.Namespace):
    """Run the greedy adaptation and return ``(trace, summary, topology)``."""
    if args.n1_count < 1 or args.n2_count < 1:
        raise UsageError("node counts must be at least 1")
    if not 0 < args.radius < 0.5:
        raise UsageError("radius must lie in (0, 0.5)")
    if args.model == "fixed":
        b1 = args.beta1 if args.beta1 is not None else _default_beta(args, args.alpha)
        b2 = args.beta2 if args.beta2 is not None else b1
        betas = (b1, b2)
    else:
        betas = None
    model = SirModel(args.alpha, args.interference, betas)
    if args.protocol == "ra":
        delta = 0.02 if args.delta is None else args.delta
        init = (1.0, 1.0)
    else:
        delta = 1.0 if args.delta is None else args.delta
        init = (-30.0, -30.0)
    init = (init[0] if args.init1 is None else args.init1,
            init[1] if args.init2 is None else args.init2)
    churn = args.churn if args.churn is not None else (10 if args.protocol == "csma" else 0)
    spec = TopologySpec(args.n1_count, args.n2_count, RangeSpec.uniform_disc(args.radius),
                        power_control=args.power_control, margin=args.margin)
    trace = run_greedy_adaptation(spec, args.protocol, init[0], init[1], delta, args.iters,
                                  args.slots, churn, args.seed, model=model,
                                  gamma_owner=args.gamma_owner)
    last = min(TAIL, len(trace.steps))
    s1, s2 = trace.tail_mean(last, "strategy")
    f1, f2 = trace.tail_mean(last, "fraction")
    summary = {
        "protocol": args.protocol,
        "alpha": args.alpha,
        "seed": args.seed,
        "iterations": args.iters,
        "tail_iterations": last,
        "strategy1_mean": s1,
        "strategy2_mean": s2,
        "fraction1_mean": f1,
        "fraction2_mean": f2,
    }
    topology = spec.build(rngmod.derive_seed(args.seed, rngmod.TOPOLOGY))
    return trace, summary, topology


# ---------------------------------------------------------------------------
# Argument parsing


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(_fail(f"{self.prog}: error: {message}", 2))


def _fail(message: str, code: int) -> int:
    print(message, file=sys.stderr)
    return code


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--seed", type=_seed, default=1)

    p = _Parser(prog="spectrum-game", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    t = sub.add_parser("thresholds", parents=[common], help="equilibrium and cooperative thresholds")
    t.add_argument("--alpha", type=float, required=True)

    e = sub.add_parser("equilibrium", parents=[common], help="Nash equilibrium of one game")
    e.add_argument("--alpha", type=float, required=True)
    e.add_argument("--n1", type=float, required=True)
    e.add_argument("--n2", type=float, required=True)
    e.add_argument("--model", choices=("fixed", "variable"), default="fixed")
    e.add_argument("--verify", action="store_true",
                   help="check unilateral deviations on a 1000-point grid")

    r = sub.add_parser("regime-map", parents=[common], help="equilibrium regime on an n1 x n2 grid")
    r.add_argument("--alpha", type=float, required=True)
    r.add_argument("--n-max", type=float, default=10.0)
    r.add_argument("--grid-steps", type=int, default=50)
    r.add_argument("--model", choices=("fixed", "variable"), default="fixed")

    c = sub.add_parser("poa-curve", parents=[common], help="price of anarchy versus n1")
    c.add_argument("--alpha", type=float, required=True)
    c.add_argument("--n1-min", type=float, default=0.1)
    c.add_argument("--n1-max", type=float, default=1000.0)
    c.add_argument("--points", type=int, default=50)
    c.add_argument("--n2-ratio", type=float, default=1.0)
    c.add_argument("--model", choices=("fixed", "variable"), default="fixed")

    s = sub.add_parser("simulate", parents=[common], help="greedy adaptation on a random topology")
    s.add_argument("--protocol", choices=("ra", "csma"), default="ra")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--n1-count", type=int, default=400)
    s.add_argument("--n2-count", type=int, default=200)
    s.add_argument("--radius", type=float, default=0.15)
    s.add_argument("--delta", type=float, default=None,
                   help="step size (default 0.02 for ra, 1 dB for csma)")
    s.add_argument("--iters", type=_positive_int, default=500)
    s.add_argument("--slots", type=_positive_int, default=200)
    s.add_argument("--model", choices=("fixed", "variable"), default="variable")
    s.add_argument("--churn", type=int, default=None,
                   help="links replaced per network per iteration (default 10 for csma, 0 for ra)")
    s.add_argument("--interference", choices=("full", "dominant"), default="full")
    s.add_argument("--power-control", action=argparse.BooleanOptionalAction, default=True)
    s.add_argument("--margin", type=float, default=0.1)
    s.add_argument("--gamma-owner", choices=("candidate", "protected"), default="candidate")
    s.add_argument("--init1", type=float, default=None)
    s.add_argument("--init2", type=float, default=None)
    s.add_argument("--beta1", type=float, default=None)
    s.add_argument("--beta2", type=float, default=None)
    s.add_argument("--topology-out", default=None, help="also write the initial topology CSV")
    return p


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _run(args: argparse.Namespace) -> None:
    cmd = args.command
    if cmd == "thresholds":
        _emit(_render(cmd_thresholds(args.alpha), args.format or "json"), args.out)
    elif cmd == "equilibrium":
        data = cmd_equilibrium(args.alpha, args.n1, args.n2, args.model, args.verify)
        _emit(_render(data, args.format or "json"), args.out)
    elif cmd == "regime-map":
        rows = cmd_regime_map(args.alpha, args.n_max, args.grid_steps, args.model)
        _emit(_render(rows, args.format or "csv"), args.out)
    elif cmd == "poa-curve":
        rows = cmd_poa_curve(args.alpha, args.n1_min, args.n1_max, args.points,
                             args.n2_ratio, args.model)
        _emit(_render(rows, args.format or "csv"), args.out)
    elif cmd == "simulate":
        trace, summary, topology = cmd_simulate(args)
        if (args.format or "csv") == "csv":
            body = trace.to_csv()
        else:
            body = to_json([{"iter": s.t, "strategy1": s.strategy1, "strategy2": s.strategy2,
                             "r1": s.measured_r1, "r2": s.measured_r2,
                             "f1": s.fraction1, "f2": s.fraction2} for s in trace.steps])
        if args.topology_out:
            _emit(topology.to_csv(), args.topology_out)
        _emit(body, args.out)
        # the summary shares stdout only when the trace goes to a file
        stream = sys.stdout if args.out else sys.stderr
        stream.write(to_json(summary))


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _run(args)
    except (ValueError, ZeroDivisionError) as exc:
        return _fail(f"error: {exc}", 2)
    except OSError as exc:
        return _fail(f"error: {exc}", 2)
    except Exception as exc:  # noqa: BLE001
        return _fail(f"internal error: {type(exc).__name__}: {exc}", 1)
    return 0


if __name__ == "__main__":
    sys.exit(main())
