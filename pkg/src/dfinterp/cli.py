"""Command-line experiment drivers.

Exit codes: 0 all assertions pass, 1 an assertion failed, 2 budget exceeded,
3 bad input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import normlab
from ._validation import check_polydisc
from .interp import (
    MAP_BUDGET,
    BudgetExceeded,
    build_plan,
    block_plan,
    coefficients,
    map_partition_counts,
    partition_probability,
    reproduction_residuals,
    residual_curve,
)
from .normlab import ExperimentReport
from .poly import grid_points, random_polynomial
from .scheme import NodeScheme, moment
from .smallset import (
    assemble,
    choose_k,
    hadamard_bound,
    lambda_set,
    monte_carlo_det_moment,
    search_block,
)

EXIT_OK, EXIT_FAIL, EXIT_BUDGET, EXIT_INPUT = 0, 1, 2, 3


class BadInput(ValueError):
    pass


def _l_policy(value: str):
    try:
        return float(value)
    except ValueError:
        return value


def load_grid(spec: str, K: int, n: int) -> list[np.ndarray]:
    """``omega``, ``equispaced`` or ``custom:<file>`` with ``[[{"re", "im"}, ...], ...]``."""
    if spec.startswith("custom:"):
        path = Path(spec[len("custom:"):])
        try:
            data = json.loads(path.read_text())
            sets = [np.array([complex(p["re"], p.get("im", 0.0)) for p in coord]) for coord in data]
        except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
            raise BadInput(f"cannot read grid file {path}: {exc}") from exc
        if len(sets) == 1:
            sets = sets * n
        if len(sets) != n:
            raise BadInput(f"grid file has {len(sets)} coordinates, expected {n}")
        for s in sets:
            check_polydisc(s, 1, "grid")
        return sets
    try:
        return normlab.make_grid(spec, K, n)
    except ValueError as exc:
        raise BadInput(str(exc)) from exc


# ---------------------------------------------------------------------------
# commands


def cmd_verify(args) -> ExperimentReport:
    """Moment identities, partition probabilities, reproduction and residual curves."""
    rng = np.random.default_rng(args.seed)
    grid = load_grid(args.grid, args.K, args.n)
    report = ExperimentReport("verify", seed=args.seed,
                              inputs={"d": args.d, "K": args.K, "n": args.n, "grid": args.grid,
                                      "l_policy": str(args.l_policy), "corrupt_a0": args.corrupt_a0})
    schemes = [NodeScheme.from_nodes(g) for g in grid]
    z = _random_target(rng, args.n)
    plan = build_plan(schemes, args.d, z, args.l_policy)
    if args.corrupt_a0:
        plan.a_exact = [plan.a_exact[0] + Fraction(args.corrupt_a0).limit_denominator(10**12)] + plan.a_exact[1:]
    report.constants = {"L": plan.L, "D": plan.D, "l_policy": plan.l_policy, "m": plan.m_list,
                        "a": plan.a_list, "bound": plan.bound()}

    worst = 0.0
    for u, s in enumerate(schemes):
        for alpha in range(s.size):
            val = moment(plan.r, plan.w_maps[u], alpha)
            worst = max(worst, abs(val - plan.z[u] ** alpha / plan.D))
    report.measurements["moment_error"] = worst
    report.check("moment identity", worst, 1e-10)

    exact = True
    for n_units in range(1, min(args.n, 4) + 1):
        for m in range(1, 5):
            counts = map_partition_counts(n_units, m)
            total = m**n_units
            for blocks, count in counts.items():
                if Fraction(count, total) != partition_probability(len(blocks), n_units, m):
                    exact = False
    report.measurements["partition_probabilities_exact"] = exact
    report.check("partition probabilities", int(not exact), 0, "==")

    table = coefficients(plan, budget=args.budget or MAP_BUDGET)
    res = reproduction_residuals(plan, table)
    worst_rep = max(res.values())
    tol = 1e-9 * max(1.0, plan.bound())
    report.measurements.update({"reproduction_error": worst_rep, "l1": table.l1})
    report.check("reproduction on monomial basis", worst_rep, tol)
    report.check("l1 <= sum |a_j| D^m_j", table.l1, plan.bound() * (1 + 1e-6))

    if args.d >= 2:
        f = random_polynomial(args.n, args.d, args.K, None, rng)
        curve = residual_curve(plan, f, range(args.d, args.d + 5))
        report.measurements["residual_curve"] = curve.to_dict()
        report.check("residual curve extrapolation", curve.extrapolation_error, 1e-8)
        report.check("affine residual combination", curve.affine_residual, 1e-10)
    return report


def _random_target(rng, n: int) -> np.ndarray:
    return np.sqrt(rng.uniform(size=n)) * np.exp(2j * np.pi * rng.uniform(size=n))


def cmd_constant(args) -> ExperimentReport:
    grid = load_grid(args.grid, args.K, args.n)
    return normlab.empirical_constant(args.d, args.K, args.n, grid, args.ensemble, args.seed, args.l_policy)


def cmd_lp(args) -> ExperimentReport:
    if args.grid != "omega":
        raise BadInput("the L^p transfer uses the roots-of-unity grid only")
    return normlab.lp_transfer(args.d, args.K, args.n, args.p, args.ensemble, args.seed, args.l_policy)


def cmd_smallset(args) -> ExperimentReport:
    k = args.k if args.k is not None else choose_k(args.d, args.eps)[0]
    report = ExperimentReport("smallset", seed=args.seed,
                              inputs={"d": args.d, "K": args.K, "n": args.n, "k": k, "grid": args.grid})
    grid = load_grid(args.grid, args.K, args.n)
    lam = lambda_set(k, args.d, args.K)
    n_blocks = math.ceil(args.n / k)
    padded = grid + [grid[-1]] * (n_blocks * k - args.n)
    designs = []
    for b in range(n_blocks):
        designs.append(search_block(padded[b * k:(b + 1) * k], lam, budget=args.budget or 200_000,
                                    rng_seed=args.seed + b))
    Y = assemble(designs, args.n, k)
    full = int(np.prod([len(g) for g in grid]))
    report.constants = {"M": lam.M, "lambda": [list(a) for a in lam.elements],
                        "threshold": designs[0].threshold, "hadamard": hadamard_bound(lam.M)}
    report.measurements = {"set_size": len(Y), "grid_size": full,
                           "designs": [dsg.to_dict() for dsg in designs],
                           "flags": [dsg.flag for dsg in designs],
                           "points": Y.tolist()}
    report.check("set smaller than full grid", len(Y), full - 1)
    for b, dsg in enumerate(designs):
        report.check(f"block {b}: |detP| > 0", abs(dsg.detP), 0.0, ">")
        report.check(f"block {b}: Hadamard", abs(dsg.detP), hadamard_bound(lam.M) * (1 + 1e-12))
    if args.n % k == 0:
        rng = np.random.default_rng(args.seed)
        schemes = [dsg.scheme() for dsg in designs]
        worst = 0.0
        for _ in range(3):
            plan = block_plan(schemes, args.d, _random_target(rng, args.n))
            worst = max(worst, max(reproduction_residuals(plan, coefficients(plan)).values()))
        report.measurements["reproduction_error"] = worst
        report.check("block reproduction", worst, 1e-8)
    if args.ensemble:
        mean, se = monte_carlo_det_moment(lam, args.ensemble, args.seed)
        target = math.factorial(lam.M)
        report.measurements["det_moment"] = {"mean": mean, "stderr": se, "target": target}
        report.check("E|detP|^2 within 3 sigma of M!", abs(mean - target), 3 * se)
    return report


def cmd_probe(args) -> ExperimentReport:
    rng = np.random.default_rng(args.seed)
    if args.grid == "omega" and args.K == 2:
        V = grid_points([np.array([1, -1], dtype=complex)] * args.n)
    else:
        size = args.ensemble or 100
        V = _random_target(rng, args.n * size).reshape(size, args.n)
    mode = "exhaustive" if args.n <= 20 else "random"
    return normlab.lower_bound_probe(V, mode, args.seed)


def cmd_demo(args) -> ExperimentReport:
    eps = [args.eps] if args.eps is not None else [10.0**-j for j in range(1, 5)]
    return normlab.degeneracy_demo(args.K, eps)


COMMANDS = {
    "verify": cmd_verify,
    "constant": cmd_constant,
    "lp": cmd_lp,
    "smallset": cmd_smallset,
    "probe": cmd_probe,
    "demo": cmd_demo,
}

DEFAULTS = {
    "verify": {"d": 2, "K": 3, "n": 3, "seed": 1},
    "constant": {"d": 2, "K": 3, "n": 2, "ensemble": 100},
    "lp": {"d": 2, "K": 3, "n": 2, "p": 2, "ensemble": 200},
    "smallset": {"d": 2, "K": 3, "n": 4, "k": 2, "ensemble": 0},
    "probe": {"K": 2, "n": 12},
    "demo": {"K": 3},
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dfinterp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func in COMMANDS.items():
        p = sub.add_parser(name, help=(func.__doc__ or name).splitlines()[0])
        p.add_argument("--d", type=int, default=2)
        p.add_argument("--K", type=int, default=3)
        p.add_argument("--n", type=int, default=2)
        p.add_argument("--k", type=int, default=None)
        p.add_argument("--eps", type=float, default=None)
        p.add_argument("--p", type=int, default=2)
        p.add_argument("--grid", default="omega")
        p.add_argument("--ensemble", type=int, default=0)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--budget", type=int, default=None)
        p.add_argument("--l-policy", dest="l_policy", type=_l_policy, default="per-run")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--out", default=None, help="write the JSON report here instead of stdout")
        p.add_argument("--corrupt-a0", dest="corrupt_a0", type=float, default=0.0, help=argparse.SUPPRESS)
        p.set_defaults(**DEFAULTS[name])
    return parser


def _validate(args) -> None:
    if args.d < 1 or args.K < 2 or args.n < 1:
        raise BadInput("need d >= 1, K >= 2, n >= 1")
    if args.k is not None and args.k < 1:
        raise BadInput("k must be >= 1")
    if args.eps is not None and not 0 < args.eps <= 0.5:
        raise BadInput("eps must lie in (0, 1/2]")
    if args.threads < 1:
        raise BadInput("threads must be >= 1")
    if isinstance(args.l_policy, str) and args.l_policy not in ("per-run", "global-bound", "log-k"):
        raise BadInput(f"unknown L policy {args.l_policy!r}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        _validate(args)
        report = COMMANDS[args.command](args)
    except (BudgetExceeded, normlab.BudgetError) as exc:
        print(f"budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"bad input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report.runtime_ms = (time.perf_counter() - t0) * 1e3
    report.inputs.setdefault("threads", args.threads)
    text = report.to_json(indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    if not report.passed:
        print(f"assertion failed: {report.first_failure()}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
