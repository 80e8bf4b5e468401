"""Command-line surface: construction, validation, bounds, sweeps, Wigner.

Commands
    generate       build a partition + MUB set for (n, L), write JSON files
    bounds         emit the analytic lower-bound grid as CSV
    sweep          exhaustive selector-operator sweep for one MUB set
    reproduce-fig  per-L comparison data (bounds, sweep, minimizer, circles)
    wigner         phase-space report for the complete set in d = 2^n

Exit codes: 0 success, 2 validation failure, 3 budget refusal, 4 bad
arguments. The environment variable MUBFORGE_MAX_N (default 5) caps n.
Randomized commands echo their seed; every command echoes version + config.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path


from . import __version__
from .classes import (
    Partition,
    build_classes_2n1,
    build_classes_Ln,
    fixture_d4,
    is_prime,
    partition_to_json,
    validate_partition,
)
from .entropy import (
    BudgetExceededError,
    DEFAULT_BUDGET,
    avg_entropy,
    bounds,
    iter_sweep_rows,
    minimize_avg_entropy,
    sample_max_eigen,
    sweep_max_eigen,
)
from .mub import (
    MubSet,
    build_mub_set,
    invariant_superposition_family,
    mub_set_to_json,
    unbiasedness_deviation,
    verify_cycle,
)
from .wigner import complete_mub_bases, phase_space_csv, wigner_entropy_bound

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_BUDGET = 3
EXIT_BAD_ARGS = 4

FIG_SWEEP_GATE = 200_000  # strings; larger sweeps need --full
SAMPLE_SIZE = 20_000


def max_n() -> int:
    return int(os.environ.get("MUBFORGE_MAX_N", "5"))


def constructible(n: int, L: int) -> bool:
    if n == 2 and L in (3, 4):
        return True
    return is_prime(L) and (n % L == 0 or L == 2 * n + 1)


def build_partition(n: int, L: int) -> Partition:
    if n == 2 and L in (3, 4):
        return fixture_d4(L)
    if L == 2 * n + 1:
        return build_classes_2n1(n)
    return build_classes_Ln(n, L)


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    print(f"wrote {path}")


def _echo_config(args: argparse.Namespace) -> None:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    print(f"mubforge {__version__} :: {cfg}")


def cmd_generate(args) -> int:
    n, L = args.n, args.L
    if not constructible(n, L):
        print(
            f"unsupported (n={n}, L={L}): need L prime with L | n or "
            f"L = 2n+1 (or the d=4 fixtures L in {{3,4}} at n=2)",
            file=sys.stderr,
        )
        return EXIT_BAD_ARGS
    part = build_partition(n, L)
    report = validate_partition(part)
    out = Path(args.out)
    _write(out / "partition.json", partition_to_json(part))
    validation = {
        "p1": report.p1,
        "p2": report.p2,
        "p3": report.p3,
        "hermitian": report.hermitian,
        "singletons": report.singletons,
        "worst_p3_residual": report.worst_p3_residual,
        "p3_sign_flips": report.p3_sign_flips,
        "failures": list(report.failures),
    }
    if not report.ok:
        _write(out / "validation.json", json.dumps(validation, indent=1))
        print("partition validation FAILED", file=sys.stderr)
        return EXIT_VALIDATION
    ms = build_mub_set(part)
    cyc = verify_cycle(ms)
    dev = unbiasedness_deviation(ms.bases)
    validation.update(
        {
            "unbiasedness_deviation": dev,
            "cycle_residual": cyc.worst_residual,
            "cycle_permutations": [list(p) for p in cyc.permutations],
        }
    )
    _write(out / "validation.json", json.dumps(validation, indent=1))
    _write(out / "bases.json", mub_set_to_json(ms, cyc))
    unitary = [[[z.real, z.imag] for z in row] for row in ms.U]
    _write(out / "unitary.json", json.dumps(unitary))
    if dev > args.tol or cyc.worst_residual > args.tol:
        print("MUB validation FAILED", file=sys.stderr)
        return EXIT_VALIDATION
    print(
        f"n={n} L={L}: unbiasedness deviation {dev:.2e}, "
        f"cycle residual {cyc.worst_residual:.2e}"
    )
    return EXIT_OK


def cmd_bounds(args) -> int:
    rows = ["L,d,small_L,large_L,best"]
    d = 2
    while d <= args.dmax:
        for L in range(1, args.Lmax + 1):
            bs = bounds(L, d)
            rows.append(
                f"{L},{d},{bs.small_L:.10f},{bs.large_L:.10f},{bs.best:.10f}"
            )
        d *= 2
    text = "\n".join(rows) + "\n"
    if args.out:
        _write(Path(args.out), text)
    else:
        print(text, end="")
    return EXIT_OK


def cmd_sweep(args) -> int:
    if not constructible(args.n, args.L):
        print(f"unsupported (n={args.n}, L={args.L})", file=sys.stderr)
        return EXIT_BAD_ARGS
    ms = build_mub_set(build_partition(args.n, args.L))
    scale = args.L if args.normalization == "sum" else 1
    try:
        res = sweep_max_eigen(ms, budget=args.budget, workers=args.threads)
        rows = ["b_string,lambda_max,minus_log2"]
        for b, lam in iter_sweep_rows(ms, budget=args.budget):
            rows.append(
                f"{''.join(map(str, b))},{scale * lam:.12f},{-math.log2(lam):.12f}"
            )
    except BudgetExceededError as exc:
        print(f"budget refusal: {exc} (try sampling or --budget)", file=sys.stderr)
        return EXIT_BUDGET
    if args.out:
        _write(Path(args.out), "\n".join(rows) + "\n")
    print(
        f"lambda* = {scale * res.lambda_star:.12f} ({args.normalization} form) "
        f"at b = {res.b_star}; min avg H_inf = {res.min_avg_entropy:.9f} bits "
        f"over {res.count} strings"
    )
    return EXIT_OK


def cmd_minimize(args) -> int:
    if not constructible(args.n, args.L):
        print(f"unsupported (n={args.n}, L={args.L})", file=sys.stderr)
        return EXIT_BAD_ARGS
    alpha = math.inf if args.alpha in ("inf", "minentropy") else float(args.alpha)
    ms = build_mub_set(build_partition(args.n, args.L))
    psi, val = minimize_avg_entropy(ms, alpha, restarts=args.restarts, seed=args.seed)
    bs = bounds(args.L, ms.d)
    print(
        f"min avg H_{args.alpha} ~= {val:.9f} bits over {args.restarts} restarts "
        f"(seed {args.seed}); min-entropy bound {bs.best:.9f}"
    )
    if args.out:
        doc = {
            "n": args.n,
            "L": args.L,
            "alpha": args.alpha,
            "seed": args.seed,
            "restarts": args.restarts,
            "value_bits": val,
            "state": [[z.real, z.imag] for z in psi],
        }
        _write(Path(args.out), json.dumps(doc, indent=1))
    return EXIT_OK


def _figure_configs(which: int):
    if which == 1:
        return 2, 4, [2, 3, 4, 5]
    return 3, 8, list(range(2, 10))


def cmd_reproduce_fig(args) -> int:
    n, d, Ls = _figure_configs(args.which)
    rows = [
        "L,d,small_L,large_L,best,sweep_bits,sweep_mode,numeric_min,invariant_min"
    ]
    for L in Ls:
        bs = bounds(L, d)
        sweep_bits = sweep_mode = numeric = circle = ""
        if constructible(n, L):
            ms = build_mub_set(build_partition(n, L))
            total = d**L
            if total <= FIG_SWEEP_GATE or args.full:
                res = sweep_max_eigen(ms, budget=args.budget, workers=args.threads)
                sweep_bits, sweep_mode = f"{res.min_avg_entropy:.9f}", "full"
            else:
                res = sample_max_eigen(ms, SAMPLE_SIZE, seed=args.seed)
                sweep_bits, sweep_mode = f"{res.min_avg_entropy:.9f}", "sampled"
            _, val = minimize_avg_entropy(
                ms, math.inf, restarts=args.restarts, seed=args.seed
            )
            numeric = f"{val:.9f}"
            fam = invariant_superposition_family(ms)
            if fam:
                circle = f"{min(avg_entropy(ms, v, math.inf) for v in fam):.9f}"
        rows.append(
            f"{L},{d},{bs.small_L:.9f},{bs.large_L:.9f},{bs.best:.9f},"
            f"{sweep_bits},{sweep_mode},{numeric},{circle}"
        )
    out = Path(args.out)
    _write(out / f"fig{args.which}.csv", "\n".join(rows) + "\n")
    _write(out / f"plot_fig{args.which}.py", _plot_script(args.which))
    print(f"figure {args.which} dataset done (seed {args.seed})")
    return EXIT_OK


def _plot_script(which: int) -> str:
    return f'''"""Plot the figure-{which} dataset (requires matplotlib)."""
import csv
import matplotlib.pyplot as plt

rows = list(csv.DictReader(open("fig{which}.csv")))
L = [int(r["L"]) for r in rows]
plt.plot(L, [float(r["small_L"]) for r in rows], label="small-L bound")
plt.plot(L, [float(r["large_L"]) for r in rows], label="large-L bound")
xs = [int(r["L"]) for r in rows if r["numeric_min"]]
ys = [float(r["numeric_min"]) for r in rows if r["numeric_min"]]
plt.scatter(xs, ys, marker="x", c="k", label="numeric minimum")
xo = [int(r["L"]) for r in rows if r["invariant_min"]]
yo = [float(r["invariant_min"]) for r in rows if r["invariant_min"]]
plt.scatter(xo, yo, facecolors="none", edgecolors="r", label="invariant states")
plt.xlabel("number of bases L")
plt.ylabel("average min-entropy (bits)")
plt.legend()
plt.savefig("fig{which}.png", dpi=150)
'''


def cmd_wigner(args) -> int:
    n = args.n
    if n <= 2:
        bases = build_mub_set(build_classes_2n1(n)).bases
    else:
        bases = complete_mub_bases(n)
    text = phase_space_csv(bases)
    if args.out:
        _write(Path(args.out), text)
    else:
        print(text, end="")
    info = wigner_entropy_bound(bases, verbose=True)
    print(
        f"W_max = {info['w_max']:.9f}; min-entropy bound "
        f"{info['bound_bits']:.9f} bits (selector route "
        f"{info['selector_route_bits']:.9f})"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mubforge", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="construct and validate a MUB set")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--L", type=int, required=True)
    g.add_argument("--out", default="out")
    g.add_argument("--format", choices=["json"], default="json")
    g.add_argument("--tol", type=float, default=1e-8,
                   help="acceptance tolerance for unbiasedness/cycle residuals")
    g.set_defaults(func=cmd_generate)

    b = sub.add_parser("bounds", help="analytic lower-bound grid")
    b.add_argument("--dmax", type=int, default=32)
    b.add_argument("--Lmax", type=int, default=33)
    b.add_argument("--out", default=None)
    b.set_defaults(func=cmd_bounds)

    s = sub.add_parser("sweep", help="exhaustive selector sweep")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--L", type=int, required=True)
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--normalization", choices=["mean", "sum"], default="mean")
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_sweep)

    m = sub.add_parser("minimize", help="direct minimization of the average entropy")
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--L", type=int, required=True)
    m.add_argument("--alpha", default="inf", help="entropy order (number or 'inf')")
    m.add_argument("--restarts", type=int, default=64)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--out", default=None)
    m.set_defaults(func=cmd_minimize)

    f = sub.add_parser("reproduce-fig", help="bound/minimum comparison data")
    f.add_argument("--which", type=int, choices=[1, 2], required=True)
    f.add_argument("--out", default="out")
    f.add_argument("--full", action="store_true")
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--restarts", type=int, default=64)
    f.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    f.add_argument("--threads", type=int, default=1)
    f.set_defaults(func=cmd_reproduce_fig)

    w = sub.add_parser("wigner", help="phase-space report for the complete set")
    w.add_argument("--n", type=int, required=True)
    w.add_argument("--out", default=None)
    w.set_defaults(func=cmd_wigner)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_BAD_ARGS
    if getattr(args, "n", None) is not None:
        if args.n < 1 or args.n > max_n():
            print(
                f"n={args.n} outside 1..{max_n()} (MUBFORGE_MAX_N)", file=sys.stderr
            )
            return EXIT_BAD_ARGS
    _echo_config(args)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"budget refusal: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"bad arguments: {exc}", file=sys.stderr)
        return EXIT_BAD_ARGS


if __name__ == "__main__":
    sys.exit(main())
