"""Command-line entry point: ``python -m monoknap <subcommand> ...``.

Exit status is 0 on success, 1 when a verification finds a mismatch and 2 on
usage errors or malformed input.  Randomized subcommands take ``--seed`` and
default to seed 0, so repeating a command reproduces its output byte for byte
(``bench`` timings excepted).
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
import time
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import approx, oracle, reductions
from .core import UNBOUNDED, ZERO_ONE, InvalidInstanceError, KnapsackInstance, MonotoneSeq, Solution
from .formats import (
    FormatError,
    dumps,
    instance_to_json,
    load_instance,
    load_seq,
    seq_to_json,
    steps_to_json,
)
from .maxplus import KernelConfig, maxconv, witness_array
from .unbounded_exact import solve_unbounded
from .zeroone_exact import ZeroOneConfig, solve_zeroone

DEFAULT_SEED = 0
SOLVERS = ("unbounded", "zeroone", "fptas", "weak-fptas")
KERNELS = ("naive", "plugin")
BENCH_FIELDS = ("solver", "kernel", "n", "W", "p_max", "w_max", "epsilon", "wall_nanos", "value", "oracle_value")


class Mismatch(Exception):
    """A verification failed; reported with exit status 1."""


def _epsilon(text: str) -> Fraction:
    try:
        eps = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a fraction: {text!r}") from None
    if not 0 < eps < 1:
        raise argparse.ArgumentTypeError(f"epsilon must lie in (0, 1), got {text}")
    return eps


def _sweep(text: str) -> range:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI exponents, got {text!r}") from None
    if not 1 <= lo <= hi <= 40:
        raise argparse.ArgumentTypeError(f"exponent range out of bounds: {text}")
    return range(lo, hi + 1)


def _task_seed(seed: int, index: int) -> int:
    """Private seed for task ``index``, independent of how tasks are scheduled."""
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def _load_mode(path: str, mode: str) -> KnapsackInstance:
    inst = load_instance(path)
    if inst.mode != mode:
        raise FormatError("mode", f"this subcommand expects {mode!r}, got {inst.mode!r}")
    return inst


def _oracle_opt(inst: KnapsackInstance) -> int | None:
    """Bellman optimum when the table fits the oracle budget, else ``None``."""
    if inst.n * (inst.capacity + 1) > oracle.DEFAULT_BUDGET:
        return None
    table = oracle.bellman_unbounded(inst) if inst.mode == UNBOUNDED else oracle.bellman_zeroone(inst)
    return int(table.values[inst.capacity])


def _check_solution(inst: KnapsackInstance, sol: Solution, value: int, weight_cap: int, exact: bool) -> None:
    if any(i < 0 or i >= inst.n for i in sol.counts):
        raise Mismatch("solution uses an unknown item")
    if inst.mode == ZERO_ONE and any(c != 1 for c in sol.counts.values()):
        raise Mismatch("solution repeats an item in a 0-1 instance")
    if sol.weight(inst) > weight_cap:
        raise Mismatch(f"solution weight {sol.weight(inst)} exceeds {weight_cap}")
    profit = sol.profit(inst)
    if profit < value or (exact and profit != value):
        raise Mismatch(f"solution profit {profit} does not match reported value {value}")


# --- subcommands -----------------------------------------------------------


def cmd_conv(args) -> int:
    a, b = load_seq(args.a), load_seq(args.b)
    config = KernelConfig(kernel_id=args.kernel, rng_seed=args.seed)
    out = seq_to_json(maxconv(a, b, config))
    if args.witnesses:
        wit = witness_array(a, b, config)
        out["witnesses"] = [int(i) if d else None for i, d in zip(wit.indices.tolist(), wit.defined.tolist())]
    print(dumps(out))
    return 0


def _report_exact(inst: KnapsackInstance, opt: int, sol: Solution, args) -> int:
    out: dict = {"opt": opt}
    if args.reconstruct:
        _check_solution(inst, sol, opt, inst.capacity, exact=True)
        out["solution"] = sol.as_pairs()
    if args.oracle_check:
        ref = _oracle_opt(inst)
        out["oracle_opt"] = ref
        print(dumps(out))
        if ref is not None and ref != opt:
            raise Mismatch(f"solver reports {opt}, oracle reports {ref}")
        return 0
    print(dumps(out))
    return 0


def cmd_solve_unbounded(args) -> int:
    inst = _load_mode(args.input, UNBOUNDED)
    config = KernelConfig(kernel_id=args.kernel, rng_seed=args.seed)
    opt, sol = solve_unbounded(inst, config, reconstruct=args.reconstruct)
    return _report_exact(inst, opt, sol, args)


def cmd_solve_01(args) -> int:
    inst = _load_mode(args.input, ZERO_ONE)
    cfg = ZeroOneConfig(rng_seed=args.seed, repetition_factor=args.reps_factor)
    kernel = KernelConfig(kernel_id=args.kernel, rng_seed=args.seed)
    opt, sol = solve_zeroone(inst, cfg, kernel, reconstruct=args.reconstruct)
    return _report_exact(inst, opt, sol, args)


def _approx_cmd(args, weak: bool) -> int:
    inst = _load_mode(args.input, UNBOUNDED)
    eps = args.epsilon
    if weak:
        kernel = KernelConfig(kernel_id=args.kernel, rng_seed=args.seed)
        value, sol = approx.weak_fptas(inst, eps, kernel, reconstruct=args.reconstruct)
        weight_cap = math.floor((1 + eps) * inst.capacity)
    else:
        value, sol = approx.fptas(inst, eps, reconstruct=args.reconstruct)
        weight_cap = inst.capacity
    out: dict = {"epsilon": str(eps), "value": value}
    if args.reconstruct:
        _check_solution(inst, sol, value, weight_cap, exact=not weak)
        out["solution"] = sol.as_pairs()
        out["weight"] = sol.weight(inst)
    ref = _oracle_opt(inst) if args.oracle_check else None
    if args.oracle_check:
        out["oracle_opt"] = ref
    print(dumps(out))
    if ref is not None and value < (1 - eps) * ref:
        raise Mismatch(f"value {value} is below (1 - {eps}) * {ref}")
    return 0


def cmd_gen(args) -> int:
    if args.kind == "instance":
        mode = ZERO_ONE if args.mode == "zero-one" else UNBOUNDED
        inst = oracle.gen_instance(args.n, args.p_max, args.w_max, args.capacity, mode, args.correlation, args.seed)
        print(dumps(instance_to_json(inst)))
    elif args.kind == "seq":
        bound = args.n if args.bound is None else args.bound
        print(dumps(seq_to_json(oracle.gen_monotone_seq(args.n, bound, args.seed, args.leading_neg_inf))))
    else:
        steps = oracle.gen_step_list(args.n, args.w_max, args.p_max, args.seed, args.with_zero)
        print(dumps(steps_to_json(steps)))
    return 0


def cmd_reduce(args) -> int:
    if args.source == "superadd":
        if args.input is None:
            raise FormatError("--input", "required when reducing from superadd")
        e = load_seq(args.input).values
    else:
        missing = [f for f in ("a", "b", "c") if getattr(args, f) is None]
        if missing:
            raise FormatError(f"--{missing[0]}", "required when reducing from bmmaxconv")
        a, b, c = (load_seq(p).values for p in (args.a, args.b, args.c))
        e = reductions.upperbound_to_superadditivity(a, b, c)
    inst, threshold = reductions.superadditivity_to_knapsack(e)
    if args.target == "zeroone":
        inst = reductions.unbounded_to_zeroone(inst)
    out = instance_to_json(inst)
    out["threshold"] = threshold
    print(dumps(out))
    return 0


def cmd_verify_chain(args) -> int:
    backends = args.backend or list(reductions.BACKENDS)
    bound = args.n if args.bound is None else args.bound
    config = KernelConfig(rng_seed=args.seed)
    mismatches = calls = 0
    for t in range(args.trials):
        a = oracle.gen_monotone_seq(args.n, bound, _task_seed(args.seed, 2 * t))
        b = oracle.gen_monotone_seq(args.n, bound, _task_seed(args.seed, 2 * t + 1))
        want = oracle.brute_maxconv(a, b)
        for backend in backends:
            stats = reductions.ChainStats()
            got = reductions.solve_bmmaxconv_via_knapsack(a, b, backend, config, stats)
            calls += stats.oracle_calls
            if got != want:
                mismatches += 1
                print(f"trial {t}: backend {backend} disagrees with brute force", file=sys.stderr)
    print(dumps({"n": args.n, "trials": args.trials, "backends": backends, "oracle_calls": calls, "mismatches": mismatches}))
    if mismatches:
        raise Mismatch(f"{mismatches} chain results differ from brute force")
    return 0


def _verify_one(solver: str, inst: KnapsackInstance, args, seed: int) -> str | None:
    """Run ``solver`` on ``inst`` against the oracle; a message on failure."""
    ref = _oracle_opt(inst)
    kernel = KernelConfig(kernel_id=args.kernel, rng_seed=seed)
    try:
        if solver == "unbounded":
            value, sol = solve_unbounded(inst, kernel)
            _check_solution(inst, sol, value, inst.capacity, exact=True)
            ok = value == ref
        elif solver == "zeroone":
            value, sol = solve_zeroone(inst, ZeroOneConfig(rng_seed=seed), kernel)
            _check_solution(inst, sol, value, inst.capacity, exact=True)
            ok = value == ref
        elif solver == "exact-via-weak":
            value = reductions.exact_via_weak_approx(inst, kernel)
            ok = value == ref
        else:
            eps = args.epsilon
            weak = solver == "weak-fptas"
            if weak:
                value, sol = approx.weak_fptas(inst, eps, kernel)
                cap = math.floor((1 + eps) * inst.capacity)
            else:
                value, sol = approx.fptas(inst, eps)
                cap = inst.capacity
            _check_solution(inst, sol, value, cap, exact=not weak)
            ok = value >= (1 - eps) * ref
    except Mismatch as exc:
        return str(exc)
    return None if ok else f"value {value}, oracle {ref}"


def cmd_verify(args) -> int:
    mode = ZERO_ONE if args.solver == "zeroone" else UNBOUNDED
    failures = 0
    for t in range(args.trials):
        seed = _task_seed(args.seed, t)
        inst = oracle.gen_instance(args.n, args.p_max, args.w_max, args.capacity, mode, args.correlation, seed)
        msg = _verify_one(args.solver, inst, args, seed)
        if msg is not None:
            failures += 1
            print(f"trial {t}: {msg}", file=sys.stderr)
    print(dumps({"solver": args.solver, "trials": args.trials, "mismatches": failures}))
    if failures:
        raise Mismatch(f"{failures} of {args.trials} runs disagree with the oracle")
    return 0


# --- bench -----------------------------------------------------------------


def _bench_runner(solver: str, kernel: str, eps: Fraction, seed: int) -> Callable[[KnapsackInstance], int]:
    config = KernelConfig(kernel_id=kernel, rng_seed=seed)
    if solver == "unbounded":
        return lambda inst: solve_unbounded(inst, config, reconstruct=False)[0]
    if solver == "zeroone":
        return lambda inst: solve_zeroone(inst, ZeroOneConfig(rng_seed=seed), config, reconstruct=False)[0]
    if solver == "fptas":
        return lambda inst: approx.fptas(inst, eps, reconstruct=False)[0]
    return lambda inst: approx.weak_fptas(inst, eps, config, reconstruct=False)[0]


def bench_rows(args) -> list[dict]:
    """Generate the instances, time every solver/kernel pair and return the CSV rows."""
    if args.delta_sweep is not None:
        shapes = []
        for e in args.delta_sweep:
            half = 1 << (e - 1)
            shapes.append((half, half, args.capacity if args.capacity is not None else half))
    else:
        shapes = [(args.p_max, args.w_max, 1000 if args.capacity is None else args.capacity)]
    solvers = args.solver or ["unbounded"]
    kernels = args.kernel or ["naive"]
    rows = []
    task = 0
    for p_max, w_max, cap in shapes:
        for trial in range(args.trials):
            seed = _task_seed(args.seed, task)
            task += 1
            for solver in solvers:
                mode = ZERO_ONE if solver == "zeroone" else UNBOUNDED
                inst = oracle.gen_instance(args.n, p_max, w_max, cap, mode, args.correlation, seed)
                approx_solver = solver in ("fptas", "weak-fptas")
                for kernel in (["-"] if solver == "fptas" else kernels):
                    run = _bench_runner(solver, kernel if kernel != "-" else "naive", args.epsilon, seed)
                    best = None
                    for _ in range(args.repeat):
                        start = time.perf_counter_ns()
                        value = run(inst)
                        elapsed = time.perf_counter_ns() - start
                        best = elapsed if best is None else min(best, elapsed)
                    ref = _oracle_opt(inst) if args.oracle else None
                    rows.append({
                        "solver": solver,
                        "kernel": kernel,
                        "n": inst.n,
                        "W": cap,
                        "p_max": p_max,
                        "w_max": w_max,
                        "epsilon": str(args.epsilon) if approx_solver else "",
                        "wall_nanos": best,
                        "value": value,
                        "oracle_value": "" if ref is None else ref,
                    })
    return rows


def scaling_exponents(rows: Sequence[dict]) -> dict[tuple[str, str], float]:
    """Log-log slope of wall time against Delta = p_max + w_max, per (solver, kernel).

    Each Delta contributes the median of its rows; groups with fewer than two
    distinct Delta values are skipped.
    """
    groups: dict[tuple[str, str], dict[int, list[int]]] = {}
    for r in rows:
        key = (str(r["solver"]), str(r["kernel"]))
        delta = int(r["p_max"]) + int(r["w_max"])
        groups.setdefault(key, {}).setdefault(delta, []).append(int(r["wall_nanos"]))
    slopes = {}
    for key, by_delta in groups.items():
        if len(by_delta) < 2:
            continue
        xs = np.log(np.array(sorted(by_delta), dtype=float))
        ys = np.log(np.array([np.median(by_delta[d]) for d in sorted(by_delta)], dtype=float))
        slopes[key] = float(np.polyfit(xs, ys, 1)[0])
    return slopes


def read_bench_csv(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))


def cmd_bench(args) -> int:
    rows = bench_rows(args)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BENCH_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    if args.fit:
        for (solver, kernel), slope in scaling_exponents(rows).items():
            print(f"{solver}/{kernel}: wall time ~ Delta^{slope:.2f}", file=sys.stderr)
    mismatched = [r for r in rows if r["oracle_value"] != "" and not r["epsilon"] and r["value"] != r["oracle_value"]]
    if mismatched:
        raise Mismatch(f"{len(mismatched)} exact runs disagree with the oracle")
    return 0


# --- parser ----------------------------------------------------------------


def _add_seed(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"random seed (default {DEFAULT_SEED})")


def _add_kernel(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kernel", choices=KERNELS, default="naive", help="(max,+)-convolution kernel")


def _add_shape(p: argparse.ArgumentParser, n: int, p_max: int, w_max: int, capacity: int | None) -> None:
    p.add_argument("--n", type=int, default=n)
    p.add_argument("--p-max", type=int, default=p_max)
    p.add_argument("--w-max", type=int, default=w_max)
    p.add_argument("--capacity", type=int, default=capacity)
    p.add_argument("--correlation", choices=oracle.CORRELATIONS, default="none")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="monoknap", description="Knapsack solvers built on bounded monotone (max,+)-convolution.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("conv", help="(max,+)-convolution of two sequence files")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--witnesses", action="store_true", help="also emit a witness index per output entry")
    _add_kernel(p)
    _add_seed(p)
    p.set_defaults(func=cmd_conv)

    for name, func, help_text in (
        ("solve-unbounded", cmd_solve_unbounded, "exact Unbounded Knapsack"),
        ("solve-01", cmd_solve_01, "randomized exact 0-1 Knapsack"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", required=True, help="instance JSON file, or - for standard input")
        p.add_argument("--reconstruct", action="store_true", help="also output an optimal solution")
        p.add_argument("--oracle-check", action="store_true", help="compare against the Bellman table when it is small")
        _add_kernel(p)
        _add_seed(p)
        if name == "solve-01":
            p.add_argument("--reps-factor", type=int, default=ZeroOneConfig().repetition_factor,
                           help="color-coding repetition constant")
        p.set_defaults(func=func)

    for name, weak in (("fptas", False), ("weak-fptas", True)):
        p = sub.add_parser(name, help=("weak" if weak else "strong") + " approximation scheme for Unbounded Knapsack")
        p.add_argument("--input", required=True)
        p.add_argument("--epsilon", type=_epsilon, default=Fraction(1, 10), help="accuracy as p/q (default 1/10)")
        p.add_argument("--reconstruct", action="store_true")
        p.add_argument("--oracle-check", action="store_true")
        if weak:
            _add_kernel(p)
            _add_seed(p)
        p.set_defaults(func=lambda a, w=weak: _approx_cmd(a, w))

    p = sub.add_parser("gen", help="generate an instance, sequence or step list")
    p.add_argument("kind", choices=("instance", "seq", "steps"))
    _add_shape(p, 10, 50, 50, 100)
    p.add_argument("--mode", choices=("unbounded", "zero-one"), default="unbounded")
    p.add_argument("--bound", type=int, default=None, help="sequence value bound (default n)")
    p.add_argument("--leading-neg-inf", type=int, default=0)
    p.add_argument("--with-zero", action="store_true", help="step list starts at (0, 0)")
    _add_seed(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("reduce", help="build the knapsack instance of the hardness chain")
    p.add_argument("--from", dest="source", choices=("bmmaxconv", "superadd"), required=True)
    p.add_argument("--to", dest="target", choices=("knapsack", "zeroone"), default="knapsack")
    p.add_argument("--input", help="superadditivity sequence E (for --from superadd)")
    p.add_argument("--a", help="sequence A (for --from bmmaxconv)")
    p.add_argument("--b", help="sequence B (for --from bmmaxconv)")
    p.add_argument("--c", help="candidate upper bound C on A (+) B (for --from bmmaxconv)")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify-chain", help="solve random convolutions through the knapsack chain")
    p.add_argument("--n", type=int, default=32)
    p.add_argument("--bound", type=int, default=None, help="value bound (default n)")
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--backend", action="append", choices=reductions.BACKENDS, help="repeatable; default all")
    _add_seed(p)
    p.set_defaults(func=cmd_verify_chain)

    p = sub.add_parser("verify", help="run a solver against the oracle on generated instances")
    p.add_argument("--solver", choices=SOLVERS + ("exact-via-weak",), required=True)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--epsilon", type=_epsilon, default=Fraction(1, 10))
    _add_shape(p, 10, 30, 30, 100)
    _add_kernel(p)
    _add_seed(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time solvers on generated instances, CSV output")
    p.add_argument("--solver", action="append", choices=SOLVERS, help="repeatable; default unbounded")
    p.add_argument("--kernel", action="append", choices=KERNELS, help="repeatable; default naive")
    _add_shape(p, 16, 100, 100, None)
    p.add_argument("--epsilon", type=_epsilon, default=Fraction(1, 10))
    p.add_argument("--delta-sweep", type=_sweep, metavar="LO:HI",
                   help="sweep Delta = 2^LO .. 2^HI with p_max = w_max = Delta/2 (capacity Delta/2 unless given)")
    p.add_argument("--trials", type=int, default=1, help="instances per shape")
    p.add_argument("--repeat", type=int, default=1, help="timed runs per instance; the fastest is reported")
    p.add_argument("--oracle", action="store_true", help="fill oracle_value where the Bellman table is small")
    p.add_argument("--fit", action="store_true", help="print the log-log scaling exponent to standard error")
    p.add_argument("--output", help="CSV path (default standard output)")
    _add_seed(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except Mismatch as exc:
        print(f"mismatch: {exc}", file=sys.stderr)
        return 1
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, InvalidInstanceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
