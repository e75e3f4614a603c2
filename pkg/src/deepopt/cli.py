"""Command-line entry points for running and inspecting experiments."""

import argparse
import sys

import numpy as np

from . import harness
from .problems import HtopProblem, McParityProblem, brute_force_oracle, htop_transform
from .problems.htop import NULL


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="deepopt",
        description="Autoencoder-guided hill climbing experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute an experiment config")
    run_p.add_argument("config")
    run_p.add_argument("--seed", type=int, help="override the base seed")
    run_p.add_argument("--repeats", type=int, help="override the repeat count")
    run_p.add_argument("--output", help="output directory")
    run_p.add_argument("--force", action="store_true", help="overwrite records")
    run_p.add_argument("--workers", type=int, default=1)

    sum_p = sub.add_parser("summarise", help="summarise a results directory")
    sum_p.add_argument("directory")

    oracle_p = sub.add_parser("oracle", help="brute-force verify a small instance")
    oracle_p.add_argument("problem", choices=("htop", "mcparity"))
    oracle_p.add_argument("size", type=int, help="total number of bits")
    oracle_p.add_argument("--module-size", type=int, default=4)

    sub.add_parser("verify-fitness", help="check the exact fitness tables")

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except Exception as exc:  # surface a clean diagnostic, nonzero exit
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _dispatch(args):
    if args.command == "run":
        config = harness.load_config(args.config)
        if args.seed is not None:
            config.seed = args.seed
        if args.repeats is not None:
            config.repeats = args.repeats
        records = harness.run_experiment(
            config, workers=args.workers, force=args.force, output=args.output
        )
        print(harness.summarise(records), end="")
        return 0
    if args.command == "summarise":
        records = harness.load_records(args.directory)
        print(harness.summarise(records), end="")
        return 0
    if args.command == "oracle":
        return _oracle(args)
    if args.command == "verify-fitness":
        return _verify_fitness()
    raise ValueError(f"unknown command {args.command!r}")


def _oracle(args):
    if args.problem == "htop":
        problem = HtopProblem(args.size)
    else:
        if args.size % args.module_size:
            raise ValueError("size must be a multiple of the module size")
        problem = McParityProblem(
            args.size // args.module_size, module_size=args.module_size
        )
    best, argmax = brute_force_oracle(problem._fitness, args.size)
    print(f"problem: {problem!r}")
    print(f"max fitness: {best}")
    print(f"argmax strings: {len(argmax)}")
    if len(argmax) <= 16:
        for x in argmax:
            print("  " + "".join(str(int(b)) for b in x))
    return 0


_TRANSFORM_CASES = [
    ((1, 0, 0, 0), (0, 0), 1),
    ((0, 1, 0, 0), (0, 1), 1),
    ((0, 0, 1, 0), (1, 0), 1),
    ((0, 0, 0, 1), (1, 1), 1),
    ((1, 1, 0, 0), (NULL, NULL), 0),
]

_PARITY_CASES = [
    ("1000010011010000", 3.0003),
    ("1000100011011101", 4.0008),
    ("1000100010001101", 4.0010),
    ("1000100010001000", 4.0016),
]


def _verify_fitness():
    from .problems import htop_block_fitness

    failures = 0
    for block, expected_code, expected_fit in _TRANSFORM_CASES:
        code = tuple(htop_transform(block))
        fit = htop_block_fitness(block)
        ok = code == expected_code and fit == expected_fit
        failures += not ok
        print(f"transform {block} -> {code}, fitness {fit}: {'ok' if ok else 'FAIL'}")
    problem = McParityProblem(4, module_size=4)
    for bits, expected in _PARITY_CASES:
        x = np.array([int(b) for b in bits], dtype=np.uint8)
        value = problem.fitness(x)
        ok = abs(value - expected) <= 1e-12
        failures += not ok
        print(f"parity fitness {bits} = {value:.4f} (want {expected}): "
              f"{'ok' if ok else 'FAIL'}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
