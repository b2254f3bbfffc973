"""Command-line front end.

Subcommands::

    speedup-learn bound --epsilon 0.1 --delta 0.1 --dim 81
    speedup-learn curve --domain eightpuzzle --output curve.csv
    speedup-learn table --build-exhaustive [--verify] [--output FILE]
    speedup-learn verify --all

Set SPEEDUP_LEARN_LOG=debug|info|warning to control verbosity.  Exit code
is 0 on success and 1 on any verification failure.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import random
import sys

log = logging.getLogger("speedup_learning")


def _setup_logging():
    level = os.environ.get("SPEEDUP_LEARN_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def _cmd_bound(args) -> int:
    from .core import sample_size

    print(sample_size(args.epsilon, args.delta, args.dim))
    return 0


def _cmd_curve(args) -> int:
    from .harness import ExperimentConfig, csv_text, run_curve

    config = ExperimentConfig(
        domain=args.domain,
        trials=args.trials,
        train_max=args.train_max,
        eval_every=args.eval_every,
        test_set_size=args.test_set_size,
        seed=args.seed,
        output=args.output,
    )
    points = run_curve(config, full_simulation=args.full_simulation)
    if not args.output:
        sys.stdout.write(csv_text(points))
    else:
        log.info("wrote %d curve points to %s", len(points), args.output)
    return 0


def _cmd_table(args) -> int:
    from . import eight_puzzle
    from .macro_tables import verify_table

    if not args.build_exhaustive:
        print("nothing to do; pass --build-exhaustive", file=sys.stderr)
        return 2
    table = eight_puzzle.build_exhaustive_table()
    dump = table.dump(op_letters=eight_puzzle.MOVE_LETTERS)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(dump)
    else:
        sys.stdout.write(dump)
    print(f"filled cells: {table.filled_count()}")
    print(f"nonempty macros: {table.nonempty_count()}")
    if args.verify:
        boards = eight_puzzle.all_solvable_boards()
        ok, witness = verify_table(table, eight_puzzle.domain_spec(), boards)
        print(f"verify_table over {len(boards)} boards: {'PASS' if ok else 'FAIL'}")
        if not ok:
            print(f"witness: {witness}")
            return 1
    return 0


def _cmd_verify(args) -> int:
    failures = []

    def report(name, ok, detail=""):
        print(f"{'PASS' if ok else 'FAIL'} {name}{(': ' + detail) if detail else ''}")
        if not ok:
            failures.append(name)

    from . import eight_puzzle, integration
    from .core import sample_size
    from .grammar import msg
    from .macro_tables import check_serial_decomposability, verify_table

    report("sample-bound 585", sample_size(0.1, 0.1, 81) == 585)
    report("sample-bound 266", sample_size(0.1, 0.1, 35) == 266)

    form = msg(integration.GRAMMAR, [
        "∫ ( sin x ) + ( x ^ 2 ) d x".split(),
        "∫ ( cos x ) + ( sin x ) d x".split(),
    ])
    report("msg worked example", form.symbols == ("∫", "Trig", "+", "P-term", "d", "x"),
           " ".join(form.symbols))

    boards = eight_puzzle.all_solvable_boards()
    report("state count 181440", len(boards) == 181440, str(len(boards)))

    domain = eight_puzzle.domain_spec()
    ok, _ = check_serial_decomposability(
        domain, eight_puzzle.blank_first_ordering(), boards
    )
    report("decomposability blank-first", ok)
    bad, witness = check_serial_decomposability(
        domain, eight_puzzle.blank_last_ordering(), boards
    )
    report("decomposability blank-last fails", not bad,
           f"witness={witness}" if witness else "no witness found")

    table = eight_puzzle.build_exhaustive_table()
    report("35 nonempty macros", table.nonempty_count() == 35,
           str(table.nonempty_count()))
    ok, witness = verify_table(table, domain, boards)
    report("table property + nonredundancy", ok, str(witness) if witness else "")

    rng = random.Random(20260824)
    ordering = eight_puzzle.blank_first_ordering()
    ida_ok = True
    for _ in range(args.search_instances):
        b = eight_puzzle.random_solvable(rng)
        i = rng.randrange(1, 8)
        b = _advance_to_column(b, table, i)
        got = eight_puzzle.ida_star_subgoal(b, i, ordering)
        opt = eight_puzzle.bfs_subgoal(b, i, ordering)
        if len(got) != len(opt):
            ida_ok = False
            break
    report(f"IDA* optimal on {args.search_instances} subgoals", ida_ok)

    bad_solve = 0
    bad_numeric = 0
    for t in range(args.teacher_draws):
        p = integration.generate_problem(rng)
        trace = integration.teacher_trace(p)
        if trace is None or not integration.is_goal(trace[1]):
            bad_solve += 1
            continue
        if t < args.numeric_checks and not _numerically_sound(p, trace[1]):
            bad_numeric += 1
    report(f"teacher normalizes {args.teacher_draws} draws", bad_solve == 0,
           f"{bad_solve} failures")
    report(f"numeric soundness on {min(args.numeric_checks, args.teacher_draws)} problems",
           bad_numeric == 0, f"{bad_numeric} failures")

    return 1 if failures else 0


def _advance_to_column(board, table, i):
    from . import eight_puzzle

    for p in range(1, i):
        j = board[table.ordering.feature(p)]
        macro = table.get(j, p)
        for op in macro:
            board = eight_puzzle.apply_move(board, eight_puzzle.MOVE_LETTERS[op - 1])
    return board


def _numerically_sound(problem, answer, rel_tol=1e-6):
    from . import integration

    integrand = problem.args[0]
    d = integration.differentiate(answer)
    for x in (0.1, 0.5, 1.3):
        lhs = integration.numeric_value(d, x)
        rhs = integration.numeric_value(integrand, x)
        if not math.isclose(lhs, rhs, rel_tol=rel_tol, abs_tol=1e-9):
            return False
    return True


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="speedup-learn",
                                     description="Speedup-learning workbench")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="print the PAC sample-size bound")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--dim", type=float, required=True)
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("curve", help="run a learning-curve experiment")
    p.add_argument("--domain", choices=("integration", "eightpuzzle"), required=True)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--train-max", type=int, default=0)
    p.add_argument("--eval-every", type=int, default=0)
    p.add_argument("--test-set-size", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default=None)
    p.add_argument("--full-simulation", action="store_true")
    p.set_defaults(func=_cmd_curve)

    p = sub.add_parser("table", help="build the exhaustive Eight Puzzle table")
    p.add_argument("--build-exhaustive", action="store_true")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_table)

    p = sub.add_parser("verify", help="run the property oracles")
    p.add_argument("--all", action="store_true", required=True)
    p.add_argument("--teacher-draws", type=int, default=100_000)
    p.add_argument("--numeric-checks", type=int, default=1_000)
    p.add_argument("--search-instances", type=int, default=100)
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
