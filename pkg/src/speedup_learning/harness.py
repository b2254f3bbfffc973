"""Experiment driver: training loops, periodic evaluation, CSV output.

One experiment runs ``trials`` independent seeded trials.  Each trial
trains a fresh learner one example at a time and, at every eval point,
scores the current learned solver on a freshly drawn test set: a test
problem counts as correct only when the learner's solution exactly matches
the teacher's (operators, order, and locations).  Points aggregate the mean
and population standard deviation across trials.
"""

from __future__ import annotations

import random
import statistics
from dataclasses import dataclass, replace
from typing import Optional

from . import eight_puzzle, integration
from .control_rules import IncrementalRuleLearner, rule_solve
from .core import BOTTOM, Example
from .errors import ParameterError
from .macro_tables import MacroTable, macro_solve, serial_parse_into

DOMAINS = ("integration", "eightpuzzle")

_DOMAIN_DEFAULTS = {
    "integration": {"train_max": 30, "eval_every": 1},
    "eightpuzzle": {"train_max": 40, "eval_every": 2},
}


@dataclass(frozen=True)
class ExperimentConfig:
    domain: str
    trials: int = 50
    train_max: int = 0  # 0 means the domain default
    eval_every: int = 0
    test_set_size: int = 100
    seed: int = 0
    output: Optional[str] = None

    def __post_init__(self):
        if self.domain not in DOMAINS:
            raise ParameterError(f"unknown domain {self.domain!r}")

    def resolved(self) -> "ExperimentConfig":
        d = _DOMAIN_DEFAULTS[self.domain]
        cfg = self
        if cfg.train_max <= 0:
            cfg = replace(cfg, train_max=d["train_max"])
        if cfg.eval_every <= 0:
            cfg = replace(cfg, eval_every=d["eval_every"])
        if cfg.trials <= 0 or cfg.test_set_size <= 0:
            raise ParameterError("trials and test_set_size must be positive")
        if cfg.eval_every > cfg.train_max:
            raise ParameterError("eval_every must not exceed train_max")
        return cfg


@dataclass(frozen=True)
class CurvePoint:
    num_examples: int
    mean_accuracy: float
    stddev: float


def _aggregate(per_trial: dict) -> list:
    points = []
    for t in sorted(per_trial):
        accs = per_trial[t]
        points.append(
            CurvePoint(t, statistics.fmean(accs), statistics.pstdev(accs))
        )
    return points


def _trial_rng(cfg, trial, *tags) -> random.Random:
    # String seeding hashes with SHA-512, stable across runs and platforms.
    return random.Random(":".join([str(cfg.seed), cfg.domain, str(trial), *map(str, tags)]))


# ---------------------------------------------------------------------------
# Integration curve
# ---------------------------------------------------------------------------


def _score_integration_fast(learner, rdomain, problem) -> bool:
    trace = integration.teacher_trace(problem)
    if trace is None:
        return False
    for op_index, _path, unit in trace[0]:
        cap = learner.caps.get(op_index)
        if cap is None or not rdomain.unit_matches(cap, unit):
            return False
    return True


def _score_integration_full(learner, rdomain, problem) -> bool:
    produced = rule_solve(learner.ruleset(), rdomain, problem)
    expected = integration.teacher_solve(problem)
    if produced is BOTTOM or expected is BOTTOM:
        return False
    return tuple(produced) == tuple(expected)


def _run_integration(cfg: ExperimentConfig, full_simulation: bool) -> list:
    rdomain = integration.IntegrationRuleDomain()
    per_trial: dict = {}
    score = _score_integration_full if full_simulation else _score_integration_fast
    for trial in range(cfg.trials):
        train_rng = _trial_rng(cfg, trial, "train")
        learner = IncrementalRuleLearner(rdomain)
        for t in range(1, cfg.train_max + 1):
            problem = integration.generate_problem(train_rng)
            solution = integration.teacher_solve(problem)
            learner.add_example(Example(problem, solution))
            if t % cfg.eval_every == 0:
                test_rng = _trial_rng(cfg, trial, "eval", t)
                hits = sum(
                    score(learner, rdomain, integration.generate_problem(test_rng))
                    for _ in range(cfg.test_set_size)
                )
                per_trial.setdefault(t, []).append(hits / cfg.test_set_size)
    return _aggregate(per_trial)


# ---------------------------------------------------------------------------
# Eight Puzzle curve
# ---------------------------------------------------------------------------

_target_table: Optional[MacroTable] = None


def target_puzzle_table() -> MacroTable:
    """The fully built macro table the teacher's solutions are drawn from."""
    global _target_table
    if _target_table is None:
        _target_table = eight_puzzle.build_exhaustive_table()
    return _target_table


def _run_eightpuzzle(cfg: ExperimentConfig, full_simulation: bool) -> list:
    domain = eight_puzzle.domain_spec()
    target = target_puzzle_table()
    ordering = eight_puzzle.blank_first_ordering()
    per_trial: dict = {}
    for trial in range(cfg.trials):
        train_rng = _trial_rng(cfg, trial, "train")
        teacher_table = MacroTable(
            eight_puzzle.N_TILES, eight_puzzle.N_POSITIONS, eight_puzzle.GOAL, ordering
        )
        learner_table = MacroTable(
            eight_puzzle.N_TILES, eight_puzzle.N_POSITIONS, eight_puzzle.GOAL, ordering
        )
        for t in range(1, cfg.train_max + 1):
            board = eight_puzzle.random_solvable(train_rng)
            solution = eight_puzzle.integrated_teacher(board, teacher_table)
            serial_parse_into(learner_table, domain, Example(board, solution))
            if t % cfg.eval_every == 0:
                test_rng = _trial_rng(cfg, trial, "eval", t)
                hits = 0
                for _ in range(cfg.test_set_size):
                    q = eight_puzzle.random_solvable(test_rng)
                    if full_simulation:
                        produced = macro_solve(learner_table, domain, q)
                        expected = macro_solve(target, domain, q)
                        hits += produced is not BOTTOM and produced == expected
                    else:
                        cells, _ = eight_puzzle.table_trajectory(target, q)
                        hits += all(learner_table.is_filled(j, i) for j, i in cells)
                per_trial.setdefault(t, []).append(hits / cfg.test_set_size)
    return _aggregate(per_trial)


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------


def run_curve(config: ExperimentConfig, full_simulation: bool = False) -> list:
    """Run the learning-curve experiment for the configured domain.

    ``full_simulation`` scores each test problem by actually running the
    learned solver; the default scores via the teacher's trace, which is
    provably equivalent for these learners and much faster (the test suite
    asserts the equivalence on a reduced configuration).
    """
    cfg = config.resolved()
    if cfg.domain == "integration":
        points = _run_integration(cfg, full_simulation)
    else:
        points = _run_eightpuzzle(cfg, full_simulation)
    if cfg.output:
        emit_csv(points, cfg.output)
    return points


def emit_csv(points, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(csv_text(points))


def csv_text(points) -> str:
    lines = ["num_examples,mean_accuracy,stddev"]
    for p in points:
        lines.append(f"{p.num_examples},{p.mean_accuracy:.6g},{p.stddev:.6g}")
    return "\n".join(lines) + "\n"
