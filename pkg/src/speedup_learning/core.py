"""Domain abstractions, examples, oracles and sample-size arithmetic.

A domain is a goal test plus a totally ordered list of opaque partial
operators over fixed-size states.  Solutions are sequences of
``(operator_index, location)`` steps; ``location`` is ``None`` for domains
whose operators take no site parameter.  The distinguished value ``BOTTOM``
marks "no solution" and is never the same thing as an empty sequence (an
empty sequence solves a state that already satisfies the goal).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

from .errors import OracleIntegrityError, ParameterError, ReplayError


class _Bottom:
    """Singleton 'no solution' marker."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "BOTTOM"

    def __bool__(self):
        return False


BOTTOM = _Bottom()

# A solution step is (operator_index, location); Solution is a tuple of steps
# or BOTTOM.
Step = tuple[int, Any]
Solution = Any


@dataclass(frozen=True)
class DomainSpec:
    """A problem domain: states, a goal predicate and ordered partial operators.

    ``operators[i]`` is called as ``op(state, location)`` and must either
    return a new state or raise one of the package's "inapplicable" errors.
    Indices are 1-based in solutions, matching the fixed total ordering used
    for conflict resolution.
    """

    state_size: int
    goal_test: Callable[[Any], bool]
    operators: Sequence[Callable[..., Any]]
    op_time_bound: float = 1.0

    def __post_init__(self):
        if self.state_size <= 0:
            raise ParameterError("state_size must be positive")
        if not self.operators:
            raise ParameterError("operator list must be nonempty")

    @property
    def num_operators(self) -> int:
        return len(self.operators)

    def apply(self, state, op_index: int, loc=None):
        if not 1 <= op_index <= len(self.operators):
            raise ParameterError(f"operator index {op_index} out of range")
        return self.operators[op_index - 1](state, loc)


@dataclass(frozen=True)
class Example:
    """A ``(problem, solution)`` pair as produced by the solved-problem oracle."""

    problem: Any
    solution: Solution

    @property
    def solved(self) -> bool:
        return self.solution is not BOTTOM


@dataclass(frozen=True)
class LearnParams:
    epsilon: float
    delta: float
    max_problem_size: int
    max_solution_length: int

    def __post_init__(self):
        for name in ("epsilon", "delta"):
            v = getattr(self, name)
            if not (math.isfinite(v) and 0.0 < v <= 1.0):
                raise ParameterError(f"{name} must be in (0, 1], got {v!r}")
        if self.max_problem_size <= 0 or self.max_solution_length <= 0:
            raise ParameterError("size limits must be positive")


class OracleConfig:
    """Seeded source of random problems plus an opaque teacher.

    The RNG is the only mutable state; identical seeds produce identical
    example streams.
    """

    def __init__(
        self,
        problem_generator: Callable[[random.Random], Any],
        teacher: Callable[[Any], Solution],
        seed,
        max_solution_length: Optional[int] = None,
    ):
        self.problem_generator = problem_generator
        self.teacher = teacher
        self.seed = seed
        self.max_solution_length = max_solution_length
        self.rng = random.Random(seed)


def sample_size(epsilon: float, delta: float, dim: float) -> int:
    """Number of training examples sufficient for a consistent learner over a
    finite hypothesis space of log-size ``dim``.

    Computed as ``ceil((1/epsilon) * (dim * ln 2 + ln(1/delta)))``.
    """
    for name, v in (("epsilon", epsilon), ("delta", delta)):
        if not (isinstance(v, (int, float)) and math.isfinite(v) and 0.0 < v <= 1.0):
            raise ParameterError(f"{name} must be a finite real in (0, 1], got {v!r}")
    if not (isinstance(dim, (int, float)) and math.isfinite(dim) and dim >= 0):
        raise ParameterError(f"dim must be a finite nonnegative real, got {dim!r}")
    return math.ceil((dim * math.log(2.0) + math.log(1.0 / delta)) / epsilon)


def replay(domain: DomainSpec, problem, solution) -> list:
    """Apply a solution step by step, returning the full trajectory x_0..x_r."""
    states = [problem]
    x = problem
    for step_idx, (op_index, loc) in enumerate(solution):
        try:
            x = domain.apply(x, op_index, loc)
        except ParameterError:
            raise
        except Exception as exc:
            raise ReplayError(
                f"operator {op_index} inapplicable: {exc}", step_idx
            ) from exc
        states.append(x)
    return states


def solved_problem(oracle: OracleConfig, domain: DomainSpec) -> Example:
    """Draw a problem, ask the teacher, validate and return the example.

    A teacher solution that does not replay to a goal state indicates a broken
    teacher and raises ``OracleIntegrityError``.
    """
    problem = oracle.problem_generator(oracle.rng)
    solution = oracle.teacher(problem)
    if solution is BOTTOM:
        return Example(problem, BOTTOM)
    solution = tuple(solution)
    if oracle.max_solution_length is not None and len(solution) > oracle.max_solution_length:
        raise OracleIntegrityError(
            f"teacher solution length {len(solution)} exceeds limit "
            f"{oracle.max_solution_length}"
        )
    try:
        trajectory = replay(domain, problem, solution)
    except ReplayError as exc:
        raise OracleIntegrityError(f"teacher solution does not replay: {exc}") from exc
    if not domain.goal_test(trajectory[-1]):
        raise OracleIntegrityError("teacher solution does not reach a goal state")
    return Example(problem, solution)


def is_consistent(solver: Callable[[Any], Solution], sample: Sequence[Example]) -> bool:
    """True iff the solver reproduces the teacher's solution on every solved
    example, exactly (same operators, same order, same locations)."""
    for example in sample:
        if example.solution is BOTTOM:
            continue
        try:
            produced = solver(example.problem)
        except Exception:
            return False
        if produced is BOTTOM or tuple(produced) != tuple(example.solution):
            return False
    return True
