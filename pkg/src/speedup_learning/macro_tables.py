"""Macro-operator tables over feature-vector states.

A macro table holds, for ordered feature position i and feature value j, an
operator sequence that brings ordered feature i to its goal value while
restoring ordered features 1..i-1.  The macro problem solver walks the
columns in order; the serial parser recovers a table from whole solutions
by cutting them at the earliest states where successive goal-value prefixes
hold.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .core import BOTTOM, DomainSpec, Example, replay
from .errors import (
    MalformedSolutionError,
    ParameterError,
    TableCorruptionError,
)

# A macro is a tuple of 1-based operator indices; () is the null macro.
Macro = tuple


@dataclass(frozen=True)
class FeatureOrdering:
    """Permutation of feature indices; position i (1-based) maps to
    perm[i-1]."""

    perm: tuple

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ParameterError("ordering must be a permutation of 0..n-1")

    def feature(self, position: int) -> int:
        return self.perm[position - 1]


def check_feature_state(values: Sequence[int], n: int, v: int) -> tuple:
    values = tuple(values)
    if len(values) != n:
        raise ParameterError(f"state must have {n} features, got {len(values)}")
    if any(not 0 <= x < v for x in values):
        raise ParameterError(f"feature values must lie in 0..{v - 1}")
    return values


class MacroTable:
    """Grid of macros keyed (value j, ordered position i); missing keys are
    UNFILLED, which is distinct from a stored null macro."""

    def __init__(self, n: int, v: int, goal: Sequence[int], ordering: FeatureOrdering,
                 max_macro_len: int = 32):
        if len(ordering.perm) != n:
            raise ParameterError("ordering length must equal n")
        self.n = n
        self.v = v
        self.goal = check_feature_state(goal, n, v)
        self.ordering = ordering
        self.max_macro_len = max_macro_len
        self.cells: dict = {}

    def get(self, j: int, i: int) -> Optional[Macro]:
        """The macro at (value j, position i), or None when UNFILLED."""
        return self.cells.get((j, i))

    def is_filled(self, j: int, i: int) -> bool:
        return (j, i) in self.cells

    def insert(self, j: int, i: int, macro: Sequence[int]) -> bool:
        """Store a macro unless the cell is already filled (first write
        wins); returns whether the cell changed."""
        macro = tuple(macro)
        if len(macro) > self.max_macro_len:
            raise ParameterError(
                f"macro length {len(macro)} exceeds limit {self.max_macro_len}"
            )
        if (j, i) in self.cells:
            return False
        self.cells[(j, i)] = macro
        return True

    def filled_count(self) -> int:
        return len(self.cells)

    def nonempty_count(self) -> int:
        return sum(1 for m in self.cells.values() if m)

    def copy(self) -> "MacroTable":
        t = MacroTable(self.n, self.v, self.goal, self.ordering, self.max_macro_len)
        t.cells = dict(self.cells)
        return t

    def dump(self, op_letters: Optional[Sequence[str]] = None) -> str:
        """Text grid: one row per value j, one cell per position i,
        ``-`` for the null macro and ``?`` for UNFILLED."""

        def fmt(j, i):
            m = self.cells.get((j, i))
            if m is None:
                return "?"
            if not m:
                return "-"
            if op_letters:
                return "".join(op_letters[op - 1] for op in m)
            return ".".join(str(op) for op in m)

        rows = []
        for j in range(self.v):
            rows.append(" ".join(fmt(j, i) for i in range(1, self.n + 1)))
        return "\n".join(rows) + "\n"


def _prefix_at_goal(state, table: MacroTable, upto: int) -> bool:
    ordering, goal = table.ordering, table.goal
    return all(
        state[ordering.feature(p)] == goal[ordering.feature(p)]
        for p in range(1, upto + 1)
    )


def apply_macro(domain: DomainSpec, state, macro: Macro):
    for op_index in macro:
        try:
            state = domain.apply(state, op_index, None)
        except ParameterError:
            raise
        except Exception as exc:
            raise TableCorruptionError(
                f"stored macro step {op_index} inapplicable: {exc}"
            ) from exc
    return state


def macro_solve(table: MacroTable, domain: DomainSpec, state):
    """Solve by walking the columns; ⊥ on any UNFILLED cell or (defensively)
    if the walk fails to reach the goal."""
    solution = []
    for i in range(1, table.n + 1):
        j = state[table.ordering.feature(i)]
        macro = table.get(j, i)
        if macro is None:
            return BOTTOM
        state = apply_macro(domain, state, macro)
        solution.extend((op, None) for op in macro)
    if tuple(state) != table.goal:
        return BOTTOM
    return tuple(solution)


def macro_solve_missing(table: MacroTable, domain: DomainSpec, state):
    """The first (j, i) cell macro_solve would need but finds UNFILLED, or
    None if every needed cell is filled.  Diagnostic companion to ⊥."""
    for i in range(1, table.n + 1):
        j = state[table.ordering.feature(i)]
        macro = table.get(j, i)
        if macro is None:
            return (j, i)
        state = apply_macro(domain, state, macro)
    return None


def serial_parse_into(table: MacroTable, domain: DomainSpec, example: Example):
    """Fold one example into the table (Serial-parser body).

    Replays the solution, then for each ordered position i finds the
    earliest trajectory state from the current cut whose ordered features
    1..i all hold goal values, and stores the operator slice between cuts
    if that cell is still unfilled.
    """
    if example.solution is BOTTOM:
        return
    ops = [op for op, _ in example.solution]
    states = replay(domain, example.problem, example.solution)
    p = 0
    for i in range(1, table.n + 1):
        j = states[p][table.ordering.feature(i)]
        k = p
        while k < len(states) and not _prefix_at_goal(states[k], table, i):
            k += 1
        if k == len(states):
            raise MalformedSolutionError(
                f"no trajectory point achieves ordered features 1..{i}"
            )
        table.insert(j, i, ops[p:k])
        p = k


def serial_parse(domain: DomainSpec, sample: Sequence[Example], n: int, v: int,
                 goal: Sequence[int], ordering: FeatureOrdering) -> MacroTable:
    """Learn a macro table from whole-solution examples (⊥ examples are
    skipped; earlier examples win contested cells)."""
    table = MacroTable(n, v, goal, ordering)
    for example in sample:
        serial_parse_into(table, domain, example)
    return table


def check_serial_decomposability(domain: DomainSpec, ordering: FeatureOrdering,
                                 states: Sequence):
    """Is each operator's effect on ordered feature i a function of ordered
    features 1..i only?  Returns (True, None) or (False, witness) where the
    witness is (op_index, position, state_a, state_b)."""
    n = len(ordering.perm)
    for op_index in range(1, domain.num_operators + 1):
        outcomes = [dict() for _ in range(n + 1)]
        for s in states:
            try:
                t = domain.apply(s, op_index, None)
            except ParameterError:
                raise
            except Exception:
                t = None  # operator inapplicable counts as an effect too
            for i in range(1, n + 1):
                proj = tuple(s[ordering.feature(p)] for p in range(1, i + 1))
                effect = None if t is None else t[ordering.feature(i)]
                seen = outcomes[i].get(proj)
                if seen is None:
                    outcomes[i][proj] = (effect, s)
                elif seen[0] != effect:
                    return False, (op_index, i, seen[1], s)
    return True, None


def verify_table(table: MacroTable, domain: DomainSpec, states: Sequence):
    """Check the macro-table property and nonredundancy of every filled cell
    against the supplied states.  Returns (True, None) or (False, witness);
    the witness is (kind, (j, i), state) with kind "property" or
    "redundant"."""
    by_cell: dict = {}
    for s in states:
        for i in range(1, table.n + 1):
            if not _prefix_at_goal(s, table, i - 1):
                break
            j = s[table.ordering.feature(i)]
            if table.is_filled(j, i):
                by_cell.setdefault((j, i), []).append(s)
    for (j, i), macro in table.cells.items():
        matching = by_cell.get((j, i), [])
        prefix_ok_somewhere = not macro  # null macros are trivially minimal
        for s in matching:
            t = apply_macro(domain, s, macro)
            if not _prefix_at_goal(t, table, i):
                return False, ("property", (j, i), s)
            if not prefix_ok_somewhere:
                if all(
                    not _prefix_at_goal(apply_macro(domain, s, macro[:cut]), table, i)
                    for cut in range(len(macro))
                ):
                    prefix_ok_somewhere = True
        if matching and not prefix_ok_somewhere:
            return False, ("redundant", (j, i), matching[0])
    return True, None
