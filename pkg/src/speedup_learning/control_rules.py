"""Select-set control rules: the rule-driven solver and its learner.

A control rule pairs an operator with a select-set, stored as a grammar cap
whose yield is a sentential form.  The solver repeatedly scans the current
state's matching units in post-order and applies the least-indexed operator
whose select-set contains the unit.  The learner collects, for each
operator, the units the teacher applied it to, and generalizes each
collection to its most specific generalization.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .core import BOTTOM, Example, solved_problem
from .errors import ConsistencyError, ParameterError
from .grammar import Node, msc, tree_yield


@dataclass(frozen=True)
class ControlRule:
    """⟨select-set, operator⟩; cap None means EMPTY (never matches)."""

    operator_index: int
    cap: Optional[Node] = None

    @property
    def is_empty(self) -> bool:
        return self.cap is None


class RuleSet:
    """One rule per operator, ordered by operator index.

    ``step_limit`` of None means the domain's default (50 times the token
    length of the problem).
    """

    def __init__(self, rules: Sequence[ControlRule], step_limit: Optional[int] = None):
        rules = tuple(rules)
        indices = [r.operator_index for r in rules]
        if sorted(indices) != list(range(1, len(rules) + 1)):
            raise ParameterError("rules must cover operator indices 1..k exactly once")
        self.rules = tuple(sorted(rules, key=lambda r: r.operator_index))
        self.step_limit = step_limit

    def rule(self, op_index: int) -> ControlRule:
        return self.rules[op_index - 1]

    def dump(self) -> str:
        lines = []
        for r in self.rules:
            body = "EMPTY" if r.cap is None else " ".join(tree_yield(r.cap))
            lines.append(f"op{r.operator_index}: {body}")
        return "\n".join(lines) + "\n"


def _first_match(ruleset: RuleSet, rdomain, x):
    for path, unit in rdomain.iter_units(x):
        for rule in ruleset.rules:
            if rule.cap is not None and rdomain.unit_matches(rule.cap, unit):
                return rule.operator_index, path
    return None


def rule_solve_ex(ruleset: RuleSet, rdomain, x):
    """Like rule_solve but returns (solution-or-⊥, status) where status is
    one of "solved", "no_match", "step_limit", "diverged".

    "diverged" means the state outgrew the domain's size limit; partially
    learned rule sets can loop on growth rules (e.g. by-parts), and runaway
    states get quadratically expensive to scan, so growth is cut early
    rather than waiting out the step limit.
    """
    limit = ruleset.step_limit
    if limit is None:
        limit = rdomain.default_step_limit(x)
    size_limit = None
    if hasattr(rdomain, "default_size_limit"):
        size_limit = rdomain.default_size_limit(x)
    steps = []
    while not rdomain.is_goal(x):
        found = _first_match(ruleset, rdomain, x)
        if found is None:
            return BOTTOM, "no_match"
        op_index, path = found
        try:
            x = rdomain.apply(x, op_index, path)
        except Exception:
            return BOTTOM, "no_match"
        steps.append((op_index, path))
        if len(steps) > limit:
            return BOTTOM, "step_limit"
        if size_limit is not None and rdomain.state_size(x) > size_limit:
            return BOTTOM, "diverged"
    return tuple(steps), "solved"


def rule_solve(ruleset: RuleSet, rdomain, x):
    return rule_solve_ex(ruleset, rdomain, x)[0]


def collect_select_examples(rdomain, sample: Sequence[Example]) -> dict:
    """Map operator index -> ordered distinct matching units the teacher
    applied that operator to, across all solved examples."""
    collected: dict = {}
    for example in sample:
        if example.solution is BOTTOM:
            continue
        x = example.problem
        for op_index, loc in example.solution:
            unit = rdomain.subexpr(x, loc)
            bucket = collected.setdefault(op_index, {})
            bucket.setdefault(id(unit), unit)
            x = rdomain.apply(x, op_index, loc)
    return {op: list(bucket.values()) for op, bucket in collected.items()}


class IncrementalRuleLearner:
    """Folds examples into per-operator most specific generalizations.

    ``version`` increments whenever any select-set actually changes, so
    callers can cheaply detect convergence.
    """

    def __init__(self, rdomain):
        self.rdomain = rdomain
        self.caps: dict = {}  # operator index -> cap
        self.version = 0

    def add_example(self, example: Example):
        if example.solution is BOTTOM:
            return
        x = example.problem
        for op_index, loc in example.solution:
            unit = self.rdomain.subexpr(x, loc)
            self._merge(op_index, self.rdomain.unit_tree(unit))
            x = self.rdomain.apply(x, op_index, loc)

    def _merge(self, op_index: int, tree: Node):
        old = self.caps.get(op_index)
        if old is None:
            self.caps[op_index] = tree
            self.version += 1
            return
        new = msc([old, tree])
        if new != old:
            self.caps[op_index] = new
            self.version += 1

    def ruleset(self, step_limit: Optional[int] = None) -> RuleSet:
        rules = [
            ControlRule(i, self.caps.get(i))
            for i in range(1, self.rdomain.num_operators + 1)
        ]
        return RuleSet(rules, step_limit)


def learn_rules(rdomain, oracle, domain, m: int, check_consistency: bool = True) -> RuleSet:
    """Draw m examples, generalize select-sets, and verify consistency.

    The returned RuleSet reproduces the teacher's exact solution on every
    solved training example; a violation raises ConsistencyError (it would
    mean the generalizer overshot, which the theory rules out).
    """
    if m < 0:
        raise ParameterError("example count must be nonnegative")
    sample = [solved_problem(oracle, domain) for _ in range(m)]
    learner = IncrementalRuleLearner(rdomain)
    for example in sample:
        learner.add_example(example)
    ruleset = learner.ruleset()
    if check_consistency:
        for example in sample:
            if example.solution is BOTTOM:
                continue
            produced = rule_solve(ruleset, rdomain, example.problem)
            if produced is BOTTOM or tuple(produced) != tuple(example.solution):
                raise ConsistencyError(
                    "learned rules fail to reproduce a training solution"
                )
    return ruleset
