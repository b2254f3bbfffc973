"""Walk through the symbolic-integration domain end to end.

Shows a teacher derivation step by step, generalizes two worked problems
into select-sets, and solves a fresh problem with the learned rules.

Run:  python3 demos/integration_walkthrough.py
"""

import random

from speedup_learning import integration as I
from speedup_learning.control_rules import IncrementalRuleLearner, rule_solve
from speedup_learning.core import Example
from speedup_learning.grammar import msg


def show_derivation(text):
    problem = I.parse_expr(text.split())
    print(f"problem: {I.to_text(problem)}")
    x = problem
    steps, final = I.teacher_trace(problem)
    for op_index, path, unit in steps:
        op = I.get_operator(op_index)
        x = I.replace_at(x, path, op.rewrite(unit))
        loc = ".".join(map(str, path)) or "root"
        print(f"  op{op_index:<2} {op.name:<12} at {loc:<8} on "
              f"{I.to_text(unit)}")
        print(f"       -> {I.to_text(x)}")
    print(f"normal form: {I.to_text(final)}\n")
    return problem


def main():
    print("== two teacher derivations ==")
    p1 = show_derivation("∫ ( sin x ) + ( x ^ 2 ) d x")
    p2 = show_derivation("∫ ( cos x ) + ( sin x ) d x")

    print("== most specific generalization of the two problems ==")
    form = msg(I.GRAMMAR, [I.to_tokens(p1), I.to_tokens(p2)])
    print(f"msg: {form}\n")

    print("== learning select-sets from the two examples ==")
    rdomain = I.IntegrationRuleDomain()
    learner = IncrementalRuleLearner(rdomain)
    for p in (p1, p2):
        learner.add_example(Example(p, I.teacher_solve(p)))
    print(learner.ruleset().dump())

    print("== the two-example rules already solve an unseen problem ==")
    p3 = I.parse_expr("∫ ( cos x ) + ( x ^ 2 ) d x".split())
    solution = rule_solve(learner.ruleset(), rdomain, p3)
    print(f"problem:  {I.to_text(p3)}")
    print(f"solution: {solution}")
    print(f"teacher agrees: {solution == I.teacher_solve(p3)}\n")

    print("== after 30 random training examples ==")
    rng = random.Random(0)
    for _ in range(30):
        p = I.generate_problem(rng)
        learner.add_example(Example(p, I.teacher_solve(p)))
    hits = 0
    test_rng = random.Random(1)
    for _ in range(100):
        q = I.generate_problem(test_rng)
        hits += rule_solve(learner.ruleset(), rdomain, q) == I.teacher_solve(q)
    print(f"accuracy on 100 fresh problems: {hits}/100")


if __name__ == "__main__":
    main()
