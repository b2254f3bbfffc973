import math
import random

import pytest

from speedup_learning import integration as I
from speedup_learning.control_rules import rule_solve
from speedup_learning.core import BOTTOM
from speedup_learning.errors import (
    InapplicableOperatorError,
    LocationError,
    ParameterError,
)
from speedup_learning.grammar import parse, tree_yield


def _expr(text):
    return I.parse_expr(text.split())


def test_expressions_are_hash_consed():
    assert I.add(I.num(1), I.VAR_X) is I.add(I.num(1), I.VAR_X)
    assert I.num(7) is I.num(7)
    assert I.num(7) is not I.num(8)
    with pytest.raises(ParameterError):
        I.num(-1)
    with pytest.raises(ParameterError):
        I.named("b")


def test_serialization_round_trip():
    rng = random.Random(5)
    for _ in range(150):
        p = I.generate_problem(rng)
        assert I.parse_expr(I.to_tokens(p)) is p
        trace = I.teacher_trace(p)
        final = trace[1]
        assert I.parse_expr(I.to_tokens(final)) is final


def test_parenthesization_golden():
    e = I.mul(I.add(I.num(1), I.VAR_X), I.num(3))
    assert I.to_text(e) == "( 1 + x ) * 3"
    assert I.to_text(I.neg(I.neg(I.VAR_X))) == "( - ( - x ) )"
    assert I.to_text(I.integral(I.powx(I.num(10)))) == "∫ ( x ^ 1 0 ) d x"


def test_as_exp_matches_reparse():
    # the direct parse-tree builder must agree with the Earley parser
    rng = random.Random(6)
    for _ in range(30):
        p = I.generate_problem(rng)
        for e in (p.args[0], I.teacher_trace(p)[1]):
            assert I.as_exp(e) == parse(I.GRAMMAR, I._tokens(e, 2), "Exp")


def test_worked_derivation_sin_plus_square():
    p = _expr("∫ ( sin x ) + ( x ^ 2 ) d x")
    solution = I.teacher_solve(p)
    assert solution == ((3, ()), (6, (0,)), (5, (1,)), (18, (1, 0, 1)), (18, (1, 1)))
    final = I.teacher_trace(p)[1]
    assert I.to_text(final) == "( - ( cos x ) ) + ( x ^ 3 ) / 3"
    assert I.is_goal(final)


def test_worked_derivation_cos_plus_sin():
    p = _expr("∫ ( cos x ) + ( sin x ) d x")
    ops = [op for op, _ in I.teacher_solve(p)]
    assert ops == [3, 7, 6]
    assert I.to_text(I.teacher_trace(p)[1]) == "( sin x ) + ( - ( cos x ) )"


def test_operator_inventory_shape():
    assert len(I.OPERATORS) == 27
    assert [op.index for op in I.OPERATORS] == list(range(1, 28))
    assert I.get_operator(4).name == "by_parts"
    with pytest.raises(ParameterError):
        I.get_operator(99)
    # every teacher form is a valid sentential form over the grammar
    from speedup_learning.grammar import form_to_cap
    for op in I.OPERATORS:
        cap = form_to_cap(I.GRAMMAR, op.teacher_form.split(), "Exp")
        assert tree_yield(cap) == tuple(op.teacher_form.split())


def test_operator_guards_raise():
    x = I.VAR_X
    cases = [
        (1, I.integral(x)),          # const_factor needs Const * Term
        (4, I.integral(x)),          # by_parts needs a product
        (19, I.sub(I.num(1), I.num(2))),  # fold_sub guard a >= b
        (21, I.div(I.num(3), I.num(2))),  # fold_div guard divisibility
        (21, I.div(I.num(3), I.num(0))),  # fold_div guard nonzero
        (24, I.mul(I.num(0), x)),    # right-zero only
    ]
    for index, e in cases:
        with pytest.raises(InapplicableOperatorError):
            I.get_operator(index).apply(e)


def test_operator_rewrites_spot_checks():
    x = I.VAR_X
    by_parts = I.get_operator(4)
    e = I.integral(I.mul(I.sinx(), x))
    out = by_parts.apply(e)
    assert I.to_text(out) == "x * ∫ ( sin x ) d x - ∫ ∫ ( sin x ) d x * D x x d x"
    assert I.get_operator(5).apply(I.integral(I.powx(I.num(3)))) is \
        I.div(I.powx(I.add(I.num(3), I.ONE)), I.add(I.num(3), I.ONE))
    assert I.get_operator(18).apply(I.add(I.num(9), I.num(1))) is I.num(10)
    assert I.get_operator(27).apply(I.neg(I.neg(x))) is x


def test_locations():
    e = _expr("∫ ( sin x ) + ( x ^ 2 ) d x")
    assert I.subexpr_at(e, ()) is e
    assert I.to_text(I.subexpr_at(e, (0, 0))) == "( sin x )"
    with pytest.raises(LocationError):
        I.subexpr_at(e, (5,))
    swapped = I.replace_at(e, (0, 0), I.cosx())
    assert I.to_text(swapped) == "∫ ( cos x ) + ( x ^ 2 ) d x"
    with pytest.raises(LocationError):
        I.replace_at(I.VAR_X, (0,), I.ONE)


def test_post_order_least_index_discipline():
    # the first rewrite happens at the first post-order node admitting one,
    # with the least-indexed matching operator
    e = I.add(I.add(I.num(1), I.num(2)), I.integral(I.VAR_X))
    new, op_index, path = I.post_order_step(e)
    assert (op_index, path) == (18, (0,))
    assert I.to_text(new) == "3 + ∫ x d x"


def test_is_goal():
    assert I.is_goal(_expr("( - ( cos x ) ) + ( x ^ 3 ) / 3"))
    assert not I.is_goal(_expr("9 + 1"))          # foldable
    assert not I.is_goal(_expr("∫ x d x"))        # integral remains
    assert I.is_goal(_expr("0 * ( x ^ 4 ) + x"))  # inert zero term is normal


def test_teacher_matches_select_form_ruleset():
    # the structural fast path and the sentential-form teacher must produce
    # identical solutions step for step
    ruleset = I.teacher_ruleset()
    rdomain = I.IntegrationRuleDomain()
    rng = random.Random(13)
    for _ in range(25):
        p = I.generate_problem(rng)
        fast = I.teacher_solve(p)
        slow = rule_solve(ruleset, rdomain, p)
        assert slow is not BOTTOM
        assert tuple(slow) == tuple(fast)


def test_generator_distribution_shape():
    rng = random.Random(99)
    c1s, ps, kinds = set(), set(), set()
    for _ in range(3000):
        p = I.generate_problem(rng)
        assert p.kind == I.INTEGRAL
        body = p.args[0]
        lead, rest = body.args
        assert lead.kind == I.PROD and lead.args[0].kind == I.NUM
        assert lead.args[1].kind == I.POWER
        c1s.add(lead.args[0].args[0])
        ps.add(lead.args[1].args[1].args[0])
        t4 = rest.args[1].args[1]
        kinds.add(t4.kind)
    assert c1s == set(range(10))
    assert ps == set(range(3, 10))
    assert kinds == {I.NUM, I.SIN, I.COS}


def test_generator_determinism():
    a = [I.to_text(I.generate_problem(random.Random(4))) for _ in range(1)]
    b = [I.to_text(I.generate_problem(random.Random(4))) for _ in range(1)]
    assert a == b


def test_teacher_numeric_soundness_sample():
    rng = random.Random(21)
    for _ in range(100):
        p = I.generate_problem(rng)
        trace = I.teacher_trace(p)
        assert trace is not None
        answer = trace[1]
        d = I.differentiate(answer)
        for x in (0.1, 0.5, 1.3):
            assert math.isclose(I.numeric_value(d, x),
                                I.numeric_value(p.args[0], x),
                                rel_tol=1e-6, abs_tol=1e-9)


def test_differentiate_oracle_against_finite_differences():
    # differentiate() is itself an oracle; pin it to numerics
    exprs = [
        _expr("( x ^ 5 ) + 3 * x"),
        _expr("( sin x ) * ( cos x )"),
        _expr("( x ^ 2 ) / ( 1 + x )"),
        _expr("( - ( sin x ) ) - 2"),
    ]
    h = 1e-6
    for e in exprs:
        d = I.differentiate(e)
        for x in (0.3, 0.9):
            numeric = (I.numeric_value(e, x + h) - I.numeric_value(e, x - h)) / (2 * h)
            assert math.isclose(I.numeric_value(d, x), numeric, rel_tol=1e-4)


def test_domain_spec_replays_teacher():
    from speedup_learning.core import replay
    dom = I.domain_spec()
    rng = random.Random(31)
    for _ in range(10):
        p = I.generate_problem(rng)
        states = replay(dom, p, I.teacher_solve(p))
        assert I.is_goal(states[-1])


def test_example_file_format_round_trip():
    p = _expr("∫ ( sin x ) + ( x ^ 2 ) d x")
    sol = I.teacher_solve(p)
    line = I.format_example(p, sol)
    assert "\t" in line and "@" in line
    p2, sol2 = I.parse_example(line)
    assert p2 is p and sol2 == sol
    # empty solution serializes and parses
    p3, sol3 = I.parse_example(I.format_example(p, ()))
    assert p3 is p and sol3 == ()
