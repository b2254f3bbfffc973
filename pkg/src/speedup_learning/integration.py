"""The symbolic-integration domain.

Expressions are immutable hash-consed ASTs mirroring the grammar below.
Rewrite operators 1-7 are the classic integral table (constant factoring,
sum/difference splitting, integration by parts, the power/sin/cos rules);
8-10 round out the integrals the problem distribution needs; 11-17 are
differentiation rules; 18-27 are simplification rules (constant folding and
identity elimination).  A solver repeatedly visits the expression in
post-order and applies the least-indexed applicable operator at the first
node that admits one, until no operator applies anywhere.

The teacher is the same interpreter driven by hand-authored select-sets,
one sentential form per operator (``teacher_ruleset``).  Its structural
fast path (``teacher_trace``) decides by operator pattern instead of
select-set membership; the two agree on the problem distribution and the
test suite cross-checks them.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Sequence

from .errors import (
    InapplicableOperatorError,
    LocationError,
    ParameterError,
)
from .grammar import Grammar, Node, cap_matches_tree, form_to_cap, parse

GRAMMAR_TEXT = """\
# Integration problems: integrals and derivatives over polynomials in x,
# trig terms, and integer/named constants.  Int extends the single-digit
# original to digit strings so folded constants (e.g. 9+1) stay writable.
Prob -> ∫ Exp d Var | D Exp Var
Exp -> Term | Term + Exp | Term - Exp
Term -> P-term | P-term * Term | P-term / Term
P-term -> Const | Var | ( - Term ) | Trig | Power | Prob | ( Exp )
Power -> ( Var ^ Term )
Trig -> ( sin Var ) | ( cos Var )
Const -> Int | a | k
Var -> x
Int -> Digit | Digit Int
Digit -> 0 | 1 | 2 | 3 | 4 | 5 | 6 | 7 | 8 | 9
"""

GRAMMAR = Grammar.from_text(GRAMMAR_TEXT)


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------

# Node kinds.  Sum/Diff/Prod/Quot are the binary arithmetic forms; "diff"
# here is binary subtraction, "deriv" is the D operator.
INTEGRAL = "integral"
DERIV = "deriv"
SUM = "sum"
DIFF = "diff"
PROD = "prod"
QUOT = "quot"
NEG = "neg"
POWER = "power"
SIN = "sin"
COS = "cos"
NUM = "num"
NAMED = "named"
VAR = "var"

_BINARY = {SUM, DIFF, PROD, QUOT}


class Expr:
    """Hash-consed expression node; equal structures are the same object."""

    __slots__ = ("kind", "args", "cache")

    _interned: dict = {}

    def __init__(self, kind, args):
        self.kind = kind
        self.args = args
        self.cache = {}

    def __repr__(self):
        return f"<{to_text(self)}>"

    @property
    def children(self) -> tuple:
        return tuple(a for a in self.args if isinstance(a, Expr))


def _mk(kind: str, *args) -> Expr:
    key = (kind, args)
    e = Expr._interned.get(key)
    if e is None:
        e = Expr._interned[key] = Expr(kind, args)
    return e


def clear_expr_caches():
    """Drop the interning table and all per-expression caches."""
    Expr._interned.clear()
    _trace_cache.clear()


VAR_X = _mk(VAR, "x")


def num(n: int) -> Expr:
    if n < 0:
        raise ParameterError("integer literals are nonnegative; use neg()")
    return _mk(NUM, n)


def named(name: str) -> Expr:
    if name not in ("a", "k"):
        raise ParameterError(f"unknown named constant {name!r}")
    return _mk(NAMED, name)


def integral(body: Expr) -> Expr:
    return _mk(INTEGRAL, body, VAR_X)


def deriv(body: Expr) -> Expr:
    return _mk(DERIV, body, VAR_X)


def add(l: Expr, r: Expr) -> Expr:
    return _mk(SUM, l, r)


def sub(l: Expr, r: Expr) -> Expr:
    return _mk(DIFF, l, r)


def mul(l: Expr, r: Expr) -> Expr:
    return _mk(PROD, l, r)


def div(l: Expr, r: Expr) -> Expr:
    return _mk(QUOT, l, r)


def neg(e: Expr) -> Expr:
    return _mk(NEG, e)


def powx(exponent: Expr) -> Expr:
    return _mk(POWER, VAR_X, exponent)


def sinx() -> Expr:
    return _mk(SIN, VAR_X)


def cosx() -> Expr:
    return _mk(COS, VAR_X)


ZERO = num(0)
ONE = num(1)
TWO = num(2)


def _is_const(e: Expr) -> bool:
    return e.kind in (NUM, NAMED)


# ---------------------------------------------------------------------------
# Serialization to the token language
# ---------------------------------------------------------------------------

# Grammatical categories, loosest to tightest.  A node whose natural
# category is looser than the one required by its context gets wrapped in
# parentheses (the P-term -> ( Exp ) production).
_EXP, _TERM, _PTERM = 2, 1, 0
_NATURAL = {SUM: _EXP, DIFF: _EXP, PROD: _TERM, QUOT: _TERM}


def _tokens(e: Expr, cat: int) -> tuple:
    key = ("tok", cat)
    t = e.cache.get(key)
    if t is not None:
        return t
    nat = _NATURAL.get(e.kind, _PTERM)
    if nat > cat:
        t = ("(",) + _tokens(e, _EXP) + (")",)
    elif e.kind == INTEGRAL:
        t = ("∫",) + _tokens(e.args[0], _EXP) + ("d", "x")
    elif e.kind == DERIV:
        t = ("D",) + _tokens(e.args[0], _EXP) + ("x",)
    elif e.kind == SUM:
        t = _tokens(e.args[0], _TERM) + ("+",) + _tokens(e.args[1], _EXP)
    elif e.kind == DIFF:
        t = _tokens(e.args[0], _TERM) + ("-",) + _tokens(e.args[1], _EXP)
    elif e.kind == PROD:
        t = _tokens(e.args[0], _PTERM) + ("*",) + _tokens(e.args[1], _TERM)
    elif e.kind == QUOT:
        t = _tokens(e.args[0], _PTERM) + ("/",) + _tokens(e.args[1], _TERM)
    elif e.kind == NEG:
        t = ("(", "-") + _tokens(e.args[0], _TERM) + (")",)
    elif e.kind == POWER:
        t = ("(", "x", "^") + _tokens(e.args[1], _TERM) + (")",)
    elif e.kind == SIN:
        t = ("(", "sin", "x", ")")
    elif e.kind == COS:
        t = ("(", "cos", "x", ")")
    elif e.kind == NUM:
        t = tuple(str(e.args[0]))
    elif e.kind == NAMED:
        t = (e.args[0],)
    else:  # var
        t = ("x",)
    e.cache[key] = t
    return t


def to_tokens(e: Expr) -> tuple:
    return _tokens(e, _EXP)


def to_text(e: Expr) -> str:
    return " ".join(to_tokens(e))


def parse_expr(tokens: Sequence[str], start: Optional[str] = None) -> Expr:
    """Parse a token sequence back into an AST (inverse of to_tokens)."""
    tree = parse(GRAMMAR, tokens, start or ("Prob" if tokens and tokens[0] in ("∫", "D") else "Exp"))
    return tree_to_expr(tree)


def tree_to_expr(node: Node) -> Expr:
    label = node.label
    kids = node.children
    if label == "Prob":
        if kids[0].label == "∫":
            return integral(tree_to_expr(kids[1]))
        return deriv(tree_to_expr(kids[1]))
    if label in ("Exp", "Term"):
        if len(kids) == 1:
            return tree_to_expr(kids[0])
        op = kids[1].label
        l, r = tree_to_expr(kids[0]), tree_to_expr(kids[2])
        return {"+": add, "-": sub, "*": mul, "/": div}[op](l, r)
    if label == "P-term":
        if kids[0].label == "(":
            if kids[1].label == "-":
                return neg(tree_to_expr(kids[2]))
            return tree_to_expr(kids[1])
        return tree_to_expr(kids[0])
    if label == "Power":
        return powx(tree_to_expr(kids[3]))
    if label == "Trig":
        return sinx() if kids[1].label == "sin" else cosx()
    if label == "Const":
        if kids[0].label == "Int":
            return tree_to_expr(kids[0])
        return named(kids[0].label)
    if label == "Int":
        digits = []
        n = node
        while True:
            digits.append(n.children[0].children[0].label)
            if len(n.children) == 1:
                break
            n = n.children[1]
        return num(int("".join(digits)))
    if label == "Var":
        return VAR_X
    raise ParameterError(f"cannot interpret parse node {label!r}")


# ---------------------------------------------------------------------------
# Parse-tree construction without reparsing
# ---------------------------------------------------------------------------

_VAR_NODE = Node("Var", (Node("x"),))


def _int_node(n: int) -> Node:
    node = None
    for ch in reversed(str(n)):
        digit = Node("Digit", (Node(ch),))
        node = Node("Int", (digit,) if node is None else (digit, node))
    return node


def as_pterm(e: Expr) -> Node:
    t = e.cache.get("pterm")
    if t is not None:
        return t
    k = e.kind
    if k == NUM:
        t = Node("P-term", (Node("Const", (_int_node(e.args[0]),)),))
    elif k == NAMED:
        t = Node("P-term", (Node("Const", (Node(e.args[0]),)),))
    elif k == VAR:
        t = Node("P-term", (_VAR_NODE,))
    elif k == NEG:
        t = Node("P-term", (Node("("), Node("-"), as_term(e.args[0]), Node(")")))
    elif k == SIN:
        t = Node("P-term", (Node("Trig", (Node("("), Node("sin"), _VAR_NODE, Node(")"))),))
    elif k == COS:
        t = Node("P-term", (Node("Trig", (Node("("), Node("cos"), _VAR_NODE, Node(")"))),))
    elif k == POWER:
        t = Node(
            "P-term",
            (Node("Power", (Node("("), _VAR_NODE, Node("^"), as_term(e.args[1]), Node(")"))),),
        )
    elif k == INTEGRAL:
        prob = Node("Prob", (Node("∫"), as_exp(e.args[0]), Node("d"), _VAR_NODE))
        t = Node("P-term", (prob,))
    elif k == DERIV:
        prob = Node("Prob", (Node("D"), as_exp(e.args[0]), _VAR_NODE))
        t = Node("P-term", (prob,))
    else:  # sum/diff/prod/quot wrapped in parens
        t = Node("P-term", (Node("("), as_exp(e), Node(")")))
    e.cache["pterm"] = t
    return t


def as_term(e: Expr) -> Node:
    t = e.cache.get("term")
    if t is not None:
        return t
    if e.kind == PROD:
        t = Node("Term", (as_pterm(e.args[0]), Node("*"), as_term(e.args[1])))
    elif e.kind == QUOT:
        t = Node("Term", (as_pterm(e.args[0]), Node("/"), as_term(e.args[1])))
    else:
        t = Node("Term", (as_pterm(e),))
    e.cache["term"] = t
    return t


def as_exp(e: Expr) -> Node:
    t = e.cache.get("exp")
    if t is not None:
        return t
    if e.kind == SUM:
        t = Node("Exp", (as_term(e.args[0]), Node("+"), as_exp(e.args[1])))
    elif e.kind == DIFF:
        t = Node("Exp", (as_term(e.args[0]), Node("-"), as_exp(e.args[1])))
    else:
        t = Node("Exp", (as_term(e),))
    e.cache["exp"] = t
    return t


# ---------------------------------------------------------------------------
# Rewrite operators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RewriteOp:
    """A structural rewrite rule plus the teacher's select-set for it."""

    index: int
    name: str
    teacher_form: str  # sentential form over the grammar, rooted at Exp
    matches: Callable[[Expr], bool]
    rewrite: Callable[[Expr], Expr]

    def apply(self, e: Expr) -> Expr:
        if not self.matches(e):
            raise InapplicableOperatorError(
                f"operator {self.index} ({self.name}) does not match {to_text(e)!r}"
            )
        return self.rewrite(e)


def _body(e):
    return e.args[0]


def _ops() -> list:
    o = []

    def op(index, name, form, matches, rewrite):
        o.append(RewriteOp(index, name, form, matches, rewrite))

    # 1-7: the integral table
    op(1, "const_factor", "∫ Const * Term d x",
       lambda e: e.kind == INTEGRAL and _body(e).kind == PROD and _is_const(_body(e).args[0]),
       lambda e: mul(_body(e).args[0], integral(_body(e).args[1])))
    op(2, "diff_split", "∫ Term - Exp d x",
       lambda e: e.kind == INTEGRAL and _body(e).kind == DIFF,
       lambda e: sub(integral(_body(e).args[0]), integral(_body(e).args[1])))
    op(3, "sum_split", "∫ Term + Exp d x",
       lambda e: e.kind == INTEGRAL and _body(e).kind == SUM,
       lambda e: add(integral(_body(e).args[0]), integral(_body(e).args[1])))
    # By parts: ∫f·g dx = g·∫f dx − ∫(∫f dx)·(Dg) dx.  The inner product
    # keeps ∫f dx first so repeated applications keep differentiating g;
    # binding the first factor as f then terminates on trig·polynomial
    # products.
    op(4, "by_parts", "∫ P-term * Term d x",
       lambda e: e.kind == INTEGRAL and _body(e).kind == PROD,
       lambda e: sub(
           mul(_body(e).args[1], integral(_body(e).args[0])),
           integral(mul(integral(_body(e).args[0]), deriv(_body(e).args[1])))))
    op(5, "power_int", "∫ ( x ^ Term ) d x",
       lambda e: e.kind == INTEGRAL and _body(e).kind == POWER,
       lambda e: div(powx(add(_body(e).args[1], ONE)), add(_body(e).args[1], ONE)))
    op(6, "sin_int", "∫ ( sin x ) d x",
       lambda e: e.kind == INTEGRAL and _body(e).kind == SIN,
       lambda e: neg(cosx()))
    op(7, "cos_int", "∫ ( cos x ) d x",
       lambda e: e.kind == INTEGRAL and _body(e).kind == COS,
       lambda e: sinx())

    # 8-10: remaining integral forms the distribution produces
    op(8, "var_int", "∫ x d x",
       lambda e: e.kind == INTEGRAL and _body(e).kind == VAR,
       lambda e: div(powx(TWO), TWO))
    op(9, "const_int", "∫ Const d x",
       lambda e: e.kind == INTEGRAL and _is_const(_body(e)),
       lambda e: mul(_body(e), VAR_X))
    op(10, "neg_int", "∫ ( - Term ) d x",
       lambda e: e.kind == INTEGRAL and _body(e).kind == NEG,
       lambda e: neg(integral(_body(e).args[0])))

    # 11-17: differentiation
    op(11, "deriv_const", "D Const x",
       lambda e: e.kind == DERIV and _is_const(_body(e)),
       lambda e: ZERO)
    op(12, "deriv_var", "D x x",
       lambda e: e.kind == DERIV and _body(e).kind == VAR,
       lambda e: ONE)
    op(13, "deriv_sin", "D ( sin x ) x",
       lambda e: e.kind == DERIV and _body(e).kind == SIN,
       lambda e: cosx())
    op(14, "deriv_cos", "D ( cos x ) x",
       lambda e: e.kind == DERIV and _body(e).kind == COS,
       lambda e: neg(sinx()))
    op(15, "deriv_power", "D ( x ^ Term ) x",
       lambda e: e.kind == DERIV and _body(e).kind == POWER,
       lambda e: mul(_body(e).args[1], powx(sub(_body(e).args[1], ONE))))
    op(16, "deriv_scale", "D Const * Term x",
       lambda e: e.kind == DERIV and _body(e).kind == PROD and _is_const(_body(e).args[0]),
       lambda e: mul(_body(e).args[0], deriv(_body(e).args[1])))
    op(17, "deriv_neg", "D ( - Term ) x",
       lambda e: e.kind == DERIV and _body(e).kind == NEG,
       lambda e: neg(deriv(_body(e).args[0])))

    # 18-21: integer constant folding
    op(18, "fold_add", "Int + Int",
       lambda e: e.kind == SUM and e.args[0].kind == NUM and e.args[1].kind == NUM,
       lambda e: num(e.args[0].args[0] + e.args[1].args[0]))
    op(19, "fold_sub", "Int - Int",
       lambda e: e.kind == DIFF and e.args[0].kind == NUM and e.args[1].kind == NUM
       and e.args[0].args[0] >= e.args[1].args[0],
       lambda e: num(e.args[0].args[0] - e.args[1].args[0]))
    op(20, "fold_mul", "Int * Int",
       lambda e: e.kind == PROD and e.args[0].kind == NUM and e.args[1].kind == NUM,
       lambda e: num(e.args[0].args[0] * e.args[1].args[0]))
    op(21, "fold_div", "Int / Int",
       lambda e: e.kind == QUOT and e.args[0].kind == NUM and e.args[1].kind == NUM
       and e.args[1].args[0] != 0 and e.args[0].args[0] % e.args[1].args[0] == 0,
       lambda e: num(e.args[0].args[0] // e.args[1].args[0]))

    # 22-27: identity elimination.  There is deliberately no rule for zero
    # summands or left-zero products: their matching unit would drag in the
    # whole sibling expression, whose most specific generalization does not
    # converge on small samples, and leaving 0-coefficient terms inert in
    # the normal form is sound.  A right-zero product must be absorbed,
    # though, or by-parts chains would never bottom out (their innermost
    # integrand ends as (∫f)·0 once the derivative of a constant appears).
    op(22, "mul_one_left", "1 * Term",
       lambda e: e.kind == PROD and e.args[0] is ONE,
       lambda e: e.args[1])
    op(23, "mul_one_right", "P-term * 1",
       lambda e: e.kind == PROD and e.args[1] is ONE,
       lambda e: e.args[0])
    op(24, "mul_zero_right", "P-term * 0",
       lambda e: e.kind == PROD and e.args[1] is ZERO,
       lambda e: ZERO)
    op(25, "pow_one", "( x ^ 1 )",
       lambda e: e.kind == POWER and e.args[1] is ONE,
       lambda e: VAR_X)
    op(26, "pow_zero", "( x ^ 0 )",
       lambda e: e.kind == POWER and e.args[1] is ZERO,
       lambda e: ONE)
    op(27, "neg_neg", "( - ( - Term ) )",
       lambda e: e.kind == NEG and e.args[0].kind == NEG,
       lambda e: e.args[0].args[0])
    return o


OPERATORS: tuple = tuple(_ops())
_OP_BY_INDEX = {op.index: op for op in OPERATORS}

# Simplification operators define normal forms: an expression is solved when
# no integral/derivative remains and none of these applies anywhere.
SIMPLIFICATION_INDICES = tuple(range(18, 28))

# Candidate operators by root node kind, for fast dispatch.
_KIND_GROUPS = {
    INTEGRAL: range(1, 11), DERIV: range(11, 18),
    SUM: (18,), DIFF: (19,), PROD: (20, 22, 23, 24),
    QUOT: (21,), POWER: (25, 26), NEG: (27,),
}
_OPS_BY_KIND = {
    kind: tuple(_OP_BY_INDEX[i] for i in idxs) for kind, idxs in _KIND_GROUPS.items()
}


def get_operator(index: int) -> RewriteOp:
    op = _OP_BY_INDEX.get(index)
    if op is None:
        raise ParameterError(f"no operator with index {index}")
    return op


# ---------------------------------------------------------------------------
# Locations and the post-order interpreter
# ---------------------------------------------------------------------------


def subexpr_at(e: Expr, loc: Sequence[int]) -> Expr:
    for i in loc:
        kids = e.children
        if not 0 <= i < len(kids):
            raise LocationError(f"index {i} invalid at {to_text(e)!r}")
        e = kids[i]
    return e


def replace_at(e: Expr, loc: Sequence[int], new: Expr) -> Expr:
    if not loc:
        return new
    i = loc[0]
    kids = list(e.children)
    if not 0 <= i < len(kids):
        raise LocationError(f"index {i} invalid at {to_text(e)!r}")
    kids[i] = replace_at(kids[i], loc[1:], new)
    non_expr = [a for a in e.args if not isinstance(a, Expr)]
    # every kind keeps Expr args contiguous and either all-leading or sole
    if e.kind in (NUM, NAMED, VAR):
        raise LocationError("leaf node has no children")
    if e.kind in (INTEGRAL, DERIV):
        return _mk(e.kind, kids[0], kids[1])
    if non_expr:
        raise LocationError("unexpected mixed argument layout")
    return _mk(e.kind, *kids)


def apply_at(op: RewriteOp, e: Expr, loc: Sequence[int]) -> Expr:
    return replace_at(e, loc, op.apply(subexpr_at(e, tuple(loc))))


def iter_postorder(e: Expr, _path=()) -> Iterator[tuple]:
    """Yield (path, subexpression) pairs in post-order."""
    for i, child in enumerate(e.children):
        yield from iter_postorder(child, _path + (i,))
    yield _path, e


def _decide_ops(e: Expr) -> Optional[RewriteOp]:
    for op in _OPS_BY_KIND.get(e.kind, ()):
        if op.matches(e):
            return op
    return None


_MISS = object()


def _find_first(e: Expr) -> Optional[tuple]:
    """First post-order (path, op) where a pattern applies; memoized."""
    r = e.cache.get("ff", _MISS)
    if r is not _MISS:
        return r
    r = None
    for i, child in enumerate(e.children):
        sub = _find_first(child)
        if sub is not None:
            r = ((i,) + sub[0], sub[1])
            break
    if r is None:
        op = _decide_ops(e)
        if op is not None:
            r = ((), op)
    e.cache["ff"] = r
    return r


def _contains_prob(e: Expr) -> bool:
    r = e.cache.get("cp")
    if r is None:
        r = e.kind in (INTEGRAL, DERIV) or any(_contains_prob(c) for c in e.children)
        e.cache["cp"] = r
    return r


def is_goal(e: Expr) -> bool:
    """No integral or derivative remains and no operator applies anywhere."""
    return not _contains_prob(e) and _find_first(e) is None


def post_order_step(e: Expr):
    """One interpreter step by operator pattern: (new_expr, op_index, path),
    or None when e is in normal form."""
    found = _find_first(e)
    if found is None:
        return None
    path, op = found
    return replace_at(e, path, op.rewrite(subexpr_at(e, path))), op.index, path


# ---------------------------------------------------------------------------
# Teacher
# ---------------------------------------------------------------------------

_MAX_TEACHER_STEPS = 10_000
_trace_cache: dict = {}
_TRACE_CACHE_MAX = 60_000


def teacher_trace(e: Expr):
    """Solve by repeated post_order_step.

    Returns (steps, final) where each step is (op_index, path, unit) and
    unit is the subexpression the operator was applied to; None if the step
    limit is hit (never observed on the problem distribution).
    """
    hit = _trace_cache.get(e)
    if hit is not None:
        return hit
    steps = []
    x = e
    while True:
        found = _find_first(x)
        if found is None:
            break
        path, op = found
        unit = subexpr_at(x, path)
        steps.append((op.index, path, unit))
        x = replace_at(x, path, op.rewrite(unit))
        if len(steps) > _MAX_TEACHER_STEPS:
            return None
    result = (tuple(steps), x)
    if len(_trace_cache) >= _TRACE_CACHE_MAX:
        _trace_cache.clear()
    _trace_cache[e] = result
    return result


def teacher_solve(e: Expr):
    """The oracle teacher: a parameterized operator list, or BOTTOM."""
    from .core import BOTTOM

    trace = teacher_trace(e)
    if trace is None:
        return BOTTOM
    return tuple((op, path) for op, path, _ in trace[0])


def teacher_ruleset():
    """The teacher's own select-sets as grammar caps (one per operator)."""
    from .control_rules import ControlRule, RuleSet

    rules = tuple(
        ControlRule(op.index, form_to_cap(GRAMMAR, op.teacher_form.split(), "Exp"))
        for op in OPERATORS
    )
    return RuleSet(rules)


# ---------------------------------------------------------------------------
# Problem distribution
# ---------------------------------------------------------------------------

# A term coefficient is sin x, cos x, or a digit, in that draw order.
_TERM_CHOICES = 12


def _draw_term(rng: random.Random) -> Expr:
    i = rng.randrange(_TERM_CHOICES)
    if i == 0:
        return sinx()
    if i == 1:
        return cosx()
    return num(i - 2)


def generate_problem(rng: random.Random) -> Expr:
    """∫ c1·x^p + t2·x² + t3·x + t4 dx with c1 ∈ {0..9}, p ∈ {3..9}, and
    each t uniform over {sin x, cos x, 0..9}, all independent."""
    c1 = num(rng.randrange(10))
    p = num(rng.randrange(3, 10))
    t2, t3, t4 = _draw_term(rng), _draw_term(rng), _draw_term(rng)
    body = add(
        mul(c1, powx(p)),
        add(mul(t2, powx(TWO)), add(mul(t3, VAR_X), t4)),
    )
    return integral(body)


# ---------------------------------------------------------------------------
# Independent numeric/symbolic oracles
# ---------------------------------------------------------------------------


def numeric_value(e: Expr, x: float) -> float:
    k = e.kind
    if k == NUM:
        return float(e.args[0])
    if k == VAR:
        return x
    if k == SUM:
        return numeric_value(e.args[0], x) + numeric_value(e.args[1], x)
    if k == DIFF:
        return numeric_value(e.args[0], x) - numeric_value(e.args[1], x)
    if k == PROD:
        return numeric_value(e.args[0], x) * numeric_value(e.args[1], x)
    if k == QUOT:
        return numeric_value(e.args[0], x) / numeric_value(e.args[1], x)
    if k == NEG:
        return -numeric_value(e.args[0], x)
    if k == POWER:
        return x ** numeric_value(e.args[1], x)
    if k == SIN:
        return math.sin(x)
    if k == COS:
        return math.cos(x)
    raise ParameterError(f"cannot evaluate {k} node numerically")


def differentiate(e: Expr) -> Expr:
    """Symbolic d/dx, independent of the rewrite operators (test oracle)."""
    k = e.kind
    if k in (NUM, NAMED):
        return ZERO
    if k == VAR:
        return ONE
    if k == SUM:
        return add(differentiate(e.args[0]), differentiate(e.args[1]))
    if k == DIFF:
        return sub(differentiate(e.args[0]), differentiate(e.args[1]))
    if k == PROD:
        l, r = e.args
        return add(mul(differentiate(l), r), mul(l, differentiate(r)))
    if k == QUOT:
        l, r = e.args
        return div(sub(mul(differentiate(l), r), mul(l, differentiate(r))), mul(r, r))
    if k == NEG:
        return neg(differentiate(e.args[0]))
    if k == POWER:
        exp_val = e.args[1]
        if exp_val.kind != NUM:
            raise ParameterError("can only differentiate integer powers")
        n = exp_val.args[0]
        if n == 0:
            return ZERO
        return mul(exp_val, powx(num(n - 1)) if n != 1 else ONE)
    if k == SIN:
        return cosx()
    if k == COS:
        return neg(sinx())
    raise ParameterError(f"cannot differentiate {k} node")


# ---------------------------------------------------------------------------
# Domain adapters and file format
# ---------------------------------------------------------------------------


def domain_spec():
    """DomainSpec over expressions; operator i applies at a location path."""
    from .core import DomainSpec

    def make_applier(op):
        return lambda state, loc: apply_at(op, state, loc or ())

    return DomainSpec(
        state_size=1,
        goal_test=is_goal,
        operators=tuple(make_applier(op) for op in OPERATORS),
    )


class IntegrationRuleDomain:
    """Adapter giving the control-rule machinery post-order matching units.

    The matching unit at a location is the subexpression there; select-set
    membership is tested against its Exp-rooted parse tree.
    """

    grammar = GRAMMAR
    num_operators = len(OPERATORS)
    unit_start = "Exp"

    def is_goal(self, e: Expr) -> bool:
        return is_goal(e)

    def iter_units(self, e: Expr):
        return iter_postorder(e)

    def unit_tree(self, unit: Expr) -> Node:
        return as_exp(unit)

    def unit_matches(self, cap: Node, unit: Expr) -> bool:
        memo = unit.cache.setdefault("capm", {})
        r = memo.get(cap)
        if r is None:
            r = memo[cap] = cap_matches_tree(cap, as_exp(unit))
        return r

    def subexpr(self, e: Expr, loc) -> Expr:
        return subexpr_at(e, loc)

    def apply(self, e: Expr, op_index: int, loc) -> Expr:
        return apply_at(get_operator(op_index), e, loc or ())

    def default_step_limit(self, e: Expr) -> int:
        return 50 * len(to_tokens(e))

    def state_size(self, e: Expr) -> int:
        return len(to_tokens(e))

    def default_size_limit(self, e: Expr) -> int:
        # teacher derivations never exceed 3x the problem's token length on
        # the distribution; 8x + 64 leaves slack while cutting runaways
        return 8 * len(to_tokens(e)) + 64


def format_example(problem: Expr, solution) -> str:
    """`problem-tokens TAB op@path,op@path,...` (path as dotted indices)."""
    steps = ",".join(
        f"{op}@" + ".".join(str(i) for i in path) for op, path in solution
    )
    return " ".join(to_tokens(problem)) + "\t" + steps


def parse_example(line: str):
    text, _, steps_text = line.rstrip("\n").partition("\t")
    problem = parse_expr(text.split())
    steps = []
    if steps_text:
        for part in steps_text.split(","):
            op_text, _, path_text = part.partition("@")
            path = tuple(int(i) for i in path_text.split(".")) if path_text else ()
            steps.append((int(op_text), path))
    return problem, tuple(steps)
