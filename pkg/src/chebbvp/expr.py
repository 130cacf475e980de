"""Expression language for writing ODEs as text.

Grammar (EBNF):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | base ('^' factor)?
    base   := NUMBER | 'x' | 'u' | 'pi' | 'e'
            | FUNC '(' expr ')'
            | 'diff' '(' 'u' (',' INT)? ')'
            | '(' expr ')'

'^' is right-associative (2^3^2 == 512) and unary minus applies to a whole
power, so -x^2 parses as -(x^2).  diff(u) abbreviates diff(u,1).  Function
names may carry a leading "math." prefix, which is stripped: math.exp and
exp are the same function.

Supported functions: exp, sin, cos, tan, log, sqrt, abs, sinh, cosh, tanh.
"""

import math
import re
from dataclasses import dataclass
from enum import Enum

from .errors import EvalError, ParseError, ProblemError
from .grid import Domain

FUNCTIONS = {
    "exp": math.exp,
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "log": math.log,
    "sqrt": math.sqrt,
    "abs": math.fabs,
    "sinh": math.sinh,
    "cosh": math.cosh,
    "tanh": math.tanh,
}

CONSTANTS = {"pi": math.pi, "e": math.e}


# --- AST -------------------------------------------------------------------

@dataclass(frozen=True)
class Number:
    value: float


@dataclass(frozen=True)
class VarX:
    pass


@dataclass(frozen=True)
class VarU:
    pass


@dataclass(frozen=True)
class Const:
    name: str  # "pi" or "e"


@dataclass(frozen=True)
class Diff:
    """k-th derivative of u; order 0 is u itself."""

    order: int


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # add | sub | mul | div | pow
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Number | VarX | VarU | Const | Diff | Neg | BinOp | Call


# --- tokenizer and parser --------------------------------------------------

@dataclass(frozen=True)
class _Token:
    kind: str  # "number", "name", one of "+-*/^(),", or "end"
    text: str
    pos: int


_NUMBER_RE = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*(?:\.[A-Za-z_][A-Za-z0-9_]*)?")
_PUNCT = set("+-*/^(),")


def _tokenize(source):
    tokens = []
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        if m := _NUMBER_RE.match(source, i):
            tokens.append(_Token("number", m.group(), i))
            i = m.end()
            continue
        if m := _NAME_RE.match(source, i):
            tokens.append(_Token("name", m.group(), i))
            i = m.end()
            continue
        if ch in _PUNCT:
            tokens.append(_Token(ch, ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, source):
        self.tokens = _tokenize(source)
        self.i = 0

    @property
    def current(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind):
        tok = self.current
        if tok.kind != kind:
            found = repr(tok.text) if tok.text else "end of input"
            raise ParseError(f"expected {kind!r}, found {found}", tok.pos)
        return self.advance()

    def parse(self):
        node = self.expr()
        tok = self.current
        if tok.kind != "end":
            raise ParseError(f"unexpected trailing input {tok.text!r}", tok.pos)
        return node

    def expr(self):
        node = self.term()
        while self.current.kind in ("+", "-"):
            op = self.advance().kind
            node = BinOp("add" if op == "+" else "sub", node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.current.kind in ("*", "/"):
            op = self.advance().kind
            node = BinOp("mul" if op == "*" else "div", node, self.factor())
        return node

    def factor(self):
        # unary minus is looser than '^' on its left: -x^2 == -(x^2)
        if self.current.kind == "-":
            self.advance()
            return Neg(self.factor())
        node = self.base()
        if self.current.kind == "^":
            self.advance()
            node = BinOp("pow", node, self.factor())
        return node

    def base(self):
        tok = self.current
        if tok.kind == "number":
            self.advance()
            return Number(float(tok.text))
        if tok.kind == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind == "name":
            return self._name()
        found = repr(tok.text) if tok.text else "end of input"
        raise ParseError(f"expected a number, name or '(', found {found}", tok.pos)

    def _name(self):
        tok = self.advance()
        name = tok.text
        if name.startswith("math."):
            name = name[5:]
        if name == "x":
            return VarX()
        if name == "u":
            return VarU()
        if name in CONSTANTS:
            return Const(name)
        if name == "diff":
            return self._diff(tok)
        if self.current.kind == "(":
            if name not in FUNCTIONS:
                raise ParseError(f"unknown function {tok.text!r}", tok.pos)
            self.advance()
            arg = self.expr()
            self.expect(")")
            return Call(name, arg)
        raise ParseError(f"unknown identifier {tok.text!r}", tok.pos)

    def _diff(self, diff_tok):
        self.expect("(")
        arg = self.current
        if not (arg.kind == "name" and arg.text == "u"):
            raise ParseError("diff() differentiates u only", arg.pos)
        self.advance()
        order = 1
        if self.current.kind == ",":
            self.advance()
            num = self.current
            if num.kind != "number" or not num.text.isdigit():
                raise ParseError("derivative order must be a non-negative integer literal", num.pos)
            self.advance()
            order = int(num.text)
        self.expect(")")
        return Diff(order)


def parse(source: str) -> Expr:
    """Parse expression source into an AST."""
    if not source or not source.strip():
        raise ParseError("empty expression", 0)
    return _Parser(source).parse()


# --- evaluation ------------------------------------------------------------

def evaluate(expr: Expr, x: float, u: float | None = None) -> float:
    """Evaluate numerically at x, binding u when supplied.

    diff(u,k) with k >= 1 cannot be evaluated pointwise and raises.
    """
    try:
        return _eval(expr, x, u)
    except EvalError:
        raise
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        raise EvalError(f"{exc} while evaluating at x = {x:g}", x=x) from exc


def _eval(e, x, u):
    if isinstance(e, Number):
        return e.value
    if isinstance(e, VarX):
        return x
    if isinstance(e, VarU):
        if u is None:
            raise EvalError("expression references u but no u value was supplied", x=x)
        return u
    if isinstance(e, Diff):
        if e.order == 0:
            if u is None:
                raise EvalError("expression references u but no u value was supplied", x=x)
            return u
        raise EvalError(f"cannot numerically evaluate diff(u,{e.order})", x=x)
    if isinstance(e, Const):
        return CONSTANTS[e.name]
    if isinstance(e, Neg):
        return -_eval(e.operand, x, u)
    if isinstance(e, Call):
        return FUNCTIONS[e.func](_eval(e.arg, x, u))
    left = _eval(e.left, x, u)
    right = _eval(e.right, x, u)
    if e.op == "add":
        return left + right
    if e.op == "sub":
        return left - right
    if e.op == "mul":
        return left * right
    if e.op == "div":
        return left / right
    return left**right


def mentions_u(e: Expr) -> bool:
    """True when the expression references u or any diff(u,k)."""
    if isinstance(e, (VarU, Diff)):
        return True
    if isinstance(e, Neg):
        return mentions_u(e.operand)
    if isinstance(e, BinOp):
        return mentions_u(e.left) or mentions_u(e.right)
    if isinstance(e, Call):
        return mentions_u(e.arg)
    return False


def _max_u_order(e):
    """Highest derivative order of u mentioned, or None when u is absent."""
    if isinstance(e, VarU):
        return 0
    if isinstance(e, Diff):
        return e.order
    if isinstance(e, Neg):
        return _max_u_order(e.operand)
    if isinstance(e, Call):
        return _max_u_order(e.arg)
    if isinstance(e, BinOp):
        orders = [k for k in (_max_u_order(e.left), _max_u_order(e.right)) if k is not None]
        return max(orders) if orders else None
    return None


# --- structural analysis ---------------------------------------------------

@dataclass(frozen=True)
class LhsTerm:
    """One additive term of the left-hand side: coefficient(x) * diff(u,k)."""

    order: int
    coefficient: Expr


class Classification(Enum):
    LINEAR = "linear"
    NONLINEAR_RHS = "nonlinear-rhs"


def extract_lhs_terms(lhs: Expr) -> list[LhsTerm]:
    """Split the left-hand side into coefficient * diff(u,k) terms.

    Terms of equal order merge by coefficient addition; the result is sorted
    by descending order.  Terms without u, and terms not linear in u, are
    rejected.
    """
    groups: dict[int, Expr] = {}
    for term in _additive_terms(lhs):
        if not mentions_u(term):
            raise ProblemError(
                "left-hand side term independent of u; move it to the right-hand side")
        order, coeff = _split_linear_term(term)
        groups[order] = coeff if order not in groups else BinOp("add", groups[order], coeff)
    return [LhsTerm(k, groups[k]) for k in sorted(groups, reverse=True)]


def _additive_terms(e):
    if isinstance(e, BinOp) and e.op == "add":
        yield from _additive_terms(e.left)
        yield from _additive_terms(e.right)
    elif isinstance(e, BinOp) and e.op == "sub":
        yield from _additive_terms(e.left)
        for t in _additive_terms(e.right):
            yield Neg(t)
    elif isinstance(e, Neg):
        for t in _additive_terms(e.operand):
            yield Neg(t)
    else:
        yield e


def _mul(a, b):
    if isinstance(a, Number) and a.value == 1.0:
        return b
    if isinstance(b, Number) and b.value == 1.0:
        return a
    return BinOp("mul", a, b)


def _split_linear_term(e):
    """Decompose a u-mentioning product into (order, x-only coefficient)."""
    if isinstance(e, VarU):
        return 0, Number(1.0)
    if isinstance(e, Diff):
        return e.order, Number(1.0)
    if isinstance(e, Neg):
        order, coeff = _split_linear_term(e.operand)
        return order, Neg(coeff)
    if isinstance(e, BinOp) and e.op in ("mul", "div"):
        left_u, right_u = mentions_u(e.left), mentions_u(e.right)
        if left_u and right_u:
            raise ProblemError(
                "nonlinear left-hand side unsupported: product of u-dependent factors")
        if e.op == "div" and right_u:
            raise ProblemError("nonlinear left-hand side unsupported: u in a denominator")
        if left_u:
            order, coeff = _split_linear_term(e.left)
            if e.op == "mul":
                return order, _mul(coeff, e.right)
            return order, BinOp("div", coeff, e.right)
        order, coeff = _split_linear_term(e.right)
        return order, _mul(e.left, coeff)
    if isinstance(e, BinOp) and e.op == "pow":
        raise ProblemError("nonlinear left-hand side unsupported: u inside a power")
    if isinstance(e, Call):
        raise ProblemError(
            f"nonlinear left-hand side unsupported: u inside {e.func}()")
    raise ProblemError(
        "unsupported left-hand side structure: write each term as coefficient * diff(u,k)")


def classify(lhs_terms, rhs: Expr) -> Classification:
    """Linear when the right-hand side is u-free; nonlinear when it mentions
    u itself.  Derivatives of u on the right-hand side are out of scope."""
    order = _max_u_order(rhs)
    if order is None:
        return Classification.LINEAR
    if order >= 1:
        raise ProblemError(
            f"right-hand side may reference u but not its derivatives; found diff(u,{order})")
    return Classification.NONLINEAR_RHS


@dataclass(frozen=True)
class OdeProblem:
    """A parsed two-point boundary value problem with Dirichlet data."""

    lhs_terms: tuple
    rhs: Expr
    domain: Domain
    lvalue: float
    rvalue: float
    classification: Classification

    @property
    def max_order(self):
        return max(t.order for t in self.lhs_terms)


def make_problem(lhs_source: str, rhs_source: str, domain: Domain,
                 lvalue: float, rvalue: float) -> OdeProblem:
    """Parse and validate a problem.  The two Dirichlet values well-pose a
    second-order equation only, so the highest LHS order must be exactly 2."""
    terms = extract_lhs_terms(parse(lhs_source))
    rhs = parse(rhs_source)
    order = max(t.order for t in terms)
    if order > 2:
        raise ProblemError(
            f"derivative order {order} unsupported: two Dirichlet conditions "
            f"well-pose only order 2")
    if order < 2:
        raise ProblemError(
            f"highest derivative order is {order}; two Dirichlet conditions "
            f"require order 2")
    classification = classify(terms, rhs)
    return OdeProblem(tuple(terms), rhs, domain, float(lvalue), float(rvalue),
                      classification)
