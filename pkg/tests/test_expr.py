import math

import numpy as np
import pytest

from chebbvp import (Classification, Domain, EvalError, ParseError, ProblemError,
                     classify, evaluate, extract_lhs_terms, make_problem, mentions_u, parse)
from chebbvp.expr import BinOp, Call, Diff, Neg, Number, VarU, VarX

from helpers import eval_lhs_with_bindings


# --- parsing ----------------------------------------------------------------

def test_parse_diff():
    assert parse("diff(u,2)") == Diff(2)
    assert parse("diff(u)") == Diff(1)
    assert parse("diff(u,0)") == Diff(0)


def test_parse_math_prefixed_call():
    assert parse("math.exp(2*x)") == Call("exp", BinOp("mul", Number(2.0), VarX()))
    assert parse("math.exp(2*x)") == parse("exp(2*x)")


def test_parse_constants_and_vars():
    assert parse("u") == VarU()
    assert parse("x") == VarX()
    assert evaluate(parse("pi"), 0.0) == math.pi
    assert evaluate(parse("math.pi"), 0.0) == math.pi
    assert evaluate(parse("e"), 0.0) == math.e


def test_parse_determinism():
    source = "diff(u,2) + 2*diff(u) + 3*u - sin(x)^2/4"
    assert parse(source) == parse(source)


# Precedence/associativity corpus; expected values computed by hand with the
# math module, independently of the library evaluator.
CORPUS = [
    ("2+3*4", 0.0, None, 14.0),
    ("2*3+4", 0.0, None, 10.0),
    ("2-3-4", 0.0, None, -5.0),
    ("12/4/3", 0.0, None, 1.0),
    ("2^3^2", 0.0, None, 512.0),
    ("-x^2", 2.0, None, -4.0),
    ("(-x)^2", 2.0, None, 4.0),
    ("-2^2", 0.0, None, -4.0),
    ("2^-2", 0.0, None, 0.25),
    ("2*-3", 0.0, None, -6.0),
    ("-(2+3)", 0.0, None, -5.0),
    ("2-(3-4)", 0.0, None, 3.0),
    ("2*(3+4)", 0.0, None, 14.0),
    ("x*u", 3.0, 5.0, 15.0),
    ("exp(0)+1", 0.0, None, 2.0),
    ("2*pi", 0.0, None, 2.0 * math.pi),
    ("e^2", 0.0, None, math.e**2),
    ("sqrt(16)", 0.0, None, 4.0),
    ("abs(-3)+1", 0.0, None, 4.0),
    ("1/2^2", 0.0, None, 0.25),
    ("cos(0)^2 + sin(0)^2", 0.0, None, 1.0),
    ("tanh(0) + cosh(0) + sinh(0)", 0.0, None, 1.0),
    ("log(e)", 0.0, None, 1.0),
    ("1.5e2 + 0.5", 0.0, None, 150.5),
]


@pytest.mark.parametrize("source,x,u,expected", CORPUS)
def test_precedence_corpus(source, x, u, expected):
    got = evaluate(parse(source), x, u)
    assert got == pytest.approx(expected, rel=1e-14, abs=1e-14)


MALFORMED = [
    ("", 0),
    ("   ", 0),
    ("2+", 2),
    ("foo(x)", 0),
    ("np.exp(x)", 0),
    ("diff(u,1.5)", 7),
    ("diff(x)", 5),
    ("diff(u", 6),
    ("diff(u,)", 7),
    ("(2+3", 4),
    ("2 3", 2),
    ("2$3", 1),
    (")", 0),
    ("diff(u,-1)", 7),
    ("1..2", 2),
]


@pytest.mark.parametrize("source,position", MALFORMED)
def test_malformed_inputs_raise_positioned_errors(source, position):
    with pytest.raises(ParseError) as excinfo:
        parse(source)
    assert excinfo.value.position == position


# --- evaluation -------------------------------------------------------------

def test_eval_reference_values():
    e = parse("exp(2*x)")
    assert evaluate(e, 1.0) == math.exp(2.0)  # 7.389056...
    assert round(evaluate(e, 1.0), 6) == 7.389056
    assert evaluate(e, 0.0) == 1.0
    assert evaluate(parse("exp(2*u)"), 0.37, u=0.0) == 1.0


def test_eval_requires_u_when_mentioned():
    with pytest.raises(EvalError):
        evaluate(parse("exp(2*u)"), 0.0)


def test_eval_domain_errors_carry_location():
    with pytest.raises(EvalError) as excinfo:
        evaluate(parse("log(x)"), -1.0)
    assert excinfo.value.x == -1.0
    with pytest.raises(EvalError):
        evaluate(parse("sqrt(x)"), -4.0)
    with pytest.raises(EvalError):
        evaluate(parse("1/x"), 0.0)


def test_eval_rejects_derivatives():
    with pytest.raises(EvalError):
        evaluate(parse("diff(u,1)"), 0.0, u=1.0)


def test_mentions_u():
    assert mentions_u(parse("exp(2*u)"))
    assert mentions_u(parse("diff(u,2)"))
    assert not mentions_u(parse("exp(2*x) + pi"))


# --- LHS term extraction ----------------------------------------------------

def _coeffs_at(terms, x):
    return {t.order: evaluate(t.coefficient, x) for t in terms}


def test_extract_single_second_derivative():
    terms = extract_lhs_terms(parse("diff(u,2)"))
    assert [(t.order,) for t in terms] == [(2,)]
    assert evaluate(terms[0].coefficient, 0.3) == 1.0


def test_extract_three_term_operator():
    terms = extract_lhs_terms(parse("diff(u,2) + 2*diff(u) + 3*u"))
    assert [t.order for t in terms] == [2, 1, 0]
    assert _coeffs_at(terms, 0.7) == {2: 1.0, 1: 2.0, 0: 3.0}


def test_extract_x_dependent_coefficients():
    terms = extract_lhs_terms(parse("x*diff(u,2) + sin(x)*u"))
    coeffs = _coeffs_at(terms, 0.5)
    assert coeffs[2] == 0.5
    assert coeffs[0] == math.sin(0.5)


def test_extract_merges_equal_orders():
    terms = extract_lhs_terms(parse("diff(u,2) - diff(u,2)/2 + u"))
    coeffs = _coeffs_at(terms, 0.1)
    assert coeffs[2] == pytest.approx(0.5, abs=1e-15)
    assert coeffs[0] == 1.0


def test_extract_division_and_negation():
    terms = extract_lhs_terms(parse("-diff(u,2)/4"))
    assert _coeffs_at(terms, 0.0) == {2: -0.25}


def test_extract_rejects_nonlinear_lhs():
    with pytest.raises(ProblemError, match="nonlinear left-hand side"):
        extract_lhs_terms(parse("u*diff(u,2)"))
    with pytest.raises(ProblemError, match="nonlinear left-hand side"):
        extract_lhs_terms(parse("u^2 + diff(u,2)"))
    with pytest.raises(ProblemError, match="nonlinear left-hand side"):
        extract_lhs_terms(parse("exp(u) + diff(u,2)"))
    with pytest.raises(ProblemError, match="denominator"):
        extract_lhs_terms(parse("diff(u,2) + 1/u"))


def test_extract_rejects_u_free_term():
    with pytest.raises(ProblemError, match="independent of u"):
        extract_lhs_terms(parse("diff(u,2) + x"))


@pytest.mark.parametrize("source", [
    "diff(u,2) + 2*diff(u) + 3*u",
    "x*diff(u,2) - sin(x)*diff(u) + (x^2 + 1)*u",
    "-diff(u,2)/2 + u*4 + 2*x*diff(u)",
])
def test_extraction_preserves_lhs_meaning(source):
    lhs = parse(source)
    terms = extract_lhs_terms(lhs)
    rng = np.random.default_rng(7)
    for _ in range(25):
        x = float(rng.uniform(-1, 1))
        bindings = {k: float(rng.standard_normal()) for k in range(3)}
        direct = eval_lhs_with_bindings(lhs, x, bindings)
        rebuilt = sum(evaluate(t.coefficient, x) * bindings[t.order] for t in terms)
        assert rebuilt == pytest.approx(direct, rel=1e-12, abs=1e-12)


# --- classification and problem construction ---------------------------------

def test_classify_linear():
    terms = extract_lhs_terms(parse("diff(u,2)"))
    assert classify(terms, parse("exp(2*x)")) is Classification.LINEAR


def test_classify_nonlinear_rhs():
    terms = extract_lhs_terms(parse("diff(u,2)"))
    assert classify(terms, parse("exp(2*u)")) is Classification.NONLINEAR_RHS


def test_classify_rejects_rhs_derivatives():
    terms = extract_lhs_terms(parse("diff(u,2)"))
    with pytest.raises(ProblemError, match="diff"):
        classify(terms, parse("diff(u,1)"))


def test_make_problem_fields():
    problem = make_problem("diff(u,2) + u", "x", Domain(0, 2), 1.5, -2.0)
    assert problem.max_order == 2
    assert problem.lvalue == 1.5
    assert problem.rvalue == -2.0
    assert problem.classification is Classification.LINEAR


def test_make_problem_rejects_wrong_order():
    with pytest.raises(ProblemError, match="order 3"):
        make_problem("diff(u,3)", "x", Domain(-1, 1), 0, 0)
    with pytest.raises(ProblemError, match="order"):
        make_problem("diff(u,1) + u", "x", Domain(-1, 1), 0, 0)
    with pytest.raises(ProblemError, match="order"):
        make_problem("u", "x", Domain(-1, 1), 0, 0)


def test_input_corpus_parses_and_classifies():
    linear = make_problem("diff(u,2)", "math.exp(2*x)", Domain(-1, 1), 0, 0)
    assert linear.classification is Classification.LINEAR
    nonlinear = make_problem("diff(u,2)", "math.exp(2*u)", Domain(-1, 1), 0, 0)
    assert nonlinear.classification is Classification.NONLINEAR_RHS
    three_term = make_problem("diff(u,2) + 2*diff(u) + 3*u", "x", Domain(-1, 1), 0, 0)
    assert [t.order for t in three_term.lhs_terms] == [2, 1, 0]
    textbook = make_problem("diff(u,2) + diff(u) + 100*u", "x", Domain(-1, 1), 0, 0)
    assert [t.order for t in textbook.lhs_terms] == [2, 1, 0]
    plain = make_problem("diff(u,2)", "math.exp(x)", Domain(-1, 1), 0, 0)
    assert plain.classification is Classification.LINEAR
