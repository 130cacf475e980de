"""Shared oracles for the test suite.

Everything here is deliberately independent of the library's own evaluation
paths: closed forms are hand-derived and checked against the ODE and its
boundary conditions analytically, and the Lagrange oracle is the O(p^2)
textbook formula.
"""

import math

import numpy as np

SINH2 = math.sinh(2.0)
COSH2 = math.cosh(2.0)


def closed_form_exp2x(x):
    """Solution of u'' = e^{2x} on [-1, 1] with u(+-1) = 0.

    u = (e^{2x} - x sinh 2 - cosh 2)/4: u'' = e^{2x}, and at x = +-1 the
    combination collapses to (e^{+-2} - (+-sinh 2) - cosh 2)/4 = 0.
    """
    return (np.exp(2.0 * x) - x * SINH2 - COSH2) / 4.0


def closed_form_exp2x_02(x):
    """Solution of u'' = e^{2x} on [0, 2] with u(0) = u(2) = 0.

    u = e^{2x}/4 + (1 - e^4) x / 8 - 1/4; u(0) = 1/4 - 1/4 = 0 and
    u(2) = e^4/4 + (1 - e^4)/4 - 1/4 = 0.
    """
    return np.exp(2.0 * x) / 4.0 + (1.0 - math.exp(4.0)) * x / 8.0 - 0.25


# Extremum of closed_form_exp2x: u'(x) = (2 e^{2x} - sinh 2)/4 = 0 at
# x* = log(sinh(2)/2)/2.
EXTREMUM_X = math.log(SINH2 / 2.0) / 2.0
EXTREMUM_U = float(closed_form_exp2x(EXTREMUM_X))


def lagrange_direct(nodes, values, x):
    """Direct Lagrange-basis evaluation, p(x) = sum_j y_j l_j(x).

    O(p^2) per point; the independent oracle for barycentric evaluation.
    """
    total = 0.0
    p = len(nodes)
    for j in range(p):
        basis = 1.0
        for k in range(p):
            if k != j:
                basis *= (x - nodes[k]) / (nodes[j] - nodes[k])
        total += values[j] * basis
    return total


def eval_lhs_with_bindings(e, x, u_by_order):
    """Independent recursive evaluator binding diff(u,k) -> u_by_order[k].

    Used to check that extract_lhs_terms preserves the meaning of the
    left-hand side; written against the AST shape only, not the library's
    evaluate().
    """
    from chebbvp.expr import BinOp, Call, Const, Diff, FUNCTIONS, CONSTANTS, Neg, Number, VarU, VarX

    if isinstance(e, Number):
        return e.value
    if isinstance(e, VarX):
        return x
    if isinstance(e, VarU):
        return u_by_order[0]
    if isinstance(e, Diff):
        return u_by_order[e.order]
    if isinstance(e, Const):
        return CONSTANTS[e.name]
    if isinstance(e, Neg):
        return -eval_lhs_with_bindings(e.operand, x, u_by_order)
    if isinstance(e, Call):
        return FUNCTIONS[e.func](eval_lhs_with_bindings(e.arg, x, u_by_order))
    left = eval_lhs_with_bindings(e.left, x, u_by_order)
    right = eval_lhs_with_bindings(e.right, x, u_by_order)
    return {
        "add": lambda: left + right,
        "sub": lambda: left - right,
        "mul": lambda: left * right,
        "div": lambda: left / right,
        "pow": lambda: left**right,
    }[e.op]()
