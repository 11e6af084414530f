"""Scalar Riccati superposition and symbolic checks of candidate rules."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import expr as _expr
from .algebra import LaurentPolynomial, polynomial_from_ast
from .fields import VectorField, prolong


class DegenerateConfiguration(ZeroDivisionError):
    """Coincident points make a cross-ratio or superposition undefined."""


def cross_ratio(x1, x2, x3, x4):
    """``((x4 - x1)/(x1 - x2)) / ((x4 - x3)/(x2 - x3))``.

    Exact for Fractions; floats are accepted as well.
    """
    if x1 == x2:
        raise DegenerateConfiguration("x1 and x2 coincide")
    if x2 == x3:
        raise DegenerateConfiguration("x2 and x3 coincide")
    if x4 == x3:
        raise DegenerateConfiguration("x4 and x3 coincide")
    return ((x4 - x1) / (x1 - x2)) / ((x4 - x3) / (x2 - x3))


def riccati_superpose(x1, x2, x3, C):
    """The solution whose cross-ratio with three known solutions equals ``C``."""
    den = C * (x1 - x2) + x3 - x2
    if den == 0:
        raise DegenerateConfiguration(
            f"denominator C*(x1 - x2) + x3 - x2 vanishes for C={C}")
    return (C * (x1 * x3 - x2 * x3) + x1 * x3 - x1 * x2) / den


class RationalExpression:
    """A quotient ``numerator / denominator`` of Laurent polynomials."""

    __slots__ = ("variables", "numerator", "denominator")

    def __init__(self, variables: Sequence[str], numerator: LaurentPolynomial,
                 denominator: LaurentPolynomial):
        if denominator.is_zero():
            raise ZeroDivisionError("denominator is identically zero")
        self.variables = tuple(variables)
        self.numerator = numerator
        self.denominator = denominator

    @classmethod
    def parse(cls, text: str, variables: Sequence[str]) -> "RationalExpression":
        node = _expr.parse(text, names=variables)
        num, den = _to_fraction(node, list(variables))
        return cls(variables, num, den)

    def evaluate(self, point: Sequence):
        return self.numerator.evaluate(point) / self.denominator.evaluate(point)

    def apply(self, X: VectorField) -> "RationalExpression":
        """``X(F)`` by the quotient rule, left unreduced."""
        N, D = self.numerator, self.denominator
        return RationalExpression(self.variables, X.apply(N) * D - N * X.apply(D), D * D)

    def __repr__(self) -> str:
        return f"RationalExpression(({self.numerator}) / ({self.denominator}))"


def _to_fraction(node, names):
    d = len(names)
    one = LaurentPolynomial.constant(d, 1)
    if isinstance(node, (_expr.Num, _expr.Var)):
        return polynomial_from_ast(node, names), one
    if isinstance(node, _expr.Neg):
        n, q = _to_fraction(node.operand, names)
        return -n, q
    if isinstance(node, _expr.Pow):
        n, q = _to_fraction(node.base, names)
        k = node.exponent
        if k < 0:
            if n.is_zero():
                raise ZeroDivisionError(f"negative power of zero in {node}")
            n, q, k = q, n, -k
        return n**k, q**k
    (a, b), (c, e) = _to_fraction(node.left, names), _to_fraction(node.right, names)
    if node.op == "+":
        return a * e + c * b, b * e
    if node.op == "-":
        return a * e - c * b, b * e
    if node.op == "*":
        return a * c, b * e
    if c.is_zero():
        raise ZeroDivisionError(f"division by zero in {node}")
    return a * e, b * c


@dataclass(frozen=True)
class RuleVerdict:
    passed: bool
    residuals: tuple[LaurentPolynomial, ...]

    def __bool__(self) -> bool:
        return self.passed


def rule_variables(copies: int, base: str = "x") -> list[str]:
    return [base] + [f"{base}{k}" for k in range(1, copies + 1)]


def verify_rule(candidate: RationalExpression | str, generators: Sequence[VectorField],
                copies: int) -> RuleVerdict:
    """Check that every prolonged generator annihilates ``candidate``.

    The candidate lives on ``copies + 1`` copies of the line, ordered
    ``(x, x1, ..., xm)``.  A residual is the numerator of ``prolong(X)(F)``;
    the rule passes when all residuals vanish identically.
    """
    if isinstance(candidate, str):
        candidate = RationalExpression.parse(candidate, rule_variables(copies))
    if len(candidate.variables) != copies + 1:
        raise ValueError(
            f"candidate has {len(candidate.variables)} variables, expected {copies + 1}")
    residuals = []
    for X in generators:
        if X.dimension != 1:
            raise ValueError("verify_rule expects line fields")
        residuals.append(candidate.apply(prolong(X, copies)).numerator)
    return RuleVerdict(all(r.is_zero() for r in residuals), tuple(residuals))


def cross_ratio_rule(copies_names: Sequence[str] = ("x", "x1", "x2", "x3")) -> str:
    """The cross-ratio invariant as rule text, with ``x`` playing the fourth solution."""
    x, x1, x2, x3 = copies_names
    return f"(({x} - {x1})/({x1} - {x2})) / (({x} - {x3})/({x2} - {x3}))"

