"""Exact sparse Laurent polynomials over the rationals and time expressions.

Scalars are :class:`fractions.Fraction` throughout; they are always kept in
lowest terms with a positive denominator.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from . import expr as _expr
from .expr import Node

Rational = Fraction

#: Degree of the zero polynomial; compares below every integer.
NEG_INF = float("-inf")


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floating-point coefficients are not allowed in exact polynomials")
    return Fraction(value)


def default_names(dimension: int) -> list[str]:
    return [f"x{k + 1}" for k in range(dimension)]


class LaurentPolynomial:
    """Sparse polynomial in ``dimension`` variables with signed integer exponents.

    ``terms`` maps exponent tuples to nonzero Fractions.  Instances are
    immutable and hashable; equality is equality of term maps.
    """

    __slots__ = ("dimension", "_terms", "_hash")

    def __init__(self, dimension: int, terms: Mapping[Sequence[int], object] | None = None):
        if dimension < 1:
            raise ValueError("dimension must be positive")
        self.dimension = dimension
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != dimension:
                raise ValueError(f"exponent {exps} does not have length {dimension}")
            c = as_rational(coeff)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
        self._terms = {k: v for k, v in clean.items() if v}
        self._hash = None

    @classmethod
    def _raw(cls, dimension: int, terms: dict) -> "LaurentPolynomial":
        # caller guarantees tuple keys of the right length and nonzero Fractions
        p = object.__new__(cls)
        p.dimension = dimension
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, dimension: int) -> "LaurentPolynomial":
        return cls._raw(dimension, {})

    @classmethod
    def constant(cls, dimension: int, value) -> "LaurentPolynomial":
        return cls(dimension, {(0,) * dimension: value})

    @classmethod
    def monomial(cls, exponent: Sequence[int], coeff=1) -> "LaurentPolynomial":
        return cls(len(exponent), {tuple(exponent): coeff})

    @classmethod
    def variable(cls, dimension: int, axis: int) -> "LaurentPolynomial":
        e = [0] * dimension
        e[axis] = 1
        return cls.monomial(e)

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self._terms)

    def items(self):
        """Terms in descending lexicographic exponent order."""
        return sorted(self._terms.items(), reverse=True)

    def coefficient(self, exponent: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exponent), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPolynomial):
            return self.dimension == other.dimension and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == LaurentPolynomial.constant(self.dimension, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dimension, frozenset(self._terms.items())))
        return self._hash

    def _coerce(self, other) -> "LaurentPolynomial":
        if isinstance(other, LaurentPolynomial):
            if other.dimension != self.dimension:
                raise ValueError(
                    f"dimension mismatch: {self.dimension} vs {other.dimension}")
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPolynomial.constant(self.dimension, other)
        raise TypeError(f"cannot combine polynomial with {type(other).__name__}")

    def __add__(self, other) -> "LaurentPolynomial":
        other = self._coerce(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return LaurentPolynomial._raw(self.dimension, out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPolynomial":
        return LaurentPolynomial._raw(self.dimension, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "LaurentPolynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "LaurentPolynomial":
        return self._coerce(other) - self

    def scale(self, c) -> "LaurentPolynomial":
        c = as_rational(c)
        if not c:
            return LaurentPolynomial.zero(self.dimension)
        return LaurentPolynomial._raw(self.dimension, {k: v * c for k, v in self._terms.items()})

    def __mul__(self, other) -> "LaurentPolynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for ka, ca in self._terms.items():
            for kb, cb in other._terms.items():
                k = tuple(a + b for a, b in zip(ka, kb))
                out[k] = out.get(k, 0) + ca * cb
        return LaurentPolynomial._raw(self.dimension, {k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPolynomial":
        if not isinstance(n, int):
            raise TypeError("exponent must be an integer")
        if n < 0:
            if len(self._terms) != 1:
                raise ValueError("negative powers are only defined for monomials")
            (k, c), = self._terms.items()
            return LaurentPolynomial._raw(
                self.dimension, {tuple(e * n for e in k): c**n})
        result = LaurentPolynomial.constant(self.dimension, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def derivative(self, axis: int) -> "LaurentPolynomial":
        """Formal partial derivative with respect to variable ``axis``."""
        if not 0 <= axis < self.dimension:
            raise IndexError(f"axis {axis} out of range for dimension {self.dimension}")
        out = {}
        for k, c in self._terms.items():
            e = k[axis]
            if e:
                nk = k[:axis] + (e - 1,) + k[axis + 1:]
                out[nk] = c * e
        return LaurentPolynomial._raw(self.dimension, out)

    def shift(self, exponent: Sequence[int]) -> "LaurentPolynomial":
        """Multiply by the monomial ``x**exponent``."""
        return LaurentPolynomial._raw(
            self.dimension,
            {tuple(a + b for a, b in zip(k, exponent)): c for k, c in self._terms.items()})

    def degree(self):
        """Maximum total degree; :data:`NEG_INF` for the zero polynomial."""
        if not self._terms:
            return NEG_INF
        return max(sum(k) for k in self._terms)

    def min_exponent_sum(self):
        if not self._terms:
            return NEG_INF
        return min(sum(k) for k in self._terms)

    def is_polynomial(self) -> bool:
        return all(e >= 0 for k in self._terms for e in k)

    def embed(self, dimension: int, offset: int) -> "LaurentPolynomial":
        """Re-express over ``dimension`` variables, placing ours at ``offset``."""
        if offset < 0 or offset + self.dimension > dimension:
            raise ValueError("embedding does not fit")
        pad_l = (0,) * offset
        pad_r = (0,) * (dimension - offset - self.dimension)
        return LaurentPolynomial._raw(
            dimension, {pad_l + k + pad_r: c for k, c in self._terms.items()})

    def evaluate(self, point: Sequence):
        total = 0
        for k, c in self._terms.items():
            term = c
            for x, e in zip(point, k):
                if e:
                    term = term * x**e
            total = total + term
        return total

    def to_string(self, names: Sequence[str] | None = None) -> str:
        names = list(names) if names is not None else default_names(self.dimension)
        if len(names) != self.dimension:
            raise ValueError("wrong number of variable names")
        if not self._terms:
            return "0"
        pieces = []
        for k, c in self.items():
            factors = []
            for name, e in zip(names, k):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            elif mag.numerator == 1:
                # "x1/2" rather than "1/2*x1", which would read as 1/(2*x1)
                body = "*".join(factors) + f"/{mag.denominator}"
            else:
                body = f"{mag.numerator}*" + "*".join(factors)
                if mag.denominator != 1:
                    body += f"/{mag.denominator}"
            if not pieces:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(pieces)

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"LaurentPolynomial({self.dimension}, {self.to_string()!r})"


def poly_add(p: LaurentPolynomial, q: LaurentPolynomial) -> LaurentPolynomial:
    return p + q


def poly_mul(p: LaurentPolynomial, q: LaurentPolynomial) -> LaurentPolynomial:
    return p * q


def poly_derivative(p: LaurentPolynomial, axis: int) -> LaurentPolynomial:
    return p.derivative(axis)


def poly_degree(p: LaurentPolynomial):
    return p.degree()


def polynomial_from_ast(node: Node, names: Sequence[str], allow_laurent: bool = True) -> LaurentPolynomial:
    """Expand an AST into a polynomial; only constant divisors are allowed."""
    index = {name: k for k, name in enumerate(names)}
    d = len(names)

    def walk(n: Node) -> LaurentPolynomial:
        if isinstance(n, _expr.Num):
            return LaurentPolynomial.constant(d, n.value)
        if isinstance(n, _expr.Var):
            if n.name not in index:
                raise ValueError(f"unknown variable {n.name!r}")
            return LaurentPolynomial.variable(d, index[n.name])
        if isinstance(n, _expr.Neg):
            return -walk(n.operand)
        if isinstance(n, _expr.Pow):
            base = walk(n.base)
            if n.exponent < 0:
                if len(base) != 1:
                    raise ValueError(f"negative power of a non-monomial in {n}")
                if not allow_laurent and set(base._terms) != {(0,) * d}:
                    raise ValueError(
                        f"negative exponent in {n}; set allow_laurent to accept Laurent terms")
            return base**n.exponent
        left, right = walk(n.left), walk(n.right)
        if n.op == "+":
            return left + right
        if n.op == "-":
            return left - right
        if n.op == "*":
            return left * right
        if len(right) == 1 and (0,) * d in right._terms:
            return left.scale(1 / right._terms[(0,) * d])
        if right.is_zero():
            raise ZeroDivisionError(f"division by zero in {n}")
        raise ValueError(f"division by a non-constant polynomial in {n}")

    return walk(node)


class TimeExpression:
    """Rational expression in the single symbol ``t``.

    >>> TimeExpression.parse("1/t").evaluate(Fraction(2))
    Fraction(1, 2)
    """

    __slots__ = ("node", "text")

    def __init__(self, node: Node, text: str | None = None):
        self.node = node
        self.text = text if text is not None else str(node)

    @classmethod
    def parse(cls, text: str, symbol: str = "t") -> "TimeExpression":
        node = _expr.parse(text, names=[symbol])
        if symbol != "t":
            node = _rename(node, {symbol: "t"})
        return cls(node, text.strip())

    @classmethod
    def constant(cls, value) -> "TimeExpression":
        value = as_rational(value)
        return cls(_expr.Num(value), str(value))

    @classmethod
    def coerce(cls, value) -> "TimeExpression":
        if isinstance(value, TimeExpression):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        return cls.constant(value)

    def evaluate(self, t):
        """Exact for rational ``t``; floats propagate when ``t`` is a float."""
        try:
            return _expr.evaluate(self.node, {"t": t})
        except ZeroDivisionError as exc:
            raise ZeroDivisionError(f"{self.text} has a pole at t={t}: {exc}") from None

    def is_constant(self) -> bool:
        return not _expr.variables(self.node)

    def __eq__(self, other) -> bool:
        return isinstance(other, TimeExpression) and self.node == other.node

    def __hash__(self) -> int:
        return hash(self.node)

    def __str__(self) -> str:
        return self.text

    def __repr__(self) -> str:
        return f"TimeExpression({self.text!r})"


def _rename(node: Node, mapping: dict) -> Node:
    if isinstance(node, _expr.Var):
        return _expr.Var(mapping.get(node.name, node.name))
    if isinstance(node, _expr.Num):
        return node
    if isinstance(node, _expr.Neg):
        return _expr.Neg(_rename(node.operand, mapping))
    if isinstance(node, _expr.Pow):
        return _expr.Pow(_rename(node.base, mapping), node.exponent)
    return _expr.BinOp(node.op, _rename(node.left, mapping), _rename(node.right, mapping))


def time_eval(e: TimeExpression, t) -> Fraction:
    return e.evaluate(t)
