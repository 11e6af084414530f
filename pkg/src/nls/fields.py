"""Polynomial vector fields, Lie brackets, the D-basis form and exact spans.

A field ``X = f_1 d/dx_1 + ... + f_d d/dx_d`` is stored as the tuple of its
components.  In the D-basis ``D_k = x_k d/dx_k`` the same field reads
``X = sum_n x^n X(n)`` with constant coefficient vectors ``X(n)``; that form
drives the Newton-polytope machinery.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .algebra import LaurentPolynomial, default_names

Exponent = tuple[int, ...]
Vec = tuple[Fraction, ...]


class VectorField:
    """First-order operator with Laurent polynomial components."""

    __slots__ = ("dimension", "components", "_hash")

    def __init__(self, components: Sequence[LaurentPolynomial]):
        components = tuple(components)
        if not components:
            raise ValueError("a vector field needs at least one component")
        d = len(components)
        for f in components:
            if f.dimension != d:
                raise ValueError(
                    f"component of dimension {f.dimension} in a {d}-dimensional field")
        self.dimension = d
        self.components = components
        self._hash = None

    @classmethod
    def zero(cls, dimension: int) -> "VectorField":
        return cls([LaurentPolynomial.zero(dimension)] * dimension)

    @classmethod
    def from_strings(cls, components: Sequence[str], names: Sequence[str] | None = None,
                     allow_laurent: bool = True) -> "VectorField":
        from .io import parse_polynomial

        names = list(names) if names is not None else default_names(len(components))
        return cls([parse_polynomial(c, names, allow_laurent=allow_laurent) for c in components])

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.components)

    def apply(self, g: LaurentPolynomial) -> LaurentPolynomial:
        """The derivative ``X(g) = sum_i f_i dg/dx_i``."""
        out = LaurentPolynomial.zero(self.dimension)
        for i, f in enumerate(self.components):
            if f:
                dg = g.derivative(i)
                if dg:
                    out = out + f * dg
        return out

    def __add__(self, other: "VectorField") -> "VectorField":
        _check_dims(self, other)
        return VectorField([a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "VectorField") -> "VectorField":
        _check_dims(self, other)
        return VectorField([a - b for a, b in zip(self.components, other.components)])

    def __neg__(self) -> "VectorField":
        return VectorField([-a for a in self.components])

    def scale(self, c) -> "VectorField":
        return VectorField([a.scale(c) for a in self.components])

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.components == other.components

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.components)
        return self._hash

    def to_strings(self, names: Sequence[str] | None = None) -> list[str]:
        return [f.to_string(names) for f in self.components]

    def to_string(self, names: Sequence[str] | None = None) -> str:
        names = list(names) if names is not None else default_names(self.dimension)
        parts = [f"({f.to_string(names)})*d/d{n}"
                 for f, n in zip(self.components, names) if f]
        return " + ".join(parts) if parts else "0"

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"VectorField({self.to_strings()!r})"


def _check_dims(X: VectorField, Y: VectorField) -> None:
    if X.dimension != Y.dimension:
        raise ValueError(f"dimension mismatch: {X.dimension} vs {Y.dimension}")


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """``[X, Y]`` with components ``X(g_i) - Y(f_i)``."""
    _check_dims(X, Y)
    return VectorField([X.apply(g) - Y.apply(f) for f, g in zip(X.components, Y.components)])


@dataclass(frozen=True)
class DForm:
    """``n -> X(n)``; zero vectors are never stored."""

    dimension: int
    coefficients: Mapping[Exponent, Vec]

    def support(self) -> list[Exponent]:
        return sorted(self.coefficients)

    def __getitem__(self, n: Sequence[int]) -> Vec:
        return self.coefficients.get(tuple(n), (Fraction(0),) * self.dimension)

    def __eq__(self, other) -> bool:
        return (isinstance(other, DForm) and self.dimension == other.dimension
                and dict(self.coefficients) == dict(other.coefficients))

    def __hash__(self) -> int:
        return hash((self.dimension, frozenset(self.coefficients.items())))


def to_d_form(X: VectorField) -> DForm:
    d = X.dimension
    acc: dict[Exponent, list[Fraction]] = {}
    for i, f in enumerate(X.components):
        for m, c in f.terms.items():
            n = m[:i] + (m[i] - 1,) + m[i + 1:]
            acc.setdefault(n, [Fraction(0)] * d)[i] += c
    return DForm(d, {n: tuple(vec) for n, vec in acc.items() if any(vec)})


def from_d_form(form: DForm) -> VectorField:
    d = form.dimension
    comps: list[dict[Exponent, Fraction]] = [{} for _ in range(d)]
    for n, vec in form.coefficients.items():
        for i, c in enumerate(vec):
            if c:
                m = n[:i] + (n[i] + 1,) + n[i + 1:]
                comps[i][m] = c
    return VectorField([LaurentPolynomial(d, t) for t in comps])


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def d_form_bracket_term(v: Sequence[int], V: Sequence, u: Sequence[int], U: Sequence):
    """Bracket of single D-basis terms: ``[x^v V, x^u U] = x^(v+u) ((u.V) U - (v.U) V)``."""
    if not len(v) == len(V) == len(u) == len(U):
        raise ValueError("dimension mismatch")
    uV = dot(u, V)
    vU = dot(v, U)
    K = tuple(uV * Ui - vU * Vi for Ui, Vi in zip(U, V))
    return tuple(a + b for a, b in zip(v, u)), K


def single_term_field(n: Sequence[int], vec: Sequence) -> VectorField:
    """The field ``x^n (vec . D)``."""
    d = len(n)
    return from_d_form(DForm(d, {tuple(n): tuple(Fraction(c) for c in vec)} if any(vec) else {}))


def _flatten(X: VectorField) -> dict[tuple[Exponent, int], Fraction]:
    return {(m, i): c for i, f in enumerate(X.components) for m, c in f.terms.items()}


class SpanBasis:
    """Reduced row echelon basis of a span of fields over the rationals.

    Coordinates are indexed by ``(exponent, axis)`` pairs in lexicographic
    order; each row is a sparse mapping with leading coefficient 1 at its
    pivot and zeros at every other row's pivot.
    """

    __slots__ = ("dimension", "_rows")

    def __init__(self, dimension: int, rows: Iterable[dict] = ()):
        self.dimension = dimension
        self._rows: list[dict] = []
        for r in rows:
            self._insert(dict(r))

    @property
    def rows(self) -> list[dict]:
        return [dict(r) for r in self._rows]

    @property
    def index(self) -> list[tuple[Exponent, int]]:
        """The ambient flattening: every coordinate used by some row, sorted."""
        return sorted({k for r in self._rows for k in r})

    @property
    def rank(self) -> int:
        return len(self._rows)

    def __len__(self) -> int:
        return len(self._rows)

    def pivots(self) -> list[tuple[Exponent, int]]:
        return [min(r) for r in self._rows]

    def _reduce(self, vec: dict) -> dict:
        vec = dict(vec)
        for row in self._rows:
            p = min(row)
            c = vec.get(p)
            if c:
                for k, a in row.items():
                    s = vec.get(k, 0) - c * a
                    if s:
                        vec[k] = s
                    else:
                        vec.pop(k, None)
        return vec

    def _insert(self, vec: dict) -> bool:
        vec = self._reduce(vec)
        if not vec:
            return False
        p = min(vec)
        lead = vec[p]
        vec = {k: a / lead for k, a in vec.items()}
        for row in self._rows:
            c = row.get(p)
            if c:
                for k, a in vec.items():
                    s = row.get(k, 0) - c * a
                    if s:
                        row[k] = s
                    else:
                        row.pop(k, None)
        self._rows.append(vec)
        self._rows.sort(key=min)
        return True

    def contains(self, X: VectorField) -> bool:
        if X.dimension != self.dimension:
            raise ValueError("dimension mismatch")
        return not self._reduce(_flatten(X))

    __contains__ = contains

    def extended(self, X: VectorField) -> "SpanBasis":
        out = self.copy()
        out.add(X)
        return out

    def add(self, X: VectorField) -> bool:
        """Insert ``X`` in place; True when the span grew."""
        if X.dimension != self.dimension:
            raise ValueError("dimension mismatch")
        return self._insert(_flatten(X))

    def copy(self) -> "SpanBasis":
        out = SpanBasis(self.dimension)
        out._rows = [dict(r) for r in self._rows]
        return out

    def fields(self) -> list[VectorField]:
        """Basis rows turned back into vector fields."""
        out = []
        for row in self._rows:
            comps: list[dict] = [{} for _ in range(self.dimension)]
            for (m, i), c in row.items():
                comps[i][m] = c
            out.append(VectorField([LaurentPolynomial(self.dimension, t) for t in comps]))
        return out

    def __eq__(self, other) -> bool:
        return (isinstance(other, SpanBasis) and self.dimension == other.dimension
                and self._rows == other._rows)

    def __repr__(self) -> str:
        return f"SpanBasis(dimension={self.dimension}, rank={self.rank})"


def span_of(fields: Sequence[VectorField]) -> SpanBasis:
    if not fields:
        raise ValueError("span of an empty list is undefined")
    d = fields[0].dimension
    basis = SpanBasis(d)
    for X in fields:
        basis.add(X)
    return basis


def add_pairwise_commutators(fields: Sequence[VectorField],
                             basis: SpanBasis | None = None) -> list[VectorField]:
    """Extend ``fields`` by every bracket ``[X_i, X_j]`` (i < j) not already spanned.

    Brackets are visited in lexicographic pair order and tested against the
    span of the running list.  ``basis``, if given, must span ``fields`` and
    is updated in place.
    """
    if not fields:
        raise ValueError("empty operator list")
    fields = list(fields)
    if basis is None:
        basis = span_of(fields)
    out = list(fields)
    for i, j in combinations(range(len(fields)), 2):
        B = lie_bracket(fields[i], fields[j])
        if basis.add(B):
            out.append(B)
    return out


def prolong(X: VectorField, copies: int) -> VectorField:
    """Act diagonally on ``copies + 1`` blocks of variables ``(x, x^1, ..., x^m)``."""
    if copies < 1:
        raise ValueError("copies must be at least 1")
    d = X.dimension
    total = d * (copies + 1)
    comps = []
    for block in range(copies + 1):
        comps.extend(f.embed(total, block * d) for f in X.components)
    return VectorField(comps)
