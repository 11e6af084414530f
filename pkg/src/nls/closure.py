"""Deciding whether a set of polynomial vector fields closes into a finite Lie algebra.

Two procedures share one loop: look for an obstruction that certifies an
infinite-dimensional algebra, otherwise add all pairwise commutators and stop
once the span no longer grows.

* :func:`check_one_dim` -- line fields ``f(x) d/dx``; the obstruction is two
  distinct degrees, both at least 2.
* :func:`check_general` -- any dimension; the obstruction is a pair of
  Newton-polytope vertices passing the five tests of :func:`witness_conditions`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .fields import (SpanBasis, VectorField, add_pairwise_commutators, d_form_bracket_term,
                     dot, lie_bracket, span_of, to_d_form)
from .polytope import LatticePolytope, is_vertex_of, minkowski_sum, newton_polytope, norm_sq

log = logging.getLogger(__name__)

DEFAULT_MAX_ROUNDS = 25

FINITE = "finite"
INFINITE = "infinite"
BUDGET_EXCEEDED = "budget-exceeded"


@dataclass(frozen=True)
class ConditionRecord:
    """The five witness tests together with the exact quantities behind them."""

    norm_growth: bool        # (i)   |v+u| > max(|v|, |u|)
    minkowski_vertex: bool   # (ii)  v+u is a vertex of N_i + N_j
    nonzero_bracket: bool    # (iii) K != 0
    chain_u: bool            # (iv)
    chain_v: bool            # (v)
    norm_sq_sum: int
    norm_sq_v: int
    norm_sq_u: int
    K: tuple[Fraction, ...]
    uV: Fraction
    vU: Fraction
    uU: Fraction
    vV: Fraction
    s1: Fraction | None
    s2: Fraction | None

    @property
    def flags(self) -> tuple[bool, bool, bool, bool, bool]:
        return (self.norm_growth, self.minkowski_vertex, self.nonzero_bracket,
                self.chain_u, self.chain_v)

    @property
    def all_hold(self) -> bool:
        return all(self.flags)


def _chain_ok(lin: Fraction, slope: Fraction) -> tuple[bool, Fraction | None]:
    """Whether ``lin + m * slope != 0`` for every integer ``m >= 1``.

    Returns the flag and the ratio ``s = lin / slope`` (None when slope is 0).
    The root is ``m = -s``, so the chain breaks exactly when ``s`` is an
    integer no larger than -1.
    """
    if slope == 0:
        return lin != 0, None
    s = lin / slope
    return not (s.denominator == 1 and s <= -1), s


def witness_conditions(v, V, u, U, P_i: LatticePolytope, P_j: LatticePolytope,
                       minkowski: LatticePolytope | None = None) -> ConditionRecord:
    """Evaluate the five vertex-pair tests exactly.

    ``v``/``u`` are vertices of ``P_i``/``P_j`` and ``V``/``U`` their D-form
    coefficient vectors.  Conditions (iv) and (v) only bite when ``u.V`` or
    ``v.U`` vanish; then the bracket chain ``x^(v+mu)`` (resp. ``x^(mv+u)``)
    must never produce a zero coefficient.
    """
    v, u = tuple(v), tuple(u)
    V = tuple(Fraction(c) for c in V)
    U = tuple(Fraction(c) for c in U)
    w = tuple(a + b for a, b in zip(v, u))
    n_w, n_v, n_u = norm_sq(w), norm_sq(v), norm_sq(u)
    cond1 = n_w > max(n_v, n_u)
    if minkowski is None:
        minkowski = minkowski_sum(P_i, P_j)
    cond2 = is_vertex_of(w, minkowski)
    uV, vU, uU, vV = dot(u, V), dot(v, U), dot(u, U), dot(v, V)
    _, K = d_form_bracket_term(v, V, u, U)
    cond3 = any(K)
    s1 = s2 = None
    cond4 = cond5 = True
    if uV == 0:
        # (v + m u) . U = v.U + m u.U
        cond4, s1 = _chain_ok(vU, uU)
    if vU == 0:
        # (m v + u) . V = u.V + m v.V
        cond5, s2 = _chain_ok(uV, vV)
    return ConditionRecord(cond1, cond2, cond3, cond4, cond5, n_w, n_v, n_u, K,
                           uV, vU, uU, vV, s1, s2)


@dataclass(frozen=True)
class WitnessPair:
    """Vertex pair certifying an infinite-dimensional algebra."""

    i: int
    j: int
    v: tuple[int, ...]
    u: tuple[int, ...]
    V: tuple[Fraction, ...]
    U: tuple[Fraction, ...]
    conditions: ConditionRecord

    def revalidate(self, operators: Sequence[VectorField]) -> bool:
        """Recompute every condition from the operators themselves."""
        Xi, Xj = operators[self.i], operators[self.j]
        Pi, Pj = newton_polytope(Xi), newton_polytope(Xj)
        if self.v not in Pi.vertices or self.u not in Pj.vertices:
            return False
        if to_d_form(Xi)[self.v] != self.V or to_d_form(Xj)[self.u] != self.U:
            return False
        rec = witness_conditions(self.v, self.V, self.u, self.U, Pi, Pj)
        return rec.all_hold and rec == self.conditions


@dataclass(frozen=True)
class DegreeWitness:
    """Two line fields of distinct degrees, both at least 2."""

    i: int
    j: int
    degrees: tuple[int, int]

    def revalidate(self, operators: Sequence[VectorField]) -> bool:
        di = operators[self.i].components[0].degree()
        dj = operators[self.j].components[0].degree()
        return (di, dj) == self.degrees and di != dj and min(di, dj) >= 2


@dataclass(frozen=True)
class RoundSummary:
    round: int
    operators: int
    dimension: int


@dataclass
class DecisionReport:
    verdict: str
    algorithm: str
    operators: list[VectorField]
    rounds: list[RoundSummary] = field(default_factory=list)
    dimension: int | None = None
    basis: SpanBasis | None = None
    generators: list[VectorField] | None = None
    witness: WitnessPair | DegreeWitness | None = None
    witness_operators: list[VectorField] | None = None
    round: int | None = None
    max_rounds: int = DEFAULT_MAX_ROUNDS

    @property
    def is_finite(self) -> bool:
        return self.verdict == FINITE

    @property
    def is_infinite(self) -> bool:
        return self.verdict == INFINITE

    def revalidate_witness(self) -> bool:
        """Re-check the witness against the two operators it was found on."""
        if self.verdict != INFINITE:
            raise ValueError("only infinite verdicts carry a witness")
        w = self.witness
        return w.revalidate({w.i: self.witness_operators[0], w.j: self.witness_operators[1]})

    def summary(self) -> str:
        if self.verdict == FINITE:
            return f"FINITE, dim {self.dimension}"
        if self.verdict == INFINITE:
            w = self.witness
            if isinstance(w, WitnessPair):
                fmt = lambda p: "(" + ",".join(str(c) for c in p) + ")"
                return f"INFINITE (witness v={fmt(w.v)}, u={fmt(w.u)})"
            return f"INFINITE (degrees {w.degrees[0]} and {w.degrees[1]})"
        last = self.rounds[-1].dimension if self.rounds else 0
        return f"BUDGET EXCEEDED after {self.max_rounds} rounds, dim >= {last}"


def verify_finite(report: DecisionReport) -> bool:
    """Independent re-check: every bracket of the generators lies in the basis span."""
    if report.verdict != FINITE:
        raise ValueError("only finite verdicts can be re-checked this way")
    gens = report.generators
    basis = span_of(gens)
    if basis != report.basis or basis.rank != report.dimension:
        return False
    return all(basis.contains(lie_bracket(X, Y)) for X, Y in combinations(gens, 2))


def _validate(fields: Sequence[VectorField], one_dim: bool) -> list[VectorField]:
    fields = list(fields)
    if not fields:
        raise ValueError("empty operator list")
    d = fields[0].dimension
    for k, X in enumerate(fields):
        if X.dimension != d:
            raise ValueError(f"operator {k} has dimension {X.dimension}, expected {d}")
        if one_dim and X.dimension != 1:
            raise ValueError(f"operator {k} is not a line field (dimension {X.dimension})")
        if X.is_zero():
            raise ValueError(f"operator {k} is the zero field")
    return fields


def _degree_witness(ops: Sequence[VectorField]) -> DegreeWitness | None:
    by_degree: dict[int, int] = {}
    for k, X in enumerate(ops):
        by_degree.setdefault(X.components[0].degree(), k)
    degrees = sorted(by_degree, reverse=True)
    if len(degrees) < 2:
        return None
    m1, m2 = degrees[0], degrees[1]
    if m1 > 1 and m2 > 1:
        i, j = sorted((by_degree[m1], by_degree[m2]))
        return DegreeWitness(i, j, (ops[i].components[0].degree(), ops[j].components[0].degree()))
    return None


def _vertex_witness(ops: Sequence[VectorField], cache: dict) -> WitnessPair | None:
    def polytope(k):
        key = ops[k]
        if key not in cache:
            cache[key] = (newton_polytope(key), to_d_form(key))
        return cache[key]

    for i, j in combinations(range(len(ops)), 2):
        Pi, Fi = polytope(i)
        Pj, Fj = polytope(j)
        msum = None
        for v in Pi.sorted_vertices():
            for u in Pj.sorted_vertices():
                w = tuple(a + b for a, b in zip(v, u))
                # cheap tests first; the Minkowski sum needs LP work
                if norm_sq(w) <= max(norm_sq(v), norm_sq(u)):
                    continue
                _, K = d_form_bracket_term(v, Fi[v], u, Fj[u])
                if not any(K):
                    continue
                if msum is None:
                    msum = minkowski_sum(Pi, Pj)
                rec = witness_conditions(v, Fi[v], u, Fj[u], Pi, Pj, minkowski=msum)
                if rec.all_hold:
                    return WitnessPair(i, j, v, u, Fi[v], Fj[u], rec)
    return None


def _run(fields, max_rounds: int, one_dim: bool) -> DecisionReport:
    if int(max_rounds) != max_rounds or max_rounds < 1:
        raise ValueError(f"max_rounds must be a positive integer, got {max_rounds!r}")
    ops = _validate(fields, one_dim)
    algorithm = "degree" if one_dim else "newton-polytope"
    report = DecisionReport(verdict=BUDGET_EXCEEDED, algorithm=algorithm,
                            operators=list(ops), max_rounds=max_rounds)
    basis = span_of(ops)
    cache: dict = {}
    r = 0
    while True:
        report.rounds.append(RoundSummary(r, len(ops), basis.rank))
        log.debug("round %d: %d operators, span dimension %d", r, len(ops), basis.rank)
        witness = _degree_witness(ops) if one_dim else _vertex_witness(ops, cache)
        if witness is not None:
            report.verdict = INFINITE
            report.witness = witness
            report.witness_operators = [ops[witness.i], ops[witness.j]]
            report.round = r
            return report
        if r >= max_rounds:
            return report
        before = basis.rank
        ops = add_pairwise_commutators(ops, basis)
        if basis.rank == before:
            report.verdict = FINITE
            report.dimension = basis.rank
            report.basis = basis
            report.generators = ops
            report.round = r
            return report
        r += 1


def check_one_dim(fields: Sequence[VectorField], max_rounds: int = DEFAULT_MAX_ROUNDS) -> DecisionReport:
    """Closure test for line fields by the degree criterion."""
    return _run(fields, max_rounds, one_dim=True)


def check_general(fields: Sequence[VectorField], max_rounds: int = DEFAULT_MAX_ROUNDS) -> DecisionReport:
    """Closure test in any dimension by the Newton-polytope vertex criterion."""
    return _run(fields, max_rounds, one_dim=False)


def _projective_key(n, N):
    lead = next(c for c in N if c)
    return tuple(n), tuple(c / lead for c in N)


def growth_sequence(v, V, u, U, steps: int = 5) -> list[int] | None:
    """Maximal squared exponent norm of the algebra generated by two witness terms.

    Starts from the single-term fields ``x^v V`` and ``x^u U`` and, ``steps``
    times, adds every nonzero bracket of a newly found term with a known one
    (terms are kept up to a scalar factor).  Returns the running maxima,
    one entry per generation, or None if some generation adds nothing.
    """
    terms = {}
    for n, N in ((v, V), (u, U)):
        N = tuple(Fraction(c) for c in N)
        terms.setdefault(_projective_key(n, N), (tuple(n), N))
    new = list(terms.values())
    norms = [max(norm_sq(n) for n, _ in new)]
    for _ in range(steps):
        known = list(terms.values())
        found = []
        for a, A in new:
            for b, B in known:
                n, N = d_form_bracket_term(a, A, b, B)
                if any(N):
                    key = _projective_key(n, N)
                    if key not in terms:
                        terms[key] = (n, N)
                        found.append((n, N))
        if not found:
            return None
        new = found
        norms.append(max(norms[-1], max(norm_sq(n) for n, _ in found)))
    return norms
