"""Difference schemes for scalar and matrix Riccati equations.

Scalar: ``x' = a0(t) + a1(t) x + a2(t) x^2``.  The forward Euler step is the
usual one; the semi-implicit step treats the quadratic term as
``a2 x_n x_{n+1}``, which makes each step a fractional-linear map and hence
preserves the cross-ratio of any four solutions.

Matrix: ``W' = A + B W + W C + W D W`` with ``W`` of shape (n, k).  The step

    (W+ - W)/h = A + B W + W+ (C + D W)

is solved as ``W+ = (W + h(A + B W)) (I - hC - hDW)^-1``.

Two arithmetic modes are supported everywhere: ``"exact"`` (Fractions) and
``"float"``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebra import TimeExpression

EXACT = "exact"
FLOAT = "float"
EXPLICIT = "explicit"
SEMI_IMPLICIT = "semi-implicit"


class PoleStepError(ZeroDivisionError):
    """The implicit denominator of a step vanished."""


class SingularMatrixError(ZeroDivisionError):
    def __init__(self, message: str, determinant=0):
        super().__init__(message)
        self.determinant = determinant


def _mode_value(value, mode: str):
    if mode == EXACT:
        if isinstance(value, float):
            return Fraction(value)
        return Fraction(value) if not isinstance(value, Fraction) else value
    if mode == FLOAT:
        return float(Fraction(value)) if isinstance(value, str) else float(value)
    raise ValueError(f"unknown arithmetic mode {mode!r}")


def _infer_mode(W, *scalars) -> str:
    arr = np.asarray(W)
    if arr.dtype == object:
        floats = any(isinstance(v, float) for v in arr.flat)
    else:
        floats = np.issubdtype(arr.dtype, np.floating)
    if floats or any(isinstance(v, float) for v in scalars):
        return FLOAT
    return EXACT


# --------------------------------------------------------------------------
# scalar Riccati


@dataclass(frozen=True)
class RiccatiCoefficients:
    a0: TimeExpression
    a1: TimeExpression
    a2: TimeExpression

    @classmethod
    def of(cls, a0, a1, a2) -> "RiccatiCoefficients":
        """Build from TimeExpressions, strings such as ``"1/t"`` or numbers."""
        return cls(TimeExpression.coerce(a0), TimeExpression.coerce(a1), TimeExpression.coerce(a2))

    def at(self, t):
        return self.a0.evaluate(t), self.a1.evaluate(t), self.a2.evaluate(t)

    def rhs(self, t, x):
        a0, a1, a2 = self.at(t)
        return a0 + a1 * x + a2 * x * x


def riccati_step_explicit(c: RiccatiCoefficients, t, x, h):
    """Forward Euler: ``x + h (a0 + a1 x + a2 x^2)``."""
    return x + h * c.rhs(t, x)


def riccati_step_semi_implicit(c: RiccatiCoefficients, t, x, h):
    """Solve ``(x+ - x)/h = a0 + a1 x + a2 x x+`` for ``x+``."""
    a0, a1, a2 = c.at(t)
    den = 1 - h * a2 * x
    if den == 0:
        raise PoleStepError(
            f"1 - h*a2(t)*x vanishes at t={t}, x={x}; choose h != {1 / (a2 * x)}")
    return (x + h * (a0 + a1 * x)) / den


_SCALAR_STEPS = {EXPLICIT: riccati_step_explicit, SEMI_IMPLICIT: riccati_step_semi_implicit}


@dataclass
class Trajectory:
    """Samples ``(t, state)`` produced by a difference scheme."""

    mode: str
    scheme: str
    h: object
    samples: list[tuple] = field(default_factory=list)

    @property
    def times(self) -> list:
        return [t for t, _ in self.samples]

    @property
    def states(self) -> list:
        return [s for _, s in self.samples]

    def __len__(self) -> int:
        return len(self.samples)

    def to_csv(self) -> str:
        from .io import trajectory_to_csv

        return trajectory_to_csv(self)


def riccati_integrate(c: RiccatiCoefficients, t0, x0, h, steps: int,
                      scheme: str = SEMI_IMPLICIT, mode: str = EXACT) -> Trajectory:
    """Iterate a scalar scheme ``steps`` times from ``x(t0) = x0``.

    In exact mode a sign change of the implicit denominator is harmless;
    only an exactly vanishing denominator aborts (with the step index).
    """
    if scheme not in _SCALAR_STEPS:
        raise ValueError(f"unknown scheme {scheme!r}")
    step = _SCALAR_STEPS[scheme]
    t, x, h = (_mode_value(v, mode) for v in (t0, x0, h))
    traj = Trajectory(mode, scheme, h, [(t, x)])
    for k in range(steps):
        try:
            x = step(c, t, x, h)
        except ZeroDivisionError as exc:
            raise type(exc)(f"step {k}: {exc}") from None
        t = t0_plus(t0, h, k + 1, mode)
        traj.samples.append((t, x))
    return traj


def t0_plus(t0, h, k: int, mode: str):
    # t_k = t0 + k h, computed directly so float grids do not drift
    return _mode_value(t0, mode) + k * _mode_value(h, mode)


def evolve_family(c: RiccatiCoefficients, t0, x0s: Sequence, h, steps: int,
                  scheme: str = SEMI_IMPLICIT, mode: str = EXACT) -> list[Trajectory]:
    """Advance several initial values under shared coefficients."""
    return [riccati_integrate(c, t0, x0, h, steps, scheme, mode) for x0 in x0s]


# --------------------------------------------------------------------------
# exact linear algebra


def _as_matrix(M, mode: str) -> np.ndarray:
    if mode == EXACT:
        arr = np.array(M, dtype=object)
        if arr.ndim != 2:
            arr = arr.reshape(1, 1) if arr.ndim == 0 else np.atleast_2d(arr)
        return np.vectorize(lambda v: _mode_value(v, EXACT), otypes=[object])(arr)
    return np.atleast_2d(np.array(M, dtype=float))


def identity(k: int, mode: str) -> np.ndarray:
    if mode == EXACT:
        out = np.full((k, k), Fraction(0), dtype=object)
        for i in range(k):
            out[i, i] = Fraction(1)
        return out
    return np.eye(k)


def solve_exact(M: np.ndarray, R: np.ndarray) -> np.ndarray:
    """Solve ``M X = R`` over the rationals.

    Rows are scaled to integers, then eliminated by Bareiss' fraction-free
    scheme with full pivoting (largest remaining entry).  Raises
    :class:`SingularMatrixError` when ``det M == 0``.
    """
    k = M.shape[0]
    if M.shape != (k, k) or R.shape[0] != k:
        raise ValueError("shape mismatch in solve")
    ncol = R.shape[1]
    aug = []
    for i in range(k):
        row = [Fraction(v) for v in M[i]] + [Fraction(v) for v in R[i]]
        scale = math.lcm(*(v.denominator for v in row))
        aug.append([int(v * scale) for v in row])
    cols = list(range(k))  # column permutation of the unknowns
    prev = 1
    for p in range(k):
        best, bi, bj = 0, None, None
        for i in range(p, k):
            for j in range(p, k):
                if abs(aug[i][j]) > best:
                    best, bi, bj = abs(aug[i][j]), i, j
        if bi is None:
            raise SingularMatrixError("matrix is singular (determinant 0)", 0)
        if bi != p:
            aug[p], aug[bi] = aug[bi], aug[p]
        if bj != p:
            for row in aug:
                row[p], row[bj] = row[bj], row[p]
            cols[p], cols[bj] = cols[bj], cols[p]
        piv = aug[p][p]
        for i in range(p + 1, k):
            f = aug[i][p]
            aug[i] = [(piv * a - f * b) // prev for a, b in zip(aug[i], aug[p])]
            aug[i][p] = 0
        prev = piv
    X = np.full((k, ncol), Fraction(0), dtype=object)
    for c in range(ncol):
        sol = [Fraction(0)] * k
        for i in range(k - 1, -1, -1):
            s = Fraction(aug[i][k + c])
            for j in range(i + 1, k):
                s -= aug[i][j] * sol[j]
            sol[i] = s / aug[i][i]
        for i in range(k):
            X[cols[i], c] = sol[i]
    return X


def solve_right(R: np.ndarray, M: np.ndarray) -> np.ndarray:
    """``X`` with ``X M = R``."""
    if R.dtype == object:
        return solve_exact(M.T.copy(), R.T.copy()).T.copy()
    try:
        det = np.linalg.det(M)
        if det == 0 or not np.isfinite(det):
            raise np.linalg.LinAlgError
        return np.linalg.solve(M.T, R.T).T
    except np.linalg.LinAlgError:
        raise SingularMatrixError("matrix is singular", 0.0) from None


def determinant_exact(M: np.ndarray) -> Fraction:
    """Exact determinant by fraction-free elimination."""
    k = M.shape[0]
    rows = [[Fraction(v) for v in M[i]] for i in range(k)]
    det = Fraction(1)
    for p in range(k):
        piv = next((i for i in range(p, k) if rows[i][p] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != p:
            rows[p], rows[piv] = rows[piv], rows[p]
            det = -det
        det *= rows[p][p]
        for i in range(p + 1, k):
            f = rows[i][p] / rows[p][p]
            if f:
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[p])]
    return det


# --------------------------------------------------------------------------
# matrix Riccati


def _expr_matrix(M) -> tuple[tuple[TimeExpression, ...], ...]:
    arr = M if isinstance(M, (list, tuple)) else np.asarray(M, dtype=object).tolist()
    if not isinstance(arr, (list, tuple)) or not arr or not isinstance(arr[0], (list, tuple)):
        arr = [[arr]] if not isinstance(arr, (list, tuple)) else [list(arr)]
    return tuple(tuple(TimeExpression.coerce(v) for v in row) for row in arr)


@dataclass(frozen=True)
class MatrixRiccatiSystem:
    """Coefficients of ``W' = A + B W + W C + W D W``; entries are TimeExpressions."""

    A: tuple
    B: tuple
    C: tuple
    D: tuple

    def __post_init__(self):
        for name in "ABCD":
            object.__setattr__(self, name, _expr_matrix(getattr(self, name)))
        n, k = len(self.A), len(self.A[0])
        shapes = {"A": (n, k), "B": (n, n), "C": (k, k), "D": (k, n)}
        for name, shape in shapes.items():
            M = getattr(self, name)
            got = (len(M), len(M[0]))
            if got != shape or any(len(r) != got[1] for r in M):
                raise ValueError(f"{name} has shape {got}, expected {shape}")

    @property
    def n(self) -> int:
        return len(self.A)

    @property
    def k(self) -> int:
        return len(self.A[0])

    def is_constant(self) -> bool:
        return all(e.is_constant() for M in (self.A, self.B, self.C, self.D)
                   for row in M for e in row)

    def at(self, t, mode: str = EXACT) -> tuple[np.ndarray, ...]:
        """The four coefficient matrices evaluated at ``t``."""
        t = _mode_value(t, mode)
        return tuple(_as_matrix([[e.evaluate(t) for e in row] for row in M], mode)
                     for M in (self.A, self.B, self.C, self.D))


def _fractional_update(W, delta, A, B, C, D):
    # W+ (I - delta C - delta D W) = W + delta (A + B W)
    mode = EXACT if W.dtype == object else FLOAT
    k = W.shape[1]
    lhs = identity(k, mode) - delta * C - delta * (D @ W)
    rhs = W + delta * (A + B @ W)
    try:
        return solve_right(rhs, lhs)
    except SingularMatrixError as exc:
        det = determinant_exact(lhs) if mode == EXACT else np.linalg.det(lhs)
        raise SingularMatrixError(
            f"I - dC - dDW is singular (determinant {det}) for step d={delta}", det) from exc


def matrix_riccati_step(sys: MatrixRiccatiSystem, t, W, h):
    """One step of the semi-implicit matrix scheme; mode follows ``W``."""
    mode = _infer_mode(W, t, h)
    W = _as_matrix(W, mode)
    t, h = _mode_value(t, mode), _mode_value(h, mode)
    return _fractional_update(W, h, *sys.at(t, mode))


def uqh_step(sys: MatrixRiccatiSystem, q, h, t, w):
    """Solve the ``U_{q,h}`` Riccati relation for ``w(q t + h)``.

    With ``delta = (q - 1) t + h``:
    ``w(qt+h) (I - delta c - delta d w) = w + delta (a + b w)``,
    coefficients taken at ``t``.  For ``q = 1`` this is exactly
    :func:`matrix_riccati_step`.
    """
    mode = _infer_mode(w, q, h, t)
    w = _as_matrix(w, mode)
    q, h, t = (_mode_value(v, mode) for v in (q, h, t))
    delta = (q - 1) * t + h
    if delta == 0:
        raise ZeroDivisionError("(q - 1) t + h vanishes; the difference quotient is undefined")
    return _fractional_update(w, delta, *sys.at(t, mode))


def matrix_riccati_integrate(sys: MatrixRiccatiSystem, t0, W0, h, steps: int,
                             mode: str = EXACT) -> Trajectory:
    W = _as_matrix(W0, mode)
    if W.shape != (sys.n, sys.k):
        raise ValueError(f"W0 has shape {W.shape}, expected {(sys.n, sys.k)}")
    h_ = _mode_value(h, mode)
    t = _mode_value(t0, mode)
    traj = Trajectory(mode, "matrix-semi-implicit", h_, [(t, W)])
    for s in range(steps):
        try:
            W = _fractional_update(W, h_, *sys.at(t, mode))
        except ZeroDivisionError as exc:
            raise type(exc)(f"step {s}: {exc}") from None
        t = t0_plus(t0, h, s + 1, mode)
        traj.samples.append((t, W))
    return traj


def _max_abs(M) -> float:
    return max((abs(float(v)) for v in np.asarray(M).flat), default=0.0)


def matrix_riccati_oracle(sys: MatrixRiccatiSystem, t0, W0, t1, rel_tol: float = 1e-30):
    """Reference value ``W(t1)`` for constant coefficients via linearisation.

    ``W = P Q^-1`` with ``P' = B P + A Q`` and ``Q' = -D P - C Q`` turns the
    Riccati flow into a linear one; ``[P; Q](t1) = exp(M tau) [W0; I]`` is
    summed as a Taylor series in exact rationals.  Summation stops once
    terms shrink geometrically (``j + 1 >= 2 |M tau|``) and twice the next
    term is below ``rel_tol`` times the partial sum, which bounds the tail.
    """
    if not sys.is_constant():
        raise ValueError("the oracle needs constant coefficients")
    A, B, C, D = sys.at(0, EXACT)
    n, k = sys.n, sys.k
    tau = Fraction(t1) - Fraction(t0)
    M = np.block([[B, A], [-D, -C]]).astype(object) * tau
    Y = np.vstack([_as_matrix(W0, EXACT), identity(k, EXACT)])
    norm_M = max(sum(abs(float(v)) for v in row) for row in M)
    total = Y.copy()
    term = Y
    j = 0
    while True:
        term = (M @ term) / (j + 1)
        total = total + term
        j += 1
        big = _max_abs(total)
        if j + 1 >= 2 * norm_M and 2 * _max_abs(term) * norm_M / (j + 1) <= rel_tol * big:
            break
        if j > 2000:
            raise RuntimeError("matrix exponential series did not converge")
    P, Q = total[:n], total[n:]
    try:
        return solve_right(P, Q)
    except SingularMatrixError:
        raise SingularMatrixError(f"Q(t1) is singular: the solution has a pole at t={t1}") from None
