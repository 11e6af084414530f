"""Seeded generators of random exact objects shared by the test modules."""

import random
from fractions import Fraction

from nls.algebra import LaurentPolynomial
from nls.fields import VectorField


def rational(rng: random.Random, span: int = 5, denom: int = 4) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, denom))


def polynomial(rng, d, terms=4, lo=0, hi=3, span=5) -> LaurentPolynomial:
    out = {}
    for _ in range(rng.randint(0, terms)):
        e = tuple(rng.randint(lo, hi) for _ in range(d))
        out[e] = rational(rng, span)
    return LaurentPolynomial(d, out)


def field(rng, d, terms=3, lo=0, hi=3) -> VectorField:
    return VectorField([polynomial(rng, d, terms, lo, hi) for _ in range(d)])


def nonzero_field(rng, d, terms=3, lo=0, hi=3) -> VectorField:
    while True:
        X = field(rng, d, terms, lo, hi)
        if not X.is_zero():
            return X


def line_field(rng, max_degree=5, terms=3) -> VectorField:
    while True:
        p = polynomial(rng, 1, terms, 0, max_degree)
        if p:
            return VectorField([p])


def points(rng, d, count, lo=-3, hi=3):
    return [tuple(rng.randint(lo, hi) for _ in range(d)) for _ in range(count)]
