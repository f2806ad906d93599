"""Hypothesis strategies and seeded generators shared by the test modules."""

from __future__ import annotations

import itertools
import random

from gmpy2 import mpq
from hypothesis import strategies as st

from poisson_nf.multivector import MultiVec
from poisson_nf.poly import Poly, monomials_of_degree
from poisson_nf.scalar import QI

rationals = st.builds(mpq, st.integers(-6, 6), st.integers(1, 5))
gaussians = st.builds(QI, rationals, rationals)


@st.composite
def polys(draw, n: int, max_deg: int = 3, min_deg: int = 0, max_terms: int = 5, coeffs=rationals):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        r = draw(st.integers(min_deg, max_deg))
        exps = draw(st.sampled_from(list(monomials_of_degree(n, r))))
        terms[exps] = draw(coeffs)
    return Poly(n, terms)


@st.composite
def multivecs(draw, grade: int, n: int, max_deg: int = 2):
    comps = {}
    for idx in itertools.combinations(range(n), grade):
        if draw(st.booleans()):
            comps[idx] = draw(polys(n, max_deg, max_terms=3))
    return MultiVec(grade, n, comps)


def random_poly(rng: random.Random, n: int, degrees, k: int) -> Poly:
    terms = {}
    for _ in range(k):
        r = rng.choice(list(degrees))
        exps = rng.choice(list(monomials_of_degree(n, r)))
        terms[exps] = mpq(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 4))
    return Poly(n, terms)


def random_multivec(rng: random.Random, grade: int, n: int, max_deg: int) -> MultiVec:
    comps = {}
    for idx in itertools.combinations(range(n), grade):
        if rng.random() < 0.7:
            comps[idx] = random_poly(rng, n, range(max_deg + 1), 3)
    return MultiVec(grade, n, comps)


def sign(k: int) -> int:
    return -1 if k % 2 else 1
