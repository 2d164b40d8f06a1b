"""Seeded test corpora of radial functions."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import List

from .exact import GaussianRational
from .polynomials import Polynomial
from .radial import ExpMonomial, LaguerreBasisSpec, basis_function

DEFAULT_SEED = 20240601


def _small_fraction(rng: random.Random, lo: int, hi: int, den: int = 4) -> Fraction:
    return Fraction(rng.randint(lo * den, hi * den), den)


def symbolic_corpus(size: int = 20, seed: int = DEFAULT_SEED) -> List[ExpMonomial]:
    """``size`` exact random functions with Gaussian-rational coefficients.

    Each function has 1 to 3 terms ``c r^g exp(-q r^s)``; ``s`` ranges over
    both signs and the pure-power case ``q = 0`` appears too, so every
    operator path is exercised.
    """
    rng = random.Random(seed)
    exponents = [Fraction(1), Fraction(2), Fraction(1, 2), Fraction(-1), Fraction(-2)]
    out = []
    for _ in range(size):
        terms = []
        for _ in range(rng.randint(1, 3)):
            c = GaussianRational(_small_fraction(rng, -3, 3), _small_fraction(rng, -3, 3))
            if not c:
                c = GaussianRational(1)
            g = _small_fraction(rng, -2, 4, 2)
            if rng.random() < 0.2:
                terms.append((c, g, 0, 0))
            else:
                q = Fraction(rng.randint(1, 8), rng.randint(1, 4))
                terms.append((c, g, q, rng.choice(exponents)))
        out.append(ExpMonomial(terms))
    return out


def basis_corpus(spec: LaguerreBasisSpec, size: int = 8, seed: int = DEFAULT_SEED,
                 max_degree: int = 7) -> List[ExpMonomial]:
    """Square-integrable functions for the branch of ``spec``.

    The first entries are basis functions themselves; the rest are seeded
    random combinations of ``f_0, ..., f_max_degree``.
    """
    rng = random.Random(seed)
    basis = [basis_function(spec, l) for l in range(max_degree + 1)]
    out = basis[: min(3, size)]
    while len(out) < size:
        f = ExpMonomial()
        for b in basis:
            f = f + b * complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        out.append(f)
    return out


def random_polynomial(dim: int, max_degree: int, rng: random.Random, terms: int = 6) -> Polynomial:
    """Sparse polynomial with small rational coefficients and degree ``<= max_degree``."""
    out = {}
    for _ in range(terms):
        deg = rng.randint(0, max_degree)
        exps = [0] * dim
        for _ in range(deg):
            exps[rng.randrange(dim)] += 1
        out[tuple(exps)] = _small_fraction(rng, -5, 5, 3)
    return Polynomial(dim, out)


def polynomial_corpus(dim: int, count: int = 50, max_degree: int = 6, seed: int = DEFAULT_SEED) -> List[Polynomial]:
    rng = random.Random(seed)
    return [random_polynomial(dim, max_degree, rng) for _ in range(count)]
