"""Functions on ``R^N \\ {0}`` written as ``sum_j P_j(x) F_j(|x|)``.

``P_j`` are polynomials and ``F_j`` radial :class:`ExpMonomial` functions.
The tensor ``p (x) f`` (``r w -> p(w) f(r)``) of a homogeneous
degree-``m`` polynomial becomes ``p(x) * r^-m f(r)`` here.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, Iterable, Tuple

import numpy as np

from .dunkl import dunkl_laplacian, dunkl_operator
from .polynomials import Polynomial
from .radial import ExpMonomial
from .roots import MultiplicityFunction

__all__ = ["PolarSum", "InputNotPolarForm"]


class InputNotPolarForm(TypeError):
    pass


@lru_cache(maxsize=None)
def _reduce_monomial(exps: Tuple[int, ...]) -> Tuple[Tuple[Tuple[int, ...], int, int], ...]:
    """Rewrite ``x^exps`` with ``x_N^2 = r^2 - sum_{i<N} x_i^2`` until ``x_N`` has degree <= 1.

    Returns ``(monomial, coefficient, power of r)`` triples.
    """
    if exps[-1] <= 1:
        return ((exps, 1, 0),)
    out: Dict[Tuple[Tuple[int, ...], int], int] = {}
    lowered = exps[:-1] + (exps[-1] - 2,)
    for mono, c, rp in _reduce_monomial(lowered):
        key = (mono, rp + 2)
        out[key] = out.get(key, 0) + c
    for i in range(len(exps) - 1):
        shifted = list(lowered)
        shifted[i] += 2
        for mono, c, rp in _reduce_monomial(tuple(shifted)):
            key = (mono, rp)
            out[key] = out.get(key, 0) - c
    return tuple((m, c, rp) for (m, rp), c in out.items() if c)


class PolarSum:
    """Finite sum of ``P(x) F(|x|)`` products."""

    __slots__ = ("dim", "pairs")

    def __init__(self, dim: int, pairs: Iterable[Tuple[Polynomial, ExpMonomial]] = ()):
        self.dim = dim
        clean = []
        for P, F in pairs:
            if not isinstance(P, Polynomial) or not isinstance(F, ExpMonomial):
                raise InputNotPolarForm("expected (Polynomial, ExpMonomial) pairs")
            if P.dim != dim:
                raise InputNotPolarForm("polynomial dimension mismatch")
            if not P.is_zero() and not F.is_zero():
                clean.append((P, F))
        self.pairs = tuple(clean)

    @classmethod
    def tensor(cls, p: Polynomial, f: ExpMonomial) -> "PolarSum":
        """``r w -> p(w) f(r)``; each degree-``m`` part of ``p`` picks up ``r^-m``."""
        return cls(p.dim, [(pm, f.times_power(-m)) for m, pm in p.homogeneous_components().items()])

    def __iter__(self):
        return iter(self.pairs)

    def __add__(self, other: "PolarSum") -> "PolarSum":
        return PolarSum(self.dim, self.pairs + other.pairs)

    def __neg__(self):
        return PolarSum(self.dim, [(P, -F) for P, F in self.pairs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        return PolarSum(self.dim, [(P, F * c) for P, F in self.pairs])

    __rmul__ = __mul__

    def map_radial(self, fn) -> "PolarSum":
        return PolarSum(self.dim, [(P, fn(F)) for P, F in self.pairs])

    def times_norm_power(self, d) -> "PolarSum":
        """Multiplication by ``|x|^d``."""
        return self.map_radial(lambda F: F.times_power(d))

    def euler(self) -> "PolarSum":
        """``sum_i x_i d/dx_i``: ``E(P F) = (E P) F + P (theta F)``."""
        out = []
        for P, F in self.pairs:
            out.append((P.euler(), F))
            out.append((P, F.theta()))
        return PolarSum(self.dim, out)

    def dunkl_laplacian(self, k: MultiplicityFunction) -> "PolarSum":
        """Dunkl Laplacian of ``sum P F`` using that radial factors are reflection invariant.

        ``D_k(P g) = (D_k P) g + (sum_i x_i T_i P + T_i(x_i P)) r^-2 theta g
        + P r^-2 (theta^2 g - 2 theta g)``.
        """
        out = []
        for P, F in self.pairs:
            tF = F.theta()
            mixed = Polynomial.zero(self.dim)
            for i in range(self.dim):
                mixed = mixed + dunkl_operator(k, i, P).multiply_variable(i)
                mixed = mixed + dunkl_operator(k, i, P.multiply_variable(i))
            out.append((dunkl_laplacian(k, P), F))
            out.append((mixed, tF.times_power(-2)))
            out.append((P, (tF.theta() - 2 * tF).times_power(-2)))
        return PolarSum(self.dim, out)

    def compose_linear(self, M) -> "PolarSum":
        """``x -> F(M x)`` for orthogonal ``M`` (radial parts unchanged)."""
        return PolarSum(self.dim, [(P.compose_linear(M), F) for P, F in self.pairs])

    def canonical(self) -> Dict[Tuple[int, ...], ExpMonomial]:
        """Normal form: monomials with ``x_N``-degree <= 1 mapped to radial coefficients.

        Such monomials restricted to the unit sphere are linearly independent,
        so two sums are equal as functions iff their normal forms agree.
        """
        acc: Dict[Tuple[int, ...], ExpMonomial] = {}
        for P, F in self.pairs:
            for exps, c in P.terms.items():
                for mono, cc, rp in _reduce_monomial(exps):
                    term = F.times_power(rp) * (c * cc)
                    acc[mono] = acc[mono] + term if mono in acc else term
        return {m: F for m, F in acc.items() if not F.is_zero()}

    def max_defect(self) -> float:
        """Largest coefficient magnitude in the normal form (0 iff the sum vanishes exactly)."""
        return max((F.max_abs_coeff() for F in self.canonical().values()), default=0.0)

    def is_zero(self) -> bool:
        return not self.canonical()

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        r = float(np.linalg.norm(x))
        return sum(complex(P(x)) * F(r) for P, F in self.pairs) if self.pairs else 0j
