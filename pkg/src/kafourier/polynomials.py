"""Multivariate polynomials with exact (or float) coefficients.

Terms are stored as a dict from exponent tuples to nonzero coefficients.
All operations return new objects.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exact import exact, fraction_str, is_exact

__all__ = [
    "InexactDivision",
    "Polynomial",
    "monomials",
    "rref",
    "nullspace",
]

Exps = Tuple[int, ...]


class InexactDivision(ArithmeticError):
    """Polynomial division by a linear form left a remainder."""


@lru_cache(maxsize=None)
def monomials(dim: int, degree: int) -> Tuple[Exps, ...]:
    """Exponent tuples of total ``degree`` in descending lexicographic order."""
    if dim == 0:
        return ((),) if degree == 0 else ()
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials(dim - 1, degree - first):
            out.append((first,) + rest)
    return tuple(out)


class Polynomial:
    """Polynomial in ``dim`` variables ``x_1..x_dim``."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Optional[Dict[Exps, object]] = None):
        self.dim = dim
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(v) for v in e)
            if len(e) != dim:
                raise ValueError(f"exponent {e} has wrong length for dim={dim}")
            if any(v < 0 for v in e):
                raise ValueError("negative exponent")
            c = exact(c)
            if c != 0:
                clean[e] = clean.get(e, 0) + c
                if clean[e] == 0:
                    del clean[e]
        self.terms = clean

    # constructors
    @classmethod
    def zero(cls, dim):
        return cls(dim)

    @classmethod
    def constant(cls, dim, c):
        return cls(dim, {(0,) * dim: c})

    @classmethod
    def variable(cls, dim, i):
        e = [0] * dim
        e[i] = 1
        return cls(dim, {tuple(e): 1})

    @classmethod
    def monomial(cls, exps, c=1):
        return cls(len(exps), {tuple(exps): c})

    @classmethod
    def linear_form(cls, coeffs):
        dim = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * dim
            e[i] = 1
            terms[tuple(e)] = c
        return cls(dim, terms)

    # basic queries
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self.terms.values())

    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self, m: Optional[int] = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if not degs:
            return True
        if len(degs) != 1:
            return False
        return m is None or degs == {m}

    def homogeneous_components(self) -> Dict[int, "Polynomial"]:
        parts: Dict[int, Dict[Exps, object]] = {}
        for e, c in self.terms.items():
            parts.setdefault(sum(e), {})[e] = c
        return {d: Polynomial(self.dim, t) for d, t in sorted(parts.items())}

    def coefficient(self, exps) -> object:
        return self.terms.get(tuple(exps), 0)

    def max_abs_coeff(self) -> float:
        return max((abs(complex(c)) for c in self.terms.values()), default=0.0)

    # arithmetic
    def _check(self, other):
        if other.dim != self.dim:
            raise ValueError("polynomial dimensions differ")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.dim, other)
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return Polynomial(self.dim, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.dim, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.dim, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            other = exact(other)
            return Polynomial(self.dim, {e: c * other for e, c in self.terms.items()})
        self._check(other)
        terms: Dict[Exps, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Polynomial(self.dim, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Polynomial.constant(self.dim, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.dim == other.dim and self.terms == other.terms
        if isinstance(other, (int, Fraction, float, complex)):
            return self == Polynomial.constant(self.dim, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.dim, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Polynomial({self.dim}, {self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (-sum(e), tuple(-v for v in e))):
            mono = "*".join(
                f"x{i + 1}" + (f"^{v}" if v > 1 else "") for i, v in enumerate(e) if v
            )
            c = self.terms[e]
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    # calculus
    def diff(self, i: int) -> "Polynomial":
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                terms[tuple(f)] = c * e[i]
        return Polynomial(self.dim, terms)

    def euler(self) -> "Polynomial":
        """``sum_i x_i d/dx_i``: scales each monomial by its degree."""
        return Polynomial(self.dim, {e: c * sum(e) for e, c in self.terms.items()})

    def laplacian(self) -> "Polynomial":
        out = Polynomial.zero(self.dim)
        for i in range(self.dim):
            out = out + self.diff(i).diff(i)
        return out

    def multiply_variable(self, i: int) -> "Polynomial":
        terms = {}
        for e, c in self.terms.items():
            f = list(e)
            f[i] += 1
            terms[tuple(f)] = c
        return Polynomial(self.dim, terms)

    def compose_linear(self, M: Sequence[Sequence]) -> "Polynomial":
        """Return ``x -> p(M x)`` for a square matrix ``M``."""
        forms = [Polynomial.linear_form([exact(c) for c in row]) for row in M]
        powers: List[List[Polynomial]] = [[Polynomial.constant(self.dim, 1)] for _ in forms]
        out = Polynomial.zero(self.dim)
        for e, c in self.terms.items():
            term = Polynomial.constant(self.dim, c)
            for i, v in enumerate(e):
                while len(powers[i]) <= v:
                    powers[i].append(powers[i][-1] * forms[i])
                if v:
                    term = term * powers[i][v]
            out = out + term
        return out

    def divide_linear(self, alpha: Sequence, tol: float = 1e-9) -> "Polynomial":
        """Exact quotient by the linear form ``<alpha, x>``.

        Raises
        ------
        InexactDivision
            If the remainder is nonzero (beyond ``tol`` relative to the
            largest coefficient, for float data).
        """
        alpha = [exact(a) for a in alpha]
        lead = max(range(self.dim), key=lambda j: abs(complex(alpha[j])))
        if alpha[lead] == 0:
            raise ZeroDivisionError("division by the zero linear form")
        rem = dict(self.terms)
        quot: Dict[Exps, object] = {}
        scale = self.max_abs_coeff()
        while True:
            pending = [e for e in rem if e[lead] > 0]
            if not pending:
                break
            e = max(pending, key=lambda f: (f[lead], f))
            c = rem.pop(e) / alpha[lead]
            q = list(e)
            q[lead] -= 1
            q = tuple(q)
            quot[q] = quot.get(q, 0) + c
            for j, aj in enumerate(alpha):
                if j == lead or aj == 0:
                    continue
                f = list(q)
                f[j] += 1
                f = tuple(f)
                v = rem.get(f, 0) - c * aj
                if v == 0:
                    rem.pop(f, None)
                else:
                    rem[f] = v
        bad = {e: c for e, c in rem.items() if c != 0}
        if bad:
            if self.is_exact or max(abs(complex(c)) for c in bad.values()) > tol * max(scale, 1.0):
                raise InexactDivision(
                    f"remainder {Polynomial(self.dim, bad)} when dividing by {alpha}"
                )
        return Polynomial(self.dim, quot)

    def __call__(self, x):
        total = 0.0
        for e, c in self.terms.items():
            v = _to_float(c)
            for xi, ei in zip(x, e):
                if ei:
                    v = v * xi ** ei
            total = total + v
        return total

    def coefficient_vector(self, basis: Sequence[Exps]) -> list:
        return [self.terms.get(e, 0) for e in basis]

    # serialization
    def to_json(self) -> dict:
        def ser(c):
            if isinstance(c, Fraction):
                return fraction_str(c)
            return float(c)

        keys = sorted(self.terms, key=lambda e: (-sum(e), tuple(-v for v in e)))
        return {"dim": self.dim, "terms": [{"exps": list(e), "coef": ser(self.terms[e])} for e in keys]}

    @classmethod
    def from_json(cls, doc) -> "Polynomial":
        if isinstance(doc, (str, bytes)):
            doc = json.loads(doc)
        terms: Dict[Exps, object] = {}
        for t in doc["terms"]:
            c = t["coef"]
            c = Fraction(c) if isinstance(c, (str, int)) else float(c)
            e = tuple(t["exps"])
            terms[e] = terms.get(e, 0) + c
        return cls(int(doc["dim"]), terms)


def _to_float(c):
    if isinstance(c, (float, complex)):
        return c
    if isinstance(c, (int, Fraction)):
        return float(c)
    return complex(c)


def rref(rows: List[list], tol: Optional[float] = None) -> Tuple[List[list], List[int]]:
    """Reduced row echelon form.

    Exact (``Fraction``) when ``tol`` is None; otherwise partial pivoting with
    entries of magnitude ``<= tol`` treated as zero.
    """
    m = [list(r) for r in rows]
    if not m:
        return [], []
    n_rows, n_cols = len(m), len(m[0])
    pivots = []
    piv_r = 0
    for piv_c in range(n_cols):
        if piv_r >= n_rows:
            break
        if tol is None:
            sel = next((i for i in range(piv_r, n_rows) if m[i][piv_c] != 0), None)
        else:
            i_best = max(range(piv_r, n_rows), key=lambda i: abs(m[i][piv_c]))
            sel = i_best if abs(m[i_best][piv_c]) > tol else None
        if sel is None:
            continue
        m[piv_r], m[sel] = m[sel], m[piv_r]
        p = m[piv_r][piv_c]
        m[piv_r] = [v / p for v in m[piv_r]]
        for r in range(n_rows):
            if r != piv_r:
                f = m[r][piv_c]
                if f != 0:
                    m[r] = [a - f * b for a, b in zip(m[r], m[piv_r])]
        pivots.append(piv_c)
        piv_r += 1
    if tol is not None:
        m = [[0.0 if abs(v) <= tol else v for v in row] for row in m]
    return m[: len(pivots)], pivots


def nullspace(matrix: List[list], n_cols: int, tol: Optional[float] = None) -> List[list]:
    """Basis of the right kernel, returned in reduced row echelon form.

    Exact Gaussian elimination when ``tol`` is None; for float data the
    kernel comes from an SVD with singular values ``<= tol`` treated as zero.
    """
    if tol is None:
        if not matrix:
            vecs = [[Fraction(int(i == j)) for j in range(n_cols)] for i in range(n_cols)]
        else:
            red, pivots = rref(matrix)
            free = [c for c in range(n_cols) if c not in pivots]
            vecs = []
            for f in free:
                v = [Fraction(0)] * n_cols
                v[f] = Fraction(1)
                for row, pc in zip(red, pivots):
                    v[pc] = -row[f]
                vecs.append(v)
        return rref(vecs)[0] if vecs else []
    if not matrix:
        return [[float(i == j) for j in range(n_cols)] for i in range(n_cols)]
    A = np.array(matrix, dtype=float)
    _, s, vt = np.linalg.svd(A)
    rank = int(np.sum(s > tol))
    kernel = vt[rank:]
    if kernel.shape[0] == 0:
        return []
    return rref(kernel.tolist(), tol=tol)[0]
