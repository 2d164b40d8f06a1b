"""Dunkl operators, the Dunkl Laplacian and k-harmonic polynomial spaces."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

from .polynomials import Polynomial, monomials, nullspace
from .roots import MultiplicityFunction, reflection_matrix

__all__ = [
    "HarmonicBasis",
    "NotKHarmonic",
    "dunkl_operator",
    "dunkl_laplacian",
    "euler_operator",
    "classical_laplacian",
    "k_harmonic_basis",
    "is_k_harmonic",
    "FLOAT_KERNEL_TOL",
]

FLOAT_KERNEL_TOL = 1e-9


class NotKHarmonic(ValueError):
    pass


def _reflection_difference(k: MultiplicityFunction, i: int, p: Polynomial) -> Polynomial:
    # sum_{alpha>0} k_alpha alpha_i (p - p o r_alpha) / <alpha, x>
    out = Polynomial.zero(p.dim)
    for alpha, ka in k.positive_pairs():
        if ka == 0 or alpha[i] == 0:
            continue
        diff = p - p.compose_linear(reflection_matrix(alpha))
        if diff.is_zero():
            continue
        out = out + diff.divide_linear(alpha) * (ka * alpha[i])
    return out


def dunkl_operator(k: MultiplicityFunction, i: int, p: Polynomial) -> Polynomial:
    """Dunkl operator ``T_i`` in direction ``i`` (0-based) applied to ``p``.

    Raises
    ------
    InexactDivision
        If a reflection difference is not divisible by its root form, which
        only happens when the root system or polynomial is inconsistent.
    """
    return p.diff(i) + _reflection_difference(k, i, p)


def dunkl_laplacian(k: MultiplicityFunction, p: Polynomial) -> Polynomial:
    """``sum_i T_i^2 p``."""
    out = Polynomial.zero(p.dim)
    for i in range(p.dim):
        out = out + dunkl_operator(k, i, dunkl_operator(k, i, p))
    return out


def euler_operator(p: Polynomial) -> Polynomial:
    return p.euler()


def classical_laplacian(p: Polynomial) -> Polynomial:
    return p.laplacian()


def is_k_harmonic(k: MultiplicityFunction, p: Polynomial, m: int = None, tol: float = FLOAT_KERNEL_TOL) -> bool:
    if not p.is_homogeneous(m):
        return False
    lap = dunkl_laplacian(k, p)
    if lap.is_exact and p.is_exact:
        return lap.is_zero()
    return lap.max_abs_coeff() <= tol * max(1.0, p.max_abs_coeff())


@dataclass(frozen=True)
class HarmonicBasis:
    """Basis of the degree-``degree`` k-harmonic polynomials.

    ``basis`` is in reduced echelon form with respect to ``monomials``
    (descending lexicographic order within the degree).
    """

    degree: int
    basis: Tuple[Polynomial, ...]
    monomials: Tuple[Tuple[int, ...], ...]
    exact: bool = True

    def __len__(self):
        return len(self.basis)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def coordinates(self, p: Polynomial, tol: float = FLOAT_KERNEL_TOL):
        """Coefficients of ``p`` in the basis, or None if ``p`` is outside the span."""
        if not self.basis:
            return [] if p.is_zero() else None
        # echelon form: the pivot column of each row reads off its coefficient
        pivots = [next(j for j, e in enumerate(self.monomials) if b.coefficient(e) != 0 and
                       (self.exact or abs(complex(b.coefficient(e))) > tol)) for b in self.basis]
        coeffs = [p.coefficient(self.monomials[pc]) for pc in pivots]
        residual = p
        for c, b in zip(coeffs, self.basis):
            residual = residual - b * c
        if self.exact and p.is_exact:
            return coeffs if residual.is_zero() else None
        scale = max(1.0, p.max_abs_coeff())
        return coeffs if residual.max_abs_coeff() <= tol * scale else None


def k_harmonic_basis(k: MultiplicityFunction, m: int) -> HarmonicBasis:
    """Kernel of the Dunkl Laplacian on homogeneous polynomials of degree ``m``.

    Exact rational elimination for rational root systems; float-backed root
    systems use an SVD with singular values ``<= 1e-9`` treated as zero.
    """
    if m < 0:
        raise ValueError("degree must be nonnegative")
    R = k.root_system
    n = R.dimension
    cols = monomials(n, m)
    rows = monomials(n, m - 2) if m >= 2 else ()
    row_index = {e: i for i, e in enumerate(rows)}
    matrix: List[list] = [[0] * len(cols) for _ in rows]
    for j, e in enumerate(cols):
        image = dunkl_laplacian(k, Polynomial.monomial(e))
        for f, c in image.terms.items():
            matrix[row_index[f]][j] = c
    tol = None if R.exact else FLOAT_KERNEL_TOL
    if tol is not None:
        matrix = [[complex(v).real for v in row] for row in matrix]
    kernel = nullspace(matrix, len(cols), tol=tol)
    basis = tuple(Polynomial(n, dict(zip(cols, vec))) for vec in kernel)
    return HarmonicBasis(m, basis, cols, R.exact)
