"""Spectral expansions, the Laguerre semigroup and the generalized Fourier transform.

Every operator here is diagonal in the Laguerre-type basis of a sector, so
it acts on :class:`SpectralCoefficients` by multipliers. Phases of the
Fourier transform are kept as exact rational multiples of ``pi``.
"""

from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .exact import GaussianRational, exact, exp_i_pi
from .kappa import intertwiner, kappa_radial
from .polynomials import Polynomial
from .radial import (
    DEFAULT_NODES,
    BranchHypothesisViolated,
    DivergentIntegrand,
    ExpMonomial,
    LaguerreBasisSpec,
    basis_function,
    basis_norm_constant,
    basis_value,
    gauss_laguerre,
    inner_product,
    laguerre_poly,
    lambda_param,
    norm,
)
from .reporting import Check

__all__ = [
    "DEFAULT_TRUNCATION",
    "UnboundedRegime",
    "MixedConfiguration",
    "SpectralCoefficients",
    "SphericalComponent",
    "SphericalDecomposition",
    "expand",
    "synthesize",
    "evaluate",
    "semigroup_exponent",
    "semigroup_multiplier",
    "laguerre_semigroup",
    "ft_admissible",
    "ft_phase",
    "ft_multiplier",
    "generalized_ft",
    "inverse_ft",
    "ft_full",
    "ft_consistency_check",
    "semigroup_law_check",
    "intertwine_check_ft",
    "hilbert_schmidt_sum",
    "hilbert_schmidt_closed_form",
    "coefficients_csv",
    "format_float",
]

DEFAULT_TRUNCATION = 32


class UnboundedRegime(ValueError):
    """The semigroup multipliers grow without bound for this ``z`` on this branch."""


class MixedConfiguration(ValueError):
    pass


@dataclass(frozen=True)
class SpectralCoefficients:
    """Coefficients ``c_0 .. c_{L-1}`` of a radial function in the basis of ``spec``.

    ``residual`` is the L2 norm of ``f - sum c_l f_l`` when known.
    """

    spec: LaguerreBasisSpec
    coeffs: Tuple[complex, ...]
    residual: Optional[float] = None

    @property
    def truncation(self) -> int:
        return len(self.coeffs)

    def norm(self) -> float:
        return math.sqrt(sum(abs(c) ** 2 for c in self.coeffs))

    def scaled(self, multipliers: Sequence[complex]) -> "SpectralCoefficients":
        return SpectralCoefficients(self.spec, tuple(m * c for m, c in zip(multipliers, self.coeffs)))

    def as_array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=complex)


def _project_by_recurrence(g: ExpMonomial, spec: LaguerreBasisSpec, L: int, nodes: int):
    """Coefficients and residual of ``g`` (decay class ``exp(-r^a/a)``) on the ``+a`` basis.

    With ``t = (2/a) r^a``, ``g(r) = r^m exp(-t/2) G(t)`` and
    ``r^d dr = (a/2)^lam / 2 * r^-2m t^lam dt``, so ``c_l`` is a Gauss-Laguerre
    sum of ``G(t) n_l L_l(t)``. ``L_l`` comes from the three-term recurrence;
    the monomial expansion of high-degree Laguerre polynomials would lose
    most digits to cancellation at the far nodes.
    """
    lam = spec.lam_positive
    a = float(spec.a)
    t, w = gauss_laguerre(nodes, float(lam))
    w = w * (a / 2) ** float(lam) / 2
    G = np.zeros(t.shape, dtype=complex)
    for (gamma, _, _), c in g.terms.items():
        if (gamma - spec.m) / spec.a + lam <= -1:
            raise DivergentIntegrand(f"term r^{gamma} is not square integrable against the basis at r = 0")
        # r^(gamma - m) = (a t / 2)^((gamma - m)/a)
        G += complex(c) * (a * t / 2) ** (float(gamma - spec.m) / a)
    rest = G.copy()
    coeffs = []
    for l in range(L):
        phi = basis_norm_constant(spec, l) * laguerre_poly(lam, l, t)
        c = complex(np.dot(w, G * phi))
        coeffs.append(c)
        rest -= c * phi
    return tuple(coeffs), math.sqrt(float(np.dot(w, np.abs(rest) ** 2)))


def expand(f: ExpMonomial, spec: LaguerreBasisSpec, L: int = DEFAULT_TRUNCATION,
           nodes: int = DEFAULT_NODES, residual: bool = True) -> SpectralCoefficients:
    """Project ``f`` onto ``f_{spec;0..L-1}`` in the branch measure.

    Inputs sharing the decay ``exp(-r^(+-a)/a)`` of the basis are projected
    by quadrature against recurrence values of the Laguerre polynomials
    (the ``-a`` branch through ``kappa``, which is unitary and carries the
    ``+a`` basis onto the ``-a`` basis). Other inputs go through
    :func:`~kafourier.radial.inner_product`.

    Raises
    ------
    BranchHypothesisViolated
    DivergentIntegrand
    """
    spec.check()
    plus, g = (spec, f) if spec.sign > 0 else (spec.flipped(), f.kappa(-1, -spec.c))
    if g.terms and all(q == 1 / plus.a and s == plus.a for (_, q, s) in g.terms):
        coeffs, res = _project_by_recurrence(g, plus, L, nodes)
        return SpectralCoefficients(spec, coeffs, res if residual else None)
    d = spec.measure_exponent
    basis = [basis_function(spec, l) for l in range(L)]
    coeffs = tuple(inner_product(f, b, d, nodes) for b in basis)
    res = None
    if residual:
        if f.is_zero():
            res = 0.0
        else:
            rest = f.to_complex()
            for c, b in zip(coeffs, basis):
                rest = rest - b * c
            res = norm(rest, d, nodes) if not rest.is_zero() else 0.0
    return SpectralCoefficients(spec, coeffs, res)


def evaluate(c: SpectralCoefficients, r) -> np.ndarray:
    """``sum_l c_l f_l(r)`` through the Laguerre recurrence (independent of :func:`synthesize`)."""
    r = np.asarray(r, dtype=float)
    out = np.zeros(r.shape, dtype=complex)
    for l, coef in enumerate(c.coeffs):
        out = out + complex(coef) * basis_value(c.spec, l, r)
    return out


def synthesize(c: SpectralCoefficients) -> ExpMonomial:
    """``sum_l c_l f_{spec;l}`` as an :class:`ExpMonomial`."""
    out = ExpMonomial()
    for l, coef in enumerate(c.coeffs):
        if coef != 0:
            out = out + basis_function(c.spec, l) * complex(coef)
    return out


def _eigenvalue(spec: LaguerreBasisSpec, l: int):
    # eigenvalue of the compact generator on f_l: lam + 2l + 1 or lam - 2l - 1
    return spec.lam + 2 * l + 1 if spec.sign > 0 else spec.lam - 2 * l - 1


def semigroup_exponent(spec: LaguerreBasisSpec, z, l: int):
    """``-z mu_l`` where ``mu_l`` is the ``k``-eigenvalue of ``f_l``; exact for exact ``z``."""
    return -exact(z) * _eigenvalue(spec, l)


def semigroup_multiplier(spec: LaguerreBasisSpec, z, l: int) -> complex:
    return cmath.exp(complex(semigroup_exponent(spec, z, l)))


def _real_part(z) -> float:
    if isinstance(z, GaussianRational):
        return float(z.real)
    return complex(z).real


def _check_regime(spec: LaguerreBasisSpec, z):
    re = _real_part(z)
    if spec.sign > 0 and re < 0:
        raise UnboundedRegime(f"Re z = {re} < 0 on the +a branch")
    if spec.sign < 0 and re > 0:
        raise UnboundedRegime(f"Re z = {re} > 0 on the -a branch")


def laguerre_semigroup(z, c: SpectralCoefficients) -> SpectralCoefficients:
    """Multiply ``c_l`` by ``exp(-z mu_l)``.

    Admissible ``z``: ``Re z >= 0`` on the ``+a`` branch, ``Re z <= 0`` on
    the ``-a`` branch (bounded multipliers).

    Raises
    ------
    UnboundedRegime
    """
    _check_regime(c.spec, z)
    return c.scaled([semigroup_multiplier(c.spec, z, l) for l in range(c.truncation)])


def ft_admissible(spec: LaguerreBasisSpec) -> bool:
    """Branch condition at ``m = 0`` under which the Fourier transform is defined."""
    lam0 = lambda_param(spec.N, spec.index, spec.signed_a, 0)
    return lam0 > -1 if spec.sign > 0 else lam0 < 1


def _check_ft_branch(spec: LaguerreBasisSpec):
    if not ft_admissible(spec):
        lam0 = lambda_param(spec.N, spec.index, spec.signed_a, 0)
        raise BranchHypothesisViolated(f"lambda at m=0 is {lam0}; the Fourier transform needs the branch condition")
    spec.check()


def ft_phase(spec: LaguerreBasisSpec, l: int) -> Fraction:
    """Rational ``t`` in ``[0, 2)`` with Fourier multiplier ``exp(i pi t)`` on ``f_l``.

    ``+a``: ``exp(-i pi (m/a + l))``; ``-a``: ``-exp(i pi (m/a + l))``.
    """
    x = Fraction(spec.m) / spec.a + l
    return (-x if spec.sign > 0 else x + 1) % 2


def ft_multiplier(spec: LaguerreBasisSpec, l: int) -> complex:
    return exp_i_pi(ft_phase(spec, l))


def generalized_ft(c: SpectralCoefficients) -> SpectralCoefficients:
    """Apply the generalized Fourier transform of the sector.

    Raises
    ------
    BranchHypothesisViolated
    """
    _check_ft_branch(c.spec)
    return c.scaled([ft_multiplier(c.spec, l) for l in range(c.truncation)])


def inverse_ft(c: SpectralCoefficients) -> SpectralCoefficients:
    _check_ft_branch(c.spec)
    return c.scaled([ft_multiplier(c.spec, l).conjugate() for l in range(c.truncation)])


def ft_consistency_check(spec: LaguerreBasisSpec, L: int = DEFAULT_TRUNCATION,
                         tol: float = 1e-12) -> List[Check]:
    """Fourier multiplier versus ``exp(i pi (lam_0 + 1)/2) Lambda(i pi/2)``.

    The phases are compared as exact rationals mod 2 and the multipliers in
    floating point.
    """
    lam0 = lambda_param(spec.N, spec.index, spec.signed_a, 0)
    angle_defect = 0
    worst = 0.0
    for l in range(L):
        # Lambda(i pi/2) has phase -mu_l/2
        via_semigroup = ((lam0 + 1) / 2 - _eigenvalue(spec, l) / 2) % 2
        if via_semigroup != ft_phase(spec, l):
            angle_defect += 1
        float_route = cmath.exp(1j * math.pi * float(lam0 + 1) / 2) * cmath.exp(
            -1j * math.pi / 2 * float(_eigenvalue(spec, l)))
        worst = max(worst, abs(float_route - ft_multiplier(spec, l)))
    label = _label(spec)
    return [
        Check("FT phase equals semigroup phase", float(angle_defect), 0.0, label, exact=True),
        Check("FT multiplier equals semigroup multiplier", worst, tol, label),
    ]


def semigroup_law_check(spec: LaguerreBasisSpec, pairs: Iterable[tuple], L: int = DEFAULT_TRUNCATION) -> Check:
    """``Lambda(z1) Lambda(z2) = Lambda(z1 + z2)`` on multiplier exponents (exact for exact ``z``)."""
    worst = 0.0
    all_exact = True
    for z1, z2 in pairs:
        z1, z2 = exact(z1), exact(z2)
        for z in (z1, z2):
            _check_regime(spec, z)
        for l in range(L):
            diff = semigroup_exponent(spec, z1, l) + semigroup_exponent(spec, z2, l) - semigroup_exponent(spec, z1 + z2, l)
            all_exact = all_exact and isinstance(diff, (Fraction, GaussianRational))
            worst = max(worst, abs(complex(diff)))
    return Check("semigroup law", worst, 0.0, _label(spec), exact=all_exact)


def _label(spec: LaguerreBasisSpec) -> str:
    return f"N={spec.N} <k>={spec.index} a={spec.signed_a} m={spec.m}"


def intertwine_check_ft(spec: LaguerreBasisSpec, zs: Sequence = (0, 1, Fraction(1, 2) + GaussianRational(0, 3)),
                        L: int = 12, corpus: Sequence[ExpMonomial] = (), radii=(0.3, 0.7, 1.0, 1.9, 3.5),
                        nodes: int = DEFAULT_NODES, phase_tol: float = 1e-12,
                        point_tol: float = 1e-8) -> List[Check]:
    """``kappa Lambda_a(z) = Lambda_-a(-z) kappa`` and ``kappa F_a = -(F_-a)^-1 kappa``.

    ``spec`` is a ``+a`` sector. Since ``kappa f_{a,l} = f_{-a,l}`` both
    identities reduce to multiplier identities, checked for ``l < L``. The
    ``corpus`` (functions in the ``+a`` picture) is then pushed through both
    sides and compared pointwise at ``radii``; the left side is synthesized
    symbolically and the right side evaluated by the Laguerre recurrence.
    """
    if spec.sign < 0:
        spec = spec.flipped()
    neg = spec.flipped()
    spec.check()
    neg.check()
    label = _label(spec)
    kp = intertwiner(spec.N, spec.index)

    # kappa maps the +a basis to the -a basis
    worst_basis = 0.0
    r = np.asarray(radii, dtype=float)
    for l in range(min(L, 8)):
        diff = kappa_radial(kp, basis_function(spec, l)) - basis_function(neg, l)
        worst_basis = max(worst_basis, diff.max_abs_coeff())
    checks = [Check("kappa maps f_(a,l) to f_(-a,l)", worst_basis, 1e-14, label)]

    worst_ls = 0.0
    for z in zs:
        for l in range(L):
            worst_ls = max(worst_ls, abs(semigroup_multiplier(spec, z, l) - semigroup_multiplier(neg, -exact(z), l)))
    checks.append(Check("kappa Lambda_a(z) = Lambda_-a(-z) kappa (multipliers)", worst_ls, phase_tol, label))

    exact_defect = 0
    worst_ft = 0.0
    for l in range(L):
        lhs = ft_phase(spec, l)
        rhs = (1 - ft_phase(neg, l)) % 2  # phase of -(F_-a)^-1
        exact_defect += lhs != rhs
        worst_ft = max(worst_ft, abs(ft_multiplier(spec, l) + 1 / ft_multiplier(neg, l)))
    checks.append(Check("kappa F_a = -(F_-a)^-1 kappa (phases)", float(exact_defect), 0.0, label, exact=True))
    checks.append(Check("kappa F_a = -(F_-a)^-1 kappa (multipliers)", worst_ft, phase_tol, label))

    if corpus:
        worst_fn_ls = worst_fn_ft = 0.0
        for g in corpus:
            c = expand(g, spec, L, nodes, residual=False)
            c_neg = expand(kappa_radial(kp, g), neg, L, nodes, residual=False)
            for z in zs:
                lhs = kappa_radial(kp, synthesize(laguerre_semigroup(z, c)))(r)
                rhs = evaluate(laguerre_semigroup(-exact(z), c_neg), r)
                worst_fn_ls = max(worst_fn_ls, float(np.max(np.abs(lhs - rhs))))
            lhs = kappa_radial(kp, synthesize(generalized_ft(c)))(r)
            rhs = -evaluate(inverse_ft(c_neg), r)
            worst_fn_ft = max(worst_fn_ft, float(np.max(np.abs(lhs - rhs))))
        checks.append(Check("kappa Lambda_a(z) = Lambda_-a(-z) kappa (functions)", worst_fn_ls, point_tol, label))
        checks.append(Check("kappa F_a = -(F_-a)^-1 kappa (functions)", worst_fn_ft, point_tol, label))
    return checks


def hilbert_schmidt_sum(spec: LaguerreBasisSpec, z, rel_stop: float = 1e-18, max_terms: int = 100_000) -> float:
    """``sum_l |exp(-z mu_l)|^2`` summed until the terms are negligible.

    Raises
    ------
    UnboundedRegime
        Unless ``Re z > 0`` (``+a``) or ``Re z < 0`` (``-a``).
    """
    re = _real_part(z)
    if (spec.sign > 0 and re <= 0) or (spec.sign < 0 and re >= 0):
        raise UnboundedRegime("Hilbert-Schmidt sum diverges for this Re z")
    total = 0.0
    for l in range(max_terms):
        term = math.exp(-2 * re * float(_eigenvalue(spec, l)))
        total += term
        if term <= rel_stop * total:
            return total
    raise ArithmeticError("Hilbert-Schmidt sum did not converge")


def hilbert_schmidt_closed_form(spec: LaguerreBasisSpec, z) -> float:
    """Geometric-series value: ``exp(-2 Re z mu_0) / (1 - exp(-+4 Re z))``."""
    re = _real_part(z)
    mu0 = float(_eigenvalue(spec, 0))
    ratio = math.exp(-4 * re) if spec.sign > 0 else math.exp(4 * re)
    return math.exp(-2 * re * mu0) / (1 - ratio)


@dataclass(frozen=True)
class SphericalComponent:
    m: int
    p: Polynomial
    radial: SpectralCoefficients


@dataclass(frozen=True)
class SphericalDecomposition:
    """``sum_j p_j (x) g_j`` with ``p_j`` k-harmonic of degree ``m_j``."""

    components: Tuple[SphericalComponent, ...]

    def __post_init__(self):
        for comp in self.components:
            if comp.radial.spec.m != comp.m:
                raise MixedConfiguration(f"sector m={comp.m} carries a basis spec with m={comp.radial.spec.m}")
            if comp.p.degree() != comp.m:
                raise MixedConfiguration(f"polynomial of degree {comp.p.degree()} in sector m={comp.m}")

    def key(self):
        keys = {(c.radial.spec.N, c.radial.spec.index, c.radial.spec.a, c.radial.spec.sign) for c in self.components}
        if len(keys) > 1:
            raise MixedConfiguration(f"sectors disagree on (N, <k>, a, branch): {sorted(keys)}")
        return next(iter(keys), None)

    def map(self, fn) -> "SphericalDecomposition":
        return SphericalDecomposition(tuple(replace(c, radial=fn(c.radial)) for c in self.components))

    def norm(self) -> float:
        # components are assumed orthogonal with unit-normalized spherical factors
        return math.sqrt(sum(c.radial.norm() ** 2 for c in self.components))

    def __call__(self, x) -> complex:
        """Value at ``x != 0``: ``sum_j p_j(x/|x|) g_j(|x|)`` with ``g_j`` evaluated by recurrence."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        r = float(np.linalg.norm(x))
        total = 0j
        for c in self.components:
            total += complex(c.p(x)) / r ** c.m * complex(evaluate(c.radial, r))
        return total


def ft_full(decomp: SphericalDecomposition) -> SphericalDecomposition:
    """Sector-wise generalized Fourier transform.

    Raises
    ------
    MixedConfiguration
        If the sectors do not share ``(N, <k>, a, branch)``.
    """
    decomp.key()
    return decomp.map(generalized_ft)


def format_float(x: float) -> str:
    """17 significant digits, scientific notation (round-trips a double)."""
    return f"{x:.16e}"


def coefficients_csv(rows: Iterable[Tuple[int, int, complex]], header=("m", "l", "re", "im")) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for m, l, c in rows:
        c = complex(c)
        writer.writerow([m, l, format_float(c.real), format_float(c.imag)])
    return buf.getvalue()
