"""The sl2-triple (H, E+, E-) on R^N and its radial parts.

Elements of sl(2) are coefficient triples over ``(h, e+, e-)``; they act on
radial :class:`~kafourier.radial.ExpMonomial` functions through
:func:`radial_apply` and on polar sums through :func:`full_apply`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence

import numpy as np

from .dunkl import NotKHarmonic, is_k_harmonic
from .exact import GaussianRational, I, exact
from .polar import PolarSum
from .radial import ExpMonomial, LaguerreBasisSpec, basis_function
from .reporting import Check
from .roots import MultiplicityFunction

__all__ = [
    "Sl2Element",
    "H",
    "EP",
    "EM",
    "K",
    "NP",
    "NM",
    "tau",
    "RadialOperatorSpec",
    "radial_apply",
    "full_apply",
    "verify_sl2_relations",
    "ladder_check",
    "ladder_expected",
    "eigenvalue_of_k",
]

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class Sl2Element:
    """``c_h h + c_p e+ + c_m e-`` with (possibly complex) coefficients."""

    c_h: object = 0
    c_p: object = 0
    c_m: object = 0

    def __post_init__(self):
        for name in ("c_h", "c_p", "c_m"):
            object.__setattr__(self, name, exact(getattr(self, name)))

    def __add__(self, other):
        return Sl2Element(self.c_h + other.c_h, self.c_p + other.c_p, self.c_m + other.c_m)

    def __sub__(self, other):
        return self + (-1) * other

    def __mul__(self, c):
        c = exact(c)
        return Sl2Element(c * self.c_h, c * self.c_p, c * self.c_m)

    __rmul__ = __mul__

    def __neg__(self):
        return (-1) * self

    def bracket(self, other: "Sl2Element") -> "Sl2Element":
        """Lie bracket from ``[h,e+] = 2e+``, ``[h,e-] = -2e-``, ``[e+,e-] = h``."""
        h1, p1, m1 = self.c_h, self.c_p, self.c_m
        h2, p2, m2 = other.c_h, other.c_p, other.c_m
        return Sl2Element(
            p1 * m2 - m1 * p2,
            2 * (h1 * p2 - p1 * h2),
            2 * (m1 * h2 - h1 * m2),
        )

    def matrix(self) -> np.ndarray:
        return np.array(
            [[complex(self.c_h), complex(self.c_p)], [complex(self.c_m), -complex(self.c_h)]]
        )

    def __eq__(self, other):
        if not isinstance(other, Sl2Element):
            return NotImplemented
        return (self.c_h, self.c_p, self.c_m) == (other.c_h, other.c_p, other.c_m)

    def __hash__(self):
        return hash((self.c_h, self.c_p, self.c_m))


H = Sl2Element(1, 0, 0)
EP = Sl2Element(0, 1, 0)
EM = Sl2Element(0, 0, 1)
# Cayley transforms of (h, e+, e-)
K = Sl2Element(0, -I, I)
NP = Sl2Element(I * HALF, -HALF, -HALF)
NM = Sl2Element(-I * HALF, -HALF, -HALF)


def tau(X: Sl2Element) -> Sl2Element:
    """Automorphism fixing ``h`` and negating ``e+`` and ``e-``."""
    return Sl2Element(X.c_h, -X.c_p, -X.c_m)


@dataclass(frozen=True)
class RadialOperatorSpec:
    """Parameters of the radial operators: dimension, ``<k>``, ``a != 0`` (any sign), degree ``m``."""

    N: int
    index: Fraction
    a: Fraction
    m: int

    def __post_init__(self):
        object.__setattr__(self, "index", exact(self.index))
        object.__setattr__(self, "a", exact(self.a))
        if self.a == 0:
            raise ValueError("a must be nonzero")

    @property
    def c(self):
        return self.N - 2 + 2 * self.index

    def flipped(self) -> "RadialOperatorSpec":
        return RadialOperatorSpec(self.N, self.index, -self.a, self.m)

    @classmethod
    def from_basis(cls, spec: LaguerreBasisSpec) -> "RadialOperatorSpec":
        return cls(spec.N, spec.index, spec.signed_a, spec.m)


def _radial_H(spec, f):
    a = spec.a
    return f * ((spec.c + a) / a) + f.theta() * (2 / a)


def _radial_EP(spec, f):
    return f.times_power(spec.a) * (I / spec.a)


def _radial_EM(spec, f):
    g = f.theta() + f * (spec.c + spec.m)
    g = g.theta() - g * spec.m
    return g.times_power(-spec.a) * (I / spec.a)


def radial_apply(spec: RadialOperatorSpec, X: Sl2Element, f: ExpMonomial) -> ExpMonomial:
    """Apply ``c_h H^(m) + c_p E+^(m) + c_m E-^(m)`` to ``f``.

    ``H^(m) = (c + a)/a + (2/a) theta``, ``E+^(m) = (i/a) r^a`` and
    ``E-^(m) = (i/a) r^-a (theta - m)(theta + c + m)`` with
    ``c = N - 2 + 2<k>``. Exact whenever ``f`` is.
    """
    out = ExpMonomial()
    if X.c_h != 0:
        out = out + _radial_H(spec, f) * X.c_h
    if X.c_p != 0:
        out = out + _radial_EP(spec, f) * X.c_p
    if X.c_m != 0:
        out = out + _radial_EM(spec, f) * X.c_m
    return out


def _full_operator(k: MultiplicityFunction, a, X: Sl2Element, F: PolarSum) -> PolarSum:
    a = exact(a)
    N = F.dim
    c = N - 2 + 2 * k.index
    out = PolarSum(N)
    if X.c_h != 0:
        out = out + (F * ((c + a) / a) + F.euler() * (2 / a)) * X.c_h
    if X.c_p != 0:
        out = out + F.times_norm_power(a) * (I / a * X.c_p)
    if X.c_m != 0:
        out = out + F.dunkl_laplacian(k).times_norm_power(2 - a) * (I / a * X.c_m)
    return out


def full_apply(k: MultiplicityFunction, a, X: Sl2Element, p, f: Optional[ExpMonomial] = None,
               factorized: bool = False) -> PolarSum:
    """Apply ``c_h H + c_p E+ + c_m E-`` on ``R^N`` to ``p (x) f`` (or to a :class:`PolarSum`).

    ``H = (N - 2 + 2<k> + a)/a + (2/a) E``, ``E+ = (i/a)|x|^a`` and
    ``E- = (i/a)|x|^(2-a) Delta_k``. With ``factorized=True`` the result is
    returned as ``p (x) radial_apply(...)`` instead, which requires ``p`` to
    be k-harmonic of a single degree.

    Raises
    ------
    NotKHarmonic
        If ``factorized`` is requested for ``p`` outside the k-harmonics.
    """
    if isinstance(p, PolarSum):
        if factorized:
            raise NotKHarmonic("factorized form needs a single (p, f) pair")
        return _full_operator(k, a, X, p)
    if factorized:
        m = p.degree()
        if p.is_zero() or not is_k_harmonic(k, p, m):
            raise NotKHarmonic(f"{p} is not a homogeneous k-harmonic polynomial")
        spec = RadialOperatorSpec(p.dim, k.index, a, m)
        return PolarSum.tensor(p, radial_apply(spec, X, f))
    return _full_operator(k, a, X, PolarSum.tensor(p, f))


def verify_sl2_relations(spec: RadialOperatorSpec, corpus: Iterable[ExpMonomial]) -> List[Check]:
    """Check the bracket relations of the radial triple on every corpus function.

    Relations: ``[H,E+] = 2E+``, ``[H,E-] = -2E-``, ``[E+,E-] = H`` and the
    Cayley-basis versions ``[k,n+] = 2n+``, ``[k,n-] = -2n-``,
    ``[n+,n-] = k``. The defect is the largest coefficient of
    ``X(Y f) - Y(X f) - [X,Y] f``; exact inputs must give exactly 0. The
    nine products ``B_i B_j f`` of basis operators are computed once per
    function and combined linearly for every relation.
    """
    corpus = list(corpus)
    relations = [
        ("[H,E+]=2E+", H, EP),
        ("[H,E-]=-2E-", H, EM),
        ("[E+,E-]=H", EP, EM),
        ("[k,n+]=2n+", K, NP),
        ("[k,n-]=-2n-", K, NM),
        ("[n+,n-]=k", NP, NM),
    ]
    basis_ops = (_radial_H, _radial_EP, _radial_EM)

    def combine(X, images):
        out = ExpMonomial()
        for c, g in zip((X.c_h, X.c_p, X.c_m), images):
            if c != 0:
                out = out + g * c
        return out

    worst = {name: 0.0 for name, _, _ in relations}
    exact_all = {name: True for name, _, _ in relations}
    for f in corpus:
        # B_i f and B_i B_j f for the basis (H, E+, E-); every product is a combination
        first = [op(spec, f) for op in basis_ops]
        second = [[op(spec, g) for g in first] for op in basis_ops]
        for name, X, Y in relations:
            Z = X.bracket(Y)
            XY = combine(X, [combine(Y, row) for row in second])
            YX = combine(Y, [combine(X, row) for row in second])
            diff = XY - YX - combine(Z, first)
            exact_all[name] = exact_all[name] and diff.is_exact
            worst[name] = max(worst[name], diff.max_abs_coeff())
    checks = []
    for name, _, _ in relations:
        checks.append(Check(f"sl2 {name}", worst[name], 0.0, _spec_label(spec), exact=exact_all[name]))
    return checks


def _spec_label(spec):
    return f"N={spec.N} <k>={spec.index} a={spec.a} m={spec.m}"


def eigenvalue_of_k(spec: LaguerreBasisSpec, l: int):
    """Eigenvalue of ``pi(k)`` on ``f_l`` found by exact application.

    Applies the radial ``k`` to the unnormalized (exact) basis function and
    reads off the proportionality constant.

    Raises
    ------
    ArithmeticError
        If the image is not an exact multiple of ``f_l``.
    """
    f = basis_function(spec, l, normalized=False)
    g = radial_apply(RadialOperatorSpec.from_basis(spec), K, f)
    key = next(iter(f.terms))
    mu = g.terms.get(key, 0) / f.terms[key]
    if not (g - f * mu).is_zero():
        raise ArithmeticError(f"f_{l} is not an eigenfunction of pi(k)")
    if isinstance(mu, GaussianRational):
        if mu.imag != 0:
            raise ArithmeticError("non-real eigenvalue")
        mu = mu.real
    return mu


def ladder_expected(spec: LaguerreBasisSpec, l: int):
    """``{element: [(coefficient, index)]}`` predicted for ``pi(X) f_l``.

    +a branch: ``k -> (lam + 2l + 1)``, ``n+ -> i sqrt((l+1)(lam+l+1)) f_{l+1}``,
    ``n- -> i sqrt(l(lam+l)) f_{l-1}``. -a branch (with ``lam`` the branch
    value): ``k -> (lam - 2l - 1)``, ``n+ -> -i sqrt(l(-lam+l)) f_{l-1}``,
    ``n- -> -i sqrt((l+1)(-lam+l+1)) f_{l+1}``.
    """
    lam = float(spec.lam)
    if spec.sign > 0:
        up = 1j * math.sqrt((l + 1) * (lam + l + 1))
        down = 1j * math.sqrt(l * (lam + l)) if l else 0.0
        return {
            "k": [(lam + 2 * l + 1, l)],
            "n+": [(up, l + 1)],
            "n-": [(down, l - 1)] if l else [],
        }
    down = -1j * math.sqrt(l * (-lam + l)) if l else 0.0
    up = -1j * math.sqrt((l + 1) * (-lam + l + 1))
    return {
        "k": [(lam - 2 * l - 1, l)],
        "n+": [(down, l - 1)] if l else [],
        "n-": [(up, l + 1)],
    }


DEFAULT_RADII = (0.25, 0.5, 1.0, 2.0, 4.0)
ZERO_FLOOR = 1e-13


def ladder_check(spec: LaguerreBasisSpec, l: int, radii: Sequence[float] = DEFAULT_RADII,
                 rel_tol: float = 1e-10, abs_tol: float = 1e-12) -> List[Check]:
    """Compare ``pi(X) f_l`` with the ladder prediction at sample radii.

    Predictions are compared by pointwise relative error. A radius where the
    prediction vanishes (``|want| <= ZERO_FLOOR`` times the sum of absolute
    term values, i.e. an exact Laguerre zero up to rounding) has no relative
    error and is compared by absolute value instead, as are the
    annihilations (``n- f_0`` on +a, ``n+ f_0`` on -a) by absolute value.
    """
    spec.check()
    op = RadialOperatorSpec.from_basis(spec)
    f = basis_function(spec, l)
    r = np.asarray(radii, dtype=float)
    expected = ladder_expected(spec, l)
    checks = []
    for name, X in (("k", K), ("n+", NP), ("n-", NM)):
        got = radial_apply(op, X, f)(r)
        want = np.zeros(r.shape, dtype=complex)
        size = np.zeros(r.shape)
        for coef, j in expected[name]:
            target = basis_function(spec, j)
            want = want + coef * target(r)
            size = size + abs(coef) * target.map_coefficients(abs)(r).real
        label = f"{_spec_label(op)} l={l}"
        if not expected[name]:
            err = float(np.max(np.abs(got)))
            checks.append(Check(f"ladder {name} annihilates f_0", err, abs_tol, label))
            continue
        # radii sitting on a zero of the Laguerre factor: compare absolutely
        at_zero = np.abs(want) <= ZERO_FLOOR * size
        rel = np.abs(got - want)[~at_zero] / np.abs(want)[~at_zero]
        checks.append(Check(f"ladder {name} rel", float(np.max(rel, initial=0.0)), rel_tol, label))
        if at_zero.any():
            err = float(np.max(np.abs(got - want)[at_zero]))
            checks.append(Check(f"ladder {name} at zero of target", err, abs_tol, label))
    return checks
