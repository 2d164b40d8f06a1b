"""The transforms ``kappa_{alpha,beta} f(r) = r^beta f(r^alpha)`` and their identities.

The member ``kappa_{-1, -(N-2+2<k>)}`` (see :func:`intertwiner`) is a unitary
involution exchanging the ``a`` and ``-a`` pictures of the sl2-action.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

import numpy as np
from scipy import integrate

from .dunkl import k_harmonic_basis
from .exact import exact
from .polar import InputNotPolarForm, PolarSum
from .radial import DEFAULT_NODES, ExpMonomial, norm
from .reporting import Check
from .roots import MultiplicityFunction
from .sl2 import EM, EP, H, K, NM, NP, RadialOperatorSpec, full_apply, radial_apply, tau

__all__ = [
    "KappaParams",
    "kappa_radial",
    "kappa_full",
    "kappa_compose",
    "intertwiner",
    "kappa_unitarity_check",
    "adaptive_norm",
    "group_law_check",
    "theta_conjugation_check",
    "power_conjugation_check",
    "radial_intertwining_check",
    "full_intertwining_check",
    "HRelationFinding",
    "full_h_relation",
    "kelvin_check",
    "equivariance_check",
    "NAMED_ELEMENTS",
]

FLOAT_IDENTITY_TOL = 1e-10
NAMED_ELEMENTS = (("h", H), ("e+", EP), ("e-", EM), ("k", K), ("n+", NP), ("n-", NM))


@dataclass(frozen=True)
class KappaParams:
    alpha: object
    beta: object = 0

    def __post_init__(self):
        object.__setattr__(self, "alpha", exact(self.alpha))
        object.__setattr__(self, "beta", exact(self.beta))
        if self.alpha == 0:
            raise ValueError("alpha must be nonzero")

    def target_exponent(self, d):
        """Exponent ``e`` with ``kappa: L2(r^d dr) -> L2(|alpha| r^e dr)`` unitary."""
        d = exact(d)
        return self.alpha * d + self.alpha - 2 * self.beta - 1

    def __str__(self):
        return f"({self.alpha},{self.beta})"


def kappa_compose(p1: KappaParams, p2: KappaParams) -> KappaParams:
    """Parameters of ``kappa_p1 o kappa_p2``: ``(a a', b + a b')``."""
    return KappaParams(p1.alpha * p2.alpha, p1.beta + p1.alpha * p2.beta)


def intertwiner(N: int, index) -> KappaParams:
    """``(-1, -(N - 2 + 2<k>))``."""
    return KappaParams(-1, -(N - 2 + 2 * exact(index)))


def kappa_radial(params: KappaParams, f: ExpMonomial) -> ExpMonomial:
    return f.kappa(params.alpha, params.beta)


def kappa_full(params: KappaParams, F: PolarSum) -> PolarSum:
    """``F -> |x|^beta F(|x|^(alpha-1) x)`` on a polar sum.

    A homogeneous degree-``m`` factor absorbs the dilation as
    ``|x|^(m(alpha-1))``, so ``P_m F -> P_m r^(beta + m(alpha-1)) F(r^alpha)``.
    """
    if not isinstance(F, PolarSum):
        raise InputNotPolarForm("kappa_full needs a PolarSum")
    pairs = []
    for P, f in F:
        for m, Pm in P.homogeneous_components().items():
            pairs.append((Pm, f.kappa(params.alpha, params.beta + m * (params.alpha - 1))))
    return PolarSum(F.dim, pairs)


def _label(**kw):
    return " ".join(f"{k}={v}" for k, v in kw.items())


def group_law_check(pairs: Sequence[tuple], corpus: Sequence[ExpMonomial]) -> List[Check]:
    """``kappa_p o kappa_q = kappa_(p o q)`` on the corpus (exact)."""
    checks = []
    for p, q in pairs:
        pq = kappa_compose(p, q)
        worst = 0.0
        for f in corpus:
            worst = max(worst, (kappa_radial(p, kappa_radial(q, f)) - kappa_radial(pq, f)).max_abs_coeff())
        checks.append(Check("kappa group law", worst, 0.0, f"{p}o{q}={pq}", exact=True))
    return checks


def theta_conjugation_check(params: KappaParams, corpus: Sequence[ExpMonomial]) -> Check:
    """``theta o kappa = kappa o (alpha theta + beta)`` (exact)."""
    worst = 0.0
    for f in corpus:
        lhs = kappa_radial(params, f).theta()
        rhs = kappa_radial(params, f.theta() * params.alpha + f * params.beta)
        worst = max(worst, (lhs - rhs).max_abs_coeff())
    return Check("kappa theta conjugation", worst, 0.0, str(params), exact=True)


def power_conjugation_check(params: KappaParams, d, corpus: Sequence[ExpMonomial]) -> Check:
    """``r^(alpha d) kappa f = kappa(r^d f)`` (exact)."""
    d = exact(d)
    worst = 0.0
    for f in corpus:
        lhs = kappa_radial(params, f).times_power(params.alpha * d)
        rhs = kappa_radial(params, f.times_power(d))
        worst = max(worst, (lhs - rhs).max_abs_coeff())
    return Check("kappa power conjugation", worst, 0.0, f"{params} d={d}", exact=True)


def adaptive_norm(f: ExpMonomial, d) -> float:
    """``||f||`` in ``L2(r^d dr)`` by adaptive quadrature directly in ``r``."""
    d = float(d)

    def integrand(r):
        return abs(f(r)) ** 2 * r ** d

    total = 0.0
    for lo, hi in ((0.0, 1.0), (1.0, np.inf)):
        val, _ = integrate.quad(integrand, lo, hi, epsabs=0.0, epsrel=1e-13, limit=400)
        total += val
    return float(np.sqrt(total))


def kappa_unitarity_check(params: KappaParams, d, corpus: Sequence[ExpMonomial],
                          nodes: int = DEFAULT_NODES, tol: float = 1e-8) -> Check:
    """Compare ``||f||`` in ``L2(r^d dr)`` with ``||kappa f||`` in ``L2(|alpha| r^e dr)``.

    ``e = alpha d + alpha - 2 beta - 1``. The source norm uses Gauss-Laguerre
    quadrature, the target norm adaptive quadrature in ``r``, so the two
    sides do not share a change of variables. Reports the worst relative
    difference.
    """
    e = params.target_exponent(d)
    scale = abs(float(params.alpha)) ** 0.5
    worst = 0.0
    for f in corpus:
        n_src = norm(f, d, nodes)
        n_dst = scale * adaptive_norm(kappa_radial(params, f), e)
        worst = max(worst, abs(n_dst - n_src) / n_src)
    return Check("kappa unitarity", worst, tol, f"{params} d={d} -> e={e}")


def radial_intertwining_check(spec: RadialOperatorSpec, corpus: Sequence[ExpMonomial],
                              elements=NAMED_ELEMENTS) -> List[Check]:
    """``kappa o pi_a(X) = pi_-a(tau X) o kappa`` on the corpus, exactly.

    ``kappa`` is the intertwiner for ``(N, <k>)``; ``pi_a`` the radial action
    of ``spec`` and ``pi_-a`` that of ``spec.flipped()``.
    """
    kp = intertwiner(spec.N, spec.index)
    other = spec.flipped()
    checks = []
    for name, X in elements:
        worst = 0.0
        exact_all = True
        for f in corpus:
            lhs = kappa_radial(kp, radial_apply(spec, X, f))
            rhs = radial_apply(other, tau(X), kappa_radial(kp, f))
            diff = lhs - rhs
            exact_all = exact_all and diff.is_exact
            worst = max(worst, diff.max_abs_coeff())
        checks.append(Check(f"intertwining radial {name}", worst, 0.0,
                            _label(N=spec.N, k=spec.index, a=spec.a, m=spec.m), exact=exact_all))
    worst = 0.0
    for f in corpus:
        worst = max(worst, (kappa_radial(kp, kappa_radial(kp, f)) - f).max_abs_coeff())
    checks.append(Check("kappa squared is identity", worst, 0.0, _label(N=spec.N, k=spec.index), exact=True))
    return checks


def _polar_corpus(k: MultiplicityFunction, corpus: Sequence[ExpMonomial], max_degree: int):
    out = []
    for m in range(max_degree + 1):
        for p in k_harmonic_basis(k, m).basis:
            for f in corpus:
                out.append(PolarSum.tensor(p, f))
    return out


def full_intertwining_check(k: MultiplicityFunction, a, corpus: Sequence[ExpMonomial],
                            max_degree: int = 2, elements=NAMED_ELEMENTS,
                            extra: Iterable[PolarSum] = ()) -> List[Check]:
    """``kappa o X_(k,a) = (tau X)_(k,-a) o kappa`` on ``R^N`` for the six named elements.

    Test functions are ``p (x) f`` with ``p`` running over k-harmonic bases
    of degree ``<= max_degree`` plus any ``extra`` polar sums. Defects are
    measured in the canonical polar normal form: exact for rational root
    systems, ``FLOAT_IDENTITY_TOL`` for float-backed ones.
    """
    a = exact(a)
    N = k.root_system.dimension
    kp = intertwiner(N, k.index)
    tests = _polar_corpus(k, corpus, max_degree) + list(extra)
    tol = 0.0 if k.root_system.exact else FLOAT_IDENTITY_TOL
    checks = []
    for name, X in elements:
        worst = 0.0
        for F in tests:
            lhs = kappa_full(kp, full_apply(k, a, X, F))
            rhs = full_apply(k, -a, tau(X), kappa_full(kp, F))
            worst = max(worst, (lhs - rhs).max_defect())
        checks.append(Check(f"intertwining full {name}", worst, tol, _label(N=N, k=k.index, a=a),
                            exact=k.root_system.exact))
    return checks


@dataclass(frozen=True)
class HRelationFinding:
    """Which form of the Euler-type relation ``kappa o H_(k,a) = H_(k,?) o kappa`` holds.

    ``same_a_defect`` is the defect of ``H_(k,a)`` on the right-hand side,
    ``flipped_a_defect`` that of ``H_(k,-a)``.
    """

    same_a_defect: float
    flipped_a_defect: float

    @property
    def satisfied(self) -> str:
        if self.flipped_a_defect == 0 and self.same_a_defect != 0:
            return "-a"
        if self.same_a_defect == 0 and self.flipped_a_defect != 0:
            return "+a"
        if self.same_a_defect == 0:
            return "both"
        return "neither"


def full_h_relation(k: MultiplicityFunction, a, corpus: Sequence[ExpMonomial],
                    max_degree: int = 1) -> HRelationFinding:
    a = exact(a)
    N = k.root_system.dimension
    kp = intertwiner(N, k.index)
    same = flipped = 0.0
    for F in _polar_corpus(k, corpus, max_degree):
        lhs = kappa_full(kp, full_apply(k, a, H, F))
        same = max(same, (lhs - full_apply(k, a, H, kappa_full(kp, F))).max_defect())
        flipped = max(flipped, (lhs - full_apply(k, -a, H, kappa_full(kp, F))).max_defect())
    return HRelationFinding(same, flipped)


def _sample_points(N: int, count: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(count, N))
    radii = rng.uniform(0.3, 2.5, size=count)
    return pts / np.linalg.norm(pts, axis=1, keepdims=True) * radii[:, None]


def kelvin_check(F: PolarSum, points: Optional[np.ndarray] = None, seed: int = 7,
                 tol: float = 1e-12) -> Check:
    """``kappa_{-1,-(N-2)} F(x) = |x|^-(N-2) F(x / |x|^2)`` at sample points (k = 0)."""
    N = F.dim
    pts = _sample_points(N, 8, seed) if points is None else np.asarray(points, dtype=float)
    G = kappa_full(KappaParams(-1, -(N - 2)), F)
    worst = 0.0
    for x in pts:
        r = float(np.linalg.norm(x))
        direct = r ** (-(N - 2)) * F(x / r ** 2)
        worst = max(worst, abs(G(x) - direct) / max(1.0, abs(direct)))
    return Check("Kelvin transform", worst, tol, f"N={N}")


def equivariance_check(params: KappaParams, F: PolarSum, rotation: np.ndarray,
                       seed: int = 11, tol: float = 1e-12) -> Check:
    """``kappa(F o h) = (kappa F) o h`` for orthogonal ``h``, sampled."""
    h = np.asarray(rotation, dtype=float)
    left = kappa_full(params, F.compose_linear(h))
    right = kappa_full(params, F)
    worst = 0.0
    for x in _sample_points(F.dim, 8, seed):
        want = right(h @ x)
        worst = max(worst, abs(left(x) - want) / max(1.0, abs(want)))
    return Check("kappa O(N)-equivariance", worst, tol, f"N={F.dim} {params}")
