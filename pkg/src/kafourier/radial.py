"""Radial functions ``sum c r^gamma exp(-q r^s)`` and Laguerre-type bases.

:class:`ExpMonomial` is closed under ``theta = r d/dr``, multiplication by
powers of ``r``, linear combination and the substitution ``r -> r^alpha``,
so every operator identity in the package can be checked term by term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .exact import exact, is_exact

__all__ = [
    "ExpMonomial",
    "IncompatibleExponentials",
    "DivergentIntegrand",
    "GammaPole",
    "BranchHypothesisViolated",
    "LaguerreBasisSpec",
    "lambda_param",
    "laguerre_poly",
    "laguerre_poly_sum",
    "laguerre_coefficients",
    "gauss_laguerre",
    "basis_function",
    "basis_value",
    "basis_norm_constant",
    "inner_product",
    "norm",
    "gram_matrix",
    "apply_theta",
    "DEFAULT_NODES",
]

DEFAULT_NODES = 128

Key = Tuple[object, object, object]


class IncompatibleExponentials(ValueError):
    """Product of two terms whose exponentials ``exp(-q r^s)`` have different ``s``."""


class DivergentIntegrand(ValueError):
    pass


class GammaPole(ValueError):
    pass


class BranchHypothesisViolated(ValueError):
    pass


def _key(gamma, q, s) -> Key:
    gamma, q, s = exact(gamma), exact(q), exact(s)
    if q == 0:
        return (gamma, Fraction(0), Fraction(0))
    if s == 0:
        raise ValueError("decay exponent s must be nonzero when q != 0")
    return (gamma, q, s)


class ExpMonomial:
    """Finite sum of terms ``c * r**gamma * exp(-q * r**s)`` on ``r > 0``.

    Terms are keyed by ``(gamma, q, s)``; equal keys merge and zero
    coefficients are dropped. ``q == 0`` marks a pure power (``s`` is then
    stored as 0).
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        merged: Dict[Key, object] = {}
        items = terms.items() if isinstance(terms, dict) else (terms or [])
        for item in items:
            if isinstance(terms, dict):
                (gamma, q, s), c = item
            else:
                c, gamma, q, s = item
            key = _key(gamma, q, s)
            c = exact(c)
            merged[key] = merged.get(key, 0) + c
        self.terms = {k: c for k, c in merged.items() if c != 0}

    @classmethod
    def _raw(cls, terms: Dict[Key, object]) -> "ExpMonomial":
        # trusted constructor: takes ownership of a fresh dict with normalized keys
        for k in [k for k, c in terms.items() if c == 0]:
            del terms[k]
        out = object.__new__(cls)
        out.terms = terms
        return out

    @classmethod
    def term(cls, c=1, gamma=0, q=0, s=0) -> "ExpMonomial":
        return cls([(c, gamma, q, s)])

    @classmethod
    def zero(cls) -> "ExpMonomial":
        return cls()

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self.terms.values()) and all(
            is_exact(v) for k in self.terms for v in k
        )

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda kv: _sort_key(kv[0])))

    def __len__(self):
        return len(self.terms)

    # linear structure
    def __add__(self, other):
        if not isinstance(other, ExpMonomial):
            if other == 0:
                return self
            other = ExpMonomial.term(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return ExpMonomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return ExpMonomial._raw({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, ExpMonomial):
            return self._product(other)
        other = exact(other)
        if other == 1:
            return self
        return ExpMonomial._raw({k: c * other for k, c in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        scalar = exact(scalar)
        return ExpMonomial({k: c / scalar for k, c in self.terms.items()})

    def _product(self, other):
        out: Dict[Key, object] = {}
        for (g1, q1, s1), c1 in self.terms.items():
            for (g2, q2, s2), c2 in other.terms.items():
                if q1 == 0:
                    q, s = q2, s2
                elif q2 == 0:
                    q, s = q1, s1
                elif s1 == s2:
                    q, s = q1 + q2, s1
                else:
                    raise IncompatibleExponentials(
                        f"exp(-{q1} r^{s1}) * exp(-{q2} r^{s2}) leaves the class"
                    )
                k = _key(g1 + g2, q, s)
                out[k] = out.get(k, 0) + c1 * c2
        return ExpMonomial(out)

    def __eq__(self, other):
        if isinstance(other, ExpMonomial):
            return self.terms == other.terms
        if other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # operators
    def times_power(self, d) -> "ExpMonomial":
        """Multiplication by ``r**d``."""
        d = exact(d)
        if isinstance(d, Fraction):
            return ExpMonomial._raw({(g + d, q, s): c for (g, q, s), c in self.terms.items()})
        return ExpMonomial({(g + d, q, s): c for (g, q, s), c in self.terms.items()})

    def theta(self) -> "ExpMonomial":
        """Apply ``r d/dr`` term by term."""
        out: Dict[Key, object] = {}
        for (g, q, s), c in self.terms.items():
            if g != 0:
                out[(g, q, s)] = out.get((g, q, s), 0) + c * g
            if q != 0:
                k = (g + s, q, s)
                out[k] = out.get(k, 0) - c * (q * s)
        return ExpMonomial._raw(out)

    def kappa(self, alpha, beta) -> "ExpMonomial":
        """``r -> r^beta f(r^alpha)``."""
        alpha, beta = exact(alpha), exact(beta)
        if alpha == 0:
            raise ValueError("kappa needs alpha != 0")
        return ExpMonomial(
            {_key(beta + alpha * g, q, alpha * s): c for (g, q, s), c in self.terms.items()}
        )

    def conj(self) -> "ExpMonomial":
        return ExpMonomial({k: _conj(c) for k, c in self.terms.items()})

    def map_coefficients(self, fn) -> "ExpMonomial":
        return ExpMonomial({k: fn(c) for k, c in self.terms.items()})

    def to_complex(self) -> "ExpMonomial":
        return self.map_coefficients(lambda c: complex(c))

    def max_abs_coeff(self) -> float:
        return max((abs(complex(c)) for c in self.terms.values()), default=0.0)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        total = np.zeros(r.shape, dtype=complex)
        for (g, q, s), c in self.terms.items():
            val = complex(c) * r ** float(g)
            if q != 0:
                val = val * np.exp(-float(q) * r ** float(s))
            total = total + val
        if total.ndim == 0:
            return complex(total)
        return total

    def __repr__(self):
        if not self.terms:
            return "ExpMonomial(0)"
        parts = []
        for (g, q, s), c in self:
            t = f"{c}*r^{g}"
            if q != 0:
                t += f"*exp(-{q}*r^{s})"
            parts.append(t)
        return "ExpMonomial(" + " + ".join(parts) + ")"

    def to_json(self) -> list:
        from .exact import fraction_str

        def num(v):
            if isinstance(v, Fraction):
                return fraction_str(v)
            if isinstance(v, (int, float)):
                return v
            z = complex(v)
            return [z.real, z.imag]

        return [
            {"c": num(c), "gamma": num(g), "q": num(q), "s": num(s)} for (g, q, s), c in self
        ]

    @classmethod
    def from_json(cls, doc) -> "ExpMonomial":
        """Parse a term list ``[{"c", "gamma", "q", "s"}]``.

        Numbers may be ``"p/q"`` strings, ints, floats, or ``[re, im]`` pairs
        for complex coefficients; ``q``/``s`` default to 0.
        """
        terms = []
        for t in doc:
            terms.append((_parse_num(t.get("c", 1)), _parse_num(t.get("gamma", 0)),
                          _parse_num(t.get("q", 0)), _parse_num(t.get("s", 0))))
        return cls(terms)


def _parse_num(v):
    if isinstance(v, list):
        re, im = v
        from .exact import GaussianRational

        if isinstance(re, (str, int)) and isinstance(im, (str, int)):
            return GaussianRational(Fraction(re), Fraction(im))
        return complex(float(re), float(im))
    if isinstance(v, str):
        return Fraction(v)
    return v


def _conj(c):
    if hasattr(c, "conjugate"):
        return c.conjugate()
    return c


def _sort_key(k):
    g, q, s = k
    return (float(q), float(s), float(g))


def apply_theta(f: ExpMonomial) -> ExpMonomial:
    return f.theta()


# ---------------------------------------------------------------------------
# Laguerre polynomials

def _check_gamma_poles(lam, l):
    for j in range(l + 1):
        v = lam + j + 1
        if float(v) <= 0 and float(v) == math.floor(float(v)):
            raise GammaPole(f"Gamma({v}) has a pole (lambda={lam}, l={l})")


def laguerre_poly(lam, l: int, t):
    """Generalized Laguerre polynomial ``L_l^(lam)(t)`` by three-term recurrence.

    ``(n+1) L_{n+1} = (2n + 1 + lam - t) L_n - (n + lam) L_{n-1}``.

    Raises
    ------
    GammaPole
        If ``lam + j + 1`` is a nonpositive integer for some ``0 <= j <= l``.
    """
    if l < 0:
        raise ValueError("degree must be nonnegative")
    _check_gamma_poles(lam, l)
    lam = float(lam)
    t = np.asarray(t, dtype=float)
    prev = np.ones_like(t)
    if l == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + lam - t
    for n in range(1, l):
        prev, cur = cur, ((2 * n + 1 + lam - t) * cur - (n + lam) * prev) / (n + 1)
    return cur if cur.ndim else float(cur)


def laguerre_coefficients(lam, l: int) -> List[object]:
    """Monomial coefficients ``[c_0, ..., c_l]`` of ``L_l^(lam)``.

    ``c_j = (-1)^j / (j! (l-j)!) * (lam+j+1)(lam+j+2)...(lam+l)``; the Gamma
    ratio is a finite product, exact for rational ``lam``.
    """
    _check_gamma_poles(lam, l)
    lam = exact(lam)
    out = []
    for j in range(l + 1):
        prod = Fraction(1) if is_exact(lam) else 1.0
        for i in range(j + 1, l + 1):
            prod = prod * (lam + i)
        sign = -1 if j % 2 else 1
        out.append(prod * sign / (math.factorial(j) * math.factorial(l - j)))
    return out


def laguerre_poly_sum(lam, l: int, t):
    """Direct evaluation of the explicit finite sum (reference route)."""
    coeffs = laguerre_coefficients(lam, l)
    t = np.asarray(t, dtype=float)
    return sum(float(c) * t ** j for j, c in enumerate(coeffs))


# ---------------------------------------------------------------------------
# Quadrature

def _orthonormal_scan(t, n, alpha):
    """Orthonormal Laguerre values at ``t`` for degrees ``0..n``.

    Returns ``(p_n, dp_n, log_sum)`` where ``p_n`` and its derivative are
    scaled by ``exp(-log_scale)`` and ``log_sum = log sum_{j<n} p_j(t)^2``
    is unscaled. Values are rescaled on the fly so large nodes do not
    overflow.
    """
    log_scale = np.full(t.shape, -0.5 * math.lgamma(alpha + 1))
    prev = np.zeros_like(t)
    cur = np.ones_like(t)
    dprev = np.zeros_like(t)
    dcur = np.zeros_like(t)
    ssum = np.zeros_like(t)
    for j in range(n):
        ssum = ssum + cur * cur
        a_j = 2 * j + alpha + 1
        b_next = math.sqrt((j + 1) * (j + 1 + alpha))
        b_j = math.sqrt(j * (j + alpha)) if j else 0.0
        nxt = ((t - a_j) * cur - b_j * prev) / b_next
        dnxt = (cur + (t - a_j) * dcur - b_j * dprev) / b_next
        prev, cur, dprev, dcur = cur, nxt, dcur, dnxt
        big = np.maximum(np.abs(cur), np.abs(prev))
        rescale = big > 1e100
        if np.any(rescale):
            f = np.where(rescale, big, 1.0)
            prev, cur, dprev, dcur = prev / f, cur / f, dprev / f, dcur / f
            ssum = ssum / (f * f)
            log_scale = log_scale + np.log(f)
    return cur, dcur, np.log(ssum) + 2 * log_scale


@lru_cache(maxsize=256)
def gauss_laguerre(n: int, alpha: float) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for ``int_0^inf t^alpha e^-t g(t) dt``.

    Nodes are the eigenvalues of the symmetric Jacobi matrix (diagonal
    ``2j + alpha + 1``, off-diagonal ``sqrt(j (j + alpha))``), i.e. the
    Golub-Welsch construction, refined by Newton steps on the orthonormal
    polynomial. Weights are Christoffel numbers ``1 / sum_{j<n} p_j(t)^2``,
    which keep full relative accuracy at the far nodes where eigenvector
    components do not. Exact for polynomials ``g`` of degree ``<= 2n - 1``.
    """
    if n < 1:
        raise ValueError("need at least one node")
    alpha = float(alpha)
    if alpha <= -1:
        raise ValueError("Gauss-Laguerre needs alpha > -1")
    j = np.arange(n, dtype=float)
    diag = 2 * j + alpha + 1
    off = np.sqrt(j[1:] * (j[1:] + alpha))
    nodes = eigh_tridiagonal(diag, off, eigvals_only=True)
    for _ in range(2):
        p, dp, _ = _orthonormal_scan(nodes, n, alpha)
        nodes = nodes - p / dp
    _, _, log_k = _orthonormal_scan(nodes, n, alpha)
    weights = np.exp(-log_k)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _groups(f: ExpMonomial):
    out: Dict[Tuple[object, object], list] = {}
    for (g, q, s), c in f.terms.items():
        if q < 0:
            raise DivergentIntegrand(f"exp(+{-q} r^{s}) grows")
        out.setdefault((q, s), []).append((g, c))
    return sorted(out.items(), key=lambda kv: (float(kv[0][1]), float(kv[0][0])))


def _t_polynomial(terms, Q, S):
    # r^gamma = Q^(-gamma/S) t^(gamma/S); factor out the smallest t power
    powers = [(g / S, c) for g, c in terms]
    e0 = min(e for e, _ in powers)
    Qf = float(Q)
    return e0, [(float(e - e0), complex(c) * Qf ** (-float(e))) for e, c in powers]


def _evaluate(poly, t):
    vals = np.zeros(t.shape, dtype=complex)
    for shift, c in poly:
        vals += c * (t ** shift if shift else 1.0)
    return vals


def inner_product(f: ExpMonomial, g: ExpMonomial, d, nodes: int = DEFAULT_NODES) -> complex:
    """``int_0^inf f(r) conj(g(r)) r^d dr`` by generalized Gauss-Laguerre quadrature.

    For each pair of exponential classes ``exp(-q r^s)`` in ``f`` and ``g``
    the integral is mapped to ``t = Q r^S`` (``Q`` the combined decay rate)
    and integrated with the Laguerre parameter equal to the lowest power of
    ``t`` in the integrand. ``f`` and ``g`` are evaluated separately at the
    nodes rather than multiplied out, which avoids cancellation in the
    expanded product. Products of basis functions are integrated exactly.

    Raises
    ------
    DivergentIntegrand
        If a product of classes has no decay or is not integrable at 0 or
        infinity.
    IncompatibleExponentials
        If two decaying classes have different exponents ``s``.
    """
    d = exact(d)
    total = 0j
    for (qa, sa), A in _groups(f):
        for (qb, sb), B in _groups(g):
            if qa == 0 and qb == 0:
                raise DivergentIntegrand("product of pure powers has no decay")
            if qa == 0:
                Q, S = qb, sb
            elif qb == 0:
                Q, S = qa, sa
            elif sa == sb:
                Q, S = qa + qb, sa
            else:
                raise IncompatibleExponentials(
                    f"exp(-{qa} r^{sa}) and exp(-{qb} r^{sb}) have different exponents"
                )
            ea, pa = _t_polynomial(A, Q, S)
            eb, pb = _t_polynomial(B, Q, S)
            base = (d + 1) / S
            alpha = float(ea + eb + base) - 1
            if alpha <= -1:
                raise DivergentIntegrand(
                    f"integrand behaves like t^{alpha} e^-t; not integrable at 0 or infinity"
                )
            t, w = gauss_laguerre(nodes, alpha)
            vals = _evaluate(pa, t) * np.conj(_evaluate(pb, t))
            total += float(Q) ** (-float(base)) / abs(float(S)) * complex(np.dot(w, vals))
    return total


def norm(f: ExpMonomial, d, nodes: int = DEFAULT_NODES) -> float:
    return math.sqrt(max(0.0, inner_product(f, f, d, nodes).real))


# ---------------------------------------------------------------------------
# Laguerre bases on both branches

def lambda_param(N: int, index, a, m: int):
    """``(N - 2 + 2<k> + 2m) / a`` (exact for rational inputs)."""
    a = exact(a)
    if a == 0:
        raise ValueError("a must be nonzero")
    return (N - 2 + 2 * exact(index) + 2 * m) / a


@dataclass(frozen=True)
class LaguerreBasisSpec:
    """Parameters of one radial sector.

    ``a`` is the positive deformation parameter; ``sign`` selects the
    ``+a`` (lowest weight) or ``-a`` (highest weight) branch.
    """

    N: int
    index: Fraction
    a: Fraction
    m: int
    sign: int = 1

    def __post_init__(self):
        object.__setattr__(self, "index", exact(self.index))
        object.__setattr__(self, "a", exact(self.a))
        if self.a == 0:
            raise ValueError("a must be nonzero")
        if self.a < 0:
            raise ValueError("LaguerreBasisSpec takes a > 0; use sign=-1 for the -a branch")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.m < 0:
            raise ValueError("m must be nonnegative")

    @property
    def signed_a(self):
        return self.sign * self.a

    @property
    def lam(self):
        """lambda on this branch (negated on the -a branch)."""
        return lambda_param(self.N, self.index, self.signed_a, self.m)

    @property
    def lam_positive(self):
        """lambda_{k,a,m} with the positive ``a``."""
        return lambda_param(self.N, self.index, self.a, self.m)

    @property
    def c(self):
        """``N - 2 + 2<k>``."""
        return self.N - 2 + 2 * self.index

    @property
    def measure_exponent(self):
        """``d`` of the branch measure ``r^d dr``: ``N - 3 + 2<k> +- a``."""
        return self.N - 3 + 2 * self.index + self.signed_a

    def hypothesis_holds(self) -> bool:
        if self.sign > 0:
            return self.lam > -1
        return self.lam < 1

    def check(self):
        if not self.hypothesis_holds():
            rel = "> -1" if self.sign > 0 else "< 1"
            raise BranchHypothesisViolated(
                f"lambda = {self.lam} violates lambda {rel} for "
                f"(N={self.N}, <k>={self.index}, a={self.signed_a}, m={self.m})"
            )
        return self

    def flipped(self) -> "LaguerreBasisSpec":
        return LaguerreBasisSpec(self.N, self.index, self.a, self.m, -self.sign)


def basis_norm_constant(spec: LaguerreBasisSpec, l: int) -> float:
    """``sqrt(2^(lam+1) l! / (a^lam Gamma(lam + l + 1)))`` with ``lam = lambda_{k,a,m}``."""
    lam = float(spec.lam_positive)
    a = float(spec.a)
    log_n2 = (lam + 1) * math.log(2) + math.lgamma(l + 1) - lam * math.log(a) - math.lgamma(lam + l + 1)
    return math.exp(0.5 * log_n2)


def basis_function(spec: LaguerreBasisSpec, l: int, normalized: bool = True) -> ExpMonomial:
    """Basis element ``f_{k,+-a,m;l}`` expanded into the :class:`ExpMonomial` class.

    On the ``+a`` branch: ``n_l r^m L_l^(lam)((2/a) r^a) exp(-r^a / a)``. The
    ``-a`` branch is its image under ``r -> r^-(N-2+2<k>) f(1/r)``. With
    ``normalized=False`` the factor ``n_l`` is omitted and, for rational data,
    every coefficient is exact.

    Raises
    ------
    BranchHypothesisViolated
    """
    spec.check()
    lam = spec.lam_positive
    a = spec.a
    coeffs = laguerre_coefficients(lam, l)
    scale = 2 / a
    terms = []
    for j, c in enumerate(coeffs):
        terms.append((c * scale ** j, spec.m + j * a, 1 / a, a))
    f = ExpMonomial(terms)
    if normalized:
        f = f * basis_norm_constant(spec, l)
    if spec.sign < 0:
        f = f.kappa(-1, -spec.c)
    return f


def basis_value(spec: LaguerreBasisSpec, l: int, r):
    """Pointwise ``f_{k,+-a,m;l}(r)`` via the Laguerre recurrence (float route)."""
    spec.check()
    r = np.asarray(r, dtype=float)
    a = float(spec.a)
    lam = spec.lam_positive
    n = basis_norm_constant(spec, l)
    if spec.sign > 0:
        return n * r ** spec.m * laguerre_poly(lam, l, (2 / a) * r ** a) * np.exp(-r ** a / a)
    c = float(spec.c)
    return (n * r ** (-(c + spec.m)) * laguerre_poly(lam, l, (2 / a) * r ** (-a))
            * np.exp(-r ** (-a) / a))


def gram_matrix(spec: LaguerreBasisSpec, size: int = 8, nodes: int = DEFAULT_NODES) -> np.ndarray:
    """``[<f_i, f_j>]`` for ``i, j < size`` in the branch measure of ``spec``."""
    basis = [basis_function(spec, l) for l in range(size)]
    d = spec.measure_exponent
    G = np.zeros((size, size), dtype=complex)
    for i in range(size):
        for j in range(i, size):
            G[i, j] = inner_product(basis[i], basis[j], d, nodes)
            G[j, i] = np.conj(G[i, j])
    return G
