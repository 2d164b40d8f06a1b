"""Reduced root systems, reflections, finite Coxeter groups and weights.

Roots with ``int``/``Fraction``/``"p/q"`` coordinates are kept exact; a root
system containing any float coordinate is stored in floating point and all
membership tests use an absolute tolerance of ``FLOAT_TOL``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .exact import fraction_str, to_fraction

__all__ = [
    "RootSystemError",
    "ZeroRoot",
    "ReflectionClosureViolation",
    "ProportionalRootViolation",
    "GroupTooLarge",
    "OrbitConstancyViolation",
    "RootSystem",
    "MultiplicityFunction",
    "reflect",
    "reflection_matrix",
    "validate_root_system",
    "coxeter_group",
    "root_orbits",
    "weight_wk",
    "weight_wka",
    "preset",
    "load_root_data",
    "dump_root_data",
]

FLOAT_TOL = 1e-9
DEFAULT_MAX_GROUP_ORDER = 10_000

Vector = Tuple
Matrix = Tuple[Tuple, ...]


class RootSystemError(ValueError):
    pass


class ZeroRoot(RootSystemError):
    pass


class ReflectionClosureViolation(RootSystemError):
    pass


class ProportionalRootViolation(RootSystemError):
    pass


class GroupTooLarge(RootSystemError):
    pass


class OrbitConstancyViolation(RootSystemError):
    pass


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def _is_zero_vec(v, exact):
    if exact:
        return all(c == 0 for c in v)
    return all(abs(c) <= FLOAT_TOL for c in v)


def _close(u, v, exact):
    if exact:
        return tuple(u) == tuple(v)
    return all(abs(a - b) <= FLOAT_TOL for a, b in zip(u, v))


def reflect(alpha: Sequence, x: Sequence) -> tuple:
    """Reflect ``x`` in the hyperplane orthogonal to ``alpha``.

    Returns ``x - 2<alpha, x>/|alpha|^2 * alpha``; exact when both inputs are.
    """
    n2 = _dot(alpha, alpha)
    if n2 == 0:
        raise ZeroRoot("cannot reflect in a zero vector")
    c = 2 * _dot(alpha, x) / n2
    return tuple(xi - c * ai for xi, ai in zip(x, alpha))


def reflection_matrix(alpha: Sequence) -> Matrix:
    n = len(alpha)
    n2 = _dot(alpha, alpha)
    if n2 == 0:
        raise ZeroRoot("cannot reflect in a zero vector")
    one = Fraction(1) if isinstance(n2, (int, Fraction)) else 1.0
    return tuple(
        tuple((one if i == j else 0 * one) - 2 * alpha[i] * alpha[j] / n2 for j in range(n))
        for i in range(n)
    )


def _matmul(A: Matrix, B: Matrix) -> Matrix:
    n = len(A)
    return tuple(
        tuple(sum(A[i][l] * B[l][j] for l in range(n)) for j in range(n)) for i in range(n)
    )


def _matvec(A: Matrix, x) -> tuple:
    return tuple(sum(a * b for a, b in zip(row, x)) for row in A)


def _transpose(A: Matrix) -> Matrix:
    return tuple(zip(*A))


def _lex_positive(v, exact):
    for c in v:
        if exact:
            if c != 0:
                return c > 0
        elif abs(c) > FLOAT_TOL:
            return c > 0
    return False


@dataclass(frozen=True)
class RootSystem:
    """A validated reduced root system (see :func:`validate_root_system`)."""

    dimension: int
    roots: Tuple[Vector, ...]
    positive_roots: Tuple[Vector, ...]
    exact: bool = True

    def index_of(self, v) -> Optional[int]:
        for i, r in enumerate(self.roots):
            if _close(r, v, self.exact):
                return i
        return None

    def contains(self, v) -> bool:
        return self.index_of(v) is not None


def _coerce_vector(v, exact):
    if exact:
        return tuple(to_fraction(c) for c in v)
    return tuple(float(Fraction(c)) if isinstance(c, str) else float(c) for c in v)


def _needs_float(rows) -> bool:
    return any(isinstance(c, float) for v in rows for c in v)


def validate_root_system(roots: Sequence[Sequence], dimension: Optional[int] = None) -> RootSystem:
    """Check axioms R0-R2 and split off a positive subsystem.

    The positive roots are those whose first nonzero coordinate is positive.

    Raises
    ------
    ZeroRoot, ReflectionClosureViolation, ProportionalRootViolation
    """
    rows = [list(v) for v in roots]
    if dimension is None:
        if not rows:
            raise RootSystemError("dimension is required for an empty root system")
        dimension = len(rows[0])
    if any(len(v) != dimension for v in rows):
        raise RootSystemError(f"all roots must have length {dimension}")
    exact = not _needs_float(rows)
    vecs: List[Vector] = []
    for v in rows:
        cv = _coerce_vector(v, exact)
        if not any(_close(cv, w, exact) for w in vecs):
            vecs.append(cv)

    for v in vecs:
        if _is_zero_vec(v, exact):
            raise ZeroRoot(f"zero vector {v} in root system")

    for a in vecs:
        for b in vecs:
            rb = reflect(a, b)
            if not any(_close(rb, w, exact) for w in vecs):
                raise ReflectionClosureViolation(
                    f"r_{_fmt(a)}({_fmt(b)}) = {_fmt(rb)} is not a root"
                )

    for i, a in enumerate(vecs):
        for b in vecs[i + 1:]:
            if _proportional(a, b, exact):
                if not _close(b, tuple(-c for c in a), exact):
                    raise ProportionalRootViolation(
                        f"roots {_fmt(a)} and {_fmt(b)} are proportional but not opposite"
                    )

    positive = tuple(v for v in vecs if _lex_positive(v, exact))
    return RootSystem(dimension, tuple(vecs), positive, exact)


def _proportional(a, b, exact):
    # |<a,b>|^2 == |a|^2 |b|^2 exactly when a, b are parallel
    lhs = _dot(a, b) ** 2
    rhs = _dot(a, a) * _dot(b, b)
    if exact:
        return lhs == rhs
    return abs(lhs - rhs) <= FLOAT_TOL * max(1.0, rhs)


def _fmt(v):
    return "(" + ", ".join(str(c) for c in v) + ")"


def _matrix_key(M, exact):
    if exact:
        return M
    return tuple(round(c, 7) + 0.0 for row in M for c in row)


def coxeter_group(R: RootSystem, max_order: int = DEFAULT_MAX_GROUP_ORDER) -> List[Matrix]:
    """Generate the finite Coxeter group of ``R`` as a list of matrices.

    Breadth-first closure of the reflections ``r_alpha`` (alpha positive)
    under composition. The identity comes first and the order is
    deterministic.

    Raises
    ------
    GroupTooLarge
        If more than ``max_order`` elements are produced.
    """
    n = R.dimension
    one = Fraction(1) if R.exact else 1.0
    identity = tuple(tuple(one if i == j else 0 * one for j in range(n)) for i in range(n))
    gens = [reflection_matrix(a) for a in R.positive_roots]
    elements = [identity]
    seen = {_matrix_key(identity, R.exact)}
    frontier = [identity]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = _matmul(s, g)
                key = _matrix_key(h, R.exact)
                if key in seen:
                    continue
                seen.add(key)
                elements.append(h)
                nxt.append(h)
                if len(elements) > max_order:
                    raise GroupTooLarge(f"Coxeter group exceeds {max_order} elements")
        frontier = nxt
    return elements


def root_orbits(R: RootSystem, group: Optional[List[Matrix]] = None) -> List[List[int]]:
    """Partition root indices into Coxeter-group orbits (ordered by first index)."""
    group = coxeter_group(R) if group is None else group
    assigned: Dict[int, int] = {}
    orbits: List[List[int]] = []
    for i, r in enumerate(R.roots):
        if i in assigned:
            continue
        orbit = set()
        for g in group:
            j = R.index_of(_matvec(g, r))
            if j is None:
                raise ReflectionClosureViolation("group element does not permute the roots")
            orbit.add(j)
        for j in orbit:
            assigned[j] = len(orbits)
        orbits.append(sorted(orbit))
    return orbits


def permutes_roots(R: RootSystem, g: Matrix) -> bool:
    images = [R.index_of(_matvec(g, r)) for r in R.roots]
    return None not in images and len(set(images)) == len(R.roots)


@dataclass(frozen=True)
class MultiplicityFunction:
    """Coxeter-orbit-constant multiplicity ``alpha -> k_alpha``.

    ``values[i]`` is ``k`` on ``R.roots[i]``. Construct through
    :meth:`constant`, :meth:`from_orbits` or :meth:`from_root_values`, all of
    which validate orbit constancy.
    """

    root_system: RootSystem
    values: Tuple[Fraction, ...]
    orbit_values: Tuple[Tuple[Vector, Fraction], ...] = field(default=())

    @property
    def index(self) -> Fraction:
        """Sum of ``k_alpha`` over the positive roots."""
        R = self.root_system
        return sum((self.values[R.index_of(a)] for a in R.positive_roots), Fraction(0))

    def k_of(self, alpha) -> Fraction:
        i = self.root_system.index_of(alpha)
        if i is None:
            raise KeyError(f"{alpha} is not a root")
        return self.values[i]

    def positive_pairs(self) -> List[Tuple[Vector, Fraction]]:
        return [(a, self.k_of(a)) for a in self.root_system.positive_roots]

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for v in self.values)

    @classmethod
    def constant(cls, R: RootSystem, k) -> "MultiplicityFunction":
        k = to_fraction(k)
        orbits = root_orbits(R)
        return cls(R, tuple(k for _ in R.roots), tuple((R.roots[o[0]], k) for o in orbits))

    @classmethod
    def from_root_values(cls, R: RootSystem, values: Sequence) -> "MultiplicityFunction":
        values = tuple(to_fraction(v) for v in values)
        if len(values) != len(R.roots):
            raise RootSystemError("one multiplicity value per root is required")
        orbits = root_orbits(R)
        for orb in orbits:
            ks = {values[j] for j in orb}
            if len(ks) != 1:
                raise OrbitConstancyViolation(
                    f"multiplicity takes values {sorted(ks)} on one orbit of {_fmt(R.roots[orb[0]])}"
                )
        return cls(R, values, tuple((R.roots[o[0]], values[o[0]]) for o in orbits))

    @classmethod
    def from_orbits(cls, R: RootSystem, assignments: Sequence[Tuple[Sequence, object]]) -> "MultiplicityFunction":
        """Assign ``k`` per orbit from ``(orbit_root, k)`` pairs.

        Every orbit must be covered, and two pairs landing in one orbit must
        agree.
        """
        orbits = root_orbits(R)
        where = {j: n for n, orb in enumerate(orbits) for j in orb}
        chosen: Dict[int, Fraction] = {}
        for root, k in assignments:
            idx = R.index_of(_coerce_vector(root, R.exact))
            if idx is None:
                raise RootSystemError(f"orbit_root {list(root)} is not a root")
            k = to_fraction(k)
            n = where[idx]
            if n in chosen and chosen[n] != k:
                raise OrbitConstancyViolation(
                    f"conflicting multiplicities {chosen[n]} and {k} on one orbit"
                )
            chosen[n] = k
        missing = [n for n in range(len(orbits)) if n not in chosen]
        if missing:
            reps = ", ".join(_fmt(R.roots[orbits[n][0]]) for n in missing)
            raise RootSystemError(f"no multiplicity given for orbit(s) of {reps}")
        values = tuple(chosen[where[j]] for j in range(len(R.roots)))
        return cls(R, values, tuple((R.roots[o[0]], chosen[n]) for n, o in enumerate(orbits)))


def weight_wk(k: MultiplicityFunction, omega: Sequence[float]) -> float:
    """Spherical weight ``prod_{alpha>0} |<alpha, omega>|^(2 k_alpha)``."""
    omega = [float(c) for c in omega]
    if abs(math.sqrt(sum(c * c for c in omega)) - 1.0) > 1e-12:
        raise ValueError("omega must be a unit vector")
    return _weight_product(k, omega)


def _weight_product(k, x):
    out = 1.0
    for alpha, ka in k.positive_pairs():
        if ka == 0:
            continue
        out *= abs(sum(float(a) * c for a, c in zip(alpha, x))) ** (2 * float(ka))
    return out


def weight_wka(k: MultiplicityFunction, a, x: Sequence[float]) -> float:
    """Weight ``|x|^(a-2) prod_{alpha>0} |<alpha, x>|^(2 k_alpha)`` on ``R^N \\ {0}``."""
    x = [float(c) for c in x]
    norm = math.sqrt(sum(c * c for c in x))
    if norm == 0:
        raise ValueError("the weight w_{k,a} is not defined at the origin")
    return norm ** (float(a) - 2.0) * _weight_product(k, x)


def _dihedral(p: int) -> List[List]:
    if p == 2:
        return [[1, 0], [-1, 0], [0, 1], [0, -1]]
    if p == 4:
        return [[1, 0], [-1, 0], [0, 1], [0, -1], [1, 1], [-1, -1], [1, -1], [-1, 1]]
    out = []
    for j in range(2 * p):
        t = math.pi * j / p
        out.append([math.cos(t), math.sin(t)])
    return out


def preset(name: str) -> RootSystem:
    """Named root systems: ``A1``, ``A1xA1``, ``A1xA1xA1`` (alias ``A1^3``), ``I2(p)``.

    ``I2(2)`` and ``I2(4)`` use rational coordinates; other dihedral systems
    are float-backed unit vectors at angles ``j*pi/p``.
    """
    key = name.replace(" ", "")
    if key == "A1":
        return validate_root_system([[1], [-1]])
    if key == "A1xA1":
        return validate_root_system(_dihedral(2))
    if key in ("A1xA1xA1", "A1^3"):
        rows = []
        for i in range(3):
            e = [0, 0, 0]
            e[i] = 1
            rows += [e, [-c for c in e]]
        return validate_root_system(rows)
    if key.startswith("I2(") and key.endswith(")"):
        p = int(key[3:-1])
        if p < 1:
            raise RootSystemError("I2(p) needs p >= 1")
        if p == 1:
            return validate_root_system([[1, 0], [-1, 0]])
        return validate_root_system(_dihedral(p))
    raise RootSystemError(f"unknown root system preset {name!r}")


def load_root_data(doc) -> Tuple[RootSystem, Optional[MultiplicityFunction]]:
    """Read ``{"dimension", "roots", "multiplicity"}`` (dict or JSON text).

    ``multiplicity`` is a list of ``{"orbit_root": [...], "k": "p/q"}``; it may
    be omitted, in which case only the root system is returned.
    """
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    R = validate_root_system(doc["roots"], doc.get("dimension"))
    mult = doc.get("multiplicity")
    if mult is None:
        return R, None
    k = MultiplicityFunction.from_orbits(R, [(m["orbit_root"], m["k"]) for m in mult])
    return R, k


def dump_root_data(R: RootSystem, k: Optional[MultiplicityFunction] = None) -> dict:
    def coord(c):
        return fraction_str(c) if R.exact else c

    doc = {"dimension": R.dimension, "roots": [[coord(c) for c in v] for v in R.roots]}
    if k is not None:
        doc["multiplicity"] = [
            {"orbit_root": [coord(c) for c in rep], "k": fraction_str(kv)}
            for rep, kv in k.orbit_values
        ]
    return doc
