"""Exact scalars: rationals and Gaussian rationals, plus parsing helpers.

Coefficients throughout the package are plain Python numbers. ``int`` and
``Fraction`` are exact, :class:`GaussianRational` keeps ``p/q + (r/s) i``
exact, and ``float``/``complex`` are used once an irrational constant
(square roots, Gamma values) enters.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from numbers import Number

__all__ = [
    "GaussianRational",
    "I",
    "to_fraction",
    "exact",
    "is_exact",
    "fraction_str",
    "exp_i_pi",
]


class GaussianRational:
    """Complex number with ``Fraction`` real and imaginary parts."""

    __slots__ = ("real", "imag")

    def __init__(self, real=0, imag=0):
        self.real = Fraction(real)
        self.imag = Fraction(imag)

    @classmethod
    def _make(cls, real: Fraction, imag: Fraction) -> "GaussianRational":
        # trusted constructor: both parts already Fractions
        out = object.__new__(cls)
        out.real = real
        out.imag = imag
        return out

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other, 0)
        return None

    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational._make(self.real + other.real, self.imag + other.imag)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return GaussianRational._make(self.real + other, self.imag)
        if isinstance(other, Number):
            return complex(self) + other
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational._make(-self.real, -self.imag)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, Number):
                return complex(self) - other
            return NotImplemented
        return GaussianRational(self.real - o.real, self.imag - o.imag)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, Number):
                return other - complex(self)
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational._make(
                self.real * other.real - self.imag * other.imag,
                self.real * other.imag + self.imag * other.real,
            )
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return GaussianRational._make(self.real * other, self.imag * other)
        if isinstance(other, Number):
            return complex(self) * other
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, Number):
                return complex(self) / other
            return NotImplemented
        den = o.real * o.real + o.imag * o.imag
        if den == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.real * o.real + self.imag * o.imag) / den,
            (self.imag * o.real - self.real * o.imag) / den,
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, Number):
                return other / complex(self)
            return NotImplemented
        return o / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return complex(self) ** n
        if n < 0:
            return 1 / (self ** -n)
        out = GaussianRational(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self):
        return GaussianRational(self.real, -self.imag)

    def __abs__(self):
        return abs(complex(self))

    def __complex__(self):
        return complex(float(self.real), float(self.imag))

    def __bool__(self):
        return bool(self.real) or bool(self.imag)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, Number):
                return complex(self) == other
            return NotImplemented
        return self.real == o.real and self.imag == o.imag

    def __hash__(self):
        if self.imag == 0:
            return hash(self.real)
        return hash((self.real, self.imag))

    def __repr__(self):
        return f"GaussianRational({self.real}, {self.imag})"

    def __str__(self):
        if self.imag == 0:
            return str(self.real)
        if self.real == 0:
            return f"{self.imag}i"
        sign = "+" if self.imag > 0 else "-"
        return f"({self.real}{sign}{abs(self.imag)}i)"


I = GaussianRational(0, 1)


def to_fraction(value) -> Fraction:
    """Parse an exact rational from ``int``, ``Fraction`` or a ``"p/q"`` string.

    Floats are rejected; callers that accept floats must branch before this.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def exact(value):
    """Promote ints to ``Fraction``; leave other numbers untouched."""
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, GaussianRational) and value.imag == 0:
        return value.real
    return value


def is_exact(value) -> bool:
    return isinstance(value, (int, Fraction, GaussianRational)) and not isinstance(value, bool)


def fraction_str(value) -> str:
    """Serialize a rational as ``"p/q"`` (or ``"p"`` for integers)."""
    f = Fraction(value)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def exp_i_pi(x) -> complex:
    """Return ``exp(i*pi*x)`` for rational ``x`` without phase drift.

    ``x`` is reduced modulo 2 in exact arithmetic first; quarter-turn
    multiples come back as exact unit values.
    """
    if isinstance(x, float):
        return cmath.exp(1j * math.pi * x)
    x = Fraction(x) % 2
    exact_turns = {
        Fraction(0): 1 + 0j,
        Fraction(1, 2): 1j,
        Fraction(1): -1 + 0j,
        Fraction(3, 2): -1j,
    }
    if x in exact_turns:
        return exact_turns[x]
    # fold into [-1, 1) so the float argument stays small
    if x >= 1:
        x -= 2
    theta = math.pi * float(x)
    return complex(math.cos(theta), math.sin(theta))
