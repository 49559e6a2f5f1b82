"""Quaternion arithmetic, symplectic decomposition and conjugacy classes.

A quaternion ``x = x0 + x1 i + x2 j + x3 k`` is written as ``x = a + j b``
with complex simplex part ``a = x0 + x1 i`` and perplex part
``b = x2 - x3 i``.  The sign of ``b`` is fixed by ``j (c + d i) = c j - d k``,
so ``j b = x2 j + x3 k``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import NamedTuple

from .errors import QuaternionParseError, ZeroDivisor

__all__ = [
    "Quaternion",
    "SymplecticPair",
    "q_mul",
    "q_conj",
    "q_inv",
    "symplectic",
    "from_symplectic",
    "class_rep",
    "same_class",
    "parse_quaternion",
    "format_quaternion",
]

_ZERO_NORM = 1e-300
CLASS_TOL = 1e-10


@dataclass(frozen=True)
class Quaternion:
    x0: float = 0.0
    x1: float = 0.0
    x2: float = 0.0
    x3: float = 0.0

    def __post_init__(self):
        for name in ("x0", "x1", "x2", "x3"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"quaternion component {name} is not finite: {v}")
            # -0.0 -> +0.0 so that equality and hashing are stable
            object.__setattr__(self, name, v + 0.0)

    @classmethod
    def from_complex(cls, z: complex) -> "Quaternion":
        z = complex(z)
        return cls(z.real, z.imag, 0.0, 0.0)

    @classmethod
    def coerce(cls, value) -> "Quaternion":
        if isinstance(value, Quaternion):
            return value
        if isinstance(value, complex):
            return cls.from_complex(value)
        if isinstance(value, (int, float)):
            return cls(float(value))
        parts = tuple(value)
        if len(parts) != 4:
            raise ValueError(f"expected 4 components, got {len(parts)}")
        return cls(*parts)

    @property
    def components(self) -> tuple[float, float, float, float]:
        return (self.x0, self.x1, self.x2, self.x3)

    @property
    def real(self) -> float:
        return self.x0

    @property
    def imag_norm(self) -> float:
        """Length of the pure part ``x1 i + x2 j + x3 k``."""
        return math.hypot(self.x1, self.x2, self.x3)

    def norm2(self) -> float:
        return self.x0 * self.x0 + self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3

    def __abs__(self) -> float:
        return math.hypot(self.x0, self.x1, self.x2, self.x3)

    def conj(self) -> "Quaternion":
        return Quaternion(self.x0, -self.x1, -self.x2, -self.x3)

    def is_real(self, tol: float = 0.0) -> bool:
        return self.imag_norm <= tol

    def __add__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return Quaternion(self.x0 + o.x0, self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return Quaternion(self.x0 - o.x0, self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)

    def __rsub__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return Quaternion(-self.x0, -self.x1, -self.x2, -self.x3)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            s = float(other)
            return Quaternion(self.x0 * s, self.x1 * s, self.x2 * s, self.x3 * s)
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return q_mul(self, o)

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self * other
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return q_mul(o, self)

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            if other == 0:
                raise ZeroDivisor("division of a quaternion by zero")
            return self * (1.0 / float(other))
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return q_mul(self, q_inv(o))

    def __str__(self) -> str:
        return format_quaternion(self)


def _coerce_or_none(value):
    try:
        return Quaternion.coerce(value)
    except (TypeError, ValueError):
        return None


class SymplecticPair(NamedTuple):
    """``x = simplex + j * perplex``."""

    simplex: complex
    perplex: complex


def q_mul(x: Quaternion, y: Quaternion) -> Quaternion:
    """Hamilton product ``x y``."""
    a0, a1, a2, a3 = x.x0, x.x1, x.x2, x.x3
    b0, b1, b2, b3 = y.x0, y.x1, y.x2, y.x3
    return Quaternion(
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    )


def q_conj(x: Quaternion) -> Quaternion:
    return x.conj()


def q_inv(x: Quaternion) -> Quaternion:
    """Return ``x^* / |x|^2``.

    Raises
    ------
    ZeroDivisor
        If ``|x|`` is below 1e-300.
    """
    if abs(x) < _ZERO_NORM:
        raise ZeroDivisor(f"quaternion {x} has no inverse")
    n2 = x.norm2()
    return Quaternion(x.x0 / n2, -x.x1 / n2, -x.x2 / n2, -x.x3 / n2)


def symplectic(x: Quaternion) -> SymplecticPair:
    return SymplecticPair(complex(x.x0, x.x1), complex(x.x2, -x.x3))


def from_symplectic(a: complex, b: complex) -> Quaternion:
    a = complex(a)
    b = complex(b)
    return Quaternion(a.real, a.imag, b.real, -b.imag)


def class_rep(x) -> complex:
    """Complex representative ``Re x + |Im x| i`` of the class ``{q^-1 x q}``.

    The conjugacy class of a quaternion meets the complex plane in a
    conjugate pair; this picks the member with nonnegative imaginary part.
    Complex inputs are accepted and folded the same way.
    """
    if isinstance(x, Quaternion):
        return complex(x.x0, x.imag_norm)
    z = complex(x)
    return complex(z.real, abs(z.imag))


def same_class(x: Quaternion, y: Quaternion, tol: float = CLASS_TOL) -> bool:
    return abs(x.x0 - y.x0) <= tol and abs(x.imag_norm - y.imag_norm) <= tol


_NUMBER = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_TERM = re.compile(
    rf"\s*(?P<sign>[+-])?\s*(?P<num>[+-]?{_NUMBER})?\s*(?P<unit>[ijk])?\s*"
)


def parse_quaternion(text: str) -> Quaternion:
    """Parse ``a0 + a1 i + a2 j + a3 k``.

    Terms may appear in any order and any subset; whitespace is optional,
    ``-`` may replace ``+``, and a bare unit such as ``j`` means ``1 j``.
    """
    comps = [0.0, 0.0, 0.0, 0.0]
    pos = 0
    s = text.strip()
    if not s:
        raise QuaternionParseError("empty quaternion literal")
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos or (m.group("num") is None and m.group("unit") is None):
            raise QuaternionParseError(f"cannot parse quaternion {text!r} at offset {pos}")
        if not first and m.group("sign") is None:
            raise QuaternionParseError(f"missing '+' or '-' before term at offset {pos} in {text!r}")
        value = float(m.group("num")) if m.group("num") is not None else 1.0
        if m.group("sign") == "-":
            value = -value
        idx = " ijk".index(m.group("unit")) if m.group("unit") else 0
        comps[idx] += value
        pos = m.end()
        first = False
    return Quaternion(*comps)


def _fmt(v: float) -> str:
    return format(v, ".17g")


def format_quaternion(x: Quaternion) -> str:
    """Render as ``a0 + a1 i + a2 j + a3 k`` with 17 significant digits."""
    out = _fmt(x.x0)
    for v, unit in ((x.x1, "i"), (x.x2, "j"), (x.x3, "k")):
        sign = "-" if math.copysign(1.0, v) < 0 else "+"
        out += f" {sign} {_fmt(abs(v))} {unit}"
    return out
