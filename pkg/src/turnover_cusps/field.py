"""Exact arithmetic in real quadratic fields Q(sqrt d).

Elements are stored as ``a + b*sqrt(d)`` with rational ``a`` and ``b``.
Rational numbers (``b == 0``) mix freely with any field; two irrational
elements must share the same square-free ``d``.

Exact cosines and sines of rational multiples of a full turn are provided
for the denominators that occur in Euclidean turnover groups (1, 2, 3, 4,
6 and 12).
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational

from .errors import FieldMismatchError, InvalidInputError

__all__ = [
    "QuadraticNumber",
    "ExactAngle",
    "turn",
    "exact_cos_sin",
    "as_exact",
    "is_exact_scalar",
    "format_scalar",
    "parse_scalar",
]

_RATIONAL_D = 1


def _squarefree(d: int) -> bool:
    if d < 2:
        return False
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


class QuadraticNumber:
    """An element ``a + b*sqrt(d)`` of Q(sqrt d).

    >>> s3 = QuadraticNumber(0, 1, 3)
    >>> s3 * s3
    QuadraticNumber('3')
    >>> (1 + s3) / (1 - s3)
    QuadraticNumber('-2-sqrt3')
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d: int = _RATIONAL_D):
        a = Fraction(a)
        b = Fraction(b)
        if b == 0:
            d = _RATIONAL_D
        elif not _squarefree(d):
            raise InvalidInputError(f"d={d} is not a square-free integer > 1")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("QuadraticNumber is immutable")

    @classmethod
    def sqrt(cls, d: int) -> "QuadraticNumber":
        return cls(0, 1, d)

    # -- coercion --------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, QuadraticNumber):
            return other
        if isinstance(other, (int, Rational)):
            return QuadraticNumber(other)
        return NotImplemented

    def _field(self, other: "QuadraticNumber") -> int:
        if self.d == _RATIONAL_D:
            return other.d
        if other.d == _RATIONAL_D or other.d == self.d:
            return self.d
        raise FieldMismatchError(
            f"cannot combine elements of Q(sqrt{self.d}) and Q(sqrt{other.d})"
        )

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        d = self._field(other)
        return QuadraticNumber(self.a + other.a, self.b + other.b, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        d = self._field(other)
        a = self.a * other.a + self.b * other.b * d
        b = self.a * other.b + self.b * other.a
        return QuadraticNumber(a, b, d)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadraticNumber":
        """Galois conjugate ``a - b*sqrt(d)``."""
        return QuadraticNumber(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def inverse(self) -> "QuadraticNumber":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return QuadraticNumber(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = QuadraticNumber(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- predicates and ordering -----------------------------------------

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def __bool__(self):
        return not self.is_zero()

    def sign(self) -> int:
        """Sign of the real number ``a + b*sqrt(d)``, computed exactly."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with d*b^2
        diff = self.a * self.a - self.b * self.b * self.d
        return sa if diff > 0 else (sb if diff < 0 else 0)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            if isinstance(other, float):
                return float(self) == other
            return NotImplemented
        if self.b == 0 and other.b == 0:
            return self.a == other.a
        return self.a == other.a and self.b == other.b and self.d == other.d

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def _cmp(self, other) -> int:
        other = self._coerce(other)
        if other is NotImplemented:
            raise TypeError(f"cannot compare QuadraticNumber with {type(other)!r}")
        return (self - other).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self):
        return f"QuadraticNumber('{format_scalar(self)}')"

    def __str__(self):
        return format_scalar(self)


# ---------------------------------------------------------------------------
# exact angles


class ExactAngle:
    """The angle ``2*pi*fraction`` where ``fraction`` is rational.

    Only angles whose cosine and sine lie in a quadratic field can be
    evaluated exactly; see :func:`exact_cos_sin`.
    """

    __slots__ = ("turns",)

    def __init__(self, turns):
        object.__setattr__(self, "turns", Fraction(turns) % 1)

    def __setattr__(self, name, value):
        raise AttributeError("ExactAngle is immutable")

    def __neg__(self):
        return ExactAngle(-self.turns)

    def __add__(self, other):
        if not isinstance(other, ExactAngle):
            return NotImplemented
        return ExactAngle(self.turns + other.turns)

    def __mul__(self, k: int):
        return ExactAngle(self.turns * k)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, ExactAngle) and self.turns == other.turns

    def __hash__(self):
        return hash(("angle", self.turns))

    def __float__(self):
        return 2 * math.pi * float(self.turns)

    def __repr__(self):
        return f"turn({self.turns.numerator}, {self.turns.denominator})"


def turn(p: int, q: int = 1) -> ExactAngle:
    """Exact angle ``2*pi*p/q``."""
    return ExactAngle(Fraction(p, q))


_HALF = Fraction(1, 2)
_S3 = QuadraticNumber(0, _HALF, 3)  # sqrt(3)/2
_S2 = QuadraticNumber(0, _HALF, 2)  # sqrt(2)/2

# cos, sin for k/12 of a turn
_TWELFTHS = {
    0: (QuadraticNumber(1), QuadraticNumber(0)),
    1: (_S3, QuadraticNumber(_HALF)),
    2: (QuadraticNumber(_HALF), _S3),
    3: (QuadraticNumber(0), QuadraticNumber(1)),
}

_EIGHTHS = {
    1: (_S2, _S2),
}


def _quadrant(k: int, period: int, table) -> tuple:
    q, r = divmod(k % period, period // 4)
    c, s = table[r] if r in table else (None, None)
    if c is None:
        raise KeyError(r)
    # rotate by q quarter turns
    for _ in range(q):
        c, s = -s, c
    return c, s


def exact_cos_sin(angle: ExactAngle) -> tuple[QuadraticNumber, QuadraticNumber]:
    """Exact ``(cos, sin)`` of an :class:`ExactAngle`.

    Supported: multiples of 1/12 of a turn (values in Q(sqrt3)) and odd
    multiples of 1/8 of a turn (values in Q(sqrt2)).
    """
    t = angle.turns
    if (t * 12).denominator == 1:
        return _quadrant(int(t * 12), 12, _TWELFTHS)
    if (t * 8).denominator == 1:
        return _quadrant(int(t * 8), 8, {0: _TWELFTHS[0], **_EIGHTHS})
    raise InvalidInputError(f"no exact quadratic cos/sin for {angle!r}")


# ---------------------------------------------------------------------------
# helpers


def is_exact_scalar(x) -> bool:
    return isinstance(x, (QuadraticNumber, int, Rational)) and not isinstance(x, bool)


def as_exact(x) -> QuadraticNumber:
    if isinstance(x, QuadraticNumber):
        return x
    if isinstance(x, (int, Rational)):
        return QuadraticNumber(x)
    if isinstance(x, str):
        return parse_scalar(x)
    raise InvalidInputError(f"{x!r} is not an exact scalar")


def _fmt_fraction(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def format_scalar(x) -> str:
    """Serialize an exact scalar as ``"p/q+r/s*sqrtd"``; floats as repr."""
    if isinstance(x, float):
        return repr(x)
    x = as_exact(x)
    if x.b == 0:
        return _fmt_fraction(x.a)
    root = f"sqrt{x.d}"
    b = x.b
    if b == 1:
        tail = root
    elif b == -1:
        tail = "-" + root
    else:
        tail = f"{_fmt_fraction(b)}*{root}"
    if x.a == 0:
        return tail
    sep = "" if tail.startswith("-") else "+"
    return f"{_fmt_fraction(x.a)}{sep}{tail}"


_RAT = r"[+-]?\d+(?:/\d+)?"


def parse_scalar(text: str) -> QuadraticNumber:
    """Inverse of :func:`format_scalar` for exact values.

    Accepts forms such as ``"3"``, ``"-1/2"``, ``"sqrt3"``, ``"-sqrt3"``,
    ``"1/2*sqrt3"``, ``"-1/2+1/2*sqrt3"`` and ``"1-sqrt2"``.
    """
    s = text.replace(" ", "")
    if not s:
        raise InvalidInputError("empty scalar string")
    if "sqrt" not in s:
        try:
            return QuadraticNumber(Fraction(s))
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInputError(f"cannot parse scalar {text!r}") from exc
    head, _, d = s.rpartition("sqrt")
    if not d.isdigit():
        raise InvalidInputError(f"cannot parse scalar {text!r}")
    if head.endswith("*"):
        head = head[:-1]
    # split head into rational part and coefficient of the root
    m = re.match(rf"^({_RAT})?([+-](?:\d+(?:/\d+)?)?)?$", head)
    if head in ("", "+"):
        a, b = Fraction(0), Fraction(1)
    elif head == "-":
        a, b = Fraction(0), Fraction(-1)
    elif m and m.group(2):
        a = Fraction(m.group(1)) if m.group(1) else Fraction(0)
        coef = m.group(2)
        b = Fraction(1 if coef == "+" else -1) if coef in "+-" else Fraction(coef)
    elif m and m.group(1):
        # the whole head is the coefficient of the root
        a, b = Fraction(0), Fraction(m.group(1))
    else:
        raise InvalidInputError(f"cannot parse scalar {text!r}")
    return QuadraticNumber(a, b, int(d))
