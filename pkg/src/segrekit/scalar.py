"""Exact arithmetic in the Gaussian rationals Q(i).

A value is stored as ``(a + b*i) / d`` with integers ``a, b, d``, ``d > 0`` and
``gcd(a, b, d) == 1``. That normal form is unique, so structural equality is
field equality. Python integers are unbounded, so nothing ever overflows.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from numbers import Rational


class GaussianRational:
    __slots__ = ("_a", "_b", "_d")

    def __init__(self, re: int | Fraction | GaussianRational = 0, im: int | Fraction = 0) -> None:
        if isinstance(re, GaussianRational):
            if im:
                raise TypeError("imaginary part given twice")
            self._a, self._b, self._d = re._a, re._b, re._d
            return
        re = Fraction(re)
        im = Fraction(im)
        d = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        a = re.numerator * (d // re.denominator)
        b = im.numerator * (d // im.denominator)
        self._set(a, b, d)

    def _set(self, a: int, b: int, d: int) -> None:
        g = gcd(gcd(a, b), d)
        if g != 1:
            a //= g
            b //= g
            d //= g
        self._a, self._b, self._d = a, b, d

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> GaussianRational:
        obj = cls.__new__(cls)
        if d < 0:
            a, b, d = -a, -b, -d
        obj._set(a, b, d)
        return obj

    # -- accessors -------------------------------------------------------

    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    def is_zero(self) -> bool:
        return self._a == 0 and self._b == 0

    def is_real(self) -> bool:
        return self._b == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- field operations ------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if self._d == other._d:
            return GaussianRational._raw(self._a + other._a, self._b + other._b, self._d)
        return GaussianRational._raw(
            self._a * other._d + other._a * self._d,
            self._b * other._d + other._b * self._d,
            self._d * other._d,
        )

    __radd__ = __add__

    def __neg__(self) -> GaussianRational:
        obj = GaussianRational.__new__(GaussianRational)
        obj._a, obj._b, obj._d = -self._a, -self._b, self._d
        return obj

    def __pos__(self) -> GaussianRational:
        return self

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a1, b1, a2, b2 = self._a, self._b, other._a, other._b
        if b1 == 0 and b2 == 0:
            return GaussianRational._raw(a1 * a2, 0, self._d * other._d)
        return GaussianRational._raw(a1 * a2 - b1 * b2, a1 * b2 + a2 * b1, self._d * other._d)

    __rmul__ = __mul__

    def invert(self) -> GaussianRational:
        """Multiplicative inverse; raises ``ZeroDivisionError`` on zero."""
        if self.is_zero():
            raise ZeroDivisionError("GaussianRational zero has no inverse")
        # d / (a + bi) = d (a - bi) / (a^2 + b^2)
        norm = self._a * self._a + self._b * self._b
        return GaussianRational._raw(self._d * self._a, -self._d * self._b, norm)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self * other.invert()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other * self.invert()

    def __pow__(self, k: int) -> GaussianRational:
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.invert() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> GaussianRational:
        obj = GaussianRational.__new__(GaussianRational)
        obj._a, obj._b, obj._d = self._a, -self._b, self._d
        return obj

    # -- comparison / hashing -------------------------------------------

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self._a == other._a and self._b == other._b and self._d == other._d

    def __hash__(self) -> int:
        if self._b == 0:
            return hash(Fraction(self._a, self._d))
        return hash((self._a, self._b, self._d))

    # -- text form -------------------------------------------------------

    def __repr__(self) -> str:
        return f"GaussianRational({str(self)!r})"

    def __str__(self) -> str:
        re, im = self.re, self.im
        if im == 0:
            return _fmt_rational(re)
        if re == 0:
            return _fmt_imag(im)
        sign = "-" if im < 0 else "+"
        return f"{_fmt_rational(re)} {sign} {_fmt_imag(abs(im))}"

    @classmethod
    def parse(cls, text: str) -> GaussianRational:
        """Parse the canonical text form, e.g. ``1/2 - 1/3*i`` or ``-i``."""
        m = _SCALAR_RE.fullmatch(text.strip())
        if m is None:
            raise ValueError(f"not a Gaussian rational: {text!r}")
        re_part, sign, im_part = m.group("re"), m.group("sign"), m.group("im")
        if re_part is not None and im_part is None:
            # a lone "i" / "2*i" is matched as the real group by the first branch
            if re_part.endswith("i"):
                return cls(0, _parse_imag(re_part))
            return cls(Fraction(re_part))
        im = _parse_imag(im_part)
        if sign == "-":
            im = -im
        return cls(Fraction(re_part), im)


def _coerce(x) -> GaussianRational | None:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Rational)):
        return GaussianRational(Fraction(x))
    if isinstance(x, complex):
        raise TypeError("floating-point complex values are not exact")
    return None


def _fmt_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _fmt_imag(q: Fraction) -> str:
    if q == 1:
        return "i"
    if q == -1:
        return "-i"
    return f"{_fmt_rational(q)}*i"


def _parse_imag(text: str) -> Fraction:
    text = text.replace(" ", "")
    if text in ("i", "+i"):
        return Fraction(1)
    if text == "-i":
        return Fraction(-1)
    if not text.endswith("*i"):
        raise ValueError(f"bad imaginary part {text!r}")
    return Fraction(text[:-2])


_NUM = r"-?\d+(?:/\d+)?"
_SCALAR_RE = re.compile(
    rf"(?:(?P<re>{_NUM}|-?(?:\d+(?:/\d+)?\*)?i)"
    rf"(?:\s*(?P<sign>[+-])\s*(?P<im>(?:\d+(?:/\d+)?\*)?i))?)"
)

ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)
