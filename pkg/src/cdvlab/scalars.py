"""Exact scalars: rationals and quadratic irrationals a + b*sqrt(q).

Every predicate in the package bottoms out in :func:`FieldScalar.sign`,
so this module must never round.  Plain rationals are the ``q is None``
case; a fixed non-square integer ``q`` tags the quadratic extension.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction


def _is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


class FieldTagError(ValueError):
    """Raised when scalars from different quadratic extensions are mixed."""


@dataclass(frozen=True)
class FieldScalar:
    """Exact number a + b*sqrt(q), with a, b rational.

    Canonical form: if b == 0 the tag q is dropped, so plain rationals
    from different call sites compare equal.
    """

    a: Fraction
    b: Fraction = Fraction(0)
    q: int | None = None

    def __post_init__(self):
        if not isinstance(self.a, Fraction):
            object.__setattr__(self, "a", Fraction(self.a))
        if not isinstance(self.b, Fraction):
            object.__setattr__(self, "b", Fraction(self.b))
        if self.b == 0:
            object.__setattr__(self, "q", None)
        elif self.q is None:
            raise FieldTagError("irrational part without a field tag")
        else:
            if self.q <= 0 or _is_square(self.q):
                raise FieldTagError(f"field tag {self.q} must be a positive non-square")

    # -- tag handling -------------------------------------------------

    def _join_tag(self, other: "FieldScalar") -> int | None:
        if self.q is None:
            return other.q
        if other.q is None or other.q == self.q:
            return self.q
        raise FieldTagError(f"mixed field tags {self.q} and {other.q}")

    @staticmethod
    def of(value, q: int | None = None) -> "FieldScalar":
        """Coerce ints, Fractions or FieldScalars; q only used for sqrt parts."""
        if isinstance(value, FieldScalar):
            return value
        return FieldScalar(Fraction(value))

    @staticmethod
    def sqrt_of(q: int) -> "FieldScalar":
        return FieldScalar(Fraction(0), Fraction(1), q)

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        other = FieldScalar.of(other)
        q = self._join_tag(other)
        return FieldScalar(self.a + other.a, self.b + other.b, q)

    __radd__ = __add__

    def __neg__(self):
        return FieldScalar(-self.a, -self.b, self.q)

    def __sub__(self, other):
        return self + (-FieldScalar.of(other))

    def __rsub__(self, other):
        return FieldScalar.of(other) - self

    def __mul__(self, other):
        other = FieldScalar.of(other)
        q = self._join_tag(other)
        if q is None:
            return FieldScalar(self.a * other.a)
        return FieldScalar(
            self.a * other.a + self.b * other.b * q,
            self.a * other.b + self.b * other.a,
            q,
        )

    __rmul__ = __mul__

    def inverse(self) -> "FieldScalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero scalar")
        if self.q is None:
            return FieldScalar(1 / self.a)
        # 1/(a+b*sqrt(q)) = (a-b*sqrt(q)) / (a^2 - b^2 q); denominator is
        # nonzero because sqrt(q) is irrational.
        norm = self.a * self.a - self.b * self.b * self.q
        return FieldScalar(self.a / norm, -self.b / norm, self.q)

    def __truediv__(self, other):
        return self * FieldScalar.of(other).inverse()

    def __rtruediv__(self, other):
        return FieldScalar.of(other) * self.inverse()

    # -- predicates ----------------------------------------------------

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(q) in {-1, 0, +1}."""
        if self.b == 0:
            return (self.a > 0) - (self.a < 0)
        if self.a == 0:
            return 1 if self.b > 0 else -1
        sa = 1 if self.a > 0 else -1
        sb = 1 if self.b > 0 else -1
        if sa == sb:
            return sa
        # opposite signs: compare a^2 against b^2 q; equality would force
        # sqrt(q) rational, impossible for a non-square tag
        lhs = self.a * self.a
        rhs = self.b * self.b * self.q
        if lhs == rhs:
            raise FieldTagError(f"tag {self.q} behaves like a perfect square")
        return sa if lhs > rhs else sb

    def __bool__(self):
        return not self.is_zero()

    def __lt__(self, other):
        return (self - FieldScalar.of(other)).sign() < 0

    def __le__(self, other):
        return (self - FieldScalar.of(other)).sign() <= 0

    def __gt__(self, other):
        return (self - FieldScalar.of(other)).sign() > 0

    def __ge__(self, other):
        return (self - FieldScalar.of(other)).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        val = float(self.a)
        if self.b:
            val += float(self.b) * math.sqrt(self.q)
        return val

    # -- text form (matrix JSON entries) --------------------------------

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        root = f"{abs(self.b)}*sqrt({self.q})" if abs(self.b) != 1 else f"sqrt({self.q})"
        sign = "-" if self.b < 0 else "+"
        if self.a == 0:
            return root if self.b > 0 else f"-{root}"
        return f"{self.a}{sign}{root}"

    def __repr__(self):
        return f"FieldScalar({self})"


_RATIONAL_RE = re.compile(r"[+-]?\d+(?:/\d+)?")
_QUADRATIC_RE = re.compile(
    r"(?:(?P<rat>[+-]?\d+(?:/\d+)?)(?P<sep>[+-]))?"
    r"(?P<lead>[+-])?(?:(?P<coef>\d+(?:/\d+)?)\*)?sqrt\((?P<q>\d+)\)"
)


def parse_scalar(text: str, q_hint: int | None = None) -> FieldScalar:
    """Parse "a/b", "a/b+c/d*sqrt(q)", "sqrt(q)", "-sqrt(q)" forms."""
    s = text.strip().replace(" ", "")
    if _RATIONAL_RE.fullmatch(s):
        return FieldScalar(Fraction(s))
    m = _QUADRATIC_RE.fullmatch(s)
    if not m:
        raise ValueError(f"cannot parse scalar {text!r}")
    a = Fraction(m.group("rat")) if m.group("rat") else Fraction(0)
    q = int(m.group("q"))
    if q_hint is not None and q != q_hint:
        raise FieldTagError(f"entry tag {q} does not match matrix tag {q_hint}")
    coef = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
    if m.group("sep") == "-":
        coef = -coef
    if m.group("lead") == "-":
        coef = -coef
    return FieldScalar(a, coef, q)


ZERO = FieldScalar(Fraction(0))
ONE = FieldScalar(Fraction(1))
