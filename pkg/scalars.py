"""
标量塔
精确有理数使用 fractions.Fraction；二次扩域 ℚ(√d) 的元素为 QuadraticNumber；浮点为 float。
三者在矩阵计算中共用同一套域运算（+ − × ÷、相等、零判定）。
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Optional, Tuple, Union

from errors import GraphFormatError, RigidityError

Rational = Union[int, Fraction]


def _is_square_free(d: int) -> bool:
    if d < 2:
        return False
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


@total_ordering
class QuadraticNumber:
    """a + b·√d，a、b 为有理数，d 为大于 1 的无平方因子整数"""

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, a: Rational = 0, b: Rational = 0, d: int = 2) -> None:
        if not _is_square_free(d):
            raise RigidityError(f"d = {d} 不是大于 1 的无平方因子整数")
        self._a = Fraction(a)
        self._b = Fraction(b)
        self._d = d

    @property
    def a(self) -> Fraction:
        return self._a

    @property
    def b(self) -> Fraction:
        return self._b

    @property
    def d(self) -> int:
        return self._d

    def __repr__(self) -> str:
        return f"QuadraticNumber({self._a}, {self._b}, {self._d})"

    def __str__(self) -> str:
        if self._b == 0:
            return str(self._a)
        return f"{self._a}{'+' if self._b > 0 else '-'}{abs(self._b)}√{self._d}"

    def _coerce(self, other) -> Optional[QuadraticNumber]:
        if isinstance(other, QuadraticNumber):
            if other.d != self._d:
                raise RigidityError(f"不能混合 ℚ(√{self._d}) 与 ℚ(√{other.d}) 的元素")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticNumber(other, 0, self._d)
        return None

    def is_rational(self) -> bool:
        return self._b == 0

    def conjugate(self) -> QuadraticNumber:
        return QuadraticNumber(self._a, -self._b, self._d)

    @property
    def norm(self) -> Fraction:
        return self._a * self._a - self._d * self._b * self._b

    def sign(self) -> int:
        """精确符号：比较 a² 与 d·b²"""
        sa = (self._a > 0) - (self._a < 0)
        sb = (self._b > 0) - (self._b < 0)
        if sb == 0 or sa == sb:
            return sa if sa != 0 else sb
        if sa == 0:
            return sb
        return sa if self.norm > 0 else sb

    def __bool__(self) -> bool:
        return self._a != 0 or self._b != 0

    def __eq__(self, other) -> bool:
        try:
            o = self._coerce(other)
        except RigidityError:
            return False
        if o is None:
            return NotImplemented
        return self._a == o.a and self._b == o.b

    def __hash__(self) -> int:
        if self._b == 0:
            return hash(self._a)
        return hash((self._a, self._b, self._d))

    def __lt__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __add__(self, other) -> QuadraticNumber:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticNumber(self._a + o.a, self._b + o.b, self._d)

    def __radd__(self, other) -> QuadraticNumber:
        return self + other

    def __neg__(self) -> QuadraticNumber:
        return QuadraticNumber(-self._a, -self._b, self._d)

    def __sub__(self, other) -> QuadraticNumber:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticNumber(self._a - o.a, self._b - o.b, self._d)

    def __rsub__(self, other) -> QuadraticNumber:
        return (-self) + other

    def __mul__(self, other) -> QuadraticNumber:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticNumber(
            self._a * o.a + self._d * self._b * o.b,
            self._a * o.b + self._b * o.a,
            self._d,
        )

    def __rmul__(self, other) -> QuadraticNumber:
        return self * other

    def inverse(self) -> QuadraticNumber:
        """(a − b√d) / (a² − d·b²)"""
        if not self:
            raise ZeroDivisionError("QuadraticNumber 除以零")
        norm = self.norm
        return QuadraticNumber(self._a / norm, -self._b / norm, self._d)

    def __truediv__(self, other) -> QuadraticNumber:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other) -> QuadraticNumber:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, exponent: int) -> QuadraticNumber:
        if exponent < 0:
            return self.inverse() ** -exponent
        result = QuadraticNumber(1, 0, self._d)
        base = self
        while exponent > 0:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __abs__(self) -> QuadraticNumber:
        return -self if self.sign() < 0 else self

    def __float__(self) -> float:
        return float(self._a) + float(self._b) * math.sqrt(self._d)


Scalar = Union[Fraction, QuadraticNumber, float]


def sqrt_of(d: int) -> QuadraticNumber:
    return QuadraticNumber(0, 1, d)


# ---------------------------------------------------------------------------
# 字面量
# ---------------------------------------------------------------------------

def _parse_rational(text: str) -> Fraction:
    if text in ("", "+"):
        return Fraction(1)
    if text == "-":
        return Fraction(-1)
    return Fraction(text)


def parse_scalar(text: str, d: Optional[int] = None) -> Union[Fraction, QuadraticNumber]:
    """
    解析 "p/q"（有理数）或 "p/q+r/s*s"（ℚ(√d) 元素，s² = d）。
    给定 d 时结果一律转为 QuadraticNumber。
    """
    raw = str(text)
    body = raw.replace(" ", "")
    if body.endswith("s") and d is None:
        raise GraphFormatError(f"标量 {raw!r} 含 s，但没有指定 d")
    try:
        if not body.endswith("s"):
            value = Fraction(body)
            return QuadraticNumber(value, 0, d) if d is not None else value
        coefficient = body[:-1]
        if coefficient.endswith("*"):
            coefficient = coefficient[:-1]
        split = max(coefficient.rfind("+"), coefficient.rfind("-"))
        if split > 0:
            a = Fraction(coefficient[:split])
            b = _parse_rational(coefficient[split:])
        else:
            a = Fraction(0)
            b = _parse_rational(coefficient)
        return QuadraticNumber(a, b, d)
    except (ValueError, ZeroDivisionError) as e:
        raise GraphFormatError(f"无法解析标量 {raw!r}: {e}")


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_scalar(value: Scalar) -> str:
    if isinstance(value, QuadraticNumber):
        if value.b == 0:
            return format_rational(value.a)
        coefficient = format_rational(abs(value.b))
        if value.a == 0:
            return f"{'-' if value.b < 0 else ''}{coefficient}*s"
        return f"{format_rational(value.a)}{'+' if value.b > 0 else '-'}{coefficient}*s"
    if isinstance(value, float):
        return repr(value)
    return format_rational(value)


# ---------------------------------------------------------------------------
# 域判定与转换
# ---------------------------------------------------------------------------

def field_of(values: Iterable[Scalar]) -> Tuple[str, Optional[int]]:
    """返回 ("rational", None) / ("quadratic", d) / ("f64", None)；混合二次域时报错"""
    kind, d = "rational", None
    for value in values:
        if isinstance(value, float):
            return "f64", None
        if isinstance(value, QuadraticNumber):
            if d is not None and value.d != d:
                raise RigidityError(f"不能混合 ℚ(√{d}) 与 ℚ(√{value.d})")
            kind, d = "quadratic", value.d
    return kind, d


def coerce(value: Scalar, kind: str, d: Optional[int] = None) -> Scalar:
    if kind == "f64":
        return float(value)
    if kind == "quadratic":
        if isinstance(value, QuadraticNumber):
            return value
        return QuadraticNumber(value, 0, d or 2)
    if isinstance(value, QuadraticNumber):
        if not value.is_rational():
            raise RigidityError(f"{value} 不是有理数")
        return value.a
    return Fraction(value)


def is_zero(value: Scalar, tolerance: float = 0.0) -> bool:
    if isinstance(value, float):
        return abs(value) <= tolerance
    return not value
