"""Exact rational functions in one variable ``t`` with integer coefficients.

:class:`RatSeries` carries Poincaré, Hilbert and intersection-Betti series.
Numerator and denominator are coefficient lists (index = power of ``t``);
values are kept reduced with a positive constant term in the denominator,
so equality is structural after normalization.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence, Union

from .errors import StructuralError

Coeffs = tuple[Fraction, ...]


def _trim(c: Iterable[Fraction | int]) -> list[Fraction]:
    out = [Fraction(x) for x in c]
    while out and out[-1] == 0:
        out.pop()
    return out


def _padd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    return _trim((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def _pneg(a: Sequence[Fraction]) -> list[Fraction]:
    return [-x for x in a]


def _pmul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _pdivmod(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, y in enumerate(b):
            a[i + shift] -= c * y
        a = _trim(a)
    return _trim(q), a


def _pgcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    a, b = _trim(a), _trim(b)
    while b:
        _, r = _pdivmod(a, b)
        a, b = b, r
    return a


def _integerize(num: list[Fraction], den: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    coeffs = num + den
    d = reduce(lcm, (c.denominator for c in coeffs), 1)
    g = reduce(gcd, (int(c * d) for c in coeffs), 0) or 1
    s = Fraction(d, g)
    if den and den[0] < 0:
        s = -s
    elif den and den[0] == 0:
        first = next(x for x in den if x)
        if first < 0:
            s = -s
    return [c * s for c in num], [c * s for c in den]


class RatSeries:
    """A rational function ``num(t)/den(t)`` viewed as a power series in ``t``."""

    __slots__ = ("num", "den")

    def __init__(self, num: Iterable[Fraction | int], den: Iterable[Fraction | int] = (1,)) -> None:
        n, d = _trim(num), _trim(den)
        if not d:
            raise ZeroDivisionError("zero denominator")
        if not n:
            self.num: Coeffs = ()
            self.den: Coeffs = (Fraction(1),)
            return
        g = _pgcd(n, d)
        if len(g) > 1:
            n, _ = _pdivmod(n, g)
            d, _ = _pdivmod(d, g)
        n, d = _integerize(n, d)
        self.num = tuple(n)
        self.den = tuple(d)

    # ---- constructors ---------------------------------------------------
    @classmethod
    def poly(cls, coeffs: Iterable[int | Fraction]) -> "RatSeries":
        return cls(coeffs, (1,))

    @classmethod
    def monomial(cls, power: int, coeff: int | Fraction = 1) -> "RatSeries":
        return cls([0] * power + [coeff])

    @classmethod
    def one_minus(cls, power: int) -> "RatSeries":
        """The polynomial ``1 - t^power``."""
        return cls([1] + [0] * (power - 1) + [-1])

    @classmethod
    def geometric(cls, power: int) -> "RatSeries":
        """``1/(1 - t^power)``."""
        return cls([1], [1] + [0] * (power - 1) + [-1])

    @classmethod
    def product_denominator(cls, num: Iterable[int | Fraction], powers: Iterable[int]) -> "RatSeries":
        den: list[Fraction] = [Fraction(1)]
        for p in powers:
            den = _pmul(den, [Fraction(1)] + [Fraction(0)] * (p - 1) + [Fraction(-1)])
        return cls(num, den)

    @classmethod
    def parse(cls, text: str) -> "RatSeries":
        """Parse text such as ``"1 + t^2 + t^14/(1-t^2)"``."""
        from . import expr

        return _eval_series(expr.parse_expr(text))

    # ---- arithmetic -----------------------------------------------------
    @staticmethod
    def _coerce(x: object) -> "RatSeries":
        if isinstance(x, RatSeries):
            return x
        if isinstance(x, (int, Fraction)):
            return RatSeries([x])
        raise StructuralError(f"cannot combine RatSeries with {x!r}")

    def __add__(self, other: object) -> "RatSeries":
        o = self._coerce(other)
        return RatSeries(_padd(_pmul(self.num, o.den), _pmul(o.num, self.den)), _pmul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self) -> "RatSeries":
        return RatSeries(_pneg(self.num), self.den)

    def __sub__(self, other: object) -> "RatSeries":
        return self + (-self._coerce(other))

    def __rsub__(self, other: object) -> "RatSeries":
        return self._coerce(other) - self

    def __mul__(self, other: object) -> "RatSeries":
        o = self._coerce(other)
        return RatSeries(_pmul(self.num, o.num), _pmul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "RatSeries":
        o = self._coerce(other)
        if not o.num:
            raise ZeroDivisionError("division by the zero series")
        return RatSeries(_pmul(self.num, o.den), _pmul(self.den, o.num))

    def __rtruediv__(self, other: object) -> "RatSeries":
        return self._coerce(other) / self

    def __pow__(self, n: int) -> "RatSeries":
        out = RatSeries([1])
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RatSeries([other])
        if not isinstance(other, RatSeries):
            return NotImplemented
        return _pmul(self.num, other.den) == _pmul(other.num, self.den)

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    # ---- queries ----------------------------------------------------------
    def is_polynomial(self) -> bool:
        return len(self.den) == 1

    def expand(self, order: int) -> list[Fraction]:
        """Power-series coefficients of ``t^0 .. t^order``."""
        den = list(self.den)
        start = next((i for i, x in enumerate(den) if x), None)
        if start is None:
            raise ZeroDivisionError("zero denominator")
        if start:
            if any(self.num[i] for i in range(min(start, len(self.num)))):
                raise StructuralError("series has a pole at t = 0")
            num = list(self.num[start:])
            den = den[start:]
        else:
            num = list(self.num)
        out: list[Fraction] = []
        for k in range(order + 1):
            acc = num[k] if k < len(num) else Fraction(0)
            for j in range(1, min(k, len(den) - 1) + 1):
                acc -= den[j] * out[k - j]
            out.append(acc / den[0])
        return out

    def expand_int(self, order: int) -> list[int]:
        coeffs = self.expand(order)
        if any(c.denominator != 1 for c in coeffs):
            raise StructuralError("series has non-integral coefficients")
        return [int(c) for c in coeffs]

    def substitute_power(self, k: int) -> "RatSeries":
        """Replace ``t`` by ``t^k``."""

        def spread(c: Sequence[Fraction]) -> list[Fraction]:
            out = [Fraction(0)] * ((len(c) - 1) * k + 1) if c else []
            for i, x in enumerate(c):
                out[i * k] = x
            return out

        return RatSeries(spread(self.num), spread(self.den))

    def halve(self) -> "RatSeries":
        """Replace ``t^2`` by ``t``; requires an even series."""
        if any(x for i, x in enumerate(self.num) if i % 2) or any(x for i, x in enumerate(self.den) if i % 2):
            raise StructuralError(f"series {self} is not even in t")
        return RatSeries(self.num[::2], self.den[::2])

    def double(self) -> "RatSeries":
        """Replace ``t`` by ``t^2``."""
        return self.substitute_power(2)

    def as_polynomial(self) -> list[Fraction]:
        if not self.is_polynomial():
            raise StructuralError(f"{self} is not a polynomial")
        return [c / self.den[0] for c in self.num]

    # ---- printing ---------------------------------------------------------
    @staticmethod
    def _poly_str(c: Sequence[Fraction], var: str = "t") -> str:
        parts: list[str] = []
        for i, x in enumerate(c):
            if not x:
                continue
            mag = abs(x)
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            if not parts:
                parts.append(body if x > 0 else f"-{body}")
            else:
                parts.append(("+ " if x > 0 else "- ") + body)
        return " ".join(parts) if parts else "0"

    def __str__(self) -> str:
        if self.is_polynomial():
            return self._poly_str([c / self.den[0] for c in self.num])
        return f"({self._poly_str(self.num)})/({self._poly_str(self.den)})"

    def __repr__(self) -> str:
        return f"RatSeries({self})"


def _eval_series(node: object) -> RatSeries:
    from . import expr

    if isinstance(node, expr.Num):
        return RatSeries([node.value])
    if isinstance(node, expr.Name):
        if node.name != "t":
            raise StructuralError(f"series text may only use the variable t, not {node.name!r}")
        return RatSeries([0, 1])
    if isinstance(node, expr.Neg):
        return -_eval_series(node.operand)
    if isinstance(node, expr.BinOp):
        left = _eval_series(node.left)
        if node.op == "^":
            right = node.right
            if not isinstance(right, expr.Num) or right.value.denominator != 1 or right.value < 0:
                raise StructuralError("series exponents must be nonnegative integers")
            return left ** int(right.value)
        right_s = _eval_series(node.right)
        return {"+": left.__add__, "-": left.__sub__, "*": left.__mul__, "/": left.__truediv__}[node.op](right_s)
    raise StructuralError(f"unsupported construct in series text: {node}")


SeriesLike = Union[RatSeries, int, Fraction]
