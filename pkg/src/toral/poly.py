"""Dense univariate polynomials over Z and Q.

Coefficients are stored in ascending degree order with trailing zeros
stripped, so the zero polynomial is the empty tuple.  Integer coefficients
stay Python ``int``; anything rational is a :class:`fractions.Fraction`,
normalized back to ``int`` whenever the denominator is 1.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence, Union

from .errors import ParseError

Number = Union[int, Fraction]


def _norm(c) -> Number:
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, int):
        return int(c)
    raise TypeError(f"unsupported coefficient {c!r}")


class Poly:
    """Immutable polynomial in ``t`` with exact coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        cs = [_norm(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple = tuple(cs)

    # construction helpers
    @classmethod
    def t(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def const(cls, c: Number) -> "Poly":
        return cls((c,))

    @classmethod
    def t_power_minus_one(cls, k: int) -> "Poly":
        """``t^k - 1``."""
        if k < 1:
            raise ValueError("k must be positive")
        return cls([-1] + [0] * (k - 1) + [1])

    # basic queries
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Number:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs)

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int) -> Number:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly.const(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("Poly", self.coeffs))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    # arithmetic
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative exponent")
        result, base = Poly.const(1), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lc = other.lc
        if self.degree < dq:
            return Poly(), self
        quot = [0] * (self.degree - dq + 1)
        for i in range(self.degree - dq, -1, -1):
            c = rem[i + dq]
            if c == 0:
                continue
            q = c // lc if isinstance(c, int) and isinstance(lc, int) and c % lc == 0 else Fraction(c) / lc
            quot[i] = q
            for j, b in enumerate(other.coeffs):
                rem[i + j] -= q * b
        return Poly(quot), Poly(rem[:dq])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("division is not exact")
        return q

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)

    def reversal(self, degree: int | None = None) -> "Poly":
        """``t^d p(1/t)`` with ``d`` defaulting to ``deg p``."""
        d = self.degree if degree is None else degree
        cs = list(self.coeffs) + [0] * (d + 1 - len(self.coeffs))
        return Poly(reversed(cs[: d + 1]))

    def content(self) -> Number:
        """Positive rational content; ``p / content`` is primitive integral."""
        if not self.coeffs:
            return 0
        nums = reduce(gcd, (Fraction(c).numerator for c in self.coeffs))
        dens = reduce(lambda a, b: a * b // gcd(a, b), (Fraction(c).denominator for c in self.coeffs))
        return _norm(Fraction(abs(nums), dens))

    def primitive(self) -> "Poly":
        """Primitive integer polynomial with positive leading coefficient."""
        if not self.coeffs:
            return self
        c = self.content()
        p = Poly(Fraction(x) / c for x in self.coeffs)
        return -p if p.lc < 0 else p

    def monic(self) -> "Poly":
        lc = self.lc
        return Poly(Fraction(c) / lc for c in self.coeffs)

    # formatting / parsing
    def __repr__(self) -> str:
        return f"Poly({list(self.coeffs)!r})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = str(a)
            else:
                mono = "t" if i == 1 else f"t^{i}"
                body = mono if a == 1 else f"{a}{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def to_list(self) -> list:
        return [c if isinstance(c, int) else str(c) for c in self.coeffs]


_TERM = re.compile(r"([+-]?)\s*(\d*)\s*(\*?\s*t(?:\s*\^\s*(\d+))?)?")


def parse_poly(text: str) -> Poly:
    """Parse ``"1 -3 1"`` (ascending coefficients) or ``"poly:t^2-3t+1"``.

    A bare string containing ``t`` is treated as surface syntax as well.
    """
    s = text.strip()
    if not s:
        raise ParseError("empty polynomial")
    if s.startswith("poly:"):
        return _parse_surface(s[5:])
    if "t" in s:
        return _parse_surface(s)
    try:
        return Poly(int(tok) for tok in s.replace(",", " ").split())
    except ValueError as exc:
        raise ParseError(f"bad polynomial coefficients: {text!r}") from exc


def _parse_surface(s: str) -> Poly:
    s = s.replace(" ", "")
    if not s:
        raise ParseError("empty polynomial")
    coeffs: dict[int, int] = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot parse polynomial near {s[pos:]!r}")
        sign, num, tpart, exp = m.groups()
        if not num and not tpart:
            raise ParseError(f"cannot parse polynomial near {s[pos:]!r}")
        c = int(num) if num else 1
        if sign == "-":
            c = -c
        e = (int(exp) if exp else 1) if tpart else 0
        coeffs[e] = coeffs.get(e, 0) + c
        pos = m.end()
    deg = max(coeffs)
    return Poly(coeffs.get(i, 0) for i in range(deg + 1))


def as_poly(p: Union[Poly, Sequence[Number]]) -> Poly:
    return p if isinstance(p, Poly) else Poly(p)
