"""Polynomials over Z and Q, exact root counting, and arithmetic in Z[beta].

``is_hyperbolic`` never computes an eigenvalue: every unit-modulus root of the
characteristic polynomial ``f`` is also a root of its reversal, so all of them
live in ``gcd(f, f*)``.  That factor is self-reciprocal, and the substitution
``x = t + 1/t`` folds the unit circle onto the real segment ``[-2, 2]``, where a
Sturm sequence counts roots exactly.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd, isqrt
from typing import Sequence

from .errors import (
    DissimilarError,
    FieldMismatchError,
    NotMonicError,
    SingularError,
)
from .exact_linalg import IntMatrix, charpoly, det, int_kernel
from .poly import Poly, as_poly, parse_poly

__all__ = [
    "Poly",
    "parse_poly",
    "poly_gcd",
    "squarefree_part",
    "sturm_sequence",
    "count_real_roots",
    "is_hyperbolic",
    "unit_circle_factor",
    "is_irreducible",
    "factor_mod_p",
    "OrderElement",
    "order_mul",
    "order_norm",
    "similar_over_Q",
    "rational_invariant_factors",
    "minimal_polynomial",
]


def poly_gcd(p, q) -> Poly:
    """Primitive integer gcd with positive leading coefficient."""
    a, b = as_poly(p), as_poly(q)
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd of two zero polynomials is undefined")
    while not b.is_zero():
        a, b = b, a % b
    return a.primitive()


def squarefree_part(p) -> Poly:
    p = as_poly(p)
    if p.degree < 1:
        return p.primitive()
    return (p // poly_gcd(p, p.derivative())).primitive()


# ---------------------------------------------------------------- Sturm


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        r = seq[-2] % seq[-1]
        seq.append(-r)
    seq.pop()
    return seq


def _sign_changes(seq: Sequence[Poly], x: Fraction) -> int:
    signs = [s(x) for s in seq]
    signs = [v for v in signs if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def count_real_roots(p, lo, hi) -> int:
    """Distinct real roots of ``p`` in the closed interval ``[lo, hi]``."""
    p = squarefree_part(as_poly(p))
    if p.degree < 1:
        return 0
    lo, hi = Fraction(lo), Fraction(hi)
    seq = sturm_sequence(p)
    n = _sign_changes(seq, lo) - _sign_changes(seq, hi)
    if p(lo) == 0:
        n += 1
    return n


def _fold_reciprocal(g: Poly) -> Poly:
    """``h`` with ``g(t) = t^m h(t + 1/t)`` for palindromic ``g`` of degree ``2m``."""
    m = g.degree // 2
    x = Poly.t()
    h = Poly.const(g[m])
    prev, cur = Poly.const(2), x
    for j in range(1, m + 1):
        h = h + g[m + j] * cur
        prev, cur = cur, x * cur - prev
    return h


def unit_circle_factor(f) -> Poly:
    """``gcd(f, f*)``: the factor of ``f`` holding every unit-modulus root."""
    f = as_poly(f)
    return poly_gcd(f, f.reversal())


def has_unit_circle_root(f) -> bool:
    g = squarefree_part(unit_circle_factor(f))
    if g.degree < 1:
        return False
    if g(1) == 0 or g(-1) == 0:
        return True
    if g.reversal() != g:
        if g.reversal() == -g:
            g = -g
        else:
            raise ArithmeticError("gcd(f, f*) is not self-reciprocal")
    h = _fold_reciprocal(g)
    return count_real_roots(h, -2, 2) > 0


def is_hyperbolic(A: IntMatrix) -> bool:
    if det(A) == 0:
        raise SingularError("A is singular: hyperbolicity needs A invertible over Q")
    return not has_unit_circle_root(charpoly(A))


# ---------------------------------------------------------------- factoring mod p


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], b: list[int], p: int) -> list[int]:
    a = [x % p for x in a]
    _trim(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    while len(a) - 1 >= db and a:
        c = a[-1] * inv % p
        shift = len(a) - 1 - db
        for j, bj in enumerate(b):
            a[shift + j] = (a[shift + j] - c * bj) % p
        _trim(a)
    return a


def _pdivmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = [x % p for x in a]
    _trim(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - db, 1)
    while a and len(a) - 1 >= db:
        c = a[-1] * inv % p
        shift = len(a) - 1 - db
        q[shift] = c
        for j, bj in enumerate(b):
            a[shift + j] = (a[shift + j] - c * bj) % p
        _trim(a)
    return _trim(q), a


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([x % p for x in out])


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    while b:
        a, b = b, _pmod(a, b, p)
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [x * inv % p for x in a]


def _ppowmod(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(base, mod, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), mod, p)
        base = _pmod(_pmul(base, base, p), mod, p)
        e >>= 1
    return result


def _psub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factor_mod_p(f, p: int, seed: int = 0) -> list[list[int]]:
    """Monic irreducible factors of a squarefree monic ``f`` over ``F_p`` (``p`` odd)."""
    f = as_poly(f)
    rng = random.Random(seed)
    rest = [c % p for c in f.coeffs]
    x = [0, 1]
    h = x
    buckets: list[tuple[list[int], int]] = []
    d = 0
    while len(rest) - 1 >= 2 * (d + 1):
        d += 1
        h = _ppowmod(h, p, rest, p)
        g = _pgcd(rest, _psub(h, x, p), p)
        if len(g) > 1:
            buckets.append((g, d))
            rest, _ = _pdivmod(rest, g, p)
            h = _pmod(h, rest, p)
    if len(rest) > 1:
        buckets.append((rest, len(rest) - 1))

    out: list[list[int]] = []

    def split(g: list[int], d: int):
        if len(g) - 1 == d:
            out.append(g)
            return
        while True:
            a = [rng.randrange(p) for _ in range(len(g) - 1)]
            _trim(a)
            if len(a) < 2:
                continue
            b = _psub(_ppowmod(a, (p**d - 1) // 2, g, p), [1], p)
            c = _pgcd(g, b, p)
            if 1 < len(c) < len(g):
                split(c, d)
                split(_pdivmod(g, c, p)[0], d)
                return

    for g, d in buckets:
        split(g, d)
    return out


def _symmetric_lift(a: list[int], p: int) -> Poly:
    half = p // 2
    return Poly(x - p if x > half else x for x in a)


def is_irreducible(f) -> bool:
    """Irreducibility over Z of a monic integer polynomial.

    Factor modulo a prime exceeding twice the Mignotte coefficient bound,
    then try every product of at most half of the modular factors as an
    integer divisor.  Exponential in the number of modular factors, which
    is fine for the small degrees used here.
    """
    f = as_poly(f)
    if not f.is_integral() or not f.is_monic():
        raise NotMonicError(f"{f} is not a monic integer polynomial")
    n = f.degree
    if n < 1:
        raise ValueError("degree must be at least 1")
    if n == 1:
        return True
    if poly_gcd(f, f.derivative()).degree > 0:
        return False
    norm2 = isqrt(sum(c * c for c in f.coeffs)) + 1
    bound = comb(n - 1, (n - 1) // 2) * norm2
    p = 2 * bound + 1
    while True:
        p += 1
        if not _is_prime(p):
            continue
        fp = [c % p for c in f.coeffs]
        if len(_pgcd(fp, _trim([c % p for c in f.derivative().coeffs]), p)) == 1:
            break
    factors = factor_mod_p(f, p)
    r = len(factors)
    if r == 1:
        return True
    for size in range(1, r // 2 + 1):
        for combo in itertools.combinations(range(r), size):
            prod = [1]
            for i in combo:
                prod = _pmul(prod, factors[i], p)
            g = _symmetric_lift(prod, p)
            if g.degree >= 1 and (f % g).is_zero():
                return False
    return True


# ---------------------------------------------------------------- Z[beta]


@dataclass(frozen=True)
class OrderElement:
    """``num(beta) / den`` in ``Q(beta)``, ``beta`` a root of the monic ``f``.

    ``num`` always has exactly ``deg f`` coordinates in the power basis;
    ``den > 0`` and ``gcd(den, content(num)) == 1``.
    """

    f: tuple[int, ...]
    num: tuple[int, ...]
    den: int = 1

    def __post_init__(self):
        n = len(self.f) - 1
        fp = Poly(self.f)
        if not fp.is_monic() or not fp.is_integral():
            raise NotMonicError("defining polynomial must be monic integral")
        num = Poly(self.num)
        if num.degree >= n:
            num = num % fp
        coeffs = [num[i] for i in range(n)]
        den = self.den
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            den, coeffs = -den, [-c for c in coeffs]
        g = den
        for c in coeffs:
            g = gcd(g, c)
        if not any(coeffs):
            den, g = 1, 1
        object.__setattr__(self, "num", tuple(c // g for c in coeffs))
        object.__setattr__(self, "den", den // g)
        object.__setattr__(self, "f", tuple(self.f))

    @classmethod
    def from_coords(cls, f, coords: Sequence, den: int = 1) -> "OrderElement":
        """Element from power-basis coordinates, which may be Fractions."""
        fr = [Fraction(c) / den for c in coords]
        d = 1
        for c in fr:
            d = d * c.denominator // gcd(d, c.denominator)
        return cls(tuple(as_poly(f).coeffs), tuple(int(c * d) for c in fr), d)

    @classmethod
    def beta(cls, f) -> "OrderElement":
        f = as_poly(f)
        return cls(f.coeffs, (0, 1))

    @classmethod
    def one(cls, f) -> "OrderElement":
        return cls(as_poly(f).coeffs, (1,))

    @property
    def degree(self) -> int:
        return len(self.f) - 1

    def coords(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def _check(self, other: "OrderElement"):
        if self.f != other.f:
            raise FieldMismatchError("elements live over different defining polynomials")

    def __mul__(self, other):
        if isinstance(other, int):
            return OrderElement(self.f, tuple(c * other for c in self.num), self.den)
        self._check(other)
        prod = (Poly(self.num) * Poly(other.num)) % Poly(self.f)
        return OrderElement(self.f, prod.coeffs, self.den * other.den)

    __rmul__ = __mul__

    def __add__(self, other: "OrderElement"):
        self._check(other)
        num = [a * other.den + b * self.den for a, b in zip(self.num, other.num)]
        return OrderElement(self.f, tuple(num), self.den * other.den)

    def __neg__(self):
        return OrderElement(self.f, tuple(-c for c in self.num), self.den)

    def __sub__(self, other: "OrderElement"):
        return self + (-other)

    def numerator_matrix(self) -> IntMatrix:
        """Integer matrix ``M`` with ``coords(x * self) = coords(x) @ M / den``."""
        fp = Poly(self.f)
        n = self.degree
        rows = []
        cur = Poly(self.num)
        for _ in range(n):
            rows.append([cur[j] for j in range(n)])
            cur = (cur * Poly.t()) % fp
        return IntMatrix(rows)

    def norm(self) -> Fraction:
        return Fraction(det(self.numerator_matrix()), self.den**self.degree)

    def is_zero(self) -> bool:
        return not any(self.num)

    def inverse(self) -> "OrderElement":
        if self.is_zero():
            raise ZeroDivisionError("zero has no inverse")
        from .exact_linalg import inverse_fraction

        inv = inverse_fraction(self.numerator_matrix())
        # 1 * self^{-1}: coords(1) @ M^{-1} * den
        return OrderElement.from_coords(self.f, [x * self.den for x in inv[0]])

    def to_json(self) -> dict:
        return {"num": list(self.num), "den": self.den}


def order_mul(a: OrderElement, b: OrderElement) -> OrderElement:
    return a * b


def order_norm(a: OrderElement) -> Fraction:
    return a.norm()


# ---------------------------------------------------------------- similarity


def _poly_smith(mat: list[list[Poly]]) -> list[Poly]:
    """Monic invariant factors of a square matrix over ``Q[t]``."""
    n = len(mat)
    M = [row[:] for row in mat]

    def size(p: Poly) -> int:
        return p.degree

    for t in range(n):
        while True:
            best = None
            for i in range(t, n):
                for j in range(t, n):
                    if not M[i][j].is_zero() and (best is None or size(M[i][j]) < best[0]):
                        best = (size(M[i][j]), i, j)
            if best is None:
                return [M[i][i].monic() if not M[i][i].is_zero() else Poly() for i in range(n)]
            _, bi, bj = best
            M[t], M[bi] = M[bi], M[t]
            for row in M:
                row[t], row[bj] = row[bj], row[t]
            piv = M[t][t]
            clean = True
            for i in range(t + 1, n):
                if not M[i][t].is_zero():
                    q = M[i][t] // piv
                    M[i] = [a - q * b for a, b in zip(M[i], M[t])]
                    if not M[i][t].is_zero():
                        clean = False
            for j in range(t + 1, n):
                if not M[t][j].is_zero():
                    q = M[t][j] // piv
                    for row in M:
                        row[j] = row[j] - q * row[t]
                    if not M[t][j].is_zero():
                        clean = False
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, n) for j in range(t + 1, n) if not (M[i][j] % piv).is_zero()),
                None,
            )
            if bad is None:
                break
            M[t] = [a + b for a, b in zip(M[t], M[bad])]
    return [M[i][i].monic() if not M[i][i].is_zero() else Poly() for i in range(n)]


def rational_invariant_factors(A: IntMatrix) -> tuple[Poly, ...]:
    """Nontrivial invariant factors of ``tI - A`` over ``Q[t]``, ascending."""
    n = A.n
    t = Poly.t()
    mat = [[(t if i == j else Poly()) - A[i, j] for j in range(n)] for i in range(n)]
    facs = _poly_smith(mat)
    return tuple(f for f in facs if f.degree > 0)


def similar_over_Q(A: IntMatrix, B: IntMatrix) -> bool:
    if A.n != B.n:
        raise DissimilarError("matrices of different dimension are never similar")
    if charpoly(A) != charpoly(B):
        return False
    return rational_invariant_factors(A) == rational_invariant_factors(B)


def minimal_polynomial(A: IntMatrix) -> Poly:
    """Least-degree monic ``m`` with ``m(A) = 0``.

    Finds the first linear dependency among ``I, A, A^2, ...`` flattened to
    vectors, via an integer kernel.
    """
    n = A.n
    powers = [IntMatrix.identity(n)]
    for d in range(1, n + 1):
        powers.append(powers[-1] @ A)
        rows = [[x for r in P.rows for x in r] for P in powers]
        K = int_kernel(rows)
        if K.rank:
            v = K.basis[0]
            m = Poly(v)
            if m.lc < 0:
                m = -m
            if not m.is_monic():
                raise ArithmeticError("minimal polynomial of an integer matrix must be monic")
            return m
    raise ArithmeticError("no dependency found up to degree n")
