"""Generalized Bowen-Franks groups ``Z^n / Z^n g(A)`` and their module structure.

A :class:`BFGroup` stores the quotient in Smith coordinates.  If
``U g(A) V = D`` then ``[m] -> m V`` identifies the quotient with
``Z/d_1 + ... + Z/d_r`` (only the ``d_i > 1`` are kept), and the induced
action of ``A`` becomes the matrix ``V^-1 A V`` with column ``j`` read modulo
``d_j``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import prod
from typing import Iterator, Optional, Sequence

from .errors import (
    DissimilarError,
    NotHyperbolicError,
    SingularError,
    TooManyPointsError,
)
from .exact_linalg import (
    IntMatrix,
    Lattice,
    det,
    int_kernel,
    inverse_fraction,
    matrix_power,
    poly_eval_matrix,
    snf,
)
from .poly import Poly, as_poly
from .polynum import is_hyperbolic, similar_over_Q

DEFAULT_MODULE_CAP = 10**4
DEFAULT_MAX_K = 12
DEFAULT_POINT_CAP = 10**5


@dataclass(frozen=True)
class InvariantFactors:
    """Nontrivial divisor chain ``d_1 | d_2 | ...`` with every ``d_i > 1``."""

    divisors: tuple[int, ...] = ()

    def __post_init__(self):
        ds = tuple(int(d) for d in self.divisors)
        if any(d <= 1 for d in ds):
            raise ValueError("invariant factors must exceed 1")
        if any(b % a for a, b in zip(ds, ds[1:])):
            raise ValueError("not a divisibility chain")
        object.__setattr__(self, "divisors", ds)

    @classmethod
    def from_diagonal(cls, diag: Sequence[int]) -> "InvariantFactors":
        return cls(tuple(d for d in diag if d > 1))

    @property
    def order(self) -> int:
        return prod(self.divisors)

    def __iter__(self):
        return iter(self.divisors)

    def __len__(self) -> int:
        return len(self.divisors)

    def to_list(self) -> list[int]:
        return list(self.divisors)


@dataclass(frozen=True, eq=False)
class BFGroup:
    """``Z^n / Z^n g(A)`` as a finite abelian group with the induced ``A`` action."""

    g: Poly
    A: IntMatrix
    relations: Lattice
    factors: InvariantFactors
    action: tuple[tuple[int, ...], ...]
    _V: IntMatrix = field(repr=False)
    _V_inv: IntMatrix = field(repr=False)
    _nontrivial: tuple[int, ...] = field(repr=False)

    @property
    def order(self) -> int:
        return self.factors.order

    @property
    def moduli(self) -> tuple[int, ...]:
        return self.factors.divisors

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def n(self) -> int:
        return self.A.n

    def coords(self, m: Sequence[int]) -> tuple[int, ...]:
        """Canonical residue vector of the coset ``m + relations``."""
        x = self._V.vecmul(m)
        return tuple(x[i] % d for i, d in zip(self._nontrivial, self.moduli))

    def lift(self, x: Sequence[int]) -> tuple[int, ...]:
        """An integer vector whose coset has residue vector ``x``."""
        y = [0] * self.n
        for i, v in zip(self._nontrivial, x):
            y[i] = v
        return self._V_inv.vecmul(y)

    def act(self, x: Sequence[int]) -> tuple[int, ...]:
        """``[m] -> [m A]`` in residue coordinates."""
        return apply_hom(x, self.action, self.moduli)

    def add(self, x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.moduli))

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def generators(self) -> list[tuple[int, ...]]:
        r = self.rank
        return [tuple(int(i == j) for j in range(r)) for i in range(r)]

    def elements(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*(range(d) for d in self.moduli))


def apply_hom(x: Sequence[int], Y: Sequence[Sequence[int]], moduli: Sequence[int]) -> tuple[int, ...]:
    """Row vector ``x`` times ``Y`` with column ``j`` reduced mod ``moduli[j]``."""
    return tuple(
        sum(x[i] * Y[i][j] for i in range(len(x))) % d for j, d in enumerate(moduli)
    )


def bf_group(A: IntMatrix, g) -> BFGroup:
    g = as_poly(g)
    M = poly_eval_matrix(g, A)
    if det(M) == 0:
        raise SingularError(f"g = {g} is not in Q^a for this A: det g(A) = 0")
    s = snf(M)
    diag = s.diagonal
    nontrivial = tuple(i for i, d in enumerate(diag) if d > 1)
    factors = InvariantFactors(tuple(diag[i] for i in nontrivial))
    W = s.V_inv @ A @ s.V
    action = tuple(
        tuple(W[i, j] % diag[j] for j in nontrivial) for i in nontrivial
    )
    return BFGroup(
        g=g,
        A=A,
        relations=Lattice.row_span(M),
        factors=factors,
        action=action,
        _V=s.V,
        _V_inv=s.V_inv,
        _nontrivial=nontrivial,
    )


@lru_cache(maxsize=256)
def _hyperbolic_cached(A: IntMatrix) -> bool:
    return is_hyperbolic(A)


def require_hyperbolic(A: IntMatrix, name: str = "A") -> None:
    if not _hyperbolic_cached(A):
        raise NotHyperbolicError(
            f"{name} not hyperbolic: eigenvalue of modulus 1 detected "
            "(hypothesis: hyperbolic toral automorphism)"
        )


@lru_cache(maxsize=256)
def _similar_cached(A: IntMatrix, B: IntMatrix) -> bool:
    return similar_over_Q(A, B)


def require_similar(A: IntMatrix, B: IntMatrix) -> None:
    if A.n != B.n or not _similar_cached(A, B):
        raise DissimilarError("A and B are not similar over Q (hypothesis: AP = PB for some P in GL_n(Q))")


def bf_k(A: IntMatrix, k: int) -> BFGroup:
    """Principal group ``Z^n / Z^n (A^k - I)``."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    require_hyperbolic(A)
    return bf_group(A, Poly.t_power_minus_one(k))


def per_count(A: IntMatrix, k: int) -> int:
    """Number of points of period dividing ``k``: ``|det(A^k - I)|``."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    require_hyperbolic(A)
    return abs(det(matrix_power(A, k) - IntMatrix.identity(A.n)))


def enumerate_periodic_points(A: IntMatrix, k: int, cap: int = DEFAULT_POINT_CAP) -> list[tuple[Fraction, ...]]:
    """All ``x`` in ``[0,1)^n`` (column vectors) with ``(A^k - I) x`` integral.

    Built from the Smith form of ``M = A^k - I``: with ``U M V = D`` the
    solutions are ``x = V y mod 1`` with ``y_i`` in ``(1/d_i) Z``.
    """
    require_hyperbolic(A)
    n = A.n
    M = matrix_power(A, k) - IntMatrix.identity(n)
    count = abs(det(M))
    if count > cap:
        raise TooManyPointsError(f"{count} periodic points exceed the enumeration cap {cap}")
    s = snf(M)
    diag = s.diagonal
    V = s.V
    # work with numerators over the common denominator L = d_n
    L = diag[-1]
    scale = [L // d for d in diag]
    points = []
    for a in itertools.product(*(range(d) for d in diag)):
        y = [aj * sj for aj, sj in zip(a, scale)]
        x = [sum(V[i, j] * y[j] for j in range(n)) % L for i in range(n)]
        if any(sum(M[i, j] * x[j] for j in range(n)) % L for i in range(n)):
            raise ArithmeticError("constructed point is not periodic")
        points.append(tuple(Fraction(v, L) for v in x))
    return points


def group_isomorphic(G1: BFGroup, G2: BFGroup) -> bool:
    return G1.factors == G2.factors


# ---------------------------------------------------------------- module level


@dataclass(frozen=True)
class ModuleVerdict:
    status: str  # "yes" | "no" | "undecided"
    witness: Optional[tuple[tuple[int, ...], ...]] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.status == "yes"


def is_bijective(Y: Sequence[Sequence[int]], moduli: Sequence[int]) -> bool:
    """Whether ``x -> x Y`` is onto ``(+) Z/d_j`` (hence bijective between equal orders)."""
    r = len(moduli)
    if r == 0:
        return True
    gens = [list(row) for row in Y] + [[d if i == j else 0 for j in range(r)] for i, d in enumerate(moduli)]
    return Lattice.from_generators(gens, r).index() == 1


def is_intertwiner(G1: BFGroup, G2: BFGroup, Y: Sequence[Sequence[int]]) -> bool:
    """Checks well-definedness and ``psi(x A1) = psi(x) A2`` on generators."""
    d1, d2 = G1.moduli, G2.moduli
    for i, di in enumerate(d1):
        if any((di * Y[i][j]) % dj for j, dj in enumerate(d2)):
            return False
    for e in G1.generators():
        lhs = apply_hom(G1.act(e), Y, d2)
        rhs = G2.act(apply_hom(e, Y, d2))
        if lhs != rhs:
            return False
    return True


def induced_map(G1: BFGroup, G2: BFGroup, C: IntMatrix) -> tuple[tuple[int, ...], ...]:
    """Matrix of ``[m] -> [m C]`` in Smith coordinates."""
    return tuple(G2.coords(C.vecmul(G1.lift(e))) for e in G1.generators())


def intertwiner_group(G1: BFGroup, G2: BFGroup) -> list[tuple[tuple[tuple[int, ...], ...], int]]:
    """Generators of ``Hom_R(G1, G2)`` with their additive orders.

    Both groups must share the same moduli.  The homomorphisms form the
    integer solutions of a system of linear congruences in the ``r x r``
    entries of the matrix; the solution lattice modulo the trivial
    solutions is read off a Smith form.
    """
    d = G1.moduli
    r = len(d)
    if r == 0:
        return []
    N = r * r
    var = lambda i, j: i * r + j  # noqa: E731
    constraints: list[tuple[dict[int, int], int]] = []
    for i in range(r):
        for j in range(r):
            if i < j and d[j] // d[i] > 1:
                constraints.append(({var(i, j): 1}, d[j] // d[i]))
    a, b = G1.action, G2.action
    for i in range(r):
        for j in range(r):
            coef: dict[int, int] = {}
            for l in range(r):
                if a[i][l]:
                    coef[var(l, j)] = coef.get(var(l, j), 0) + a[i][l]
                if b[l][j]:
                    coef[var(i, l)] = coef.get(var(i, l), 0) - b[l][j]
            coef = {k: v for k, v in coef.items() if v % d[j]}
            if coef:
                constraints.append((coef, d[j]))
    K = len(constraints)
    rows = [[0] * K for _ in range(N + K)]
    for c, (coef, m) in enumerate(constraints):
        for v, val in coef.items():
            rows[v][c] = val
        rows[N + c][c] = m
    if K:
        kern = int_kernel(rows)
        L = Lattice.from_generators((x[:N] for x in kern.basis), N)
    else:
        L = Lattice.full(N)
    trivial = [d[v % r] for v in range(N)]
    B = L.matrix()
    Binv = inverse_fraction(B)
    Kmat = []
    for v in range(N):
        row = [trivial[v] * x for x in Binv[v]]
        if any(x.denominator != 1 for x in row):
            raise ArithmeticError("trivial homomorphisms not contained in solution lattice")
        Kmat.append([int(x) for x in row])
    s = snf(IntMatrix(Kmat))
    G = s.V_inv @ B
    gens = []
    for idx, e in enumerate(s.diagonal):
        if e == 1:
            continue
        vec = G.rows[idx]
        Y = tuple(tuple(vec[var(i, j)] % d[j] for j in range(r)) for i in range(r))
        gens.append((Y, e))
    return gens


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _det_mod_p(rows: list[list[int]], p: int) -> int:
    a = [[x % p for x in r] for r in rows]
    n = len(a)
    dt = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            dt = -dt
        dt = dt * a[c][c] % p
        inv = pow(a[c][c], -1, p)
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] * inv % p
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[c])]
    return dt % p


def _find_unit_mod_p(
    gens: list[tuple[tuple[int, ...], ...]],
    moduli: Sequence[int],
    p: int,
    enum_cap: int,
    seed: int,
) -> tuple[Optional[list[int]], bool]:
    """Integer combination of ``gens`` that is invertible modulo ``p``.

    Returns ``(coefficients or None, exhaustive)``.
    """
    idx = [i for i, dd in enumerate(moduli) if dd % p == 0]
    s = len(idx)
    vecs = [[Y[i][j] % p for i in idx for j in idx] for Y in gens]
    # F_p row reduction tracking combinations of the original generators
    basis: list[tuple[list[int], list[int]]] = []
    for gi, v in enumerate(vecs):
        comb = [int(k == gi) for k in range(len(gens))]
        v = v[:]
        for bv, bc in basis:
            lead = next(k for k, x in enumerate(bv) if x)
            if v[lead]:
                f = v[lead] * pow(bv[lead], -1, p) % p
                v = [(x - f * y) % p for x, y in zip(v, bv)]
                comb = [(x - f * y) % p for x, y in zip(comb, bc)]
        if any(v):
            basis.append((v, comb))
    w = len(basis)

    def combine(coefs):
        vec = [0] * (s * s)
        cmb = [0] * len(gens)
        for c, (bv, bc) in zip(coefs, basis):
            if c:
                vec = [(x + c * y) % p for x, y in zip(vec, bv)]
                cmb = [(x + c * y) % p for x, y in zip(cmb, bc)]
        return vec, cmb

    def invertible(vec):
        return _det_mod_p([vec[i * s:(i + 1) * s] for i in range(s)], p) != 0

    if p**w <= enum_cap:
        for coefs in itertools.product(range(p), repeat=w):
            vec, cmb = combine(coefs)
            if invertible(vec):
                return cmb, True
        return None, True
    rng = random.Random(seed)
    for _ in range(enum_cap):
        coefs = [rng.randrange(p) for _ in range(w)]
        vec, cmb = combine(coefs)
        if invertible(vec):
            return cmb, False
    return None, False


def module_isomorphic(G1: BFGroup, G2: BFGroup, cap: int = DEFAULT_MODULE_CAP, seed: int = 0) -> ModuleVerdict:
    """Decide whether an R-module isomorphism ``G1 -> G2`` exists.

    A group isomorphism intertwining the two actions is searched inside
    ``Hom_R(G1, G2)``.  Such a map is bijective iff it is bijective on
    ``G/pG`` for every prime ``p`` dividing the order, and the ``p``-parts
    can be chosen independently and glued with idempotents.
    """
    require_similar(G1.A, G2.A)
    if G1.factors != G2.factors:
        return ModuleVerdict("no", reason="invariant factors differ")
    if G1.order > cap:
        return ModuleVerdict("undecided", reason=f"order {G1.order} exceeds cap {cap}")
    d = G1.moduli
    r = len(d)
    if r == 0:
        return ModuleVerdict("yes", witness=(), reason="trivial groups")
    gens = intertwiner_group(G1, G2)
    hom_list = [Y for Y, _ in gens]
    exponent = d[-1]
    total = [[0] * r for _ in range(r)]
    exhaustive_all = True
    for p in _prime_factors(exponent):
        cmb, exhaustive = _find_unit_mod_p(hom_list, d, p, cap, seed)
        if cmb is None:
            if exhaustive:
                return ModuleVerdict("no", reason=f"no intertwiner is invertible modulo {p}")
            exhaustive_all = False
            continue
        pa = 1
        while exponent % (pa * p) == 0:
            pa *= p
        rest = exponent // pa
        # idempotent: 1 mod p^a, 0 mod rest
        e = rest * pow(rest, -1, pa) % exponent if pa > 1 else 0
        for c, Y in zip(cmb, hom_list):
            if c:
                for i in range(r):
                    for j in range(r):
                        total[i][j] += e * c * Y[i][j]
    if not exhaustive_all:
        return ModuleVerdict("undecided", reason="randomized search for an invertible intertwiner failed")
    W = tuple(tuple(total[i][j] % d[j] for j in range(r)) for i in range(r))
    if not (is_intertwiner(G1, G2, W) and is_bijective(W, d)):
        raise ArithmeticError("assembled intertwiner failed verification")
    return ModuleVerdict("yes", witness=W, reason="verified intertwining isomorphism")


# ---------------------------------------------------------------- strong BF


@dataclass(frozen=True)
class LevelVerdict:
    k: int
    factors_A: tuple[int, ...]
    factors_B: tuple[int, ...]
    group: bool
    module: Optional[str]

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "factors_A": list(self.factors_A),
            "factors_B": list(self.factors_B),
            "group": self.group,
            "module": self.module,
        }


@dataclass(frozen=True)
class StrongBFReport:
    level: str
    max_k: int
    levels: tuple[LevelVerdict, ...]
    verdict: str  # "consistent" | "refuted" | "undecided"
    at_k: Optional[int]

    @property
    def summary(self) -> str:
        if self.verdict == "consistent":
            return f"consistent up to k = {self.max_k}"
        return f"{self.verdict} at k = {self.at_k}"

    @property
    def justification(self) -> str:
        if self.verdict == "refuted":
            return (
                "BF_k(A) and BF_k(B) are not R-isomorphic, so A and B are not strongly "
                "BF-equivalent; since profinite conjugacy implies strong BF-equivalence, "
                "they are not profinitely conjugate (and not conjugate)"
            )
        if self.verdict == "consistent":
            return (
                "no level up to max_k separates A and B; strong BF-equivalence quantifies "
                "over all k, so this is evidence, not a certificate"
            )
        return "search cap reached before a verdict at this level"

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "kind": "strong_bf",
            "level": self.level,
            "max_k": self.max_k,
            "levels": [lv.to_json() for lv in self.levels],
            "verdict": self.verdict,
            "at_k": self.at_k,
            "summary": self.summary,
            "justification": self.justification,
        }


def strong_bf_equivalent(
    A: IntMatrix,
    B: IntMatrix,
    max_k: int = DEFAULT_MAX_K,
    level: str = "module",
    cap: int = DEFAULT_MODULE_CAP,
) -> StrongBFReport:
    if level not in ("group", "module"):
        raise ValueError("level must be 'group' or 'module'")
    require_similar(A, B)
    require_hyperbolic(A, "A")
    require_hyperbolic(B, "B")
    levels = []
    verdict, at_k = "consistent", None
    for k in range(1, max_k + 1):
        GA, GB = bf_k(A, k), bf_k(B, k)
        grp = group_isomorphic(GA, GB)
        mod = None
        if level == "module":
            mod = module_isomorphic(GA, GB, cap).status if grp else "no"
        levels.append(LevelVerdict(k, GA.factors.divisors, GB.factors.divisors, grp, mod))
        refuted = not grp or mod == "no"
        if refuted and verdict != "refuted":
            verdict, at_k = "refuted", k
        elif mod == "undecided" and verdict == "consistent":
            verdict, at_k = "undecided", k
    return StrongBFReport(level, max_k, tuple(levels), verdict, at_k)
