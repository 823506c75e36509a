"""Exact integer matrix algebra.

Vectors are rows and matrices act on the right (``m -> m @ A``).  Nothing in
this module touches floating point: determinants use Bareiss elimination,
characteristic polynomials use Faddeev-LeVerrier with exact division, and the
Hermite/Smith forms work by unimodular row and column operations on Python
integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import RankDeficientError
from .poly import Poly, as_poly

Rows = list[list[int]]


class IntMatrix:
    """Immutable dense matrix of Python integers.

    Square matrices are the normal case; rectangular ones are accepted for
    generator and constraint matrices.
    """

    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable[int]]):
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if not data:
            raise ValueError("matrix needs at least one row")
        width = len(data[0])
        if any(len(r) != width for r in data):
            raise ValueError("ragged matrix rows")
        self._rows = data
        self.nrows = len(data)
        self.ncols = width

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, nrows: int, ncols: int | None = None) -> "IntMatrix":
        return cls([[0] * (nrows if ncols is None else ncols) for _ in range(nrows)])

    @classmethod
    def diag(cls, entries: Sequence[int]) -> "IntMatrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def companion(cls, f) -> "IntMatrix":
        """Companion matrix with ones on the superdiagonal and ``-a_i`` in the last row."""
        f = as_poly(f)
        if not f.is_monic() or not f.is_integral():
            raise ValueError("companion matrix needs a monic integer polynomial")
        n = f.degree
        rows = [[int(j == i + 1) for j in range(n)] for i in range(n - 1)]
        rows.append([-f[j] for j in range(n)])
        return cls(rows)

    @classmethod
    def block_diag(cls, *blocks: "IntMatrix") -> "IntMatrix":
        n = sum(b.nrows for b in blocks)
        m = sum(b.ncols for b in blocks)
        rows = [[0] * m for _ in range(n)]
        r0 = c0 = 0
        for b in blocks:
            for i, row in enumerate(b._rows):
                rows[r0 + i][c0:c0 + b.ncols] = row
            r0 += b.nrows
            c0 += b.ncols
        return cls(rows)

    @property
    def n(self) -> int:
        if self.nrows != self.ncols:
            raise ValueError("matrix is not square")
        return self.nrows

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self._rows

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def tolist(self) -> Rows:
        return [list(r) for r in self._rows]

    def __getitem__(self, idx):
        if isinstance(idx, tuple):
            i, j = idx
            return self._rows[i][j]
        return self._rows[idx]

    def __iter__(self):
        return iter(self._rows)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMatrix) and self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()!r})"

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        return IntMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)])

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return IntMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)])

    def __neg__(self) -> "IntMatrix":
        return IntMatrix([[-a for a in r] for r in self._rows])

    def __mul__(self, c: int) -> "IntMatrix":
        return IntMatrix([[c * a for a in r] for r in self._rows])

    __rmul__ = __mul__

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        cols = list(zip(*other._rows))
        return IntMatrix([[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self._rows])

    def __pow__(self, k: int) -> "IntMatrix":
        return matrix_power(self, k)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(zip(*self._rows))

    T = property(transpose)

    def trace(self) -> int:
        return sum(self._rows[i][i] for i in range(self.n))

    def vecmul(self, v: Sequence[int]) -> tuple[int, ...]:
        """Row vector times matrix."""
        return tuple(sum(v[i] * self._rows[i][j] for i in range(self.nrows)) for j in range(self.ncols))

    def mod(self, m: int) -> "IntMatrix":
        return IntMatrix([[a % m for a in r] for r in self._rows])


def vec_mat(v: Sequence[int], M: IntMatrix) -> tuple[int, ...]:
    return M.vecmul(v)


def matrix_power(M: IntMatrix, k: int, modulus: int | None = None) -> IntMatrix:
    if k < 0:
        raise ValueError("negative power; use inverse_unimodular first")
    result = IntMatrix.identity(M.n)
    base = M
    while k:
        if k & 1:
            result = result @ base
            if modulus:
                result = result.mod(modulus)
        base = base @ base
        if modulus:
            base = base.mod(modulus)
        k >>= 1
    return result


# ---------------------------------------------------------------- determinants


def det(M: IntMatrix) -> int:
    """Determinant by Bareiss fraction-free elimination."""
    n = M.n
    a = M.tolist()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def char_adjugate(M: IntMatrix) -> tuple[Poly, list[IntMatrix]]:
    """Faddeev-LeVerrier.

    Returns ``(f, [M_1, ..., M_n])`` with ``f = det(tI - M)`` and
    ``adj(tI - M) = sum_k M_k t^(n-k)``.  Every division is exact.
    """
    n = M.n
    A = M.tolist()
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    Mk = [[int(i == j) for j in range(n)] for i in range(n)]
    mats = [IntMatrix(Mk)]
    for k in range(1, n + 1):
        AM = [[sum(A[i][l] * Mk[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        tr = sum(AM[i][i] for i in range(n))
        if tr % k:
            raise ArithmeticError("Faddeev-LeVerrier division not exact")
        c = -tr // k
        coeffs[n - k] = c
        if k < n:
            Mk = [[AM[i][j] + (c if i == j else 0) for j in range(n)] for i in range(n)]
            mats.append(IntMatrix(Mk))
    return Poly(coeffs), mats


def charpoly(M: IntMatrix) -> Poly:
    return char_adjugate(M)[0]


def adjugate(M: IntMatrix) -> IntMatrix:
    """Classical adjugate; valid for singular matrices too."""
    n = M.n
    _, mats = char_adjugate(M)
    # adj(tI - M) at t = 0 is adj(-M) = (-1)^(n-1) adj(M)
    return mats[-1] * (-1 if (n - 1) % 2 else 1)


def poly_eval_matrix(g, M: IntMatrix) -> IntMatrix:
    """``g(M)`` by Horner's rule."""
    g = as_poly(g)
    n = M.n
    acc = IntMatrix.zeros(n)
    for c in reversed(g.coeffs):
        acc = acc @ M
        if c:
            acc = IntMatrix([[a + (c if i == j else 0) for j, a in enumerate(r)] for i, r in enumerate(acc.rows)])
    return acc


def inverse_fraction(M: IntMatrix) -> list[list[Fraction]]:
    n = M.n
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(M.rows)]
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [r[n:] for r in a]


def inverse_unimodular(M: IntMatrix) -> IntMatrix:
    d = det(M)
    if abs(d) != 1:
        raise ValueError("matrix is not unimodular")
    adj = adjugate(M)
    return adj * d


def rank(M: IntMatrix) -> int:
    rows = M.tolist()
    return _echelon(rows, M.ncols)


# ---------------------------------------------------------------- echelon / HNF


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _echelon(rows: Rows, pivot_cols: int) -> int:
    """Upper row-echelon form in place over the first ``pivot_cols`` columns.

    Pivots are positive and entries above each pivot lie in ``[0, pivot)``.
    Row operations act on the full rows, so trailing columns record the
    transform when the input is augmented with an identity block.  Returns
    the rank.
    """
    m = len(rows)
    r = 0
    for col in range(pivot_cols):
        if r >= m:
            break
        while True:
            best = None
            for i in range(r, m):
                v = rows[i][col]
                if v and (best is None or abs(v) < abs(rows[best][col])):
                    best = i
            if best is None:
                break
            if best != r:
                rows[r], rows[best] = rows[best], rows[r]
            piv_row = rows[r]
            piv = piv_row[col]
            done = True
            for i in range(r + 1, m):
                v = rows[i][col]
                if v:
                    q = v // piv
                    if q:
                        ri = rows[i]
                        rows[i] = [a - q * b for a, b in zip(ri, piv_row)]
                    if rows[i][col]:
                        done = False
            if done:
                break
        if rows[r][col] == 0:
            continue
        if rows[r][col] < 0:
            rows[r] = [-a for a in rows[r]]
        piv_row = rows[r]
        piv = piv_row[col]
        for i in range(r):
            q = rows[i][col] // piv
            if q:
                rows[i] = [a - q * b for a, b in zip(rows[i], piv_row)]
        r += 1
    return r


def hnf_rows(gens: Sequence[Sequence[int]], ncols: int) -> tuple[tuple[int, ...], ...]:
    """Canonical lower-triangular row HNF of the row span of ``gens``.

    Each row's last nonzero entry is its positive pivot, pivot columns
    increase down the rows, and entries below a pivot are reduced into
    ``[0, pivot)``.
    """
    rev = [list(reversed(list(g))) for g in gens if any(g)]
    if not rev:
        return ()
    r = _echelon(rev, ncols)
    out = [tuple(reversed(row)) for row in rev[:r]]
    out.reverse()
    return tuple(out)


@dataclass(frozen=True)
class Lattice:
    """Sublattice of ``Z^ambient`` stored by its canonical HNF basis."""

    ambient: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def from_generators(cls, gens: Iterable[Sequence[int]], ambient: int) -> "Lattice":
        gens = [tuple(int(x) for x in g) for g in gens]
        if any(len(g) != ambient for g in gens):
            raise ValueError("generator length does not match ambient dimension")
        return cls(ambient, hnf_rows(gens, ambient))

    @classmethod
    def full(cls, n: int) -> "Lattice":
        return cls(n, IntMatrix.identity(n).rows)

    @classmethod
    def scaled(cls, d: int, n: int) -> "Lattice":
        return cls.from_generators((IntMatrix.identity(n) * d).rows, n)

    @classmethod
    def row_span(cls, M: IntMatrix) -> "Lattice":
        return cls.from_generators(M.rows, M.ncols)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def is_full_rank(self) -> bool:
        return self.rank == self.ambient

    def matrix(self) -> IntMatrix:
        return IntMatrix(self.basis)

    def reduce(self, v: Sequence[int]) -> tuple[int, ...]:
        """Subtract basis rows so the pivot coordinates are reduced.

        For a full-rank lattice this gives a canonical coset representative
        with ``0 <= v[p] < pivot``.
        """
        v = list(v)
        for row in reversed(self.basis):
            p = _pivot(row)
            q = v[p] // row[p]
            if q:
                v = [a - q * b for a, b in zip(v, row)]
        return tuple(v)

    def contains_vector(self, v: Sequence[int]) -> bool:
        v = list(v)
        for row in reversed(self.basis):
            p = _pivot(row)
            q, rem = divmod(v[p], row[p])
            if rem:
                return False
            if q:
                v = [a - q * b for a, b in zip(v, row)]
        return not any(v)

    def contains(self, other: "Lattice") -> bool:
        return all(self.contains_vector(b) for b in other.basis)

    def index(self) -> int:
        if not self.is_full_rank():
            raise RankDeficientError("index of a rank-deficient lattice is infinite")
        out = 1
        for i, row in enumerate(self.basis):
            out *= row[i]
        return out

    def __and__(self, other: "Lattice") -> "Lattice":
        return lattice_intersection(self, other)

    def image(self, M: IntMatrix) -> "Lattice":
        """``{ v M : v in L }``."""
        return Lattice.from_generators((M.vecmul(b) for b in self.basis), M.ncols)


def _pivot(row: Sequence[int]) -> int:
    for j in range(len(row) - 1, -1, -1):
        if row[j]:
            return j
    raise ValueError("zero row in HNF basis")


def hnf(M) -> Lattice:
    """Canonical HNF lattice of the rows of a (possibly rectangular) matrix."""
    if isinstance(M, IntMatrix):
        return Lattice.row_span(M)
    M = [list(r) for r in M]
    return Lattice.from_generators(M, len(M[0]))


def int_kernel(M) -> Lattice:
    """Saturated lattice ``{x : x M = 0}`` of integer row vectors."""
    rows = M.tolist() if isinstance(M, IntMatrix) else [list(r) for r in M]
    m = len(rows)
    c = len(rows[0]) if rows else 0
    aug = [list(r) + [int(i == j) for j in range(m)] for i, r in enumerate(rows)]
    rk = _echelon(aug, c)
    return Lattice.from_generators((row[c:] for row in aug[rk:]), m)


def lattice_intersection(L1: Lattice, L2: Lattice) -> Lattice:
    if L1.ambient != L2.ambient:
        raise ValueError("ambient dimensions differ")
    if not L1.basis or not L2.basis:
        return Lattice(L1.ambient, ())
    stacked = [list(b) for b in L1.basis] + [[-x for x in b] for b in L2.basis]
    K = int_kernel(stacked)
    r1 = L1.rank
    gens = []
    for x in K.basis:
        v = [0] * L1.ambient
        for coef, b in zip(x[:r1], L1.basis):
            if coef:
                v = [a + coef * bb for a, bb in zip(v, b)]
        gens.append(v)
    return Lattice.from_generators(gens, L1.ambient)


def lattice_contains(L1: Lattice, L2: Lattice) -> bool:
    """True iff ``L2`` is a subset of ``L1``."""
    return L1.contains(L2)


def lattice_index(L: Lattice) -> int:
    return L.index()


# ---------------------------------------------------------------- Smith form


@dataclass(frozen=True)
class SNFDecomposition:
    """``U @ M @ V == D`` with ``U``, ``V`` unimodular and ``D`` diagonal."""

    U: IntMatrix
    V: IntMatrix
    D: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i, i] for i in range(min(self.D.nrows, self.D.ncols)))


def snf(M: IntMatrix) -> SNFDecomposition:
    """Smith normal form with transforms.

    Pivoting takes the smallest nonzero absolute value in the active block,
    ties broken by lowest (row, column) index.
    """
    r, c = M.nrows, M.ncols
    D = M.tolist()
    U = [[int(i == j) for j in range(r)] for i in range(r)]
    Ui = [[int(i == j) for j in range(r)] for i in range(r)]
    V = [[int(i == j) for j in range(c)] for i in range(c)]
    Vi = [[int(i == j) for j in range(c)] for i in range(c)]

    def row_add(i, j, q):  # row_i += q * row_j
        D[i] = [a + q * b for a, b in zip(D[i], D[j])]
        U[i] = [a + q * b for a, b in zip(U[i], U[j])]
        for row in Ui:
            row[j] -= q * row[i]

    def col_add(i, j, q):  # col_j += q * col_i
        for row in D:
            row[j] += q * row[i]
        for row in V:
            row[j] += q * row[i]
        Vi[i] = [a - q * b for a, b in zip(Vi[i], Vi[j])]

    def row_swap(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for row in Ui:
            row[i], row[j] = row[j], row[i]

    def col_swap(i, j):
        for mat in (D, V):
            for row in mat:
                row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    for t in range(min(r, c)):
        while True:
            best = None
            for i in range(t, r):
                for j in range(t, c):
                    v = D[i][j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
            if best is None:
                break
            _, bi, bj = best
            if bi != t:
                row_swap(t, bi)
            if bj != t:
                col_swap(t, bj)
            piv = D[t][t]
            clean = True
            for i in range(t + 1, r):
                if D[i][t]:
                    q = D[i][t] // piv
                    if q:
                        row_add(i, t, -q)
                    if D[i][t]:
                        clean = False
            for j in range(t + 1, c):
                if D[t][j]:
                    q = D[t][j] // piv
                    if q:
                        col_add(t, j, -q)
                    if D[t][j]:
                        clean = False
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, r) for j in range(t + 1, c) if D[i][j] % piv),
                None,
            )
            if bad is None:
                break
            row_add(t, bad, 1)
        if best is None:
            break
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
            for row in Ui:
                row[t] = -row[t]
    return SNFDecomposition(IntMatrix(U), IntMatrix(V), IntMatrix(D), IntMatrix(Ui), IntMatrix(Vi))


def invariant_factors(M: IntMatrix) -> tuple[int, ...]:
    """Diagonal of the Smith form, including ones and trailing zeros."""
    return snf(M).diagonal


# ---------------------------------------------------------------- LLL


def lll_reduce(basis: Sequence[Sequence[int]], delta: Fraction = Fraction(3, 4)) -> list[list[int]]:
    """Textbook LLL on linearly independent integer rows, exact rationals.

    Only used to shorten search bases at desk scale.
    """
    b = [list(map(int, v)) for v in basis]
    k = len(b)
    if k <= 1:
        return b

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    def gso():
        bstar, mu, norms = [], [[Fraction(0)] * k for _ in range(k)], []
        for i in range(k):
            v = [Fraction(x) for x in b[i]]
            for j in range(i):
                mu[i][j] = Fraction(dot(b[i], bstar[j])) / norms[j] if norms[j] else Fraction(0)
                v = [a - mu[i][j] * c for a, c in zip(v, bstar[j])]
            bstar.append(v)
            norms.append(sum(x * x for x in v))
        return mu, norms

    mu, norms = gso()
    i = 1
    while i < k:
        for j in range(i - 1, -1, -1):
            q = round(mu[i][j])
            if q:
                b[i] = [x - q * y for x, y in zip(b[i], b[j])]
                mu, norms = gso()
        if norms[i] >= (delta - mu[i][i - 1] ** 2) * norms[i - 1]:
            i += 1
        else:
            b[i], b[i - 1] = b[i - 1], b[i]
            mu, norms = gso()
            i = max(i - 1, 1)
    return b
