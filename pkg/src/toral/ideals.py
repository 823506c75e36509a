"""Fractional ideals of ``Z[beta]`` and the irreducible-case conjugacy tools.

Ideals are full-rank lattices in ``Q(beta)`` written in the power basis
``1, beta, ..., beta^(n-1)``.  For ``A`` with irreducible characteristic
polynomial ``f`` the entries of an eigenvector ``A u = beta u`` span the
ideal ``I_A``; GL_n(Z)-conjugacy classes with characteristic polynomial ``f``
correspond to classes of such ideals up to multiplication by field elements.

Weak equivalence is decided without search.  If ``I X = J`` for some ``X``
then ``X`` lies in ``(J : I)``, so ``J = I X`` is contained in
``I (J : I)``, which is always contained in ``J``; therefore a suitable ``X``
exists iff ``I (J : I) = J``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator, Optional, Sequence

from .bf_invariants import (
    DEFAULT_MAX_K,
    DEFAULT_MODULE_CAP,
    require_hyperbolic,
    require_similar,
    strong_bf_equivalent,
)
from .errors import FieldMismatchError, ReducibleError, SingularError
from .exact_linalg import (
    IntMatrix,
    Lattice,
    adjugate,
    char_adjugate,
    charpoly,
    det,
    int_kernel,
    lattice_intersection,
    lll_reduce,
)
from .poly import as_poly
from .polynum import OrderElement, is_irreducible

DEFAULT_IDEAL_BOUND = 10
DEFAULT_SEARCH_LIMIT = 250_000


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@dataclass(frozen=True)
class FractionalIdeal:
    """``(1/den) * rowspan(basis)`` with ``basis`` in canonical HNF."""

    f: tuple[int, ...]
    basis: tuple[tuple[int, ...], ...]
    den: int = 1

    @classmethod
    def from_generators(cls, f, gens: Sequence[Sequence], den: int = 1) -> "FractionalIdeal":
        """Ideal spanned by coordinate vectors (ints or Fractions) divided by ``den``."""
        fp = as_poly(f)
        n = fp.degree
        fr = [[Fraction(x) / den for x in g] for g in gens]
        D = 1
        for g in fr:
            for x in g:
                D = _lcm(D, x.denominator)
        rows = [[int(x * D) for x in g] for g in fr]
        L = Lattice.from_generators(rows, n)
        if not L.is_full_rank():
            raise ValueError("generators do not span a full-rank lattice")
        c = D
        for row in L.basis:
            for x in row:
                c = gcd(c, x)
        if c > 1:
            L = Lattice.from_generators([[x // c for x in row] for row in L.basis], n)
            D //= c
        return cls(tuple(fp.coeffs), L.basis, D)

    @classmethod
    def unit(cls, f) -> "FractionalIdeal":
        n = as_poly(f).degree
        return cls.from_generators(f, IntMatrix.identity(n).rows)

    @classmethod
    def from_elements(cls, elems: Sequence[OrderElement]) -> "FractionalIdeal":
        f = elems[0].f
        return cls.from_generators(f, [e.coords() for e in elems])

    @property
    def degree(self) -> int:
        return len(self.f) - 1

    @property
    def lattice(self) -> Lattice:
        return Lattice(self.degree, self.basis)

    def basis_elements(self) -> list[OrderElement]:
        return [OrderElement(self.f, row, self.den) for row in self.basis]

    def norm(self) -> Fraction:
        """Index-style norm ``|det basis| / den^n`` (``[Z[beta] : I]`` when integral)."""
        return Fraction(self.lattice.index(), self.den**self.degree)

    def contains(self, x: OrderElement) -> bool:
        self._check(x.f)
        scaled = [Fraction(c) * self.den for c in x.coords()]
        if any(c.denominator != 1 for c in scaled):
            return False
        return self.lattice.contains_vector([int(c) for c in scaled])

    def contains_ideal(self, other: "FractionalIdeal") -> bool:
        return all(self.contains(e) for e in other.basis_elements())

    def is_beta_stable(self) -> bool:
        b = OrderElement.beta(self.f)
        return all(self.contains(e * b) for e in self.basis_elements())

    def scale(self, gamma: OrderElement) -> "FractionalIdeal":
        return FractionalIdeal.from_elements([e * gamma for e in self.basis_elements()])

    def is_integral(self) -> bool:
        return self.den == 1

    def _check(self, f):
        if tuple(f) != self.f:
            raise FieldMismatchError("ideals over different defining polynomials")

    def to_json(self) -> dict:
        return {"f": list(self.f), "den": self.den, "basis": [list(r) for r in self.basis]}

    @classmethod
    def from_json(cls, obj: dict) -> "FractionalIdeal":
        return cls.from_generators(obj["f"], obj["basis"], obj.get("den", 1))


@dataclass(frozen=True)
class IdealVerdict:
    relation: str  # weak_equivalent | arithmetically_equivalent | principal | none_found
    witness: Optional[object] = None
    search_bound_reached: bool = False

    @property
    def found(self) -> bool:
        return self.relation != "none_found"

    @property
    def certified_negative(self) -> bool:
        return self.relation == "none_found" and not self.search_bound_reached

    def to_json(self) -> dict:
        w = self.witness
        if isinstance(w, OrderElement):
            wj = {"gamma": w.to_json()}
        elif isinstance(w, tuple) and len(w) == 2:
            wj = {"X": w[0].to_json(), "Y": w[1].to_json()}
        else:
            wj = None
        return {
            "relation": self.relation,
            "witness": wj,
            "search_bound_reached": self.search_bound_reached,
        }


# ---------------------------------------------------------------- construction


def eigenvector(A: IntMatrix, column: Optional[int] = None) -> list[OrderElement]:
    """Column of ``adj(beta I - A)``; satisfies ``A u = beta u`` in ``Z[beta]``."""
    f, mats = char_adjugate(A)
    if not is_irreducible(f):
        raise ReducibleError(f"characteristic polynomial {f} is reducible (irreducible case only)")
    n = A.n
    cols = range(n) if column is None else [column]
    for j in cols:
        u = []
        for i in range(n):
            coeffs = [0] * n
            for k, Mk in enumerate(mats, start=1):
                coeffs[n - k] = Mk[i, j]
            u.append(OrderElement(f.coeffs, tuple(coeffs)))
        if any(not x.is_zero() for x in u):
            return u
    raise ArithmeticError("adjugate column vanished")


def ideal_from_matrix(A: IntMatrix, column: Optional[int] = None) -> FractionalIdeal:
    """``I_A`` spanned by the entries of the eigenvector from :func:`eigenvector`."""
    if det(A) == 0:
        raise SingularError("A is singular (hypothesis: A invertible)")
    return FractionalIdeal.from_elements(eigenvector(A, column))


# ---------------------------------------------------------------- arithmetic


def ideal_mul(I: FractionalIdeal, J: FractionalIdeal) -> FractionalIdeal:
    I._check(J.f)
    prods = [a * b for a in I.basis_elements() for b in J.basis_elements()]
    return FractionalIdeal.from_elements(prods)


def _inverse_times(I: FractionalIdeal, w: OrderElement) -> tuple[list[list[int]], int]:
    """Integer generators and denominator of ``w^{-1} I``."""
    M = w.numerator_matrix()
    d = det(M)
    adj = adjugate(M)
    rows = [list(adj.vecmul(b)) for b in I.basis]
    rows = [[x * w.den for x in r] for r in rows]
    den = I.den * d
    if den < 0:
        den = -den
        rows = [[-x for x in r] for r in rows]
    return rows, den


def ideal_colon(I: FractionalIdeal, J: FractionalIdeal) -> FractionalIdeal:
    """``(I : J) = {x : x J in I}``, the intersection of ``w^{-1} I`` over a basis of ``J``."""
    I._check(J.f)
    n = I.degree
    pieces = [_inverse_times(I, w) for w in J.basis_elements()]
    D = 1
    for _, den in pieces:
        D = _lcm(D, den)
    acc: Optional[Lattice] = None
    for rows, den in pieces:
        s = D // den
        L = Lattice.from_generators([[x * s for x in r] for r in rows], n)
        acc = L if acc is None else lattice_intersection(acc, L)
    return FractionalIdeal.from_generators(I.f, acc.basis, D)


def multiplicator_ring(I: FractionalIdeal) -> FractionalIdeal:
    return ideal_colon(I, I)


# ---------------------------------------------------------------- equivalences


def weakly_equivalent(I: FractionalIdeal, J: FractionalIdeal) -> IdealVerdict:
    I._check(J.f)
    X = ideal_colon(J, I)
    Y = ideal_colon(I, J)
    if ideal_mul(I, X) == J and ideal_mul(J, Y) == I:
        return IdealVerdict("weak_equivalent", (X, Y))
    return IdealVerdict("none_found", None, search_bound_reached=False)


def box_vectors(dim: int, bound: int) -> Iterator[tuple[int, ...]]:
    """Integer vectors in ``[-bound, bound]^dim``, by sup-norm shells.

    Within a shell the order is lexicographic with coordinates ranked
    ``0, 1, -1, 2, -2, ...``.
    """
    yield (0,) * dim
    for r in range(1, bound + 1):
        vals = [0]
        for v in range(1, r + 1):
            vals += [v, -v]
        for vec in itertools.product(vals, repeat=dim):
            if max(abs(x) for x in vec) == r:
                yield vec


def ideal_equivalent(
    I: FractionalIdeal,
    J: FractionalIdeal,
    bound: int = DEFAULT_IDEAL_BOUND,
) -> IdealVerdict:
    """Search ``gamma`` with ``gamma I = J``.

    Candidates are the elements of ``(J : I)`` whose norm has absolute value
    ``N(J)/N(I)`` in a coefficient box of radius ``bound``.  Failure of weak
    equivalence is a complete certificate that no ``gamma`` exists.
    """
    I._check(J.f)
    relation = "principal" if J == FractionalIdeal.unit(J.f) else "arithmetically_equivalent"
    if I == J:
        return IdealVerdict(relation, OrderElement.one(I.f))
    if not weakly_equivalent(I, J).found:
        return IdealVerdict("none_found", None, search_bound_reached=False)
    target = J.norm() / I.norm()
    C = ideal_colon(J, I)
    n = I.degree
    basis = [list(r) for r in C.basis]
    mats = [OrderElement(I.f, tuple(r)).numerator_matrix() for r in basis]
    want = target * C.den**n
    if want.denominator != 1:
        return IdealVerdict("none_found", None, search_bound_reached=True)
    want = int(want)
    for c in box_vectors(n, bound):
        if not any(c):
            continue
        M = IntMatrix(
            [[sum(ci * m[i, j] for ci, m in zip(c, mats)) for j in range(n)] for i in range(n)]
        )
        if abs(det(M)) != want:
            continue
        coords = [sum(ci * b[j] for ci, b in zip(c, basis)) for j in range(n)]
        gamma = OrderElement(I.f, tuple(coords), C.den)
        if I.scale(gamma) == J:
            return IdealVerdict(relation, gamma)
    return IdealVerdict("none_found", None, search_bound_reached=True)


# ---------------------------------------------------------------- cyclicity


@dataclass(frozen=True)
class CyclicVerdict:
    status: str  # "yes" | "no" | "not_found"
    witness: Optional[object] = None
    bound: int = 0

    def to_json(self) -> dict:
        w = self.witness
        if isinstance(w, OrderElement):
            w = {"gamma": w.to_json()}
        elif w is not None:
            w = list(w)
        return {"status": self.status, "witness": w, "bound": self.bound}


def krylov_det(A: IntMatrix, xi: Sequence[int]) -> int:
    rows = [tuple(xi)]
    for _ in range(A.n - 1):
        rows.append(A.vecmul(rows[-1]))
    return det(IntMatrix(rows))


def is_cyclic_direct(A: IntMatrix, bound: int = DEFAULT_IDEAL_BOUND) -> CyclicVerdict:
    """First ``xi`` in the box with ``xi, xi A, ..., xi A^(n-1)`` a basis of ``Z^n``."""
    for xi in box_vectors(A.n, bound):
        if any(xi) and abs(krylov_det(A, xi)) == 1:
            return CyclicVerdict("yes", xi, bound)
    return CyclicVerdict("not_found", None, bound)


def is_cyclic_via_ideal(A: IntMatrix, bound: int = DEFAULT_IDEAL_BOUND) -> CyclicVerdict:
    """``A`` is cyclic iff ``I_A`` is principal (the class of the companion matrix)."""
    I = ideal_from_matrix(A)
    v = ideal_equivalent(I, FractionalIdeal.unit(I.f), bound)
    if v.found:
        return CyclicVerdict("yes", v.witness, bound)
    if v.certified_negative:
        return CyclicVerdict("no", None, bound)
    return CyclicVerdict("not_found", None, bound)


# ---------------------------------------------------------------- conjugacy


@dataclass(frozen=True)
class ConjugacyVerdict:
    status: str  # "yes" | "no" | "not_found"
    C: Optional[IntMatrix] = None
    reason: str = ""

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "C": self.C.tolist() if self.C is not None else None,
            "reason": self.reason,
        }


def sylvester_lattice(A: IntMatrix, B: IntMatrix) -> Lattice:
    """Integer solutions ``C`` (flattened row-major) of ``A C = C B``."""
    n = A.n
    N = n * n
    S = [[0] * N for _ in range(N)]
    for i in range(n):
        for j in range(n):
            col = i * n + j
            for l in range(n):
                S[l * n + j][col] += A[i, l]
                S[i * n + l][col] -= B[l, j]
    return int_kernel(S)


def conjugate_over_Z(
    A: IntMatrix,
    B: IntMatrix,
    bound: int = DEFAULT_IDEAL_BOUND,
    limit: int = DEFAULT_SEARCH_LIMIT,
) -> ConjugacyVerdict:
    """Search ``C`` in GL_n(Z) with ``A C = C B``.

    The search runs over small combinations of an LLL-reduced basis of the
    solution lattice.  ``no`` is returned only in the irreducible case when
    the ideals fail to be weakly equivalent.
    """
    require_similar(A, B)
    n = A.n
    K = sylvester_lattice(A, B)
    basis = lll_reduce(K.basis) if K.rank else []
    tried = 0
    for c in box_vectors(len(basis), bound):
        if not any(c):
            continue
        tried += 1
        if tried > limit:
            break
        flat = [sum(ci * b[v] for ci, b in zip(c, basis)) for v in range(n * n)]
        C = IntMatrix([flat[i * n:(i + 1) * n] for i in range(n)])
        if abs(det(C)) == 1:
            if A @ C != C @ B:
                raise ArithmeticError("Sylvester solution failed verification")
            return ConjugacyVerdict("yes", C, f"found within coefficient bound {bound}")
    f = charpoly(A)
    if is_irreducible(f):
        if not weakly_equivalent(ideal_from_matrix(A), ideal_from_matrix(B)).found:
            return ConjugacyVerdict("no", None, "ideals I_A and I_B are not weakly equivalent")
    return ConjugacyVerdict("not_found", None, f"no unimodular solution within bound {bound}")


# ---------------------------------------------------------------- chain


@dataclass(frozen=True)
class ChainReport:
    weak_equivalence: bool
    block_conjugate: bool
    profinitely_conjugate: bool
    strongly_bf_equivalent: bool
    witnesses: Optional[tuple[FractionalIdeal, FractionalIdeal]]
    cross_check: dict
    consistent: bool

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "kind": "chain_report",
            "a_weakly_equivalent_ideals": self.weak_equivalence,
            "b_block_conjugate": self.block_conjugate,
            "c_profinitely_conjugate": self.profinitely_conjugate,
            "d_strongly_bf_equivalent": self.strongly_bf_equivalent,
            "witness": (
                {"X": self.witnesses[0].to_json(), "Y": self.witnesses[1].to_json()}
                if self.witnesses
                else None
            ),
            "cross_check": self.cross_check,
            "consistent": self.consistent,
            "justification": (
                "for irreducible similar hyperbolic A, B: weak equivalence of I_A and I_B, "
                "block conjugacy, profinite conjugacy and strong BF-equivalence coincide; "
                "(a) is decided exactly and (b)-(d) follow"
            ),
        }


def equivalence_chain_report(
    A: IntMatrix,
    B: IntMatrix,
    max_k: int = DEFAULT_MAX_K,
    cap: int = DEFAULT_MODULE_CAP,
) -> ChainReport:
    require_similar(A, B)
    f = charpoly(A)
    require_hyperbolic(A, "A")
    require_hyperbolic(B, "B")
    if not is_irreducible(f):
        raise ReducibleError(f"characteristic polynomial {f} is reducible (irreducible case only)")
    v = weakly_equivalent(ideal_from_matrix(A), ideal_from_matrix(B))
    a = v.found
    bf = strong_bf_equivalent(A, B, max_k=max_k, level="module", cap=cap)
    consistent = not (a and bf.verdict == "refuted")
    if not consistent:
        raise ArithmeticError(
            f"weakly equivalent ideals but BF refutation at k = {bf.at_k}: internal inconsistency"
        )
    return ChainReport(
        weak_equivalence=a,
        block_conjugate=a,
        profinitely_conjugate=a,
        strongly_bf_equivalent=a,
        witnesses=v.witness if a else None,
        cross_check=bf.to_json(),
        consistent=consistent,
    )
