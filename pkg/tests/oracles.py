"""Independent brute-force oracles shared by the unit and acceptance tests."""

import itertools
import random
from fractions import Fraction
from math import lcm

from toral.exact_linalg import IntMatrix, Lattice
from toral.ideals import FractionalIdeal, ideal_from_matrix, ideal_mul, weakly_equivalent
from toral.polynum import OrderElement


def matrices_with_charpoly(trace: int, det_: int, bound: int) -> list[IntMatrix]:
    """All 2x2 integer matrices with given trace and determinant, entries a, b, c in a box."""
    out = []
    for a, b, c in itertools.product(range(-bound, bound + 1), repeat=3):
        d = trace - a
        if a * d - b * c == det_:
            out.append(IntMatrix([[a, b], [c, d]]))
    return out


def small_sublattices(max_index: int):
    """HNF bases of all sublattices of Z^2 with index at most ``max_index``."""
    for a in range(1, max_index + 1):
        for c in range(1, max_index // a + 1):
            for b in range(a):
                yield ((a, 0), (b, c))


def brute_weak_equivalence(I: FractionalIdeal, J: FractionalIdeal, max_index=40, max_den=12) -> bool:
    """Search ``X = (1/D) L`` among small beta-stable lattices with ``I X = J``, and ``Y`` likewise.

    Degree-2 ideals only.  Uses only ideal multiplication, never the colon.
    """
    assert I.degree == 2

    def exists(P, Q):
        for D in range(1, max_den + 1):
            for basis in small_sublattices(max_index):
                X = FractionalIdeal(P.f, Lattice.from_generators(basis, 2).basis, 1)
                if not X.is_beta_stable():
                    continue
                X = FractionalIdeal.from_generators(P.f, X.basis, D)
                if ideal_mul(P, X) == Q:
                    return True
        return False

    return exists(I, J) and exists(J, I)


def random_ideal(f, rng: random.Random, gens: int = 2, size: int = 4) -> FractionalIdeal:
    """Z[beta]-ideal generated by a few random elements (span of g * beta^j)."""
    n = len(f) - 1
    beta = OrderElement.beta(f)
    elems = []
    while not elems or _rank(elems, n) < n:
        elems = []
        for _ in range(gens):
            g = OrderElement(f, tuple(rng.randint(-size, size) for _ in range(n)), rng.randint(1, 3))
            p = g
            for _ in range(n):
                elems.append(p)
                p = p * beta
    return FractionalIdeal.from_elements(elems)


def _rank(elems, n):
    rows = [[Fraction(c) for c in e.coords()] for e in elems]
    D = 1
    for r in rows:
        for x in r:
            D = lcm(D, x.denominator)
    return Lattice.from_generators([[int(x * D) for x in r] for r in rows], n).rank


def find_non_weak_pair(trace=7, det_=1, bound=5):
    """First pair of matrices with charpoly t^2 - trace t + det whose ideals are not weakly equivalent."""
    mats = matrices_with_charpoly(trace, det_, bound)
    ideals = [(A, ideal_from_matrix(A)) for A in mats]
    reps = []
    for A, I in ideals:
        for B, J in reps:
            if weakly_equivalent(I, J).found:
                break
        else:
            reps.append((A, I))
        if len(reps) >= 2:
            return reps[0][0], reps[1][0]
    return None
