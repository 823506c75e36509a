import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CAT, CUBIC, REDUCIBLE, conjugate, random_unimodular
from oracles import brute_weak_equivalence, find_non_weak_pair, random_ideal
from toral.bf_invariants import bf_k, is_bijective, is_intertwiner, induced_map, strong_bf_equivalent
from toral.errors import DissimilarError, FieldMismatchError, NotHyperbolicError, ReducibleError
from toral.exact_linalg import IntMatrix
from toral.ideals import (
    FractionalIdeal,
    box_vectors,
    conjugate_over_Z,
    eigenvector,
    equivalence_chain_report,
    ideal_colon,
    ideal_equivalent,
    ideal_from_matrix,
    ideal_mul,
    is_cyclic_direct,
    is_cyclic_via_ideal,
    krylov_det,
    multiplicator_ring,
    weakly_equivalent,
)
from toral.poly import Poly
from toral.polynum import OrderElement

F2 = (1, -3, 1)
F7 = (1, -7, 1)
COMP7 = IntMatrix.companion(Poly(F7))
OK_BASIS = IntMatrix([[2, 3], [3, 5]])
U2 = IntMatrix([[1, 1], [0, 1]])


def unit(f):
    return FractionalIdeal.unit(f)


# ---------------------------------------------------------------- construction


def test_companion_ideal_is_principal():
    for f in (F2, F7, (-1, -2, 1, 1)):
        C = IntMatrix.companion(Poly(f))
        I = ideal_from_matrix(C)
        assert ideal_equivalent(I, unit(f)).found


def test_cat_map_ideal_is_the_full_order():
    assert ideal_from_matrix(CAT) == unit(F2)
    # the eigenvector (1, beta - 2) spans the same lattice
    beta = OrderElement.beta(F2)
    u = [OrderElement.one(F2), beta + OrderElement(F2, (-2,))]
    assert FractionalIdeal.from_elements(u) == unit(F2)


def test_eigenvector_identity():
    for A in (CAT, CUBIC, OK_BASIS, conjugate(CUBIC, random_unimodular(3, random.Random(3)))):
        f = eigenvector(A)[0].f
        beta = OrderElement.beta(f)
        for col in range(A.n):
            u = eigenvector(A, col)
            for i in range(A.n):
                lhs = OrderElement(f, (0,))
                for j in range(A.n):
                    lhs = lhs + OrderElement(f, (A[i, j],)) * u[j]
                assert lhs == beta * u[i]


def test_adjugate_columns_give_equivalent_ideals():
    for A in (CAT, OK_BASIS, CUBIC):
        ideals = [ideal_from_matrix(A, c) for c in range(A.n)]
        for J in ideals[1:]:
            assert ideal_equivalent(ideals[0], J).found


def test_conjugate_matrix_gives_equivalent_ideal():
    rng = random.Random(11)
    for A in (CAT, CUBIC, OK_BASIS):
        B = conjugate(A, random_unimodular(A.n, rng))
        v = ideal_equivalent(ideal_from_matrix(A), ideal_from_matrix(B))
        assert v.found
        assert ideal_from_matrix(A).scale(v.witness) == ideal_from_matrix(B)


def test_reducible_rejected():
    with pytest.raises(ReducibleError):
        ideal_from_matrix(REDUCIBLE)
    with pytest.raises(ReducibleError):
        is_cyclic_via_ideal(IntMatrix.identity(2))


def test_from_generators_canonical():
    I = FractionalIdeal.from_generators(F7, [[2, 0], [0, 2]], 4)
    assert I == unit(F7).scale(OrderElement(F7, (1,), 2))
    assert I.den == 2 and I.basis == ((1, 0), (0, 1))
    assert FractionalIdeal.from_json(I.to_json()) == I


# ---------------------------------------------------------------- arithmetic


def test_mul_examples():
    I = ideal_from_matrix(OK_BASIS)
    O = unit(F7)
    assert ideal_mul(I, O) == I
    assert ideal_mul(O, O) == O
    g = OrderElement(F7, (2, 1))
    assert ideal_mul(I, O.scale(g)) == I.scale(g)


def test_colon_examples():
    O = unit(F7)
    I = ideal_from_matrix(OK_BASIS)
    assert ideal_colon(O, O) == O
    assert ideal_colon(I, O) == I
    C = ideal_colon(O, I)
    assert O.contains_ideal(ideal_mul(C, I))


def test_mismatched_fields_rejected():
    with pytest.raises(FieldMismatchError):
        ideal_mul(unit(F2), unit(F7))


@given(st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_random_ideal_properties(seed):
    rng = random.Random(seed)
    f = rng.choice([F2, F7, (-1, -2, 1, 1)])
    I, J = random_ideal(f, rng), random_ideal(f, rng)
    assert I.is_beta_stable()
    # colon containment
    assert J.contains_ideal(ideal_mul(ideal_colon(J, I), I))
    # multiplicator ring is a ring containing Z[beta]
    R = multiplicator_ring(I)
    assert R.contains_ideal(unit(f))
    assert ideal_mul(R, R) == R
    assert ideal_mul(R, I) == I
    # weak equivalence reflexive and symmetric
    assert weakly_equivalent(I, I).found
    assert weakly_equivalent(I, J).found == weakly_equivalent(J, I).found
    # arithmetic implies weak
    g = OrderElement(f, tuple(rng.randint(-3, 3) for _ in range(len(f) - 1)))
    if not g.is_zero():
        K = I.scale(g)
        assert weakly_equivalent(I, K).found
        v = ideal_equivalent(I, K, bound=4)
        if v.found:
            assert I.scale(v.witness) == K


def test_norm_multiplicative_for_principal_factor():
    rng = random.Random(5)
    for _ in range(10):
        f = rng.choice([F2, F7])
        I = random_ideal(f, rng)
        g = OrderElement(f, (rng.randint(1, 4), rng.randint(-4, 4)))
        P = unit(f).scale(g)
        assert ideal_mul(I, P).norm() == I.norm() * P.norm()


# ---------------------------------------------------------------- equivalences


def test_weak_equivalence_examples():
    I = ideal_from_matrix(OK_BASIS)
    v = weakly_equivalent(I, I)
    assert v.relation == "weak_equivalent"
    X, Y = v.witness
    assert X == Y == multiplicator_ring(I)
    B = conjugate(OK_BASIS, U2)
    assert weakly_equivalent(I, ideal_from_matrix(B)).found


def test_known_non_weakly_equivalent_pair():
    I, J = ideal_from_matrix(COMP7), ideal_from_matrix(OK_BASIS)
    v = weakly_equivalent(I, J)
    assert v.certified_negative
    assert multiplicator_ring(I) != multiplicator_ring(J)
    assert ideal_equivalent(I, J).certified_negative


def test_ideal_equivalent_examples():
    I = ideal_from_matrix(OK_BASIS)
    assert ideal_equivalent(I, I).witness == OrderElement.one(F7)
    beta = OrderElement.beta(F7)
    v = ideal_equivalent(I, I.scale(beta))
    assert v.relation == "arithmetically_equivalent"
    assert I.scale(v.witness) == I.scale(beta)


@pytest.mark.parametrize(
    "A, B, expected",
    [
        (COMP7, OK_BASIS, False),
        (OK_BASIS, COMP7, False),
        (COMP7, conjugate(COMP7, U2), True),
        (OK_BASIS, conjugate(OK_BASIS, IntMatrix([[1, 0], [2, 1]])), True),
        (CAT, conjugate(CAT, U2), True),
    ],
)
def test_weak_equivalence_matches_sublattice_oracle(A, B, expected):
    I, J = ideal_from_matrix(A), ideal_from_matrix(B)
    assert weakly_equivalent(I, J).found is expected
    assert brute_weak_equivalence(I, J) is expected


def test_search_finds_non_weak_pair():
    pair = find_non_weak_pair()
    assert pair is not None
    A, B = pair
    assert not weakly_equivalent(ideal_from_matrix(A), ideal_from_matrix(B)).found


# ---------------------------------------------------------------- cyclicity


def test_box_order():
    vs = list(box_vectors(2, 1))
    assert vs[:4] == [(0, 0), (0, 1), (0, -1), (1, 0)]
    assert len(vs) == 9


def test_cyclic_direct_examples():
    for f in (F2, F7, (-1, -2, 1, 1), (1, 0, -2, -1, 1)):
        C = IntMatrix.companion(Poly(f))
        e1 = (1,) + (0,) * (C.n - 1)
        assert abs(krylov_det(C, e1)) == 1
        v = is_cyclic_direct(C)
        assert v.status == "yes" and abs(krylov_det(C, v.witness)) == 1
    v = is_cyclic_direct(CAT)
    assert v.status == "yes" and v.witness == (0, 1)
    assert abs(krylov_det(CAT, (0, 1))) == 1
    assert is_cyclic_direct(IntMatrix.identity(2), bound=3).status == "not_found"


def test_cyclic_via_ideal_examples():
    assert is_cyclic_via_ideal(COMP7).status == "yes"
    assert is_cyclic_via_ideal(CAT).status == "yes"
    assert is_cyclic_via_ideal(OK_BASIS).status == "no"
    assert is_cyclic_direct(OK_BASIS, bound=6).status == "not_found"


def test_cyclic_methods_agree():
    rng = random.Random(2)
    mats = [CAT, OK_BASIS, CUBIC, conjugate(CUBIC, random_unimodular(3, rng)), conjugate(OK_BASIS, U2)]
    for A in mats:
        d = is_cyclic_direct(A, 6).status
        i = is_cyclic_via_ideal(A, 6).status
        assert (d == "yes") == (i == "yes")


# ---------------------------------------------------------------- conjugacy


def test_conjugate_examples():
    v = conjugate_over_Z(CAT, CAT)
    assert v.status == "yes"
    rng = random.Random(4)
    for A in (CAT, CUBIC, OK_BASIS):
        B = conjugate(A, random_unimodular(A.n, rng))
        v = conjugate_over_Z(A, B)
        assert v.status == "yes"
        assert A @ v.C == v.C @ B
    assert conjugate_over_Z(COMP7, OK_BASIS).status == "no"
    with pytest.raises(DissimilarError):
        conjugate_over_Z(CAT, COMP7)


def test_conjugacy_witness_induces_module_isomorphisms():
    B = conjugate(CUBIC, random_unimodular(3, random.Random(9)))
    v = conjugate_over_Z(CUBIC, B)
    assert v.status == "yes"
    for k in range(1, 9):
        GA, GB = bf_k(CUBIC, k), bf_k(B, k)
        Y = induced_map(GA, GB, v.C)
        assert is_intertwiner(GA, GB, Y) and is_bijective(Y, GB.moduli)


def test_chain_report_examples():
    r = equivalence_chain_report(CAT, conjugate(CAT, U2), max_k=6)
    assert r.weak_equivalence and r.block_conjugate and r.profinitely_conjugate and r.strongly_bf_equivalent
    assert r.cross_check["verdict"] == "consistent"
    r = equivalence_chain_report(CAT, CAT, max_k=4)
    assert r.strongly_bf_equivalent
    r = equivalence_chain_report(COMP7, OK_BASIS, max_k=4)
    assert not any([r.weak_equivalence, r.block_conjugate, r.profinitely_conjugate, r.strongly_bf_equivalent])
    assert r.consistent


def test_chain_report_preconditions():
    with pytest.raises(DissimilarError):
        equivalence_chain_report(CAT, COMP7)
    with pytest.raises(ReducibleError):
        equivalence_chain_report(REDUCIBLE, REDUCIBLE)
    rot = IntMatrix([[0, -1], [1, 0]])
    with pytest.raises(NotHyperbolicError):
        equivalence_chain_report(rot, rot)


def test_chain_report_consistent_with_bf_on_searched_pair():
    A, B = find_non_weak_pair()
    r = equivalence_chain_report(A, B, max_k=6)
    assert not r.weak_equivalence
    bf = strong_bf_equivalent(A, B, max_k=6)
    # a refutation is the only contradiction possible with (a) true; here (a) is false,
    # so any BF verdict is compatible, and a refutation corroborates it
    assert r.consistent
    assert not (r.weak_equivalence and bf.verdict == "refuted")
