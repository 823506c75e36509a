import itertools
import random
from math import gcd

import pytest

from conftest import BASES, CAT, CUBIC, ROTATION, conjugate, random_unimodular
from toral.errors import ChainError, NotHyperbolicError, NotInvertibleModError, NotUnimodularError, ParseError
from toral.exact_linalg import IntMatrix, Lattice, det
from toral.poly import Poly
from toral.profinite_tower import (
    DivisorChain,
    build_tower,
    check_functorial,
    check_surjective,
    cofinality_check,
    induced_conjugacy,
    iota,
    order_mod,
    relations_in_scaled,
    residual_indices,
    search_truncated_conjugacy,
    transition,
    transition_matrix,
)

U2 = IntMatrix([[1, 1], [0, 1]])
COMP7 = IntMatrix.companion(Poly([1, -7, 1]))
OK_BASIS = IntMatrix([[2, 3], [3, 5]])
CHAIN = DivisorChain((1, 2, 4))
CHAIN8 = DivisorChain((1, 2, 4, 8))


# ---------------------------------------------------------------- chains


def test_chain_validation():
    assert DivisorChain.parse("1, 2,4").levels == (1, 2, 4)
    for bad in [(2, 3), (4, 2), (), (0, 2), (2, 2)]:
        with pytest.raises(ChainError):
            DivisorChain(bad)
    with pytest.raises(ParseError):
        DivisorChain.parse("1,x")


def test_chain_covering_uses_running_lcm():
    assert DivisorChain.covering([2, 3, 4]).levels == (2, 6, 12)
    assert DivisorChain.covering([1, 2, 4]).levels == (1, 2, 4)


# ---------------------------------------------------------------- construction


def test_cat_tower_orders():
    t = build_tower(CAT, CHAIN8)
    assert [t.level(k).order for k in CHAIN8] == [1, 5, 45, 2205]
    js = t.to_json()
    assert js["kind"] == "tower" and [lv["k"] for lv in js["levels"]] == [1, 2, 4, 8]


def test_tower_rejects_non_hyperbolic():
    with pytest.raises(NotHyperbolicError):
        build_tower(ROTATION, CHAIN)


def test_level_lookup_outside_chain():
    t = build_tower(CAT, CHAIN)
    with pytest.raises(ChainError):
        t.level(3)


def test_transition_examples():
    t = build_tower(CAT, CHAIN)
    G2 = t.level(2).group
    for x in G2.elements():
        assert transition(t, 2, 2, x) == x
        assert transition(t, 2, 1, x) == ()
    with pytest.raises(ChainError):
        transition(t, 2, 4, (0,))


def test_transition_is_a_homomorphism():
    t = build_tower(CAT, CHAIN8)
    G8 = t.level(8).group
    rng = random.Random(0)
    for _ in range(200):
        x = tuple(rng.randrange(d) for d in G8.moduli)
        y = tuple(rng.randrange(d) for d in G8.moduli)
        lhs = transition(t, 8, 4, G8.add(x, y))
        rhs = t.level(4).group.add(transition(t, 8, 4, x), transition(t, 8, 4, y))
        assert lhs == rhs


def test_transition_commutes_with_action():
    t = build_tower(CUBIC, CHAIN8)
    for fine, coarse in [(8, 4), (4, 2), (8, 2)]:
        Gf, Gc = t.level(fine).group, t.level(coarse).group
        for e in Gf.generators():
            assert transition(t, fine, coarse, Gf.act(e)) == Gc.act(transition(t, fine, coarse, e))
    assert len(transition_matrix(t, 8, 4)) == t.level(8).group.rank


@pytest.mark.parametrize("name", sorted(BASES))
def test_surjective_and_functorial(name):
    t = build_tower(BASES[name], CHAIN)
    for fine, coarse in itertools.combinations(reversed(CHAIN.levels), 2):
        assert check_surjective(t, fine, coarse)
    assert check_functorial(t, 4, 2, 1)


def test_surjectivity_returns_none_above_cap():
    t = build_tower(CAT, CHAIN8)
    assert check_surjective(t, 8, 4, cap=100) is None
    assert check_functorial(t, 8, 4, 2, cap=100, samples=50)


# ---------------------------------------------------------------- iota


def test_iota_examples():
    t = build_tower(CAT, CHAIN8)
    z = iota(t, (0, 0))
    assert all(not any(e) for e in z.entries)
    assert z.is_coherent(t)


def test_iota_is_coherent_additive_and_injective_at_depth():
    t = build_tower(CAT, CHAIN8)
    box = list(itertools.product(range(-2, 3), repeat=2))
    images = {}
    for m in box:
        c = iota(t, m)
        assert c.is_coherent(t)
        images.setdefault(c.entries, m)
    assert len(images) == len(box)
    for m, m2 in [((1, 0), (0, 1)), ((2, -1), (-3, 5))]:
        s = tuple(a + b for a, b in zip(m, m2))
        assert iota(t, m).add(iota(t, m2), t) == iota(t, s)


def test_iota_json_shape():
    js = iota(build_tower(CAT, CHAIN), (1, 2)).to_json()
    assert js["chain"] == [1, 2, 4] and len(js["entries"]) == 3


# ---------------------------------------------------------------- residual separation


@pytest.mark.parametrize("name", sorted(BASES))
def test_residual_index_strictly_increasing(name):
    idx = residual_indices(BASES[name], range(1, 7))
    assert all(a < b for a, b in zip(idx[1:], idx[2:]))
    assert idx[0] <= idx[1]


def test_residual_indices_cat_values():
    assert residual_indices(CAT, range(1, 6)) == [1, 5, 80, 720, 87120]


# ---------------------------------------------------------------- cofinality


def test_order_mod_examples():
    assert order_mod(IntMatrix.identity(2), 7) == 1
    assert order_mod(CAT, 2) == 3
    assert order_mod(CAT, 1) == 1
    with pytest.raises(NotInvertibleModError):
        order_mod(IntMatrix([[2, 0], [0, 1]]), 4)


@pytest.mark.parametrize("name", sorted(BASES))
def test_order_mod_containment(name):
    A = BASES[name]
    for d in range(1, 31):
        k = order_mod(A, d)
        assert relations_in_scaled(A, k, d)


def _pisano(d):
    if d == 1:
        return 1
    a, b, k = 0, 1, 0
    while True:
        a, b, k = b, (a + b) % d, k + 1
        if (a, b) == (0, 1):
            return k


def test_order_mod_matches_pisano_period():
    # the cat map is the square of [[1,1],[1,0]], whose order mod d is the Pisano period
    for d in range(1, 61):
        p = _pisano(d)
        assert order_mod(CAT, d) == p // gcd(p, 2)


def test_relations_in_scaled_matches_lattice_containment():
    from toral.bf_invariants import bf_k

    for k in range(1, 6):
        N = bf_k(CAT, k).relations
        for d in range(1, 8):
            assert relations_in_scaled(CAT, k, d) == Lattice.scaled(d, 2).contains(N)


def test_cofinality_report():
    r = cofinality_check(CAT, 12, 12)
    assert r.all_verified
    js = r.to_json()
    assert js["kind"] == "cofinality"
    assert {row["d"] for row in js["moduli"]} == set(range(1, 13))
    coprime = [p for p in js["products"] if p["coprime"]]
    assert all(p["equal"] is not None for p in coprime)
    assert all(p["equal"] is None for p in js["products"] if not p["coprime"])


def test_cofinality_skips_moduli_sharing_factors_with_det():
    A = IntMatrix([[3, 1], [1, 1]])  # det 2
    r = cofinality_check(A, 6, 4)
    assert [row[0] for row in r.moduli] == [1, 3, 5]


# ---------------------------------------------------------------- conjugacies


def test_induced_identity():
    tc = induced_conjugacy(IntMatrix.identity(2), CAT, CAT, CHAIN)
    assert tc.verified
    for k in CHAIN:
        G = build_tower(CAT, CHAIN).level(k).group
        assert tc.maps[k] == tuple(G.generators())


def test_induced_by_unimodular_conjugator():
    B = conjugate(CAT, U2)
    tc = induced_conjugacy(U2, CAT, B, CHAIN)
    assert tc.verified
    assert tc.check_exhaustive(build_tower(CAT, CHAIN), build_tower(B, CHAIN))
    assert tc.to_json()["verified"] is True


def test_induced_rejects_bad_conjugators():
    with pytest.raises(NotUnimodularError):
        induced_conjugacy(U2, CAT, CAT, CHAIN)
    with pytest.raises(NotUnimodularError):
        induced_conjugacy(IntMatrix.identity(2) * 2, CAT, CAT, CHAIN)


def test_induced_exhaustive_on_cubic():
    rng = random.Random(8)
    U = random_unimodular(3, rng)
    B = conjugate(CUBIC, U)
    chain = DivisorChain((1, 2, 4, 8))
    ta, tb = build_tower(CUBIC, chain), build_tower(B, chain)
    assert all(ta.level(k).order <= 10**3 for k in chain)
    tc = induced_conjugacy(U, CUBIC, B, chain)
    assert tc.verified and tc.check_exhaustive(ta, tb)


def test_composition_of_induced_conjugacies():
    rng = random.Random(21)
    U, V = random_unimodular(2, rng), random_unimodular(2, rng)
    B = conjugate(CAT, U)
    C = conjugate(B, V)
    ta, tb, tc = (build_tower(M, CHAIN) for M in (CAT, B, C))
    first = induced_conjugacy(U, CAT, B, CHAIN)
    second = induced_conjugacy(V, B, C, CHAIN)
    both = induced_conjugacy(U @ V, CAT, C, CHAIN)
    for k in CHAIN:
        for x in ta.level(k).group.elements():
            assert second.apply(tc, k, first.apply(tb, k, x)) == both.apply(tc, k, x)


def test_search_examples():
    r = search_truncated_conjugacy(CAT, CAT, CHAIN)
    assert r.status == "found" and r.conjugacy.verified
    B = conjugate(CAT, U2)
    r = search_truncated_conjugacy(CAT, B, CHAIN8)
    assert r.status == "found" and r.conjugacy.verified
    assert r.conjugacy.check_exhaustive(build_tower(CAT, CHAIN8), build_tower(B, CHAIN8))
    r = search_truncated_conjugacy(COMP7, OK_BASIS, CHAIN)
    assert r.status == "none" and r.at_k == 2
    assert r.to_json()["kind"] == "tower_search"


def test_search_undecided_above_cap():
    r = search_truncated_conjugacy(CAT, CAT, CHAIN8, cap=100)
    assert r.status == "undecided" and r.conjugacy is None


def test_det_of_level_relations_matches_order():
    t = build_tower(CUBIC, CHAIN8)
    for k in CHAIN8:
        assert t.level(k).relations.index() == t.level(k).order
        assert abs(det(IntMatrix(list(t.level(k).relations.basis)))) == t.level(k).order
