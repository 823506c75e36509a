"""Finite truncations of the inverse system ``{Z^n / N_k}`` with ``N_k = Z^n (A^k - I)``.

When ``k | k'`` the polynomial ``t^k - 1`` divides ``t^k' - 1``, so
``N_k' ⊆ N_k`` and reduction gives a surjection from level ``k'`` to level
``k``.  A :class:`Tower` keeps the levels of a divisor chain and the maps
between them; the inverse limit itself is never built.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Optional, Sequence

from .bf_invariants import (
    BFGroup,
    DEFAULT_MODULE_CAP,
    apply_hom,
    bf_k,
    group_isomorphic,
    induced_map,
    is_bijective,
    is_intertwiner,
    module_isomorphic,
    require_hyperbolic,
    require_similar,
)
from .errors import ChainError, NotInvertibleModError, NotUnimodularError, ParseError
from .exact_linalg import IntMatrix, Lattice, det, lattice_intersection, matrix_power

DEFAULT_ENUM_CAP = 10**5
DEFAULT_SPOT_CHECKS = 10**3


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@dataclass(frozen=True)
class DivisorChain:
    levels: tuple[int, ...]

    def __post_init__(self):
        lv = tuple(int(k) for k in self.levels)
        if not lv:
            raise ChainError("divisor chain must be nonempty")
        if lv[0] < 1:
            raise ChainError("levels must be positive")
        for a, b in zip(lv, lv[1:]):
            if b <= a or b % a:
                raise ChainError(f"{a} does not properly divide {b}")
        object.__setattr__(self, "levels", lv)

    @classmethod
    def parse(cls, text: str) -> "DivisorChain":
        try:
            return cls(tuple(int(x) for x in text.replace(" ", "").split(",") if x))
        except ValueError as exc:
            raise ParseError(f"bad chain {text!r}") from exc

    @classmethod
    def covering(cls, ks: Iterable[int]) -> "DivisorChain":
        """Chain of running lcms; every ``k`` divides some level."""
        out: list[int] = []
        acc = 1
        for k in sorted(set(ks)):
            acc = _lcm(acc, k)
            if not out or acc != out[-1]:
                out.append(acc)
        return cls(tuple(out))

    def __iter__(self):
        return iter(self.levels)

    def __len__(self):
        return len(self.levels)

    def __str__(self):
        return ",".join(map(str, self.levels))


@dataclass(frozen=True)
class QuotientLevel:
    k: int
    group: BFGroup

    @property
    def relations(self) -> Lattice:
        return self.group.relations

    @property
    def order(self) -> int:
        return self.group.order

    def coords(self, m: Sequence[int]) -> tuple[int, ...]:
        return self.group.coords(m)

    def lift(self, x: Sequence[int]) -> tuple[int, ...]:
        return self.group.lift(x)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "factors": self.group.factors.to_list(),
            "order": self.order,
            "action": [list(r) for r in self.group.action],
        }


@dataclass(frozen=True)
class Tower:
    A: IntMatrix
    chain: DivisorChain
    levels: dict = field(hash=False)

    def level(self, k: int) -> QuotientLevel:
        try:
            return self.levels[k]
        except KeyError:
            raise ChainError(f"level {k} is not in the chain {self.chain}") from None

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "kind": "tower",
            "A": self.A.tolist(),
            "chain": list(self.chain.levels),
            "levels": [self.levels[k].to_json() for k in self.chain],
        }


def build_tower(A: IntMatrix, chain: DivisorChain) -> Tower:
    require_hyperbolic(A)
    levels = {k: QuotientLevel(k, bf_k(A, k)) for k in chain}
    for a, b in zip(chain.levels, chain.levels[1:]):
        if not levels[a].relations.contains(levels[b].relations):
            raise ArithmeticError(f"N_{b} is not contained in N_{a}")
    for k, lv in levels.items():
        if lv.order != abs(det(matrix_power(A, k) - IntMatrix.identity(A.n))):
            raise ArithmeticError(f"level {k} order disagrees with |det(A^k - I)|")
    return Tower(A, chain, levels)


def _check_divides(tower: Tower, from_k: int, to_k: int):
    tower.level(from_k)
    tower.level(to_k)
    if from_k % to_k:
        raise ChainError(f"{to_k} does not divide {from_k}")


def transition(tower: Tower, from_k: int, to_k: int, x: Sequence[int]) -> tuple[int, ...]:
    """Image of the residue vector ``x`` at level ``from_k`` in level ``to_k``."""
    _check_divides(tower, from_k, to_k)
    if from_k == to_k:
        return tuple(x)
    return tower.level(to_k).coords(tower.level(from_k).lift(x))


def transition_matrix(tower: Tower, from_k: int, to_k: int) -> tuple[tuple[int, ...], ...]:
    """The transition as a homomorphism matrix on residue coordinates."""
    src = tower.level(from_k).group
    return tuple(transition(tower, from_k, to_k, e) for e in src.generators())


def _sample_elements(G: BFGroup, cap: int, samples: int, seed: int):
    """All elements when ``|G| <= cap``; otherwise seeded random samples."""
    if G.order <= cap:
        return G.elements(), True
    rng = random.Random(seed)
    return (tuple(rng.randrange(d) for d in G.moduli) for _ in range(samples)), False


def check_surjective(
    tower: Tower, from_k: int, to_k: int, cap: int = DEFAULT_ENUM_CAP
) -> Optional[bool]:
    """Exhaustive surjectivity of a transition map; ``None`` above ``cap``."""
    src, dst = tower.level(from_k).group, tower.level(to_k).group
    if src.order > cap:
        return None
    image = {transition(tower, from_k, to_k, x) for x in src.elements()}
    return len(image) == dst.order


def check_functorial(
    tower: Tower,
    k1: int,
    k2: int,
    k3: int,
    cap: int = DEFAULT_ENUM_CAP,
    samples: int = DEFAULT_SPOT_CHECKS,
    seed: int = 0,
) -> bool:
    """``phi(k1 -> k3) = phi(k2 -> k3) o phi(k1 -> k2)`` for ``k3 | k2 | k1``."""
    xs, _ = _sample_elements(tower.level(k1).group, cap, samples, seed)
    for x in xs:
        direct = transition(tower, k1, k3, x)
        via = transition(tower, k2, k3, transition(tower, k1, k2, x))
        if direct != via:
            return False
    return True


@dataclass(frozen=True)
class CoherentTuple:
    chain: DivisorChain
    entries: tuple[tuple[int, ...], ...]

    def is_coherent(self, tower: Tower) -> bool:
        ks = self.chain.levels
        for i in range(len(ks) - 1):
            if transition(tower, ks[i + 1], ks[i], self.entries[i + 1]) != self.entries[i]:
                return False
        return True

    def add(self, other: "CoherentTuple", tower: Tower) -> "CoherentTuple":
        return CoherentTuple(
            self.chain,
            tuple(tower.level(k).group.add(a, b) for k, a, b in zip(self.chain, self.entries, other.entries)),
        )

    def to_json(self) -> dict:
        return {"chain": list(self.chain.levels), "entries": [list(e) for e in self.entries]}


def iota(tower: Tower, m: Sequence[int]) -> CoherentTuple:
    """The constant tuple of reductions of ``m`` at every level."""
    return CoherentTuple(tower.chain, tuple(tower.level(k).coords(m) for k in tower.chain))


def residual_indices(A: IntMatrix, ks: Sequence[int]) -> list[int]:
    """Indices of ``N_{k_1} ∩ ... ∩ N_{k_j}`` for ``j = 1, 2, ...``."""
    out = []
    acc: Optional[Lattice] = None
    for k in ks:
        L = bf_k(A, k).relations
        acc = L if acc is None else lattice_intersection(acc, L)
        out.append(acc.index())
    return out


# ---------------------------------------------------------------- cofinality


def order_mod(A: IntMatrix, d: int) -> int:
    """Least ``k >= 1`` with ``A^k = I`` modulo ``d``."""
    if d < 1:
        raise ValueError("modulus must be positive")
    if gcd(det(A), d) != 1:
        raise NotInvertibleModError(f"det A = {det(A)} is not a unit modulo {d}")
    n = A.n
    I = IntMatrix.identity(n).mod(d)
    Ad = A.mod(d)
    P, k = Ad, 1
    while P != I:
        P = (P @ Ad).mod(d)
        k += 1
    return k


def relations_in_scaled(A: IntMatrix, k: int, d: int) -> bool:
    """``N_k ⊆ d Z^n``, testing each generator row of ``A^k - I``.

    Membership in ``d Z^n`` depends only on residues mod ``d``, so the powers
    are taken with reduction.
    """
    n = A.n
    M = matrix_power(A, k, modulus=d) - IntMatrix.identity(n)
    target = Lattice.scaled(d, n)
    return all(target.contains_vector(row) for row in M.rows)


@dataclass(frozen=True)
class CofinalityReport:
    moduli: tuple  # (d, k, k <= K_max, contained)
    products: tuple  # (k1, k2, contained, coprime, equal-or-None)

    @property
    def all_verified(self) -> bool:
        return all(row[3] for row in self.moduli) and all(row[2] for row in self.products)

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "kind": "cofinality",
            "moduli": [
                {"d": d, "k": k, "within_k_max": w, "contained": c} for d, k, w, c in self.moduli
            ],
            "products": [
                {"k1": a, "k2": b, "contained": c, "coprime": cp, "equal": eq}
                for a, b, c, cp, eq in self.products
            ],
            "all_verified": self.all_verified,
        }


def cofinality_check(A: IntMatrix, d_max: int, k_max: int) -> CofinalityReport:
    require_hyperbolic(A)
    moduli = []
    for d in range(1, d_max + 1):
        if gcd(det(A), d) != 1:
            continue
        k = order_mod(A, d)
        moduli.append((d, k, k <= k_max, relations_in_scaled(A, k, d)))
    rel: dict[int, Lattice] = {}

    def N(k):
        if k not in rel:
            rel[k] = bf_k(A, k).relations
        return rel[k]

    products = []
    for k1 in range(1, k_max + 1):
        for k2 in range(k1, k_max // k1 + 1):
            meet = lattice_intersection(N(k1), N(k2))
            contained = meet.contains(N(k1 * k2))
            coprime = gcd(k1, k2) == 1
            equal = (meet == N(k1 * k2)) if coprime else None
            products.append((k1, k2, contained, coprime, equal))
    return CofinalityReport(tuple(moduli), tuple(products))


# ---------------------------------------------------------------- conjugacies


@dataclass(frozen=True)
class TruncatedConjugacy:
    chain: DivisorChain
    maps: dict = field(hash=False)  # k -> homomorphism matrix in residue coordinates
    intertwining: dict = field(hash=False)
    bijective: dict = field(hash=False)
    commuting: dict = field(hash=False)  # (fine, coarse) -> bool

    @property
    def verified(self) -> bool:
        return all(self.intertwining.values()) and all(self.bijective.values()) and all(
            self.commuting.values()
        )

    def apply(self, tower_b: Tower, k: int, x: Sequence[int]) -> tuple[int, ...]:
        return apply_hom(x, self.maps[k], tower_b.level(k).group.moduli)

    def check_exhaustive(
        self,
        tower_a: Tower,
        tower_b: Tower,
        cap: int = DEFAULT_ENUM_CAP,
        samples: int = DEFAULT_SPOT_CHECKS,
        seed: int = 0,
    ) -> bool:
        """Pointwise intertwining and injectivity, exhaustive up to ``cap``."""
        for k in self.chain:
            GA, GB = tower_a.level(k).group, tower_b.level(k).group
            xs, exhaustive = _sample_elements(GA, cap, samples, seed)
            seen = set()
            for x in xs:
                y = self.apply(tower_b, k, x)
                if self.apply(tower_b, k, GA.act(x)) != GB.act(y):
                    return False
                seen.add(y)
            if exhaustive and len(seen) != GA.order:
                return False
        return True

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "kind": "truncated_conjugacy",
            "chain": list(self.chain.levels),
            "maps": {str(k): [list(r) for r in v] for k, v in self.maps.items()},
            "verified": self.verified,
        }


def _verify(tower_a: Tower, tower_b: Tower, maps: dict) -> TruncatedConjugacy:
    chain = tower_a.chain
    inter, bij, comm = {}, {}, {}
    for k in chain:
        GA, GB = tower_a.level(k).group, tower_b.level(k).group
        inter[k] = is_intertwiner(GA, GB, maps[k])
        bij[k] = GA.factors == GB.factors and is_bijective(maps[k], GB.moduli)
    ks = chain.levels
    for fine, coarse in zip(ks[1:], ks):
        ok = True
        for e in tower_a.level(fine).group.generators():
            lhs = apply_hom(
                transition(tower_a, fine, coarse, e), maps[coarse], tower_b.level(coarse).group.moduli
            )
            rhs = transition(
                tower_b, fine, coarse, apply_hom(e, maps[fine], tower_b.level(fine).group.moduli)
            )
            if lhs != rhs:
                ok = False
                break
        comm[(fine, coarse)] = ok
    return TruncatedConjugacy(chain, maps, inter, bij, comm)


def induced_conjugacy(
    C: IntMatrix, A: IntMatrix, B: IntMatrix, chain: DivisorChain
) -> TruncatedConjugacy:
    """Level maps ``[m] -> [m C]`` for a conjugator with ``A C = C B``."""
    require_hyperbolic(A, "A")
    require_hyperbolic(B, "B")
    if A @ C != C @ B:
        raise NotUnimodularError("A C != C B")
    if abs(det(C)) != 1:
        raise NotUnimodularError(f"det C = {det(C)} is not a unit")
    ta, tb = build_tower(A, chain), build_tower(B, chain)
    maps = {k: induced_map(ta.level(k).group, tb.level(k).group, C) for k in chain}
    return _verify(ta, tb, maps)


@dataclass(frozen=True)
class TowerSearchResult:
    status: str  # "found" | "none" | "undecided"
    conjugacy: Optional[TruncatedConjugacy] = None
    at_k: Optional[int] = None
    reason: str = ""

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "kind": "tower_search",
            "status": self.status,
            "at_k": self.at_k,
            "reason": self.reason,
            "conjugacy": self.conjugacy.to_json() if self.conjugacy else None,
        }


def search_truncated_conjugacy(
    A: IntMatrix, B: IntMatrix, chain: DivisorChain, cap: int = DEFAULT_MODULE_CAP
) -> TowerSearchResult:
    """Find compatible level isomorphisms, deepest level first.

    An R-module isomorphism at the deepest level induces one at every coarser
    level, because ``N_k / N_K`` is the image of ``A^k - 1`` on level ``K``.
    """
    require_similar(A, B)
    ta, tb = build_tower(A, chain), build_tower(B, chain)
    for k in chain:
        if not group_isomorphic(ta.level(k).group, tb.level(k).group):
            return TowerSearchResult("none", at_k=k, reason="invariant factors differ")
    top = chain.levels[-1]
    GA, GB = ta.level(top).group, tb.level(top).group
    v = module_isomorphic(GA, GB, cap)
    if v.status == "no":
        return TowerSearchResult("none", at_k=top, reason=v.reason)
    if v.status == "undecided":
        return TowerSearchResult("undecided", at_k=top, reason=v.reason)
    Y = v.witness
    maps = {top: Y}
    for k in chain.levels[:-1]:
        Ga = ta.level(k).group
        rows = []
        for e in Ga.generators():
            x = GA.coords(Ga.lift(e))
            rows.append(transition(tb, top, k, apply_hom(x, Y, GB.moduli)))
        maps[k] = tuple(rows)
    tc = _verify(ta, tb, maps)
    if not tc.verified:
        raise ArithmeticError("induced level maps failed verification")
    return TowerSearchResult("found", tc, reason="module isomorphism at the deepest level")
