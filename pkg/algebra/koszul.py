"""Koszul cocomplexes K•(R̄; g1^q..gs^q), their cohomology and the Frobenius chain maps.

K^t has one copy of R̄ per t-subset of {1..s}, enumerated in colex order.
The differential is twisted by the generators:

    d^t(κ)_{v1..v(t+1)} = Σ_ℓ (-1)^ℓ g_{vℓ}^q κ_{v1..v̂ℓ..v(t+1)}     (ℓ 1-based)

Without the g factor d∘d is the exact simplicial complex and multiplication by
(∏g)^(p^j-1) is not a chain map; both self-checks below catch that.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Sequence

from algebra.errors import ContractViolation, InternalConsistencyError
from algebra.freemod import (
    FreeElem,
    ModuleGB,
    PolyMatrix,
    buchberger,
    kernel_gens,
    preimage_kernel,
    quotient_dim,
)
from algebra.polyring import Poly, PolyRing, frobenius_power, is_power_of, power_p_minus_one_chain

logger = logging.getLogger(__name__)

Subset = tuple[int, ...]


# ---------- subset enumeration ----------

@lru_cache(maxsize=256)
def colex_subsets(s: int, t: int) -> tuple[Subset, ...]:
    """t-subsets of {0..s-1} (0-based), colex order."""
    if t < 0 or t > s:
        return ()
    return tuple(sorted(combinations(range(s), t), key=lambda v: tuple(reversed(v))))


def subset_rank(subset: Subset) -> int:
    """Position of a sorted 0-based subset in the colex enumeration."""
    return sum(comb(a, k + 1) for k, a in enumerate(subset))


def format_subset(subset: Subset) -> str:
    return "{" + ",".join(str(v + 1) for v in subset) + "}"


# ---------- the complex ----------

@dataclass(frozen=True)
class KoszulComplex:
    ring: PolyRing
    base_generators: tuple[Poly, ...]
    level: int
    generators: tuple[Poly, ...]
    differentials: tuple[PolyMatrix, ...]

    @property
    def s(self) -> int:
        return len(self.generators)

    def rank(self, t: int) -> int:
        return comb(self.s, t) if 0 <= t <= self.s else 0

    def subsets(self, t: int) -> tuple[Subset, ...]:
        return colex_subsets(self.s, t)

    def differential(self, t: int) -> PolyMatrix:
        """d^t : K^t -> K^(t+1); zero maps at the two ends."""
        if 0 <= t < self.s:
            return self.differentials[t]
        return PolyMatrix(self.ring, self.rank(t + 1), self.rank(t))

    def subset_product(self, subset: Subset) -> Poly:
        out = self.ring.one()
        for v in subset:
            out = out * self.generators[v]
        return out


def build_koszul(gens: Sequence[Poly], q: int = 1, check: bool = True) -> KoszulComplex:
    if not gens:
        raise ContractViolation("a Koszul complex needs at least one generator")
    ring = gens[0].ring
    if any(g.ring != ring for g in gens):
        raise ContractViolation("generators from different rings")
    if not is_power_of(q, ring.p):
        raise ContractViolation(f"level {q} is not a power of {ring.p}")
    twisted = tuple(frobenius_power(g, q) for g in gens)
    s = len(gens)
    diffs = []
    for t in range(s):
        entries = {}
        for row, w in enumerate(colex_subsets(s, t + 1)):
            for ell, v in enumerate(w, start=1):
                rest = w[: ell - 1] + w[ell:]
                g = twisted[v]
                entries[(row, subset_rank(rest))] = -g if ell % 2 else g
        diffs.append(PolyMatrix(ring, comb(s, t + 1), comb(s, t), entries))
    K = KoszulComplex(ring, tuple(gens), q, twisted, tuple(diffs))
    if check:
        for t in range(s - 1):
            if not (diffs[t + 1] @ diffs[t]).is_zero():
                raise InternalConsistencyError(f"d^{t + 1} ∘ d^{t} != 0 in the Koszul complex")
    return K


# ---------- cohomology ----------

@dataclass(frozen=True)
class CocycleRep:
    degree: int
    element: FreeElem


@dataclass
class PresentedModule:
    """H^i(K•) as cocycle generators modulo the coboundary submodule."""

    ring: PolyRing
    degree: int
    rank: int
    generators: tuple[CocycleRep, ...]
    coboundaries: ModuleGB
    _relations: ModuleGB | None = field(default=None, repr=False)

    @property
    def is_zero(self) -> bool:
        return not self.generators

    @property
    def cocycles(self) -> list[FreeElem]:
        return [g.element for g in self.generators]

    def relation_gb(self) -> ModuleGB:
        """Relations among the generators: {c ∈ R̄^v : Σ c_t m̃_t ∈ im d^(i-1)}."""
        if self._relations is None:
            v = len(self.generators)
            phi = PolyMatrix.from_columns(self.ring, self.rank, self.cocycles)
            rels = preimage_kernel(phi, self.coboundaries)
            self._relations = buchberger(rels, ring=self.ring, rank=v, provenance="relations")
        return self._relations

    def length(self) -> int | float:
        """Vector-space dimension of the module (INFINITE when not finite length)."""
        return quotient_dim(len(self.generators), self.relation_gb())


def cohomology_presentation(K: KoszulComplex, i: int, prune: bool = False) -> PresentedModule:
    if not 0 <= i <= K.s:
        raise ContractViolation(f"cohomological degree {i} outside 0..{K.s}")
    d_i = K.differential(i)
    cocycles = kernel_gens(d_i)
    for z in cocycles:
        if not d_i.apply(z).is_zero():
            raise InternalConsistencyError(f"kernel generator of d^{i} is not a cocycle")
    cob = buchberger(K.differential(i - 1).columns(), ring=K.ring, rank=K.rank(i), provenance=f"im d^{i - 1}")
    kept = [z for z in cocycles if not cob.contains(z)]
    if prune and len(kept) > 1:
        pruned: list[FreeElem] = []
        gb = cob
        for z in kept:
            if gb.contains(z):
                continue
            pruned.append(z)
            gb = buchberger(list(cob.basis) + pruned, ring=K.ring, rank=K.rank(i))
        kept = pruned
    logger.debug("H^%d: %d cocycle generators, %d kept", i, len(cocycles), len(kept))
    return PresentedModule(K.ring, i, K.rank(i), tuple(CocycleRep(i, z) for z in kept), cob)


# ---------- Frobenius chain maps ----------

@dataclass(frozen=True)
class ChainMapLevel:
    """Diagonal chain map K•(g^q) -> K•(g^(q·p^j)); multipliers[t][k] scales component k of K^t."""

    source_level: int
    target_level: int
    j: int
    multipliers: tuple[tuple[Poly, ...], ...]

    def multiplier(self, t: int, subset: Subset) -> Poly:
        return self.multipliers[t][subset_rank(subset)]

    def matrix(self, ring: PolyRing, t: int) -> PolyMatrix:
        return PolyMatrix.diagonal(ring, self.multipliers[t])


def beta_chain_map(K: KoszulComplex, j: int, check: bool = True, target: KoszulComplex | None = None) -> ChainMapLevel:
    """β•_j: multiplication by (∏_{v} g_v^q)^(p^j - 1) on each subset component."""
    if j < 1:
        raise ContractViolation("β_j needs j >= 1")
    p = K.ring.p
    products: dict[Subset, Poly] = {(): K.ring.one()}
    mults = []
    for t in range(K.s + 1):
        row = []
        for v in K.subsets(t):
            if v not in products:
                products[v] = products[v[:-1]] * K.generators[v[-1]]
            row.append(power_p_minus_one_chain(products[v], j))
        mults.append(tuple(row))
    cm = ChainMapLevel(K.level, K.level * p**j, j, tuple(mults))
    if check:
        target = target or build_koszul(K.base_generators, cm.target_level, check=False)
        for t in range(K.s):
            lhs = target.differential(t) @ cm.matrix(K.ring, t)
            rhs = cm.matrix(K.ring, t + 1) @ K.differential(t)
            if lhs != rhs:
                raise InternalConsistencyError(f"β_{j} does not commute with d^{t}")
    return cm


def apply_chain_map(cm: ChainMapLevel, v: FreeElem, degree: int) -> FreeElem:
    row = cm.multipliers[degree]
    if v.rank != len(row):
        raise ContractViolation(f"element of rank {v.rank} at degree {degree} (rank {len(row)})")
    return FreeElem(v.ring, v.rank, {k: f * row[k] for k, f in v.components.items()})


def compose_chain_maps(first: ChainMapLevel, second: ChainMapLevel) -> ChainMapLevel:
    """second ∘ first."""
    if first.target_level != second.source_level:
        raise ContractViolation("chain maps do not compose: levels differ")
    mults = tuple(tuple(a * b for a, b in zip(ra, rb)) for ra, rb in zip(first.multipliers, second.multipliers))
    return ChainMapLevel(first.source_level, second.target_level, first.j + second.j, mults)
