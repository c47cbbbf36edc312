"""Finite free R̄-modules and the Gröbner engine behind every membership test.

Module elements use a position-over-term order: the smallest component index
dominates, ties go to the ring's monomial order (grevlex by default). Kernels
and preimages come from elimination on stacked vectors, so one Buchberger run
serves all of kernel_gens, preimage_kernel and the cohomology presentations.
"""
from __future__ import annotations

import logging
import math
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from heapq import heappop, heappush
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

from algebra.errors import ContractViolation
from algebra.polyring import (
    ExpVec,
    MonomialOrder,
    Poly,
    PolyRing,
    divides,
    exp_add,
    exp_lcm,
    exp_sub,
)

logger = logging.getLogger(__name__)

Term = tuple[int, ExpVec]
Vec = dict[Term, int]

INFINITE = math.inf


# ---------- elements ----------

class FreeElem:
    """An element of R̄^rank, stored as its nonzero component polynomials."""

    __slots__ = ("ring", "rank", "_comps", "_hash")

    def __init__(self, ring: PolyRing, rank: int, comps: Mapping[int, Poly] | None = None):
        self.ring = ring
        self.rank = rank
        clean = {}
        for k, f in sorted((comps or {}).items()):
            if not 0 <= k < rank:
                raise ContractViolation(f"component {k} outside rank {rank}")
            if f.ring != ring:
                raise ContractViolation("component polynomial from another ring")
            if f:
                clean[k] = f
        self._comps = clean
        self._hash = None

    @classmethod
    def from_list(cls, ring: PolyRing, polys: Sequence[Poly | int]) -> FreeElem:
        comps = {k: (f if isinstance(f, Poly) else ring.const(f)) for k, f in enumerate(polys)}
        return cls(ring, len(polys), comps)

    @classmethod
    def basis(cls, ring: PolyRing, rank: int, k: int) -> FreeElem:
        return cls(ring, rank, {k: ring.one()})

    @classmethod
    def zero(cls, ring: PolyRing, rank: int) -> FreeElem:
        return cls(ring, rank)

    @classmethod
    def from_vec(cls, ring: PolyRing, rank: int, vec: Mapping[Term, int]) -> FreeElem:
        grouped: dict[int, dict[ExpVec, int]] = {}
        for (k, e), c in vec.items():
            grouped.setdefault(k, {})[e] = c
        return cls(ring, rank, {k: ring.from_terms(t) for k, t in grouped.items()})

    def to_vec(self) -> Vec:
        return {(k, e): c for k, f in self._comps.items() for e, c in f}

    def component(self, k: int) -> Poly:
        return self._comps.get(k, self.ring.zero())

    @property
    def components(self) -> dict[int, Poly]:
        return dict(self._comps)

    def support(self) -> list[int]:
        return list(self._comps)

    def terms(self) -> Iterator[tuple[int, ExpVec, int]]:
        for k, f in self._comps.items():
            for e, c in f:
                yield k, e, c

    def to_list(self) -> list[Poly]:
        return [self.component(k) for k in range(self.rank)]

    def is_zero(self) -> bool:
        return not self._comps

    def __bool__(self) -> bool:
        return bool(self._comps)

    def total_degree(self) -> int:
        return max((f.total_degree() for f in self._comps.values()), default=0)

    def _check(self, other: FreeElem) -> None:
        if self.ring != other.ring or self.rank != other.rank:
            raise ContractViolation("ambient mismatch between module elements")

    def __add__(self, other: FreeElem) -> FreeElem:
        self._check(other)
        comps = dict(self._comps)
        for k, f in other._comps.items():
            comps[k] = comps[k] + f if k in comps else f
        return FreeElem(self.ring, self.rank, comps)

    def __neg__(self) -> FreeElem:
        return FreeElem(self.ring, self.rank, {k: -f for k, f in self._comps.items()})

    def __sub__(self, other: FreeElem) -> FreeElem:
        return self + (-other)

    def __mul__(self, scalar: Poly | int) -> FreeElem:
        return FreeElem(self.ring, self.rank, {k: f * scalar for k, f in self._comps.items()})

    __rmul__ = __mul__

    def mul_term(self, exp: ExpVec, c: int = 1) -> FreeElem:
        return FreeElem(self.ring, self.rank, {k: f.mul_term(exp, c) for k, f in self._comps.items()})

    def change_ring(self, ring: PolyRing) -> FreeElem:
        return FreeElem(ring, self.rank, {k: ring.from_terms(f.terms) for k, f in self._comps.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, FreeElem):
            return NotImplemented
        return self.ring == other.ring and self.rank == other.rank and self._comps == other._comps

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rank, tuple(self._comps.items())))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"e{k}: {f}" for k, f in self._comps.items())
        return f"FreeElem(rank={self.rank}; {body or '0'})"


class PolyMatrix:
    """A map R̄^cols -> R̄^rows with sparse polynomial entries."""

    __slots__ = ("ring", "rows", "cols", "_entries")

    def __init__(self, ring: PolyRing, rows: int, cols: int, entries: Mapping[tuple[int, int], Poly] | None = None):
        if rows < 0 or cols < 0:
            raise ContractViolation("matrix dimensions must be nonnegative")
        self.ring = ring
        self.rows = rows
        self.cols = cols
        clean = {}
        for (r, c), f in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise ContractViolation(f"entry ({r}, {c}) outside {rows}x{cols}")
            if f:
                clean[(r, c)] = f
        self._entries = clean

    @classmethod
    def from_columns(cls, ring: PolyRing, rows: int, columns: Sequence[FreeElem]) -> PolyMatrix:
        entries = {}
        for c, col in enumerate(columns):
            if col.rank != rows:
                raise ContractViolation(f"column of rank {col.rank} in a matrix with {rows} rows")
            for r, f in col.components.items():
                entries[(r, c)] = f
        return cls(ring, rows, len(columns), entries)

    @classmethod
    def from_rows(cls, ring: PolyRing, rows: Sequence[Sequence[Poly | int]]) -> PolyMatrix:
        ncols = len(rows[0]) if rows else 0
        entries = {}
        for r, row in enumerate(rows):
            for c, f in enumerate(row):
                entries[(r, c)] = f if isinstance(f, Poly) else ring.const(f)
        return cls(ring, len(rows), ncols, entries)

    @classmethod
    def diagonal(cls, ring: PolyRing, polys: Sequence[Poly]) -> PolyMatrix:
        return cls(ring, len(polys), len(polys), {(k, k): f for k, f in enumerate(polys)})

    def entry(self, r: int, c: int) -> Poly:
        return self._entries.get((r, c), self.ring.zero())

    def entries(self) -> dict[tuple[int, int], Poly]:
        return dict(self._entries)

    def column(self, c: int) -> FreeElem:
        return FreeElem(self.ring, self.rows, {r: f for (r, cc), f in self._entries.items() if cc == c})

    def columns(self) -> list[FreeElem]:
        grouped: dict[int, dict[int, Poly]] = {}
        for (r, c), f in self._entries.items():
            grouped.setdefault(c, {})[r] = f
        return [FreeElem(self.ring, self.rows, grouped.get(c, {})) for c in range(self.cols)]

    def apply(self, v: FreeElem) -> FreeElem:
        if v.rank != self.cols:
            raise ContractViolation(f"vector of rank {v.rank} for a matrix with {self.cols} columns")
        out: dict[int, Poly] = {}
        comps = v.components
        for (r, c), f in self._entries.items():
            if c in comps:
                term = f * comps[c]
                out[r] = out[r] + term if r in out else term
        return FreeElem(self.ring, self.rows, out)

    def __matmul__(self, other: PolyMatrix) -> PolyMatrix:
        """self ∘ other."""
        if self.cols != other.rows:
            raise ContractViolation(f"cannot compose {self.rows}x{self.cols} with {other.rows}x{other.cols}")
        by_row: dict[int, list[tuple[int, Poly]]] = {}
        for (r, c), f in other._entries.items():
            by_row.setdefault(r, []).append((c, f))
        out: dict[tuple[int, int], Poly] = {}
        for (r, k), f in self._entries.items():
            for c, g in by_row.get(k, ()):
                term = f * g
                out[(r, c)] = out[(r, c)] + term if (r, c) in out else term
        return PolyMatrix(self.ring, self.rows, other.cols, out)

    def is_zero(self) -> bool:
        return not self._entries

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return (self.rows, self.cols, self._entries) == (other.rows, other.cols, other._entries)

    def __repr__(self) -> str:
        return f"PolyMatrix({self.rows}x{self.cols}, {len(self._entries)} entries)"


# ---------- statistics ----------

@dataclass
class GBStats:
    bases: int = 0
    largest_basis: int = 0
    spairs_reduced: int = 0
    spairs_skipped: int = 0


_active_stats: ContextVar[GBStats | None] = ContextVar("gb_stats", default=None)


@contextmanager
def collect_gb_stats() -> Iterator[GBStats]:
    stats = GBStats()
    token = _active_stats.set(stats)
    try:
        yield stats
    finally:
        _active_stats.reset(token)


# ---------- Buchberger engine ----------

def _term_key(ring: PolyRing):
    mono = ring.key

    def key(term: Term) -> tuple:
        return (-term[0], mono(term[1]))

    return key


def _reduce(vec: Vec, reducers: Mapping[int, list[tuple[ExpVec, Vec]]], key, p: int) -> Vec:
    """Full reduction of vec by monic reducers grouped by leading component."""
    work = dict(vec)
    rem: Vec = {}
    while work:
        lt = max(work, key=key)
        c = work[lt]
        comp, exp = lt
        found = None
        for g_exp, g in reducers.get(comp, ()):
            if divides(g_exp, exp):
                found = (g_exp, g)
                break
        if found is None:
            rem[lt] = work.pop(lt)
            continue
        g_exp, g = found
        shift = exp_sub(exp, g_exp)
        for (gc, ge), gv in g.items():
            t = (gc, exp_add(ge, shift))
            v = (work.get(t, 0) - c * gv) % p
            if v:
                work[t] = v
            else:
                work.pop(t, None)
    return rem


def _spoly(f: Vec, fe: ExpVec, g: Vec, ge: ExpVec, lcm: ExpVec, p: int) -> Vec:
    a = exp_sub(lcm, fe)
    b = exp_sub(lcm, ge)
    out: Vec = {}
    for (c, e), v in f.items():
        t = (c, exp_add(e, a))
        out[t] = (out.get(t, 0) + v) % p
    for (c, e), v in g.items():
        t = (c, exp_add(e, b))
        out[t] = (out.get(t, 0) - v) % p
    return {t: v for t, v in out.items() if v}


def _groebner(ring: PolyRing, vecs: Iterable[Vec]) -> list[Vec]:
    """Reduced, monic Gröbner basis (sorted by leading term, largest first).

    Sugar-degree pair selection with a (sugar, lcm, component, i, j) tie-break
    and Buchberger's chain criterion; no product criterion, which does not hold
    for modules.
    """
    p = ring.p
    key = _term_key(ring)
    mono_key = ring.key
    basis: list[Vec] = []
    leads: list[Term] = []
    sugars: list[int] = []
    by_comp: dict[int, list[int]] = {}
    reducers: dict[int, list[tuple[ExpVec, Vec]]] = {}
    heap: list[tuple] = []
    pending: set[tuple[int, int]] = set()
    stats = _active_stats.get()

    def add(vec: Vec, sugar: int) -> None:
        lt = max(vec, key=key)
        inv = pow(vec[lt], -1, p)
        vec = {t: c * inv % p for t, c in vec.items()}
        comp, exp = lt
        k = len(basis)
        for i in by_comp.get(comp, ()):
            other = leads[i][1]
            lcm = exp_lcm(other, exp)
            s = max(sugars[i] + sum(lcm) - sum(other), sugar + sum(lcm) - sum(exp))
            heappush(heap, (s, mono_key(lcm), comp, i, k))
            pending.add((i, k))
        basis.append(vec)
        leads.append(lt)
        sugars.append(sugar)
        by_comp.setdefault(comp, []).append(k)
        reducers.setdefault(comp, []).append((exp, vec))

    def chain_criterion(i: int, j: int, comp: int, lcm: ExpVec) -> bool:
        for k in by_comp[comp]:
            if k == i or k == j or not divides(leads[k][1], lcm):
                continue
            if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
                return True
        return False

    def sugar_of(vec: Vec) -> int:
        return max(sum(e) for _, e in vec)

    start = sorted((v for v in vecs if v), key=lambda v: (sugar_of(v), key(max(v, key=key))))
    for vec in start:
        r = _reduce(vec, reducers, key, p)
        if r:
            add(r, max(sugar_of(vec), sugar_of(r)))

    while heap:
        s, _, comp, i, j = heappop(heap)
        pending.discard((i, j))
        lcm = exp_lcm(leads[i][1], leads[j][1])
        if chain_criterion(i, j, comp, lcm):
            if stats:
                stats.spairs_skipped += 1
            continue
        r = _reduce(_spoly(basis[i], leads[i][1], basis[j], leads[j][1], lcm, p), reducers, key, p)
        if stats:
            stats.spairs_reduced += 1
        if r:
            add(r, s)

    # minimal basis: drop elements whose lead is divisible by another lead
    keep: list[int] = []
    for k in sorted(range(len(basis)), key=lambda k: key(leads[k])):
        comp, exp = leads[k]
        if any(leads[m][0] == comp and divides(leads[m][1], exp) for m in keep):
            continue
        keep.append(k)
    kept_reducers: dict[int, list[tuple[ExpVec, Vec]]] = {}
    for k in keep:
        kept_reducers.setdefault(leads[k][0], []).append((leads[k][1], basis[k]))
    # tail reduction; a tail term is below the lead so it never meets its own element
    out: list[Vec] = []
    for k in keep:
        lt = leads[k]
        tail = {t: c for t, c in basis[k].items() if t != lt}
        reduced = _reduce(tail, kept_reducers, key, p)
        reduced[lt] = 1
        out.append(reduced)
    out.sort(key=lambda v: key(max(v, key=key)), reverse=True)
    if stats:
        stats.bases += 1
        stats.largest_basis = max(stats.largest_basis, len(out))
    logger.debug("groebner basis: %d elements from %d inputs", len(out), len(start))
    return out


class ModuleGB:
    """A reduced Gröbner basis of a submodule of R̄^rank (position-over-term)."""

    def __init__(self, ring: PolyRing, rank: int, vecs: Sequence[Vec], provenance: str = ""):
        self.ring = ring
        self.rank = rank
        self.provenance = provenance
        self._vecs = list(vecs)
        self._key = _term_key(ring)
        self.leads: list[Term] = [max(v, key=self._key) for v in self._vecs]
        self._reducers: dict[int, list[tuple[ExpVec, Vec]]] = {}
        for lt, v in zip(self.leads, self._vecs):
            self._reducers.setdefault(lt[0], []).append((lt[1], v))
        self.basis: tuple[FreeElem, ...] = tuple(FreeElem.from_vec(ring, rank, v) for v in self._vecs)

    def __len__(self) -> int:
        return len(self._vecs)

    def is_zero_module(self) -> bool:
        return not self._vecs

    def _check(self, v: FreeElem) -> None:
        if v.rank != self.rank or v.ring != self.ring:
            raise ContractViolation(f"element of rank {v.rank} tested against a rank-{self.rank} basis")

    def normal_form(self, v: FreeElem) -> FreeElem:
        self._check(v)
        if not self._vecs or not v:
            return v
        return FreeElem.from_vec(self.ring, self.rank, _reduce(v.to_vec(), self._reducers, self._key, self.ring.p))

    def contains(self, v: FreeElem) -> bool:
        return self.normal_form(v).is_zero()

    __contains__ = contains

    def __repr__(self) -> str:
        what = f" of {self.provenance}" if self.provenance else ""
        return f"ModuleGB(rank={self.rank}, {len(self)} elements{what})"


def buchberger(
    gens: Sequence[FreeElem],
    order: MonomialOrder | str | None = None,
    *,
    ring: PolyRing | None = None,
    rank: int | None = None,
    provenance: str = "",
) -> ModuleGB:
    """Gröbner basis of the submodule generated by gens.

    ring and rank are needed only when gens is empty.
    """
    if gens:
        ring = ring or gens[0].ring
        rank = gens[0].rank if rank is None else rank
    if ring is None or rank is None:
        raise ContractViolation("an empty generator list needs an explicit ring and rank")
    if order is not None and MonomialOrder(order) != ring.order:
        ring = ring.with_order(MonomialOrder(order))
    vecs = []
    for g in gens:
        if g.rank != rank:
            raise ContractViolation(f"generator of rank {g.rank} in a rank-{rank} submodule")
        if g.ring != ring:
            g = g.change_ring(ring)
        vecs.append(g.to_vec())
    return ModuleGB(ring, rank, _groebner(ring, vecs), provenance)


def normal_form(v: FreeElem, gb: ModuleGB) -> FreeElem:
    return gb.normal_form(v)


def is_member(v: FreeElem, gb: ModuleGB) -> bool:
    return gb.contains(v)


def spair_certificate(gb: ModuleGB) -> bool:
    """Buchberger's criterion: every S-pair of the basis reduces to zero."""
    p = gb.ring.p
    for a in range(len(gb.leads)):
        for b in range(a + 1, len(gb.leads)):
            (ca, ea), (cb, eb) = gb.leads[a], gb.leads[b]
            if ca != cb:
                continue
            s = _spoly(gb._vecs[a], ea, gb._vecs[b], eb, exp_lcm(ea, eb), p)
            if _reduce(s, gb._reducers, gb._key, p):
                return False
    return True


def preimage_kernel(m: PolyMatrix, target_sub: ModuleGB | None = None) -> list[FreeElem]:
    """Generators of {v : m·v ∈ target_sub}, by elimination on [m | target generators].

    The stacked vectors live in R̄^(rows + cols); the first `rows` components
    dominate the order, so basis elements led from the last `cols` components
    carry nothing above and project onto the preimage.
    """
    ring, r, c = m.ring, m.rows, m.cols
    if target_sub is not None and target_sub.rank != r:
        raise ContractViolation(f"target submodule of rank {target_sub.rank} for a map into rank {r}")
    if c == 0:
        return []
    unit = ring.unit
    vecs: list[Vec] = []
    for j, col in enumerate(m.columns()):
        vec = col.to_vec()
        vec[(r + j, unit)] = 1
        vecs.append(vec)
    if target_sub is not None:
        vecs.extend(g.to_vec() for g in target_sub.basis)
    out = []
    for vec in _groebner(ring, vecs):
        lead_comp = min(k for k, _ in vec)
        if lead_comp >= r:
            out.append(FreeElem.from_vec(ring, c, {(k - r, e): v for (k, e), v in vec.items()}))
    return out


def kernel_gens(m: PolyMatrix) -> list[FreeElem]:
    """Generators of ker(m); empty exactly when the kernel is zero."""
    return preimage_kernel(m, None)


def submodule_contains(big: Sequence[FreeElem] | ModuleGB, small: Sequence[FreeElem]) -> bool:
    if not isinstance(big, ModuleGB):
        if not big:
            return all(v.is_zero() for v in small)
        big = buchberger(big)
    return all(big.contains(v) for v in small)


def submodule_equal(a: Sequence[FreeElem], b: Sequence[FreeElem]) -> bool:
    if not a and not b:
        return True
    return submodule_contains(b, a) and submodule_contains(a, b)


def quotient_dim(ambient_rank: int, sub: ModuleGB) -> int | float:
    """dim over Z/pZ of R̄^rank / sub, or INFINITE.

    Counts standard monomials per component; a component is infinite when
    some variable has no pure-power leading term there.
    """
    if ambient_rank != sub.rank:
        raise ContractViolation(f"rank {ambient_rank} does not match a rank-{sub.rank} basis")
    n = sub.ring.nvars
    total = 0
    for comp in range(ambient_rank):
        leads = [e for k, e in sub.leads if k == comp]
        if any(sum(e) == 0 for e in leads):
            continue
        bounds = []
        for v in range(n):
            pure = [e[v] for e in leads if e[v] > 0 and sum(e) == e[v]]
            if not pure:
                return INFINITE
            bounds.append(min(pure))
        for exp in product(*(range(b) for b in bounds)):
            if not any(divides(lead, exp) for lead in leads):
                total += 1
    return total
