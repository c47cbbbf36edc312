"""The dual map α_j, evaluated one term at a time.

R̄ is free over its subring of p^j-th powers on the monomials x^ī with ī in
the box [0, p^j-1]^n, so every h ∈ R̄ is uniquely Σ_ī x^ī g_ī^(p^j). For y in a
Koszul component with multiplier P = ∏ f_v, α_j(y) is the coordinate g_top of
y·P^(p^j-1) at the top index (p^j-1, ..., p^j-1).

The streamed evaluation never forms P^(p^j-1): it walks the compositions
q1+...+qt = p^j-1 of the monomials m_s of P in colex order (each composition
determines the next), adds the γ-image of each term into one partial sum and
keeps nothing else. Every γ-image, hence the partial sum, has total degree at
most max(D, d), which is what keeps memory flat as p grows.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Sequence

from algebra.errors import ContractViolation, InternalConsistencyError
from algebra.freemod import FreeElem
from algebra.koszul import KoszulComplex, Subset
from algebra.polyring import ExpVec, Poly, PolyRing, power_p_minus_one_chain

logger = logging.getLogger(__name__)

Monomial = tuple[int, ExpVec]


@dataclass(frozen=True)
class FrobLayout:
    """Basis layout of R̄ over R̄^(p^j)."""

    ring: PolyRing
    j: int

    def __post_init__(self):
        if self.j < 1:
            raise ContractViolation("layouts start at j = 1")

    @property
    def p(self) -> int:
        return self.ring.p

    @property
    def q(self) -> int:
        return self.ring.p**self.j

    @property
    def top(self) -> ExpVec:
        return (self.q - 1,) * self.ring.nvars

    @property
    def box_size(self) -> int:
        return self.q**self.ring.nvars

    def box(self) -> Iterator[ExpVec]:
        """Offsets ī in [0, q-1]^n, lexicographic."""
        return product(range(self.q), repeat=self.ring.nvars)

    def in_box(self, exp: Sequence[int]) -> bool:
        return len(exp) == self.ring.nvars and all(0 <= e < self.q for e in exp)

    def decompose(self, exp: ExpVec) -> tuple[ExpVec, ExpVec]:
        """exp = ī + q·w with ī in the box."""
        q = self.q
        return tuple(e % q for e in exp), tuple(e // q for e in exp)


def gamma_exponent(exp: ExpVec, q: int) -> ExpVec | None:
    top = q - 1
    out = []
    for e in exp:
        if e % q != top:
            return None
        out.append((e - top) // q)
    return tuple(out)


def gamma_extract(mono: Monomial, layout: FrobLayout) -> Poly:
    """γ(c·x^ℓ): c·x^w with w = (ℓ - (q-1))/q when every ℓ_s ≡ q-1 (mod q), else 0.

    The coefficient is untouched: Frobenius is the identity on Z/pZ.
    """
    c, exp = mono
    w = gamma_exponent(tuple(exp), layout.q)
    if w is None:
        return layout.ring.zero()
    return layout.ring.monomial(w, c)


# ---------- compositions ----------

def next_composition(cursor: list[int]) -> bool:
    """Advance cursor in place to the colex successor; False after the last one."""
    for i, v in enumerate(cursor):
        if v:
            break
    else:
        return False
    if i == len(cursor) - 1:
        return False
    cursor[i] = 0
    cursor[0] = v - 1
    cursor[i + 1] += 1
    return True


def enumerate_compositions(t: int, total: int) -> Iterator[tuple[int, ...]]:
    """All (q1..qt) with q1+...+qt = total, colex; C(total+t-1, t-1) of them."""
    if t < 1:
        raise ContractViolation("compositions need at least one part")
    cursor = [total] + [0] * (t - 1)
    yield tuple(cursor)
    while next_composition(cursor):
        yield tuple(cursor)


# ---------- streamed evaluation ----------

@dataclass(frozen=True)
class ProductForm:
    """P = Σ m_s (the expanded subset product) next to the cocycle component Σ μ_τ."""

    factors: tuple[Monomial, ...]
    cocycle: tuple[Monomial, ...]
    d: int
    D: int

    @classmethod
    def build(cls, product_poly: Poly, component: Poly) -> ProductForm:
        factors = tuple((c, e) for e, c in product_poly)
        cocycle = tuple((c, e) for e, c in component)
        return cls(factors, cocycle, product_poly.total_degree(), component.total_degree())

    @property
    def degree_bound(self) -> int:
        return max(self.D, self.d)


class MonomialTally:
    """Count of monomials held by the streaming path, with its high-water mark."""

    def __init__(self):
        self.live = 0
        self.peak = 0

    def alloc(self, n: int = 1) -> None:
        self.live += n
        if self.live > self.peak:
            self.peak = self.live

    def free(self, n: int = 1) -> None:
        self.live -= n


@dataclass
class StreamCounters:
    compositions: int = 0
    compositions_pruned: int = 0
    terms: int = 0
    max_degree: int = 0
    degree_bound: int = 0


@dataclass
class StreamState:
    cursor: list[int]
    tau: int = 0
    partial: dict[ExpVec, int] = field(default_factory=dict)


def alpha_component_streamed(
    pf: ProductForm,
    offset: ExpVec,
    layout: FrobLayout,
    counters: StreamCounters | None = None,
    tally: MonomialTally | None = None,
) -> Poly:
    """Σ_q Σ_τ (p^j-1; q)! · γ(x^offset · ∏ m_s^(q_s) · μ_τ), one term at a time."""
    ring = layout.ring
    if not layout.in_box(offset):
        raise ContractViolation(f"offset {tuple(offset)} outside the box [0, {layout.q - 1}]^{ring.nvars}")
    counters = counters if counters is not None else StreamCounters()
    tally = tally if tally is not None else MonomialTally()
    if not pf.factors or not pf.cocycle:
        return ring.zero()

    p, q = ring.p, layout.q
    top = q - 1
    bound = pf.degree_bound
    counters.degree_bound = max(counters.degree_bound, bound)
    fp = ring.fp
    stored = len(pf.factors) + len(pf.cocycle)
    tally.alloc(stored)

    state = StreamState(cursor=[top] + [0] * (len(pf.factors) - 1))
    partial = state.partial
    while True:
        counters.compositions += 1
        coeff = fp.multinomial(top, state.cursor)
        if coeff == 0:
            counters.compositions_pruned += 1
        else:
            exp = tuple(offset)
            for (fc, fe), k in zip(pf.factors, state.cursor):
                if k:
                    coeff = coeff * pow(fc, k, p) % p
                    exp = tuple(a + k * b for a, b in zip(exp, fe))
            for state.tau, (mc, me) in enumerate(pf.cocycle):
                counters.terms += 1
                w = _gamma(exp, me, q, top)
                if w is None:
                    continue
                tally.alloc(1)
                deg = sum(w)
                if deg > bound:
                    raise InternalConsistencyError(f"streamed term of degree {deg} exceeds max(D, d) = {bound}")
                counters.max_degree = max(counters.max_degree, deg)
                if w in partial:
                    value = (partial[w] + coeff * mc) % p
                    if value:
                        partial[w] = value
                        tally.free(1)
                    else:
                        del partial[w]
                        tally.free(2)
                else:
                    partial[w] = coeff * mc % p
        if not next_composition(state.cursor):
            break

    result = ring.from_terms(partial)
    tally.free(stored + len(partial))
    return result


def _gamma(exp: ExpVec, me: ExpVec, q: int, top: int) -> ExpVec | None:
    out = []
    for a, b in zip(exp, me):
        e = a + b
        if e % q != top:
            return None
        out.append((e - top) // q)
    return tuple(out)


def alpha_component_dense(y: Poly, product_poly: Poly, layout: FrobLayout, offset: ExpVec | None = None) -> Poly:
    """Reference extraction: expand x^offset·y·P^(p^j-1) and keep the top coordinate."""
    h = y * power_p_minus_one_chain(product_poly, layout.j)
    if offset is not None:
        h = h.mul_term(tuple(offset))
    q = layout.q
    return layout.ring.from_terms(
        (w, c) for w, c in ((gamma_exponent(e, q), c) for e, c in h) if w is not None
    )


def product_forms(K: KoszulComplex, degree: int, element: FreeElem) -> dict[int, ProductForm]:
    subsets: Sequence[Subset] = K.subsets(degree)
    return {k: ProductForm.build(K.subset_product(subsets[k]), f) for k, f in element.components.items()}


def alpha_on_generator(
    K: KoszulComplex,
    degree: int,
    element: FreeElem,
    offset: ExpVec,
    layout: FrobLayout,
    forms: dict[int, ProductForm] | None = None,
    counters: StreamCounters | None = None,
    tally: MonomialTally | None = None,
) -> FreeElem:
    """α_j(x^offset · m̃) assembled component by component; a cocycle of K."""
    if element.rank != K.rank(degree):
        raise ContractViolation(f"element of rank {element.rank} is not in K^{degree}")
    forms = forms if forms is not None else product_forms(K, degree, element)
    comps = {k: alpha_component_streamed(pf, offset, layout, counters, tally) for k, pf in forms.items()}
    logger.debug("α_%d at offset %s: %d nonzero components", layout.j, tuple(offset), sum(1 for f in comps.values() if f))
    return FreeElem(K.ring, element.rank, comps)
