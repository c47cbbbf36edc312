"""Sparse multivariate polynomials over Z/pZ (and over Z, for input).

A polynomial is a map from exponent tuples to coefficients, stored with no
zero coefficients and sorted from the leading term down under the ring's
monomial order. Dense coefficient arrays are never built: the baseline
algorithm reaches degrees like d * p^j.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Iterator, Mapping

from algebra.errors import ContractViolation
from algebra.fparith import PrimeField, prime_field

ExpVec = tuple[int, ...]

# desk-scale exponents must stay machine-sized
MAX_EXPONENT = 2**31 - 1


def grevlex_key(exp: ExpVec) -> tuple:
    return (sum(exp), tuple(-e for e in reversed(exp)))


def lex_key(exp: ExpVec) -> tuple:
    return exp


class MonomialOrder(str, Enum):
    GREVLEX = "grevlex"
    LEX = "lex"

    @property
    def key(self) -> Callable[[ExpVec], tuple]:
        return grevlex_key if self is MonomialOrder.GREVLEX else lex_key


def divides(a: ExpVec, b: ExpVec) -> bool:
    return all(x <= y for x, y in zip(a, b))


def exp_add(a: ExpVec, b: ExpVec) -> ExpVec:
    return tuple(x + y for x, y in zip(a, b))


def exp_sub(a: ExpVec, b: ExpVec) -> ExpVec:
    return tuple(x - y for x, y in zip(a, b))


def exp_lcm(a: ExpVec, b: ExpVec) -> ExpVec:
    return tuple(max(x, y) for x, y in zip(a, b))


def check_exponents(exp: ExpVec) -> ExpVec:
    for e in exp:
        if e < 0 or e > MAX_EXPONENT:
            raise ContractViolation(f"exponent {e} outside [0, {MAX_EXPONENT}]")
    return exp


def is_power_of(q: int, p: int) -> bool:
    if q < 1:
        return False
    while q % p == 0:
        q //= p
    return q == 1


@dataclass(frozen=True)
class PolyRing:
    """(Z/pZ)[x1..xn] with a fixed monomial order and variable names."""

    nvars: int
    p: int
    order: MonomialOrder = MonomialOrder.GREVLEX
    names: tuple[str, ...] = ()
    fp: PrimeField = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.nvars < 0:
            raise ContractViolation("variable count must be nonnegative")
        object.__setattr__(self, "fp", prime_field(self.p))
        object.__setattr__(self, "order", MonomialOrder(self.order))
        if not self.names:
            object.__setattr__(self, "names", default_names(self.nvars))
        elif len(self.names) != self.nvars:
            raise ContractViolation(f"{len(self.names)} names for {self.nvars} variables")

    def key(self, exp: ExpVec) -> tuple:
        return self.order.key(exp)

    @property
    def unit(self) -> ExpVec:
        return (0,) * self.nvars

    def zero(self) -> Poly:
        return Poly(self, {})

    def one(self) -> Poly:
        return self.const(1)

    def const(self, c: int) -> Poly:
        return self.monomial(self.unit, c)

    def var(self, i: int) -> Poly:
        if not 0 <= i < self.nvars:
            raise ContractViolation(f"no variable x{i + 1} in {self.nvars} variables")
        exp = [0] * self.nvars
        exp[i] = 1
        return self.monomial(tuple(exp))

    def gens(self) -> list[Poly]:
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exp: Iterable[int], c: int = 1) -> Poly:
        exp = check_exponents(tuple(exp))
        if len(exp) != self.nvars:
            raise ContractViolation(f"exponent vector {exp} has wrong length for {self.nvars} variables")
        c %= self.p
        return Poly(self, {exp: c} if c else {})

    def from_terms(self, terms: Mapping[ExpVec, int] | Iterable[tuple[ExpVec, int]]) -> Poly:
        """Canonicalize arbitrary (exponent, coefficient) data; repeated keys add up."""
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[ExpVec, int] = {}
        for exp, c in items:
            exp = tuple(exp)
            if len(exp) != self.nvars:
                raise ContractViolation(f"exponent vector {exp} has wrong length for {self.nvars} variables")
            acc[exp] = acc.get(exp, 0) + c
        return self._canonical(acc)

    def _canonical(self, acc: dict[ExpVec, int]) -> Poly:
        p = self.p
        live = [(e, c % p) for e, c in acc.items() if c % p]
        live.sort(key=lambda ec: self.key(ec[0]), reverse=True)
        return Poly(self, dict(live))

    def parse(self, text: str) -> Poly:
        from algebra.polytext import parse_int_poly

        return reduce_mod_p(parse_int_poly(text, self.names), self)

    def with_order(self, order: MonomialOrder) -> PolyRing:
        return PolyRing(self.nvars, self.p, order, self.names)


def default_names(nvars: int) -> tuple[str, ...]:
    return tuple(f"x{k + 1}" for k in range(nvars))


class Poly:
    """An immutable polynomial in a PolyRing."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict[ExpVec, int]):
        # callers guarantee canonical form; use PolyRing.from_terms otherwise
        self.ring = ring
        self._terms = terms
        self._hash = None

    # ---------- inspection ----------

    def __iter__(self) -> Iterator[tuple[ExpVec, int]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coeff(self, exp: ExpVec) -> int:
        return self._terms.get(tuple(exp), 0)

    @property
    def terms(self) -> dict[ExpVec, int]:
        return dict(self._terms)

    def leading_term(self) -> tuple[ExpVec, int]:
        if not self._terms:
            raise ContractViolation("the zero polynomial has no leading term")
        return next(iter(self._terms.items()))

    def total_degree(self) -> int:
        """Largest total degree of a term; 0 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=0)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, int):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        from algebra.polytext import format_poly

        return format_poly(self)

    # ---------- arithmetic ----------

    def _same_ring(self, other: Poly) -> None:
        if self.ring != other.ring:
            raise ContractViolation(f"ambient mismatch: {self.ring} vs {other.ring}")

    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            self._same_ring(other)
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    def __add__(self, other) -> Poly:
        other = self._coerce(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        acc = dict(self._terms)
        for e, c in other._terms.items():
            acc[e] = acc.get(e, 0) + c
        return self.ring._canonical(acc)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        p = self.ring.p
        return Poly(self.ring, {e: p - c for e, c in self._terms.items()})

    def __sub__(self, other) -> Poly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Poly:
        return self._coerce(other) - self

    def __mul__(self, other) -> Poly:
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if not self._terms or not other._terms:
            return self.ring.zero()
        acc: dict[ExpVec, int] = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                acc[e] = acc.get(e, 0) + ca * cb
        return self.ring._canonical(acc)

    __rmul__ = __mul__

    def scale(self, c: int) -> Poly:
        c %= self.ring.p
        if c == 0:
            return self.ring.zero()
        if c == 1:
            return self
        p = self.ring.p
        return Poly(self.ring, {e: v * c % p for e, v in self._terms.items()})

    def mul_term(self, exp: ExpVec, c: int = 1) -> Poly:
        """Multiply by the single term c * x^exp (order is preserved)."""
        c %= self.ring.p
        if c == 0 or not self._terms:
            return self.ring.zero()
        p = self.ring.p
        return Poly(self.ring, {tuple(x + y for x, y in zip(e, exp)): v * c % p
                                for e, v in self._terms.items()})

    def pow(self, k: int) -> Poly:
        if k < 0:
            raise ContractViolation("negative power")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    __pow__ = pow

    def frobenius_power(self, q: int) -> Poly:
        return frobenius_power(self, q)


@dataclass(frozen=True)
class IntPoly:
    """A polynomial with integer coefficients, the input side of an instance."""

    nvars: int
    terms: Mapping[ExpVec, int]

    def __post_init__(self):
        clean: dict[ExpVec, int] = {}
        for exp, c in dict(self.terms).items():
            exp = check_exponents(tuple(exp))
            if len(exp) != self.nvars:
                raise ContractViolation(f"exponent vector {exp} has wrong length for {self.nvars} variables")
            clean[exp] = clean.get(exp, 0) + int(c)
        ordered = sorted(((e, c) for e, c in clean.items() if c), key=lambda ec: grevlex_key(ec[0]), reverse=True)
        object.__setattr__(self, "terms", dict(ordered))

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def __str__(self) -> str:
        from algebra.polytext import format_int_poly

        return format_int_poly(self)


def reduce_mod_p(f: IntPoly, ring: PolyRing | int) -> Poly:
    """Coefficient-wise reduction; terms divisible by p disappear."""
    if isinstance(ring, int):
        ring = PolyRing(f.nvars, ring)
    if ring.nvars != f.nvars:
        raise ContractViolation(f"{f.nvars}-variable input for a {ring.nvars}-variable ring")
    return ring.from_terms(f.terms)


def poly_add(f: Poly, g: Poly) -> Poly:
    return f + g


def poly_mul(f: Poly, g: Poly) -> Poly:
    return f * g


def poly_scale(f: Poly, c: int) -> Poly:
    return f.scale(c)


def frobenius_power(f: Poly, q: int) -> Poly:
    """f^q for q = p^j: exponents scale by q, coefficients stay (c^p = c in Z/pZ)."""
    if not is_power_of(q, f.ring.p):
        raise ContractViolation(f"{q} is not a power of {f.ring.p}")
    if q == 1:
        return f
    return Poly(f.ring, {check_exponents(tuple(q * x for x in e)): c for e, c in f})


def power_p_minus_one_chain(f: Poly, j: int) -> Poly:
    """f^(p^j - 1) as the product of frobenius_power(f^(p-1), p^k), k < j."""
    if j < 0:
        raise ContractViolation("j must be nonnegative")
    p = f.ring.p
    base = f.pow(p - 1)
    result = f.ring.one()
    for k in range(j):
        result = result * frobenius_power(base, p**k)
    return result
