"""Arithmetic in Z/pZ and multinomials mod p via Lucas' theorem.

Scalars are plain ints in [0, p-1]; the prime travels with the container
(a PrimeField, a PolyRing), never with the scalar.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from sympy import isprime

from algebra.errors import ContractViolation, FieldDivisionError


def check_prime(p: int) -> int:
    if not isinstance(p, int) or isinstance(p, bool) or not isprime(p):
        raise ContractViolation(f"{p} is not prime")
    return p


@dataclass(frozen=True)
class PrimeField:
    p: int
    _fact: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        check_prime(self.p)
        # factorials 0!..(p-1)! mod p, used digit-wise by multinomial()
        table = [1] * self.p
        for k in range(1, self.p):
            table[k] = table[k - 1] * k % self.p
        object.__setattr__(self, "_fact", tuple(table))

    def __call__(self, value: int) -> int:
        return value % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise FieldDivisionError(f"division by zero in Z/{self.p}Z")
        return pow(a, -1, self.p)

    def pow(self, a: int, e: int) -> int:
        return pow(a, e, self.p)

    def multinomial(self, total: int, parts: Sequence[int]) -> int:
        """(total; parts)! mod p, digit by digit.

        A carry in any base-p digit position when adding the parts makes the
        coefficient divisible by p (Kummer), so it is 0 here.
        """
        if any(q < 0 for q in parts) or sum(parts) != total:
            raise ContractViolation(f"parts {tuple(parts)} do not sum to {total}")
        p, fact = self.p, self._fact
        rest = list(parts)
        n = total
        result = 1
        while n or any(rest):
            digit = n % p
            n //= p
            digits = []
            for k, q in enumerate(rest):
                digits.append(q % p)
                rest[k] = q // p
            if sum(digits) != digit:
                return 0
            denom = 1
            for d in digits:
                denom = denom * fact[d] % p
            result = result * fact[digit] * pow(denom, -1, p) % p
        return result


@lru_cache(maxsize=64)
def prime_field(p: int) -> PrimeField:
    return PrimeField(p)


def fp_add(a: int, b: int, p: int) -> int:
    return prime_field(p).add(a, b)


def fp_mul(a: int, b: int, p: int) -> int:
    return prime_field(p).mul(a, b)


def fp_neg(a: int, p: int) -> int:
    return prime_field(p).neg(a)


def fp_inv(a: int, p: int) -> int:
    return prime_field(p).inv(a)


def multinomial_mod_p(total: int, parts: Sequence[int], p: int) -> int:
    return prime_field(p).multinomial(total, parts)
