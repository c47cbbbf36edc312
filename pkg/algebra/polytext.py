"""Text form of polynomials.

Grammar: terms joined by `+`/`-`; a term is `[coeff][*][var^exp...]` with
variables from the ring's names (x1..xn by default). Whitespace is
insignificant. Example: `3*x1^2*x2 - 5`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from pyparsing import (
    Optional,
    ParseBaseException,
    ParseFatalException,
    ParserElement,
    Regex,
    StringEnd,
    Suppress,
    Word,
    ZeroOrMore,
    nums,
    one_of,
)

from algebra.errors import ParseError
from algebra.polyring import MAX_EXPONENT, ExpVec, IntPoly, Poly


@dataclass(frozen=True)
class _Factor:
    coeff: int
    var: int | None = None
    exp: int = 0


@dataclass(frozen=True)
class _Term:
    coeff: int
    exp: ExpVec


def _grammar(names: Sequence[str]) -> ParserElement:
    index = {name: k for k, name in enumerate(names)}
    nvars = len(names)

    integer = Word(nums)
    ident = Regex(r"[A-Za-z_][A-Za-z0-9_]*")

    def on_power(s, loc, toks):
        name = toks[0]
        if name not in index:
            raise ParseFatalException(s, loc, f"unknown variable {name!r}")
        exp = int(toks[1]) if len(toks) > 1 else 1
        if exp > MAX_EXPONENT:
            raise ParseFatalException(s, loc, f"exponent overflow in {name}^{exp}")
        return _Factor(1, index[name], exp)

    power = (ident + Optional(Suppress("^") + integer)).set_parse_action(on_power)
    number = integer.copy().set_parse_action(lambda toks: _Factor(int(toks[0])))
    factor = power | number

    def on_term(s, loc, toks):
        coeff = 1
        exp = [0] * nvars
        for f in toks:
            coeff *= f.coeff
            if f.var is not None:
                exp[f.var] += f.exp
        if any(e > MAX_EXPONENT for e in exp):
            raise ParseFatalException(s, loc, "exponent overflow in product")
        return _Term(coeff, tuple(exp))

    term = (factor + ZeroOrMore(Optional(Suppress("*")) + factor)).set_parse_action(on_term)
    sign = one_of("+ -")
    return Optional(sign) + term + ZeroOrMore(sign + term) + StringEnd()


def parse_int_poly(text: str, names: Sequence[str], line: int | None = None) -> IntPoly:
    """Parse integer-coefficient polynomial text; errors carry line/column."""
    try:
        toks = _grammar(names).parse_string(text, parse_all=True)
    except ParseBaseException as exc:
        raise ParseError(exc.msg, line if line is not None else exc.lineno, exc.col) from None
    acc: dict[ExpVec, int] = {}
    negative = False
    for tok in toks:
        if isinstance(tok, str):
            negative = tok == "-"
            continue
        acc[tok.exp] = acc.get(tok.exp, 0) + (-tok.coeff if negative else tok.coeff)
        negative = False
    return IntPoly(len(names), acc)


def _monomial_text(exp: ExpVec, names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, exp):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _term_text(c: int, exp: ExpVec, names: Sequence[str]) -> str:
    mono = _monomial_text(exp, names)
    if not mono:
        return str(c)
    return mono if c == 1 else f"{c}*{mono}"


def format_poly(f: Poly) -> str:
    if f.is_zero():
        return "0"
    return " + ".join(_term_text(c, e, f.ring.names) for e, c in f)


def format_int_poly(f: IntPoly, names: Sequence[str] | None = None) -> str:
    from algebra.polyring import default_names

    names = names or default_names(f.nvars)
    out = []
    for k, (e, c) in enumerate(f.terms.items()):
        body = _term_text(abs(c), e, names)
        if k == 0:
            out.append(body if c > 0 else f"-{body}")
        else:
            out.append(f"{'+' if c > 0 else '-'} {body}")
    return " ".join(out) if out else "0"
