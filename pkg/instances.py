"""Instance files.

One `key = value` per line, `#` starts a comment:

    name = "doubled"
    variables = ["x"]            # or: n = 2  (names default to x1..xn)
    generators = ["x", "x"]
    degree = 2                   # optional default cohomological degree
    expect = ["2:VANISHES"]      # optional, prime:verdict pairs at that degree

Generators use the polynomial grammar of algebra.polytext and must have
integer coefficients.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from pyparsing import (
    Group,
    Optional,
    ParseBaseException,
    ParseResults,
    QuotedString,
    Regex,
    Suppress,
    Word,
    alphanums,
    alphas,
    delimited_list,
    python_style_comment,
)

from algebra.errors import ParseError
from algebra.polyring import IntPoly, default_names
from algebra.polytext import parse_int_poly

KNOWN_KEYS = {"name", "n", "variables", "generators", "degree", "expect"}
VERDICTS = {"VANISHES", "NONVANISHING", "INCONCLUSIVE"}


@dataclass(frozen=True)
class InstanceFile:
    name: str
    n: int
    names: tuple[str, ...]
    generators: tuple[IntPoly, ...]
    sources: tuple[str, ...]
    degree: int | None = None
    expect: dict[int, str] = field(default_factory=dict)
    path: str | None = None

    @property
    def s(self) -> int:
        return len(self.generators)


def _line_grammar():
    key = Word(alphas, alphanums + "_")
    string = QuotedString('"', esc_char="\\")
    integer = Regex(r"-?\d+").set_parse_action(lambda toks: int(toks[0]))
    str_list = Group(Suppress("[") + Optional(delimited_list(string)) + Suppress("]"))
    value = str_list | string | integer
    line = key("key") + Suppress("=") + value("value")
    line.ignore(python_style_comment)
    return line


_LINE = _line_grammar()


def _parse_lines(text: str) -> dict[str, tuple[int, object]]:
    entries: dict[str, tuple[int, object]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            toks = _LINE.parse_string(stripped, parse_all=True)
        except ParseBaseException as exc:
            raise ParseError(exc.msg, lineno, exc.col) from None
        key = toks[0]
        if key not in KNOWN_KEYS:
            raise ParseError(f"unknown key {key!r}", lineno, 1)
        if key in entries:
            raise ParseError(f"duplicate key {key!r}", lineno, 1)
        # positional: named results wrap the value in a ParseResults
        value = toks[1]
        entries[key] = (lineno, value.as_list() if isinstance(value, ParseResults) else value)
    return entries


def _expect(items, lineno: int) -> dict[int, str]:
    out = {}
    for item in items:
        prime, _, verdict = str(item).partition(":")
        verdict = verdict.strip().upper()
        if not prime.strip().isdigit() or verdict not in VERDICTS:
            raise ParseError(f"bad expectation {item!r}; expected '<prime>:<verdict>'", lineno)
        out[int(prime)] = verdict
    return out


def parse_instance_text(text: str, path: str | None = None) -> InstanceFile:
    entries = _parse_lines(text)
    if "generators" not in entries:
        raise ParseError("missing 'generators'")
    names: tuple[str, ...]
    if "variables" in entries:
        lineno, names_value = entries["variables"]
        if not isinstance(names_value, list) or not names_value:
            raise ParseError("'variables' must be a nonempty list of names", lineno)
        names = tuple(names_value)
        if len(set(names)) != len(names):
            raise ParseError("repeated variable name", lineno)
        if "n" in entries and entries["n"][1] != len(names):
            raise ParseError(f"n = {entries['n'][1]} but {len(names)} variables listed", entries["n"][0])
    elif "n" in entries:
        lineno, n = entries["n"]
        if not isinstance(n, int) or n < 1:
            raise ParseError("'n' must be a positive integer", lineno)
        names = default_names(n)
    else:
        raise ParseError("need 'n' or 'variables'")

    lineno, sources = entries["generators"]
    if not isinstance(sources, list) or not sources:
        raise ParseError("'generators' must be a nonempty list of polynomials", lineno)
    gens = tuple(parse_int_poly(src, names, line=lineno) for src in sources)

    degree = None
    if "degree" in entries:
        lineno, degree = entries["degree"]
        if not isinstance(degree, int) or not 0 <= degree <= len(gens):
            raise ParseError(f"'degree' must be an integer in 0..{len(gens)}", lineno)
    expect = {}
    if "expect" in entries:
        lineno, items = entries["expect"]
        expect = _expect(items if isinstance(items, list) else [items], lineno)

    name = entries.get("name", (0, None))[1] or (Path(path).stem if path else "instance")
    return InstanceFile(str(name), len(names), names, gens, tuple(sources), degree, expect, path)


def parse_instance(path: str | Path) -> InstanceFile:
    path = Path(path)
    return parse_instance_text(path.read_text(encoding="utf-8"), str(path))
