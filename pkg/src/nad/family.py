"""Family files:

    vars z1 z2
    param t
    factor f1 : t^2*z1^2 - z2^2      # comment

One ``vars`` line, one ``param`` line, then one or more ``factor`` lines.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .poly import FamilyError, PolyFamily, PolynomialError, PolynomialSyntaxError, parse_polynomial

_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class FamilyFileError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass(frozen=True)
class FamilyFile:
    variables: tuple[str, ...]
    param: str
    names: tuple[str, ...]
    sources: tuple[str, ...]
    family: PolyFamily


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_family(text: str) -> FamilyFile:
    lines = [(i, _strip(raw)) for i, raw in enumerate(text.splitlines(), start=1)]
    lines = [(i, s) for i, s in lines if s]
    if not lines:
        raise FamilyFileError("empty family file")
    variables = param = None
    names: list[str] = []
    sources: list[str] = []
    for pos, (lineno, line) in enumerate(lines):
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        if pos == 0:
            if keyword != "vars":
                raise FamilyFileError("first line must be 'vars <name>+'", lineno)
            variables = tuple(rest.split())
            if not variables:
                raise FamilyFileError("no variables declared", lineno)
            for v in variables:
                if not _NAME.match(v):
                    raise FamilyFileError(f"invalid variable name {v!r}", lineno)
            if len(set(variables)) != len(variables):
                raise FamilyFileError("duplicate variable names", lineno)
        elif pos == 1:
            if keyword != "param":
                raise FamilyFileError("second line must be 'param <name>'", lineno)
            parts = rest.split()
            if len(parts) != 1 or not _NAME.match(parts[0]):
                raise FamilyFileError("exactly one parameter name expected", lineno)
            param = parts[0]
            if param in variables:
                raise FamilyFileError(f"parameter {param!r} clashes with a variable", lineno)
        else:
            if keyword != "factor":
                raise FamilyFileError(f"expected 'factor <name> : <polynomial>', got {keyword!r}", lineno)
            head, colon, body = rest.partition(":")
            name = head.strip()
            if not colon or not _NAME.match(name):
                raise FamilyFileError("expected 'factor <name> : <polynomial>'", lineno)
            if name in names:
                raise FamilyFileError(f"duplicate factor name {name!r}", lineno)
            names.append(name)
            sources.append(body.strip())
    if param is None:
        raise FamilyFileError("missing 'param' line")
    if not names:
        raise FamilyFileError("no factors declared")
    factors = []
    for name, src, (lineno, _) in zip(names, sources, lines[2:]):
        try:
            factors.append(parse_polynomial(src, variables, (param,)))
        except PolynomialSyntaxError as exc:
            raise FamilyFileError(f"factor {name}: {exc}", lineno) from None
        except PolynomialError as exc:
            raise FamilyFileError(f"factor {name}: {exc}", lineno) from None
    try:
        family = PolyFamily(tuple(factors), tuple(names))
    except FamilyError as exc:
        raise FamilyFileError(str(exc)) from None
    return FamilyFile(variables, param, tuple(names), tuple(sources), family)


def load_family(path: str) -> tuple[FamilyFile, bytes]:
    with open(path, "rb") as fh:
        data = fh.read()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise FamilyFileError(f"not UTF-8: {exc}") from None
    return parse_family(text), data
