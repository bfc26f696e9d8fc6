"""Import affine families written as LaTeX arrays of monomials.

Recognised entry syntax: an optional sign, ``\\mathbf{i}`` for the imaginary
unit, single-letter parameters with optional ``^N`` powers, and
``\\overline{...}`` groups (optionally raised to a power) for conjugates.
"""

from __future__ import annotations

import re

from .families import AffineFamily, FamilyError, Monomial

_IMAG = r"\mathbf{i}"
_OVER = r"\overline{"


class _EntryParser:
    def __init__(self, text: str, params: tuple[str, ...], q: int):
        self.s = text
        self.pos = 0
        self.params = params
        self.q = q

    def error(self, msg: str) -> FamilyError:
        return FamilyError(f"{msg} in entry {self.s!r} at offset {self.pos}")

    def skip_ws(self) -> None:
        while self.pos < len(self.s) and self.s[self.pos].isspace():
            self.pos += 1

    def power(self) -> int:
        self.skip_ws()
        if self.s.startswith("^", self.pos):
            self.pos += 1
            m = re.match(r"\{(\d+)\}|(\d)", self.s[self.pos:])
            if not m:
                raise self.error("bad exponent")
            self.pos += m.end()
            return int(m.group(1) or m.group(2))
        return 1

    def product(self, stop: str | None = None) -> tuple[int, list[int]]:
        c = 0
        e = [0] * len(self.params)
        while True:
            self.skip_ws()
            if self.pos >= len(self.s):
                if stop is not None:
                    raise self.error("unterminated group")
                return c, e
            ch = self.s[self.pos]
            if stop is not None and ch == stop:
                self.pos += 1
                return c, e
            if ch == "-":
                self.pos += 1
                c += self.q // 2
            elif ch == "+":
                self.pos += 1
            elif self.s.startswith(_IMAG, self.pos):
                if self.q % 4:
                    raise self.error("imaginary unit needs q divisible by 4")
                self.pos += len(_IMAG)
                c += (self.q // 4) * self.power()
            elif self.s.startswith(_OVER, self.pos):
                self.pos += len(_OVER)
                gc, ge = self.product(stop="}")
                p = self.power()
                c -= gc * p
                e = [a - b * p for a, b in zip(e, ge)]
            elif ch == "1":
                self.pos += 1
            elif ch in self.params:
                self.pos += 1
                p = self.power()
                e[self.params.index(ch)] += p
            else:
                raise self.error(f"unexpected character {ch!r}")


def parse_entry(text: str, params: tuple[str, ...], q: int = 4) -> Monomial:
    c, e = _EntryParser(text, params, q).product()
    return Monomial(c % q, tuple(e))


def parse_array(body: str, params, q: int = 4, name: str = "F") -> AffineFamily:
    """Family from the body of a LaTeX ``array`` environment (rows split on ``\\\\``)."""
    params = tuple(params)
    body = body.replace(r"\hline", " ")
    rows = []
    for chunk in body.split(r"\\"):
        chunk = chunk.strip()
        if not chunk:
            continue
        rows.append([parse_entry(cell.strip(), params, q) for cell in chunk.split("&")])
    return AffineFamily(q, params, rows, name)


_BLOCK = re.compile(
    r"(?P<name>[A-Z])_\{(?P<sub>[0-9A-Z]+)\}\^\{\((?P<k>\d+)\)\}(?:\((?P<params>[a-z,]*)\))?\s*=\s*\\?\]?\s*\\?\[?\s*"
    r"\\left\[\s*\\begin\{array\}\{[^}]*\}(?P<body>.*?)\\end\{array\}",
    re.S,
)


def find_arrays(text: str, q: int = 4) -> dict[str, AffineFamily]:
    """All named monomial arrays such as ``X_{12}^{(7)}(a,...)=[...]`` in a LaTeX source."""
    out = {}
    for m in _BLOCK.finditer(text):
        params = tuple(p for p in (m.group("params") or "").split(",") if p)
        name = f"{m.group('name')}{m.group('sub')}"
        try:
            out[name] = parse_array(m.group("body"), params, q, name)
        except FamilyError:
            continue
    return out
