"""Plain-text matrix files.

Format: first non-comment line ``BH q n`` (square) or ``BH q m n`` (candidate),
then m lines of n space-separated exponents in [0, q). ``#`` starts a comment.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

from .algebra import ButsonMatrix


class ParseError(ValueError):
    def __init__(self, message: str, lineno: int | None = None, source: str | None = None):
        self.lineno = lineno
        self.source = source
        where = f"{source or '<string>'}:{lineno}: " if lineno is not None else ""
        super().__init__(where + message)


def _content_lines(text: str) -> Iterable[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_matrix(text: str, source: str | None = None) -> ButsonMatrix:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty matrix file", 1, source)
    lineno, head = lines[0]
    if head[0] != "BH" or len(head) not in (3, 4):
        raise ParseError("expected header 'BH q n' or 'BH q m n'", lineno, source)
    try:
        dims = [int(x) for x in head[1:]]
    except ValueError:
        raise ParseError("non-integer value in header", lineno, source) from None
    q, m, n = (dims[0], dims[1], dims[1]) if len(dims) == 2 else dims
    if q < 1 or m < 1 or n < 1:
        raise ParseError("invalid dimensions in header", lineno, source)
    body = lines[1:]
    if len(body) != m:
        at = body[m][0] if len(body) > m else (body[-1][0] if body else lineno)
        raise ParseError(f"expected {m} rows, found {len(body)}", at, source)
    rows = []
    for lineno, tokens in body:
        if len(tokens) != n:
            raise ParseError(f"expected {n} entries, found {len(tokens)}", lineno, source)
        try:
            row = [int(t) for t in tokens]
        except ValueError:
            raise ParseError("non-integer entry", lineno, source) from None
        if any(not 0 <= v < q for v in row):
            raise ParseError(f"entry outside [0, {q})", lineno, source)
        rows.append(row)
    return ButsonMatrix(q, rows)


def format_matrix(M: ButsonMatrix, comment: str | None = None) -> str:
    out = []
    if comment:
        out.extend(f"# {c}" for c in comment.splitlines())
    out.append(f"BH {M.q} {M.n}" if M.m == M.n else f"BH {M.q} {M.m} {M.n}")
    out.extend(" ".join(str(int(v)) for v in row) for row in M.L)
    return "\n".join(out) + "\n"


def read_matrix(path) -> ButsonMatrix:
    path = Path(path)
    return parse_matrix(path.read_text(encoding="utf-8"), source=str(path))


def write_matrix(path, M: ButsonMatrix, comment: str | None = None) -> None:
    Path(path).write_text(format_matrix(M, comment), encoding="utf-8", newline="\n")
