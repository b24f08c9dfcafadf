"""Line-oriented text format for lattices and isometries.

::

    lattice U
    rank 2
    0 1
    1 0

An isometry file has the same layout with an ``isometry <name>`` header
and the matrix rows (columns are images of basis vectors). ``#`` starts a
comment; blank lines are ignored.
"""

from __future__ import annotations

import os
from pathlib import Path

from .lattice import Lattice, LatticeError


class FormatError(LatticeError):
    def __init__(self, message: str, line: int | None = None, source: str = ""):
        where = f"{source}:{line}: " if line is not None else (f"{source}: " if source else "")
        super().__init__(where + message)
        self.line = line


def _content_lines(text: str):
    for no, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def parse_matrix_text(text: str, kind: str, source: str = "<string>") -> tuple[str, tuple[tuple[int, ...], ...]]:
    """Parse the header, rank line and rows; returns (name, rows)."""
    lines = list(_content_lines(text))
    if not lines:
        raise FormatError("empty file", None, source)
    no, head = lines[0]
    parts = head.split(maxsplit=1)
    if parts[0] != kind:
        raise FormatError(f"expected '{kind} <name>' header, got {head!r}", no, source)
    name = parts[1] if len(parts) > 1 else ""
    if len(lines) < 2:
        raise FormatError("missing 'rank <r>' line", no, source)
    no, rank_line = lines[1]
    parts = rank_line.split()
    if len(parts) != 2 or parts[0] != "rank":
        raise FormatError(f"expected 'rank <r>', got {rank_line!r}", no, source)
    try:
        r = int(parts[1])
    except ValueError:
        raise FormatError(f"rank is not an integer: {parts[1]!r}", no, source) from None
    if r < 1:
        raise FormatError("rank must be positive", no, source)
    body = lines[2:]
    if len(body) != r:
        last = body[-1][0] if body else no
        raise FormatError(f"expected {r} matrix rows, found {len(body)}", last, source)
    rows = []
    for no, line in body:
        try:
            row = tuple(int(x) for x in line.split())
        except ValueError:
            raise FormatError(f"non-integer entry in row {line!r}", no, source) from None
        if len(row) != r:
            raise FormatError(f"row has {len(row)} entries, expected {r}", no, source)
        rows.append(row)
    return name, tuple(rows)


def parse_lattice_text(text: str, source: str = "<string>") -> Lattice:
    name, rows = parse_matrix_text(text, "lattice", source)
    r = len(rows)
    for i in range(r):
        for j in range(i + 1, r):
            if rows[i][j] != rows[j][i]:
                raise FormatError(f"Gram matrix is not symmetric at ({i + 1},{j + 1})", None, source)
    try:
        return Lattice(rows, name)
    except LatticeError as exc:
        raise FormatError(str(exc), None, source) from None


def load_lattice_file(path: str | os.PathLike) -> Lattice:
    p = Path(path)
    return parse_lattice_text(p.read_text(encoding="ascii"), str(p))


def load_isometry_file(path: str | os.PathLike) -> tuple[str, tuple[tuple[int, ...], ...]]:
    """Name and raw matrix; check it against a lattice with ``verify_isometry``."""
    p = Path(path)
    return parse_matrix_text(p.read_text(encoding="ascii"), "isometry", str(p))


def format_matrix(kind: str, name: str, rows) -> str:
    out = [f"{kind} {name}".rstrip(), f"rank {len(rows)}"]
    out += [" ".join(str(x) for x in row) for row in rows]
    return "\n".join(out) + "\n"


def format_lattice(lat: Lattice) -> str:
    return format_matrix("lattice", lat.label or "L", lat.gram)
