"""Named lattices, a small expression language for them, and embedding witnesses.

Expressions are ``+``-separated terms; a term is a name, an optional twist
``(n)`` and an optional repeat ``^k``::

    U(2)^2 + D8(-1) + A1(-1)^2

Names: ``U``, ``V``, ``LK3``, ``E6``, ``E8``, ``A<n>``, ``D<n>``, ``<k>``
(rank one with Gram (k), k = 1 or even) and the catalog entry ids below.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Union

from . import matrix as mx
from .embedding import EmbeddingMap, verify_primitive_embedding
from .lattice import Lattice, LatticeError, direct_sum, make_catalog, twist


@dataclass(frozen=True)
class Atom:
    name: str
    param: int | None = None


@dataclass(frozen=True)
class Twist:
    inner: "Expr"
    n: int


@dataclass(frozen=True)
class Sum:
    parts: tuple["Expr", ...]


Expr = Union[Atom, Twist, Sum]

_TERM = re.compile(r"^(?P<name>LK3|L6prime|L[3-6]|U|V|E6|E8|[AD]\d+|<\d+>)(?:\((?P<tw>[+-]?\d+)\))?(?:\^(?P<rep>\d+))?$")


def parse_expr(text: str) -> Expr:
    text = text.replace("⊕", "+").replace(" ", "")
    if not text:
        raise LatticeError("empty lattice expression")
    parts = []
    for term in text.split("+"):
        m = _TERM.match(term)
        if not m:
            raise LatticeError(f"cannot parse lattice term {term!r}")
        name = m["name"]
        if name[0] in "AD" and name[1:].isdigit():
            node: Expr = Atom(name[0], int(name[1:]))
        elif name.startswith("<"):
            node = Atom("<>", int(name[1:-1]))
        else:
            node = Atom(name)
        if m["tw"] is not None:
            node = Twist(node, int(m["tw"]))
        rep = int(m["rep"]) if m["rep"] else 1
        if rep < 1:
            raise LatticeError(f"repeat count must be positive in {term!r}")
        parts.extend([node] * rep)
    return parts[0] if len(parts) == 1 else Sum(tuple(parts))


def evaluate(expr: Expr) -> Lattice:
    if isinstance(expr, Sum):
        return direct_sum([evaluate(p) for p in expr.parts])
    if isinstance(expr, Twist):
        return twist(evaluate(expr.inner), expr.n)
    if expr.name in ENTRIES:
        return ENTRIES[expr.name].lattice
    if expr.name == "<>":
        k = expr.param
        if k == 1:
            return make_catalog("<1>")
        if k % 2 or k < 2:
            raise LatticeError(f"<{k}> is not in the catalog (use 1 or an even number)")
        return make_catalog("<2d>", k // 2)
    return make_catalog(expr.name, expr.param)


def lattice_from_expr(text: str) -> Lattice:
    lat = evaluate(parse_expr(text))
    return Lattice(lat.gram, text.replace(" ", ""))


# ---------------------------------------------------------------------------
# Embedding witnesses into LK3 = U + U + U + E8(-1) + E8(-1).
# Coordinates: U_i = (e_i, f_i) at (2i, 2i+1) for i = 0, 1, 2; the two
# E8(-1) blocks start at 6 and 14 in the simple-root basis.

E8A, E8B = 6, 14


def _u(i):
    return 2 * i, 2 * i + 1


def _col(entries: dict[int, int]) -> tuple[int, ...]:
    v = [0] * 22
    for k, x in entries.items():
        v[k] = x
    return tuple(v)


def _roots(block: int, nodes) -> list[tuple[int, ...]]:
    return [_col({block + n: 1}) for n in nodes]


def _witness_l4():
    # U(3): e -> e0 + e1, f -> f0 + 2 f1
    (e0, f0), (e1, f1) = _u(0), _u(1)
    return [_col({e0: 1, e1: 1}), _col({f0: 1, f1: 2})]


def _witness_l3():
    # A1 -> e0 + f0; seven A1(-1) from mutually orthogonal simple roots
    e0, f0 = _u(0)
    return [_col({e0: 1, f0: 1})] + _roots(E8A, (0, 3, 5, 7)) + _roots(E8B, (0, 3, 5))


def _witness_l6():
    e0, f0 = _u(0)
    return [_col({e0: 1, f0: 1})] + _roots(E8A, (0, 3, 5, 7))


def _witness_l5():
    # V: x = e0 + f0, y = e0 + e1 - f1; A4(-1) on the chain 0-2-3-4 of each E8(-1)
    (e0, f0), (e1, f1) = _u(0), _u(1)
    v = [_col({e0: 1, f0: 1}), _col({e0: 1, e1: 1, f1: -1})]
    return v + _roots(E8A, (0, 2, 3, 4)) + _roots(E8B, (0, 2, 3, 4))


def _witness_l6prime():
    # U -> U_0; E6(-1) on nodes 0..5 of the first E8(-1); A2(-1) on the
    # edges 0-2 and 5-6 of the second; the third A2(-1) inside U_1 + U_2
    (e0, f0), (e1, f1), (e2, f2) = _u(0), _u(1), _u(2)
    u = [_col({e0: 1}), _col({f0: 1})]
    e6 = _roots(E8A, range(6))
    a2a = _roots(E8B, (0, 2))
    a2b = _roots(E8B, (5, 6))
    a2c = [_col({e1: 1, f1: -1}), _col({e2: 1, f2: -1, e1: -1})]
    return u + e6 + a2a + a2b + a2c


@dataclass(frozen=True)
class CatalogEntry:
    """A lattice from the examples with the claims attached to it.

    ``citation`` names the geometric family the claim comes from.
    """

    id: str
    constructor: str
    citation: str
    claimed_complement: str | None = None
    claimed_d: int | None = None
    claimed_ball_dim: int | None = None
    witness_columns: tuple[tuple[int, ...], ...] | None = field(default=None, repr=False)

    @property
    def expression(self) -> Expr:
        return parse_expr(self.constructor)

    @property
    def lattice(self) -> Lattice:
        return _evaluate_entry(self.id)

    @property
    def embedding_witness(self) -> EmbeddingMap | None:
        if self.witness_columns is None:
            return None
        return EmbeddingMap(self.lattice, make_catalog("LK3"), mx.from_columns(self.witness_columns, 22))


@lru_cache(maxsize=None)
def _evaluate_entry(entry_id: str) -> Lattice:
    entry = ENTRIES[entry_id]
    lat = evaluate(entry.expression)
    return Lattice(lat.gram, entry_id)


ENTRIES: dict[str, CatalogEntry] = {
    e.id: e
    for e in [
        CatalogEntry("LK3", "U^3+E8(-1)^2", "K3 lattice"),
        CatalogEntry(
            "L4",
            "U(3)",
            "genus-4 curves",
            claimed_complement="U(3)+U+E8(-1)^2",
            claimed_d=3,
            claimed_ball_dim=9,
            witness_columns=tuple(_witness_l4()),
        ),
        CatalogEntry(
            "L3",
            "A1+A1(-1)^7",
            "genus-3 curves",
            claimed_complement="U(2)^2+D8(-1)+A1(-1)^2",
            claimed_d=2,
            claimed_ball_dim=6,
            witness_columns=tuple(_witness_l3()),
        ),
        CatalogEntry(
            "L6",
            "A1+A1(-1)^4",
            "genus-6 curves",
            claimed_d=2,
            claimed_ball_dim=15,
            witness_columns=tuple(_witness_l6()),
        ),
        CatalogEntry(
            "L5",
            "V+A4(-1)^2",
            "five points on a line",
            claimed_d=2,
            claimed_ball_dim=2,
            witness_columns=tuple(_witness_l5()),
        ),
        CatalogEntry(
            "L6prime",
            "U+E6(-1)+A2(-1)^3",
            "six points on a line",
            claimed_complement="A2(1)+A2(-1)^3",
            claimed_d=2,
            claimed_ball_dim=4,
            witness_columns=tuple(_witness_l6prime()),
        ),
    ]
}

EMBEDDED = ("L4", "L3", "L6", "L5", "L6prime")


def get_entry(entry_id: str) -> CatalogEntry:
    try:
        return ENTRIES[entry_id]
    except KeyError:
        raise LatticeError(f"unknown catalog entry {entry_id!r}") from None


def validate_catalog() -> None:
    """Load-time consistency: witnesses primitive, complements of the right rank."""
    lk3 = make_catalog("LK3")
    if ENTRIES["LK3"].lattice.gram != lk3.gram:
        raise LatticeError("LK3 entry disagrees with the catalog constructor")
    for entry_id in EMBEDDED:
        entry = ENTRIES[entry_id]
        e = entry.embedding_witness
        if not verify_primitive_embedding(e):
            raise LatticeError(f"embedding witness for {entry_id} is not a primitive embedding")
        if entry.claimed_complement is not None:
            comp = lattice_from_expr(entry.claimed_complement)
            if comp.rank != 22 - entry.lattice.rank:
                raise LatticeError(f"claimed complement of {entry_id} has rank {comp.rank}")
