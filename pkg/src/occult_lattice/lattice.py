"""Integral lattices given by Gram matrices, and the standard catalog."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

from . import matrix as mx
from .matrix import Matrix


class LatticeError(ValueError):
    """Raised for invalid lattice data or unsupported catalog requests."""


@dataclass(frozen=True)
class Lattice:
    """Nondegenerate symmetric integer Gram matrix with an optional label.

    Equality is structural on the Gram matrix; the label is cosmetic.
    """

    gram: Matrix
    label: str = field(default="", compare=False)

    def __post_init__(self):
        gram = mx.as_matrix(self.gram)
        object.__setattr__(self, "gram", gram)
        n = len(gram)
        if n == 0:
            raise LatticeError("lattice must have positive rank")
        if any(len(row) != n for row in gram):
            raise LatticeError("Gram matrix must be square")
        for i in range(n):
            for j in range(i + 1, n):
                if gram[i][j] != gram[j][i]:
                    raise LatticeError(f"Gram matrix is not symmetric at ({i}, {j})")
        if mx.determinant(gram) == 0:
            raise LatticeError("Gram matrix is degenerate")

    @property
    def rank(self) -> int:
        return len(self.gram)

    def inner(self, u: Sequence, v: Sequence):
        return sum(u[i] * sum(g * x for g, x in zip(row, v)) for i, row in enumerate(self.gram))

    def norm(self, v: Sequence):
        return self.inner(v, v)

    def __repr__(self):
        name = self.label or "Lattice"
        return f"<{name}: rank {self.rank}>"


class Signature(NamedTuple):
    pos: int
    neg: int


def _relabel(lat: Lattice, label: str) -> Lattice:
    return Lattice(lat.gram, label)


def _dynkin_gram(n: int, edges: Sequence[tuple[int, int]]) -> Matrix:
    g = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for a, b in edges:
        g[a][b] = g[b][a] = -1
    return mx.as_matrix(g)


def _a_gram(n):
    return _dynkin_gram(n, [(i, i + 1) for i in range(n - 1)])


def _d_gram(n):
    # chain 0-1-...-(n-2), node n-1 attached to n-3
    edges = [(i, i + 1) for i in range(n - 2)]
    if n >= 3:
        edges.append((n - 3, n - 1))
    return _dynkin_gram(n, edges)


# Bourbaki numbering (0-based): chain 0-2-3-4-5-6-7 with node 1 on node 3.
_E8_EDGES = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)]


def _e_gram(n):
    return _dynkin_gram(n, [(a, b) for a, b in _E8_EDGES if a < n and b < n])


CATALOG_NAMES = ("U", "V", "<1>", "<2d>", "A", "D", "E6", "E8", "LK3")


def make_catalog(name: str, param: int | None = None) -> Lattice:
    """Build a standard lattice by name.

    Names: ``U``, ``V``, ``<1>``, ``<2d>`` (param d), ``A``/``D`` (param n),
    ``E6``, ``E8``, ``LK3``.  Root lattices are positive definite with the
    Bourbaki simple-root basis.
    """
    if name == "U":
        return Lattice(((0, 1), (1, 0)), "U")
    if name == "V":
        return Lattice(((2, 1), (1, -2)), "V")
    if name == "<1>":
        return Lattice(((1,),), "<1>")
    if name == "E6":
        return Lattice(_e_gram(6), "E6")
    if name == "E8":
        return Lattice(_e_gram(8), "E8")
    if name == "LK3":
        u = make_catalog("U")
        e8m = twist(make_catalog("E8"), -1)
        return _relabel(direct_sum([u, u, u, e8m, e8m]), "LK3")
    if name in ("A", "D", "<2d>"):
        if param is None:
            raise LatticeError(f"catalog lattice {name} needs a parameter")
        param = int(param)
        if param < 1 or (name == "D" and param < 2):
            raise LatticeError(f"parameter out of range for {name}: {param}")
        if name == "A":
            return Lattice(_a_gram(param), f"A{param}")
        if name == "D":
            return Lattice(_d_gram(param), f"D{param}")
        return Lattice(((2 * param,),), f"<{2 * param}>")
    raise LatticeError(f"unknown catalog lattice {name!r}")


def twist(lat: Lattice, n: int) -> Lattice:
    """The lattice L(n): same group, pairing scaled by n."""
    if n == 0:
        raise LatticeError("twist by zero")
    label = f"{lat.label}({n})" if lat.label else ""
    return Lattice(mx.scale(lat.gram, n), label)


def direct_sum(parts: Sequence[Lattice]) -> Lattice:
    if not parts:
        raise LatticeError("direct sum of an empty list")
    if len(parts) == 1:
        return parts[0]
    label = "+".join(p.label or "?" for p in parts)
    return Lattice(mx.block_diagonal([p.gram for p in parts]), label)


def determinant(lat: Lattice) -> int:
    return mx.determinant(lat.gram)


def delta(lat: Lattice) -> int:
    """Order of the discriminant group, |det|."""
    return abs(determinant(lat))


def is_even(lat: Lattice) -> bool:
    return all(lat.gram[i][i] % 2 == 0 for i in range(lat.rank))


def symmetric_diagonalization(gram) -> list[Fraction]:
    """Diagonal entries of a rational congruence diagonalization.

    Pivots on a nonzero diagonal entry when one exists; otherwise uses a
    nonzero off-diagonal entry (i, j) and the substitution e_i <- e_i + e_j,
    which creates the nonzero diagonal value 2 g_ij.
    """
    g = [[Fraction(x) for x in row] for row in gram]
    n = len(g)
    diag = []
    active = list(range(n))
    while active:
        p = next((i for i in active if g[i][i] != 0), None)
        if p is None:
            pair = next(((i, j) for i in active for j in active if i != j and g[i][j] != 0), None)
            if pair is None:
                raise LatticeError("degenerate form")
            i, j = pair
            for k in range(n):
                g[i][k] += g[j][k]
            for k in range(n):
                g[k][i] += g[k][j]
            p = i
        piv = g[p][p]
        diag.append(piv)
        active.remove(p)
        for i in active:
            f = g[i][p] / piv
            if f:
                for k in range(n):
                    g[i][k] -= f * g[p][k]
                for k in range(n):
                    g[k][i] -= f * g[k][p]
    return diag


def signature(lat: Lattice) -> Signature:
    diag = symmetric_diagonalization(lat.gram)
    pos = sum(1 for d in diag if d > 0)
    return Signature(pos, len(diag) - pos)


def is_positive_definite(lat: Lattice) -> bool:
    return signature(lat).neg == 0


def is_negative_definite(lat: Lattice) -> bool:
    return signature(lat).pos == 0


def is_definite(lat: Lattice) -> bool:
    s = signature(lat)
    return s.pos == 0 or s.neg == 0


def sublattice(lat: Lattice, basis, label: str = "") -> Lattice:
    """Restrict the pairing to the span of the columns of ``basis``."""
    return Lattice(mx.congruent(lat.gram, basis), label)
