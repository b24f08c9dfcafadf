"""Integer normal forms, discriminant groups and discriminant forms."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd, lcm, prod
from typing import Iterator, Sequence

from . import matrix as mx
from .config import get_config
from .lattice import Lattice, LatticeError, is_even


class BoundExceeded(RuntimeError):
    """A search was asked to go past its configured size cap."""


@dataclass(frozen=True)
class SNFDecomposition:
    """``left @ M @ right == diag`` padded to the shape of ``M``.

    ``left_inverse`` is the exact inverse of ``left``; it is handy for
    saturating column spans.
    """

    left: mx.Matrix
    diag: tuple[int, ...]
    right: mx.Matrix
    left_inverse: mx.Matrix = field(repr=False, compare=False)

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diag if d != 0)


def smith_normal_form(m: Sequence[Sequence[int]]) -> SNFDecomposition:
    """Smith normal form with unimodular transforms.

    Pivot rule: the smallest nonzero absolute value in the remaining block,
    ties to the lowest row and then column. The result is deterministic.
    """
    a = [list(map(int, row)) for row in m]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    left = [[int(i == j) for j in range(nr)] for i in range(nr)]
    linv = [[int(i == j) for j in range(nr)] for i in range(nr)]
    right = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]
        for row in linv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x + q * y for x, y in zip(left[dst], left[src])]
        for row in linv:
            row[src] -= q * row[dst]

    def add_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in right:
            row[dst] += q * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        left[i] = [-x for x in left[i]]
        for row in linv:
            row[i] = -row[i]

    t = 0
    while t < min(nr, nc):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                v = abs(a[i][j])
                if v and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            break
        _, pi, pj = best
        if pi != t:
            swap_rows(t, pi)
        if pj != t:
            swap_cols(t, pj)
        clean = True
        p = a[t][t]
        for i in range(t + 1, nr):
            if a[i][t]:
                q = a[i][t] // p
                add_row(i, t, -q)
                if a[i][t]:
                    clean = False
        for j in range(t + 1, nc):
            if a[t][j]:
                q = a[t][j] // p
                add_col(j, t, -q)
                if a[t][j]:
                    clean = False
        if not clean:
            continue
        bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % p), None)
        if bad is not None:
            add_row(t, bad[0], 1)
            continue
        if p < 0:
            negate_row(t)
        t += 1

    diag = tuple(a[i][i] for i in range(min(nr, nc)))
    return SNFDecomposition(
        left=mx.as_matrix(left), diag=diag, right=mx.as_matrix(right), left_inverse=mx.as_matrix(linv)
    )


def hermite_normal_form(m: Sequence[Sequence[int]]) -> mx.Matrix:
    """Row-style HNF of the row space of ``m``; zero rows dropped."""
    a = [list(map(int, row)) for row in m if any(row)]
    if not a:
        return ()
    nc = len(a[0])
    r = 0
    pivots = []
    for c in range(nc):
        while True:
            nz = [i for i in range(r, len(a)) if a[i][c]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(a[i][c]), i))
            a[r], a[i0] = a[i0], a[r]
            done = True
            for i in range(r + 1, len(a)):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    if a[i][c]:
                        done = False
            if done:
                break
        if r < len(a) and a[r][c]:
            if a[r][c] < 0:
                a[r] = [-x for x in a[r]]
            for i in range(r):
                q = a[i][c] // a[r][c]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
            pivots.append(c)
            r += 1
            if r == len(a):
                break
    return mx.as_matrix(a[:r])


def integer_kernel(m: Sequence[Sequence[int]], ncols: int | None = None) -> mx.Matrix:
    """Saturated basis (as columns) of {x in Z^n : m x = 0}."""
    if not m or not m[0]:
        n = ncols or 0
        return mx.identity(n)
    snf = smith_normal_form(m)
    n = len(m[0])
    r = snf.rank
    cols = [tuple(snf.right[i][j] for i in range(n)) for j in range(r, n)]
    return mx.from_columns(cols, n)


def saturate(basis: Sequence[Sequence[int]]) -> mx.Matrix:
    """Columns spanning (Q-span of the columns of ``basis``) meet Z^n."""
    snf = smith_normal_form(basis)
    n = len(basis)
    r = snf.rank
    cols = [tuple(snf.left_inverse[i][j] for i in range(n)) for j in range(r)]
    return mx.from_columns(cols, n)


def same_column_span(a, b) -> bool:
    return hermite_normal_form(mx.transpose(a)) == hermite_normal_form(mx.transpose(b))


def is_primitive_matrix(m) -> bool:
    """True iff the columns are independent and span a saturated sublattice."""
    if not m or not m[0]:
        return True
    snf = smith_normal_form(m)
    k = len(m[0])
    return snf.rank == k and all(abs(d) == 1 for d in snf.diag[:k])


# ---------------------------------------------------------------------------
# Discriminant groups and forms


@dataclass(frozen=True)
class DiscriminantGroup:
    invariant_factors: tuple[int, ...]

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def elements(self) -> Iterator[tuple[int, ...]]:
        return product(*(range(d) for d in self.invariant_factors))

    def element_order(self, x: Sequence[int]) -> int:
        o = 1
        for a, d in zip(x, self.invariant_factors):
            o = lcm(o, d // gcd(a, d))
        return o

    def add(self, x, y):
        return tuple((a + b) % d for a, b, d in zip(x, y, self.invariant_factors))

    def scale(self, x, k):
        return tuple((k * a) % d for a, d in zip(x, self.invariant_factors))

    def __str__(self):
        if not self.invariant_factors:
            return "0"
        return " x ".join(f"Z/{d}" for d in self.invariant_factors)


@dataclass(frozen=True)
class DiscriminantBasis:
    """SNF-derived generators of L^dual / L and a coordinate map."""

    group: DiscriminantGroup
    generators: tuple[tuple[Fraction, ...], ...]
    coordinate_matrix: mx.Matrix  # rows of U*G for the nontrivial factors

    def coordinates(self, dual_vector: Sequence) -> tuple[int, ...]:
        out = []
        for row, d in zip(self.coordinate_matrix, self.group.invariant_factors):
            z = sum(Fraction(a) * b for a, b in zip(row, dual_vector))
            if z.denominator != 1:
                raise ValueError("vector is not in the dual lattice")
            out.append(int(z) % d)
        return tuple(out)


def discriminant_basis(lat: Lattice) -> DiscriminantBasis:
    g = lat.gram
    snf = smith_normal_form(g)
    n = lat.rank
    idx = [i for i, d in enumerate(snf.diag) if d > 1]
    factors = tuple(snf.diag[i] for i in idx)
    gens = tuple(tuple(Fraction(snf.right[r][i], snf.diag[i]) for r in range(n)) for i in idx)
    ug = mx.matmul(snf.left, g)
    coord = tuple(ug[i] for i in idx)
    return DiscriminantBasis(DiscriminantGroup(factors), gens, coord)


def discriminant_group(lat: Lattice) -> DiscriminantGroup:
    return discriminant_basis(lat).group


def _mod(x: Fraction, m: int) -> Fraction:
    return x - m * (x // m)


@dataclass(frozen=True)
class DiscriminantForm:
    """Finite quadratic form: q in Q/2Z on generators, b in Q/Z on pairs."""

    group: DiscriminantGroup
    q_values: tuple[Fraction, ...]
    b_matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "q_values", tuple(_mod(Fraction(q), 2) for q in self.q_values))
        object.__setattr__(
            self, "b_matrix", tuple(tuple(_mod(Fraction(b), 1) for b in row) for row in self.b_matrix)
        )

    @classmethod
    def trivial(cls) -> "DiscriminantForm":
        return cls(DiscriminantGroup(()), (), ())

    @property
    def order(self) -> int:
        return self.group.order

    def q(self, x: Sequence[int]) -> Fraction:
        k = len(x)
        s = sum(a * a * self.q_values[i] for i, a in enumerate(x))
        s += 2 * sum(x[i] * x[j] * self.b_matrix[i][j] for i in range(k) for j in range(i + 1, k))
        return _mod(s, 2)

    def b(self, x: Sequence[int], y: Sequence[int]) -> Fraction:
        s = sum(a * c * self.b_matrix[i][j] for i, a in enumerate(x) if a for j, c in enumerate(y) if c)
        return _mod(s, 1)

    def negate(self) -> "DiscriminantForm":
        return DiscriminantForm(
            self.group, tuple(-q for q in self.q_values), tuple(tuple(-b for b in row) for row in self.b_matrix)
        )

    def value_census(self) -> dict[tuple[int, Fraction], int]:
        """Count of elements per (order, q-value); an isometry invariant."""
        census: dict[tuple[int, Fraction], int] = {}
        for x in self.group.elements():
            key = (self.group.element_order(x), self.q(x))
            census[key] = census.get(key, 0) + 1
        return census

    def __str__(self):
        if self.group.is_trivial():
            return "trivial"
        parts = [f"Z/{d}: q={q}" for d, q in zip(self.group.invariant_factors, self.q_values)]
        return "; ".join(parts)


def discriminant_form(lat: Lattice) -> DiscriminantForm:
    if not is_even(lat):
        raise LatticeError("discriminant quadratic form needs an even lattice")
    basis = discriminant_basis(lat)
    gens = basis.generators
    qv = tuple(lat.inner(c, c) for c in gens)
    bm = tuple(tuple(lat.inner(c, e) for e in gens) for c in gens)
    return DiscriminantForm(basis.group, qv, bm)


def direct_sum_forms(forms: Sequence[DiscriminantForm]) -> DiscriminantForm:
    factors: list[int] = []
    qv: list[Fraction] = []
    blocks = []
    for f in forms:
        factors.extend(f.group.invariant_factors)
        qv.extend(f.q_values)
        blocks.append(f.b_matrix)
    n = len(factors)
    bm = [[Fraction(0)] * n for _ in range(n)]
    off = 0
    for blk in blocks:
        for i, row in enumerate(blk):
            for j, v in enumerate(row):
                bm[off + i][off + j] = v
        off += len(blk)
    return DiscriminantForm(DiscriminantGroup(tuple(factors)), tuple(qv), tuple(map(tuple, bm)))


# ---------------------------------------------------------------------------
# Isometries of finite quadratic forms


class _FormSearch:
    """Backtracking over generator images for q1 -> q2 isometries."""

    def __init__(self, q1: DiscriminantForm, q2: DiscriminantForm):
        self.q1, self.q2 = q1, q2
        g2 = q2.group
        elems = list(g2.elements())
        self.by_key: dict[tuple[int, Fraction], list[tuple[int, ...]]] = {}
        for x in elems:
            key = (g2.element_order(x), q2.q(x))
            self.by_key.setdefault(key, []).append(x)
        # b-values against an element are recomputed, so cache q2.b rows lazily
        self._bcache: dict[tuple, Fraction] = {}

    def _b2(self, x, y):
        key = (x, y)
        v = self._bcache.get(key)
        if v is None:
            v = self.q2.b(x, y)
            self._bcache[key] = v
        return v

    def candidates(self, i):
        q1 = self.q1
        d = q1.group.invariant_factors[i]
        return self.by_key.get((d, q1.q_values[i]), [])

    def run(self, count: bool):
        q1, q2 = self.q1, self.q2
        k = len(q1.group.invariant_factors)
        g2 = q2.group
        zero = tuple(0 for _ in g2.invariant_factors)
        images: list[tuple[int, ...]] = []
        found = 0

        def extend_span(span, x, d):
            new = set()
            for s in span:
                y = s
                for _ in range(d):
                    new.add(y)
                    y = g2.add(y, x)
            return new if len(new) == len(span) * d else None

        def rec(i, span):
            nonlocal found
            if i == k:
                found += 1
                return not count
            d = q1.group.invariant_factors[i]
            for x in self.candidates(i):
                if any(self._b2(x, images[j]) != q1.b_matrix[i][j] for j in range(i)):
                    continue
                new_span = extend_span(span, x, d)
                if new_span is None:
                    continue
                images.append(x)
                stop = rec(i + 1, new_span)
                images.pop()
                if stop:
                    return True
            return False

        rec(0, {zero})
        return found


def _check_bound(order: int, bound: int | None):
    if bound is None:
        bound = get_config().disc_form_bound
    if order > bound:
        raise BoundExceeded(f"group order {order} exceeds the search bound {bound}")


def disc_forms_equivalent(q1: DiscriminantForm, q2: DiscriminantForm, bound: int | None = None) -> bool:
    """Decide isometry of two finite quadratic forms by exhaustive search.

    Generator images are tried in order of element order and then q-value
    (candidate lists are grouped by that key). Raises ``BoundExceeded`` when
    either group is larger than ``bound``.
    """
    _check_bound(max(q1.order, q2.order), bound)
    # generators of q1 only need to be independent, so presentations such
    # as Z/2 x Z/3 against Z/6 are fine; an injective map of equal orders
    # is onto
    if q1.order != q2.order:
        return False
    if q1.group.is_trivial():
        return True
    if q1.value_census() != q2.value_census():
        return False
    return _FormSearch(q1, q2).run(count=False) > 0


def count_form_automorphisms(q: DiscriminantForm, bound: int | None = None) -> int:
    """Number of group automorphisms preserving q (and hence b)."""
    _check_bound(q.order, bound)
    if q.group.is_trivial():
        return 1
    return _FormSearch(q, q).run(count=True)
