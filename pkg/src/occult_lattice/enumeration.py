"""LLL reduction, short-vector enumeration, and the invariant d(L)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterator, Sequence

import numpy as np

from . import matrix as mx
from .config import get_config
from .lattice import Lattice, LatticeError, is_even, is_positive_definite


@dataclass(frozen=True)
class SearchBox:
    """Cap on the absolute value of every coordinate during enumeration."""

    bound: int

    def __post_init__(self):
        if int(self.bound) < 1:
            raise ValueError("search box bound must be >= 1")

    def widened(self, by: int) -> "SearchBox":
        return SearchBox(self.bound + by)


def default_box() -> SearchBox:
    return SearchBox(get_config().search_box)


# ---------------------------------------------------------------------------
# LLL


def _gso(g):
    n = len(g)
    mu = [[Fraction(0)] * n for _ in range(n)]
    bstar = [Fraction(0)] * n
    for i in range(n):
        for j in range(i):
            s = Fraction(g[i][j])
            for k in range(j):
                s -= mu[j][k] * mu[i][k] * bstar[k]
            mu[i][j] = s / bstar[j]
        s = Fraction(g[i][i])
        for k in range(i):
            s -= mu[i][k] ** 2 * bstar[k]
        bstar[i] = s
    return mu, bstar


def _round(x: Fraction) -> int:
    return math.floor(x + Fraction(1, 2))


def lll_reduce(lat: Lattice, delta: Fraction = Fraction(3, 4)) -> tuple[Lattice, mx.Matrix]:
    """LLL-reduce a positive definite lattice in exact arithmetic.

    Returns the reduced lattice and the unimodular change of basis ``T``
    (columns are the new basis vectors in old coordinates), so that
    ``T^T G T`` is the reduced Gram matrix.
    """
    if not is_positive_definite(lat):
        raise LatticeError("LLL needs a positive definite lattice")
    n = lat.rank
    g = [list(row) for row in lat.gram]
    t = [[int(i == j) for j in range(n)] for i in range(n)]  # rows = basis vectors

    k = 1
    while k < n:
        mu, bstar = _gso(g)
        for j in range(k - 1, -1, -1):
            r = _round(mu[k][j])
            if r:
                _reduce(g, t, k, j, r)
                mu, bstar = _gso(g)
        if bstar[k] >= (delta - mu[k][k - 1] ** 2) * bstar[k - 1]:
            k += 1
        else:
            g[k], g[k - 1] = g[k - 1], g[k]
            for row in g:
                row[k], row[k - 1] = row[k - 1], row[k]
            t[k], t[k - 1] = t[k - 1], t[k]
            k = max(k - 1, 1)
    change = mx.transpose(mx.as_matrix(t))
    reduced = Lattice(mx.as_matrix(g), lat.label)
    assert reduced.gram == mx.congruent(lat.gram, change)
    return reduced, change


def _reduce(g, t, k, j, r):
    """b_k <- b_k - r b_j, updating the Gram matrix by congruence."""
    n = len(g)
    t[k] = [x - r * y for x, y in zip(t[k], t[j])]
    g[k] = [x - r * y for x, y in zip(g[k], g[j])]
    for i in range(n):
        g[i][k] = g[i][k] - r * g[i][j] if i != k else g[k][k] - r * g[k][j]


# ---------------------------------------------------------------------------
# Fincke-Pohst


def _quadratic_decomposition(g):
    """Coefficients with Q(x) = sum_i q[i][i] (x_i + sum_{j>i} q[i][j] x_j)^2."""
    n = len(g)
    q = [[Fraction(x) for x in row] for row in g]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def _fp_enumerate(g, bound: int) -> Iterator[tuple[int, ...]]:
    """All nonzero x with x^T g x <= bound (both signs)."""
    n = len(g)
    q = _quadratic_decomposition(g)
    x = [0] * n

    def rec(i, remaining):
        c = sum((q[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        r = remaining / q[i][i]
        s = math.sqrt(float(r)) if r > 0 else 0.0
        lo = math.floor(-float(c) - s) - 1
        hi = math.ceil(-float(c) + s) + 1
        for v in range(lo, hi + 1):
            t = (v + c) ** 2 * q[i][i]
            if t > remaining:
                continue
            x[i] = v
            if i == 0:
                yield tuple(x)
            else:
                yield from rec(i - 1, remaining - t)
        x[i] = 0

    for v in rec(n - 1, Fraction(bound)):
        if any(v):
            yield v


def canonical_sign(v: Sequence[int]) -> tuple[int, ...]:
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


def vectors_up_to(lat: Lattice, bound: int) -> list[tuple[int, ...]]:
    """Every nonzero v with (v,v) <= bound, both signs, sorted by norm then lex."""
    reduced, t = lll_reduce(lat)
    out = []
    for y in _fp_enumerate(reduced.gram, bound):
        out.append(mx.matvec(t, y))
    out.sort(key=lambda v: (lat.norm(v), v))
    return out


def short_vectors(lat: Lattice, bound: int) -> list[tuple[int, ...]]:
    """Vectors with 0 < (v,v) <= bound, one per +-pair.

    Representatives have a positive first nonzero coordinate; the list is
    sorted by norm and then lexicographically.
    """
    if not is_positive_definite(lat):
        raise LatticeError("short_vectors needs a positive definite lattice")
    reps = {canonical_sign(v) for v in vectors_up_to(lat, bound)}
    return sorted(reps, key=lambda v: (lat.norm(v), v))


# ---------------------------------------------------------------------------
# Boxed enumeration for indefinite lattices


def box_chunks(n: int, bound: int, max_chunk: int = 1 << 16) -> Iterator[np.ndarray]:
    """Nonzero integer vectors with coordinates in [-bound, bound].

    Yielded in int64 blocks, ordered by support size, then support
    positions, then values (1, -1, 2, -2, ...); sparse, small vectors
    come first.
    """
    vals = np.array([s * v for v in range(1, bound + 1) for s in (1, -1)], dtype=np.int64)
    nv = len(vals)
    for s in range(1, n + 1):
        m = s
        while m > 1 and nv**m > max_chunk:
            m -= 1
        tail = np.array(list(product(vals, repeat=m)), dtype=np.int64).reshape(-1, m)
        for comb in combinations(range(n), s):
            head_idx = list(comb[: s - m])
            tail_idx = list(comb[s - m :])
            for head in product(vals.tolist(), repeat=s - m):
                arr = np.zeros((len(tail), n), dtype=np.int64)
                if head_idx:
                    arr[:, head_idx] = head
                arr[:, tail_idx] = tail
                yield arr


def _norms(arr: np.ndarray, gram: np.ndarray) -> np.ndarray:
    return np.einsum("ij,jk,ik->i", arr, gram, arr)


def _primitive_mask(arr: np.ndarray) -> np.ndarray:
    return np.gcd.reduce(np.abs(arr), axis=1) == 1


def _gram_array(lat: Lattice) -> np.ndarray:
    return np.array(lat.gram, dtype=np.int64)


def _require_even(lat: Lattice):
    if not is_even(lat):
        raise LatticeError("degree sets are defined for even lattices")


def realized_degrees(lat: Lattice, box: SearchBox | int | None = None) -> set[int]:
    """{(v,v)/2 : v primitive, (v,v) > 0, |coordinates| <= box}.

    Full enumeration: cost grows like (2*box + 1)**rank.
    """
    _require_even(lat)
    box = _as_box(box)
    g = _gram_array(lat)
    out: set[int] = set()
    for arr in box_chunks(lat.rank, box.bound):
        nrm = _norms(arr, g)
        mask = (nrm > 0) & _primitive_mask(arr)
        out.update((nrm[mask] // 2).tolist())
    return out


def _as_box(box) -> SearchBox:
    if box is None:
        return default_box()
    if isinstance(box, SearchBox):
        return box
    return SearchBox(int(box))


def content_bound(lat: Lattice) -> int:
    """gcd of g_ii/2 and g_ij (i != j); it divides every (v,v)/2."""
    g = lat.gram
    n = lat.rank
    vals = [g[i][i] // 2 for i in range(n)] + [g[i][j] for i in range(n) for j in range(i + 1, n)]
    return mx.content(vals)


@dataclass(frozen=True)
class DValue:
    """Outcome of a boxed computation of d(L).

    ``gcd`` is a multiple of the true d(L); ``certified_lower_bound`` is a
    divisor of it. Equal values pin d(L) exactly.
    """

    gcd: int
    certified_lower_bound: int
    stabilized: bool
    box: int
    witnesses: dict[int, tuple[int, ...]] = field(default_factory=dict, compare=False)

    @property
    def exact(self) -> bool:
        return self.gcd == self.certified_lower_bound


def _scan_gcd(lat: Lattice, bound: int, stop_at: int | None):
    g = _gram_array(lat)
    current = 0
    witnesses: dict[int, tuple[int, ...]] = {}
    for arr in box_chunks(lat.rank, bound):
        nrm = _norms(arr, g)
        mask = (nrm > 0) & _primitive_mask(arr)
        if not mask.any():
            continue
        degs = nrm[mask] // 2
        vecs = arr[mask]
        for d, v in zip(degs.tolist(), vecs):
            new = math.gcd(current, d)
            if new != current:
                current = new
                witnesses[d] = tuple(int(x) for x in v)
                if stop_at is not None and current == stop_at:
                    return current, witnesses
    return current, witnesses


def d_value(lat: Lattice, box: SearchBox | int | None = None) -> DValue:
    """Boxed estimate of d(L) = gcd{d : <2d> embeds primitively in L}.

    The scan stops as soon as the running gcd meets the content bound,
    since no larger box can lower it further.
    """
    _require_even(lat)
    box = _as_box(box)
    lower = content_bound(lat)
    value, wit = _scan_gcd(lat, box.bound, stop_at=lower)
    if value == 0:
        raise LatticeError(f"no primitive positive vectors within box {box.bound}")
    if value == lower:
        return DValue(value, lower, True, box.bound, wit)
    wider, _ = _scan_gcd(lat, box.bound + get_config().stabilization_window, stop_at=lower)
    return DValue(value, lower, wider == value, box.bound, wit)


def find_degree_witness(lat: Lattice, degree: int, box: SearchBox | int | None = None) -> tuple[int, ...] | None:
    """First primitive v in the box with (v,v) = 2*degree, sparse vectors first."""
    box = _as_box(box)
    g = _gram_array(lat)
    for arr in box_chunks(lat.rank, box.bound):
        nrm = _norms(arr, g)
        hits = np.nonzero((nrm == 2 * degree) & _primitive_mask(arr))[0]
        if len(hits):
            return tuple(int(x) for x in arr[hits[0]])
    return None
