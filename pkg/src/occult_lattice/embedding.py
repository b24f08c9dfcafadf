"""Primitive embeddings, orthogonal complements and isometry testing."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from . import matrix as mx
from .config import get_config
from .enumeration import SearchBox, _as_box, box_chunks, lll_reduce, vectors_up_to
from .lattice import (
    Lattice,
    LatticeError,
    is_definite,
    is_even,
    is_negative_definite,
    is_positive_definite,
    signature,
    twist,
)
from .normal_forms import discriminant_form, disc_forms_equivalent, integer_kernel, is_primitive_matrix


@dataclass(frozen=True)
class EmbeddingMap:
    """Columns of ``matrix`` are images of the source basis in target coordinates."""

    source: Lattice
    target: Lattice
    matrix: mx.Matrix

    def __post_init__(self):
        object.__setattr__(self, "matrix", mx.as_matrix(self.matrix))

    @property
    def images(self) -> list[tuple[int, ...]]:
        return mx.columns(self.matrix)

    def is_isometric(self) -> bool:
        return mx.congruent(self.target.gram, self.matrix) == self.source.gram

    def is_primitive(self) -> bool:
        return is_primitive_matrix(self.matrix)


def _check_shape(e: EmbeddingMap):
    m = e.matrix
    if len(m) != e.target.rank or any(len(row) != e.source.rank for row in m):
        raise ValueError(
            f"embedding matrix must be {e.target.rank}x{e.source.rank}, got {len(m)}x{len(m[0]) if m else 0}"
        )


def verify_primitive_embedding(e: EmbeddingMap) -> bool:
    """Gram compatibility plus torsion-free cokernel."""
    _check_shape(e)
    return e.is_isometric() and e.is_primitive()


# ---------------------------------------------------------------------------
# Embedding search


def _candidate_stream(target: Lattice, norm: int, constraints, box: SearchBox) -> Iterator[tuple[int, ...]]:
    """Vectors of the given norm meeting inner-product constraints, in canonical order."""
    g = np.array(target.gram, dtype=np.int64)
    cons = [(np.array(mx.matvec(target.gram, w), dtype=np.int64), ip) for w, ip in constraints]
    if is_positive_definite(target):
        if norm <= 0:
            return
        for v in vectors_up_to(target, norm):
            if target.norm(v) == norm and all(
                sum(a * b for a, b in zip(gw, v)) == ip for gw, ip in cons
            ):
                yield v
        return
    if is_negative_definite(target):
        if norm >= 0:
            return
        neg = twist(target, -1)
        for v in vectors_up_to(neg, -norm):
            if target.norm(v) == norm and all(sum(a * b for a, b in zip(gw, v)) == ip for gw, ip in cons):
                yield v
        return
    for arr in box_chunks(target.rank, box.bound):
        mask = np.einsum("ij,jk,ik->i", arr, g, arr) == norm
        for gw, ip in cons:
            mask &= arr @ gw == ip
        for idx in np.nonzero(mask)[0]:
            yield tuple(int(x) for x in arr[idx])


def find_primitive_embedding(
    source: Lattice, target: Lattice, box: SearchBox | int | None = None
) -> EmbeddingMap | None:
    """Backtracking search for a primitive embedding within a coefficient box.

    Column j of the source Gram is matched by choosing an image of norm
    g_jj with the required inner products against earlier images. Definite
    targets use the exact short-vector lists (the box is then irrelevant).
    ``None`` means nothing was found within the box, not that no
    embedding exists.
    """
    if source.rank > target.rank:
        return None
    box = _as_box(box)
    gs = source.gram
    chosen: list[tuple[int, ...]] = []

    def rec(j):
        if j == source.rank:
            return True
        cons = [(chosen[i], gs[j][i]) for i in range(j)]
        for v in _candidate_stream(target, gs[j][j], cons, box):
            trial = chosen + [v]
            # a subset of a primitive basis is primitive
            if not is_primitive_matrix(mx.from_columns(trial, target.rank)):
                continue
            chosen.append(v)
            if rec(j + 1):
                return True
            chosen.pop()
        return False

    if not rec(0):
        return None
    e = EmbeddingMap(source, target, mx.from_columns(chosen, target.rank))
    assert verify_primitive_embedding(e)
    return e


# ---------------------------------------------------------------------------
# Complements


def orthogonal_complement(e: EmbeddingMap) -> tuple[Lattice, mx.Matrix]:
    """Saturated complement of the image, with the restricted pairing.

    Returns the complement lattice and its basis as columns in target
    coordinates.
    """
    if not verify_primitive_embedding(e):
        raise LatticeError("orthogonal complement needs a primitive embedding")
    pairing = mx.matmul(mx.transpose(e.matrix), e.target.gram)
    basis = integer_kernel(pairing, e.target.rank)
    gram = mx.congruent(e.target.gram, basis)
    label = f"({e.source.label})perp" if e.source.label else ""
    return Lattice(gram, label), basis


def span_complement(target: Lattice, basis) -> mx.Matrix:
    """Saturated basis of the vectors orthogonal to the given columns."""
    return integer_kernel(mx.matmul(mx.transpose(basis), target.gram), target.rank)


# ---------------------------------------------------------------------------
# Isomorphism criteria


def invariants_match(l1: Lattice, l2: Lattice, bound: int | None = None) -> bool:
    """Rank, signature, parity and discriminant form all agree.

    For even indefinite lattices this is the working isomorphism criterion
    (Nikulin's uniqueness results cover every case used here). For definite
    lattices it is only necessary; use :func:`isometric_definite`.
    """
    if l1.rank != l2.rank or signature(l1) != signature(l2):
        return False
    if is_even(l1) != is_even(l2):
        return False
    if not is_even(l1):
        raise LatticeError("invariants_match compares discriminant forms of even lattices")
    return disc_forms_equivalent(discriminant_form(l1), discriminant_form(l2), bound)


def _normalize_definite(l1: Lattice, l2: Lattice):
    for lat in (l1, l2):
        if not is_definite(lat):
            raise LatticeError("isometric_definite needs definite lattices")
    neg1, neg2 = is_negative_definite(l1), is_negative_definite(l2)
    if neg1 != neg2:
        return None
    if neg1:
        return twist(l1, -1), twist(l2, -1)
    return l1, l2


def _match_gram(target_gram, want_gram, vectors) -> list[tuple[int, ...]] | None:
    """Find images x_i among ``vectors`` with (x_i, x_j) = want_gram[i][j]."""
    n = len(want_gram)
    arr = np.array(vectors, dtype=np.int64)
    g = np.array(target_gram, dtype=np.int64)
    norms = np.einsum("ij,jk,ik->i", arr, g, arr)
    pools = [np.nonzero(norms == want_gram[i][i])[0] for i in range(n)]
    if any(len(p) == 0 for p in pools):
        return None
    chosen: list[int] = []
    gx = arr @ g

    def rec(i):
        if i == n:
            return True
        pool = pools[i]
        mask = np.ones(len(pool), dtype=bool)
        for j, c in enumerate(chosen):
            mask &= gx[pool] @ arr[c] == want_gram[i][j]
        # a matching definite Gram forces the images to be independent
        for idx in pool[mask]:
            chosen.append(int(idx))
            if rec(i + 1):
                return True
            chosen.pop()
        return False

    if not rec(0):
        return None
    return [tuple(int(x) for x in arr[c]) for c in chosen]


def isometric_definite(l1: Lattice, l2: Lattice) -> mx.Matrix | None:
    """Explicit isometry between definite lattices, or None if none exists.

    Returns an integer T with ``T^T G2 T == G1``: the columns of T are the
    images of the basis of ``l1`` inside ``l2``. The search is exhaustive
    over the finitely many candidate images, so None is a proof of
    non-isometry.
    """
    cap = get_config().isometry_rank_cap
    if max(l1.rank, l2.rank) > cap:
        raise LatticeError(f"rank exceeds the isometry search cap {cap}")
    pair = _normalize_definite(l1, l2)
    if pair is None or l1.rank != l2.rank:
        return None
    a, b = pair
    if a.gram == b.gram:
        return mx.identity(a.rank)
    if mx.determinant(a.gram) != mx.determinant(b.gram):
        return None
    ra, ta = lll_reduce(a)
    rb, tb = lll_reduce(b)
    top = max(ra.gram[i][i] for i in range(ra.rank))
    vecs = vectors_up_to(rb, top)
    images = _match_gram(rb.gram, ra.gram, vecs)
    if images is None:
        return None
    x = mx.from_columns(images, rb.rank)
    ta_inv = mx.to_int(mx.inverse(ta))
    t = mx.matmul(tb, mx.matmul(x, ta_inv))
    assert mx.congruent(l2.gram, t) == l1.gram
    return t
