"""Finite-order lattice isometries and the bookkeeping built on them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

import numpy as np

from . import matrix as mx
from .config import get_config
from .enumeration import lll_reduce, vectors_up_to
from .lattice import Lattice, LatticeError, is_definite, is_negative_definite, make_catalog, twist
from .normal_forms import (
    BoundExceeded,
    DiscriminantForm,
    discriminant_basis,
    integer_kernel,
)


class IsometryError(ValueError):
    pass


@dataclass(frozen=True)
class Isometry:
    """Integer matrix g with g^T G g = G; columns are images of basis vectors."""

    lattice: Lattice
    matrix: mx.Matrix

    @property
    def rank(self) -> int:
        return self.lattice.rank

    def compose(self, other: "Isometry") -> "Isometry":
        """``self`` after ``other``."""
        return Isometry(self.lattice, mx.matmul(self.matrix, other.matrix))

    def inverse(self) -> "Isometry":
        return Isometry(self.lattice, mx.to_int(mx.inverse(self.matrix)))

    def power(self, k: int) -> "Isometry":
        if k < 0:
            return self.inverse().power(-k)
        return Isometry(self.lattice, mx.matpow(self.matrix, k))

    def __call__(self, v: Sequence):
        return mx.matvec(self.matrix, v)


def verify_isometry(lat: Lattice, g: Sequence[Sequence[int]]) -> Isometry:
    g = mx.as_matrix(g)
    n = lat.rank
    if len(g) != n or any(len(row) != n for row in g):
        raise IsometryError(f"isometry must be {n}x{n}")
    if abs(mx.determinant(g)) != 1:
        raise IsometryError("determinant is not +-1")
    if mx.congruent(lat.gram, g) != lat.gram:
        raise IsometryError("matrix does not preserve the Gram matrix")
    return Isometry(lat, g)


def order_of(g: Isometry, cutoff: int | None = None) -> int | None:
    """Least k <= cutoff with g^k = 1, or None when the cutoff is exceeded."""
    cutoff = cutoff or get_config().order_cutoff
    ident = mx.identity(g.rank)
    power = g.matrix
    for k in range(1, cutoff + 1):
        if power == ident:
            return k
        power = mx.matmul(power, g.matrix)
    return None


def reflection(lat: Lattice, v: Sequence[int]) -> Isometry:
    """s_v(x) = x - 2 (x,v)/(v,v) v for a vector of norm +-2."""
    nv = lat.norm(v)
    if nv not in (2, -2):
        raise IsometryError(f"reflection vector must have norm +-2, got {nv}")
    gv = mx.matvec(lat.gram, v)
    n = lat.rank
    sign = 2 // nv
    m = tuple(tuple(int(i == j) - sign * v[i] * gv[j] for j in range(n)) for i in range(n))
    return verify_isometry(lat, m)


def _root_type(lat: Lattice) -> str | None:
    n = lat.rank
    candidates = [("A", n)]
    if n >= 2:
        candidates.append(("D", n))
    for name, param in candidates:
        if make_catalog(name, param).gram == lat.gram:
            return f"{name}{param}"
    for name in ("E6", "E8"):
        if make_catalog(name).gram == lat.gram:
            return name
    return None


def coxeter_element(lat: Lattice) -> Isometry:
    """Product s_1 s_2 ... s_n of the simple reflections of a root lattice."""
    if _root_type(lat) is None:
        raise IsometryError("coxeter_element needs A_n, D_n, E6 or E8 in the standard basis")
    n = lat.rank
    c = mx.identity(n)
    for i in range(n):
        e = tuple(int(i == j) for j in range(n))
        c = mx.matmul(c, reflection(lat, e).matrix)
    return Isometry(lat, c)


# ---------------------------------------------------------------------------
# Cyclotomic profiles


@dataclass(frozen=True)
class CyclotomicProfile:
    """Multiplicity of each cyclotomic factor in a characteristic polynomial."""

    multiplicities: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, mapping: Mapping[int, int]) -> "CyclotomicProfile":
        return cls(tuple(sorted((int(k), int(m)) for k, m in mapping.items() if m)))

    def m(self, k: int) -> int:
        return dict(self.multiplicities).get(k, 0)

    @property
    def rank(self) -> int:
        return sum(m * mx.totient(k) for k, m in self.multiplicities)

    def polynomial(self) -> list[int]:
        p = [1]
        for k, m in self.multiplicities:
            for _ in range(m):
                p = mx.poly_mul(p, mx.cyclotomic(k))
        return p

    def as_dict(self) -> dict[int, int]:
        return dict(self.multiplicities)

    def __str__(self):
        return ", ".join(f"m{k}={m}" for k, m in self.multiplicities) or "empty"


def cyclotomic_profile(g: Isometry, cutoff: int | None = None) -> CyclotomicProfile:
    """m_k = dim ker Phi_k(g) / phi(k) for every k dividing the order of g."""
    order = order_of(g, cutoff)
    if order is None:
        raise IsometryError("isometry has infinite order (or exceeds the cutoff)")
    n = g.rank
    mult = {}
    for k in range(1, order + 1):
        if order % k:
            continue
        phik = mx.poly_eval_matrix(mx.cyclotomic(k), g.matrix)
        dim = n - mx.rank(phik)
        tot = mx.totient(k)
        assert dim % tot == 0
        if dim:
            mult[k] = dim // tot
    profile = CyclotomicProfile.of(mult)
    assert profile.rank == n
    return profile


def fixed_sublattice(g: Isometry) -> tuple[Lattice | None, mx.Matrix]:
    """Saturated kernel of g - 1 with the restricted pairing.

    A rank-zero result comes back as ``(None, basis)`` with an empty basis,
    since the zero lattice is not a valid :class:`Lattice`.
    """
    n = g.rank
    basis = integer_kernel(mx.sub(g.matrix, mx.identity(n)), n)
    if not basis or not basis[0]:
        return None, basis
    return Lattice(mx.congruent(g.lattice.gram, basis), "fixed"), basis


# ---------------------------------------------------------------------------
# Action on the discriminant group


def disc_action(g: Isometry) -> tuple[tuple[int, ...], ...]:
    """Coordinates of the images of the discriminant generators."""
    basis = discriminant_basis(g.lattice)
    return tuple(basis.coordinates(mx.matvec(g.matrix, c)) for c in basis.generators)


def apply_disc_action(action, x: Sequence[int], factors: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(factors)
    for a, img in zip(x, action):
        for i, c in enumerate(img):
            out[i] += a * c
    return tuple(v % d for v, d in zip(out, factors))


def disc_action_trivial(g: Isometry) -> bool:
    """True iff g fixes every element of L^dual / L."""
    action = disc_action(g)
    k = len(action)
    return all(img == tuple(int(i == j) for j in range(k)) for i, img in enumerate(action))


# ---------------------------------------------------------------------------
# Period-domain dimensions


@dataclass(frozen=True)
class MuActionDatum:
    """A mu_n action on the ambient lattice, summarized by its profile.

    ``invariant_rank`` is the rank of the invariant lattice L; the
    anti-invariant part L-perp has rank ``profile.rank - invariant_rank``.
    """

    n: int
    profile: CyclotomicProfile
    invariant_rank: int

    def __post_init__(self):
        if self.profile.m(1) != self.invariant_rank:
            raise ValueError("profile m1 must equal the invariant rank")
        if self.profile.m(self.n) < 1:
            raise ValueError(f"the action has no Phi_{self.n} part")
        for k, _ in self.profile.multiplicities:
            if self.n % k:
                raise ValueError(f"Phi_{k} cannot occur for an action of order {self.n}")

    @property
    def complement_rank(self) -> int:
        return self.profile.rank - self.invariant_rank


def ball_dimension(datum: MuActionDatum) -> int:
    """Dimension of the period domain.

    n >= 3: complex ball of dimension m_n - 1.
    n = 2: type IV domain of O(2, k), of dimension k = rank(L-perp) - 2.
    """
    m = datum.profile.m(datum.n)
    if m == 0:
        raise ValueError("m_n = 0")
    if datum.n >= 3:
        return m - 1
    if datum.n == 2:
        return datum.complement_rank - 2
    raise ValueError("n must be at least 2")


# ---------------------------------------------------------------------------
# Targeted isometry search


def _solve_in_span(domain: list[tuple], v: Sequence) -> list[Fraction] | None:
    """Coefficients c with sum c_i domain[i] = v, or None if v is outside the span."""
    if not domain:
        return None if any(v) else []
    n = len(v)
    r = len(domain)
    m = [[Fraction(domain[j][i]) for j in range(r)] + [Fraction(v[i])] for i in range(n)]
    row = 0
    pivots = []
    for c in range(r):
        p = next((i for i in range(row, n) if m[i][c] != 0), None)
        if p is None:
            continue
        m[row], m[p] = m[p], m[row]
        pv = m[row][c]
        m[row] = [x / pv for x in m[row]]
        for i in range(n):
            if i != row and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[row])]
        pivots.append(c)
        row += 1
    if any(m[i][r] != 0 for i in range(row, n)):
        return None
    coeffs = [Fraction(0)] * r
    for i, c in enumerate(pivots):
        coeffs[c] = m[i][r]
    return coeffs


class _ProfileSearch:
    def __init__(self, lat: Lattice, target: CyclotomicProfile):
        self.lat = lat
        self.target = target
        self.n = lat.rank
        self.poly = [1]
        for k, _ in target.multiplicities:
            self.poly = mx.poly_mul(self.poly, mx.cyclotomic(k))
        self.deg = len(self.poly) - 1
        top = max(lat.gram[i][i] for i in range(self.n))
        vecs = vectors_up_to(lat, top)
        self.arr = np.array(vecs, dtype=np.int64)
        self.garr = self.arr @ np.array(lat.gram, dtype=np.int64)
        self.norms = np.einsum("ij,ij->i", self.garr, self.arr)

    def candidates(self, w, dom, img):
        lat = self.lat
        mask = self.norms == lat.norm(w)
        for d, x in zip(dom, img):
            mask &= self.garr @ np.array(x, dtype=np.int64) == lat.inner(w, d)
        for idx in np.nonzero(mask)[0]:
            yield tuple(int(c) for c in self.arr[idx])

    def consistent(self, w, x, dom, img) -> bool:
        lat = self.lat
        if lat.norm(x) != lat.norm(w):
            return False
        return all(lat.inner(x, i) == lat.inner(w, d) for d, i in zip(dom, img))

    def integral_so_far(self, dom, img) -> bool:
        for i in range(self.n):
            e = tuple(int(i == j) for j in range(self.n))
            c = _solve_in_span(dom, e)
            if c is None:
                continue
            image = [sum(ci * x[k] for ci, x in zip(c, img)) for k in range(self.n)]
            if any(Fraction(v).denominator != 1 for v in image):
                return False
        return True

    def finish(self, dom, img) -> Isometry | None:
        d = mx.from_columns(dom, self.n)
        im = mx.from_columns(img, self.n)
        g = mx.matmul(im, mx.inverse(d))
        if not mx.is_integral(g):
            return None
        g = mx.to_int(g)
        try:
            iso = verify_isometry(self.lat, g)
        except IsometryError:
            return None
        try:
            if cyclotomic_profile(iso) != self.target:
                return None
        except IsometryError:
            return None
        return iso

    def run(self) -> Isometry | None:
        n = self.n
        basis = [tuple(int(i == j) for j in range(n)) for i in range(n)]

        def next_start(dom):
            for e in basis:
                if _solve_in_span(dom, e) is None:
                    return e
            return None

        def start(dom, img):
            e = next_start(dom)
            if e is None:
                return self.finish(dom, img)
            return chain(dom, img, [e])

        def chain(dom, img, ws):
            # ws = [e, g e, ..., g^j e]; choose or force g(ws[-1])
            w = ws[-1]
            j = len(ws) - 1
            if j == self.deg - 1:
                forced = [0] * n
                for p, v in zip(self.poly[:-1], ws):
                    for k in range(n):
                        forced[k] -= p * v[k]
                options = [tuple(forced)] if self.consistent(w, forced, dom, img) else []
            else:
                options = self.candidates(w, dom, img)
            for x in options:
                if _solve_in_span(img, x) is not None:
                    continue
                dom2, img2 = dom + [w], img + [x]
                if not self.integral_so_far(dom2, img2):
                    continue
                if j < self.deg - 1 and _solve_in_span(dom2, x) is None:
                    found = chain(dom2, img2, ws + [x])
                else:
                    found = start(dom2, img2)
                if found is not None:
                    return found
            return None

        return start([], [])


def find_isometry_with_profile(lat: Lattice, target: CyclotomicProfile | Mapping[int, int]) -> Isometry | None:
    """Search for an isometry of a definite lattice with a given profile.

    Images of basis vectors are chosen among vectors of the same norm with
    all inner products matching. Since g must satisfy P(g) = 0 for the
    product P of the cyclotomic factors present, the orbit of each basis
    vector is closed off after deg P - 1 free choices. The search is
    exhaustive, so ``None`` proves nonexistence.
    """
    if not isinstance(target, CyclotomicProfile):
        target = CyclotomicProfile.of(target)
    cap = get_config().isometry_rank_cap
    if lat.rank > cap:
        raise LatticeError(f"rank exceeds the isometry search cap {cap}")
    if not is_definite(lat):
        raise LatticeError("find_isometry_with_profile needs a definite lattice")
    if target.rank != lat.rank:
        return None
    work = twist(lat, -1) if is_negative_definite(lat) else lat
    reduced, t = lll_reduce(work)
    found = _ProfileSearch(reduced, target).run()
    if found is None:
        return None
    t_inv = mx.to_int(mx.inverse(t))
    g = mx.matmul(t, mx.matmul(found.matrix, t_inv))
    return verify_isometry(lat, g)


# ---------------------------------------------------------------------------
# Orthogonal groups of elementary abelian discriminant forms


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


def _check_elementary(q: DiscriminantForm, p: int):
    cfg = get_config()
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    k = len(q.group.invariant_factors)
    if p > cfg.brute_force_max_p or k > cfg.brute_force_max_k:
        raise BoundExceeded(
            f"(Z/{p})^{k} exceeds the brute-force caps p <= {cfg.brute_force_max_p}, k <= {cfg.brute_force_max_k}"
        )
    if any(d != p for d in q.group.invariant_factors):
        raise ValueError(f"group {q.group} is not elementary abelian of exponent {p}")
    return k


def _scaled_form(q: DiscriminantForm, p: int):
    """Integer matrix M with p*q(x) = x^T M x mod 2p, and p*b mod p."""
    k = len(q.q_values)
    m = np.zeros((k, k), dtype=np.int64)
    bm = np.zeros((k, k), dtype=np.int64)
    for i in range(k):
        qi = q.q_values[i] * p
        if qi.denominator != 1:
            raise ValueError("q-values are not in (1/p)Z")
        m[i, i] = int(qi) % (2 * p)
        for j in range(k):
            bij = q.b_matrix[i][j] * p
            bm[i, j] = int(bij) % p
            if i != j:
                m[i, j] = bm[i, j]
    return m, bm


def orthogonal_group_order_mod_p(q: DiscriminantForm, p: int) -> int:
    """|O(q)| by brute force over all k x k matrices mod p.

    Each candidate matrix (columns = generator images) is tested for
    invertibility and for preserving q and b. Work is vectorized over the
    last k-1 columns, one block per choice of the first column.
    """
    if q.group.is_trivial():
        return 1
    k = _check_elementary(q, p)
    m, bm = _scaled_form(q, p)
    qdiag = np.diag(m)
    vecs = np.array(list(product(range(p), repeat=k)), dtype=np.int64)  # p^k x k
    vec_q = np.einsum("ni,ij,nj->n", vecs, m, vecs) % (2 * p)
    # rest: all choices of columns 2..k, shape (N, k-1, k)
    if k > 1:
        rest_idx = np.array(list(product(range(len(vecs)), repeat=k - 1)), dtype=np.int64)
        ok = np.ones(len(rest_idx), dtype=bool)
        for c in range(1, k):
            ok &= vec_q[rest_idx[:, c - 1]] == qdiag[c]
        rest_idx = rest_idx[ok]
        rest = vecs[rest_idx]  # (N, k-1, k)
        # pairwise b among columns 2..k
        gb = np.einsum("nak,kl,nbl->nab", rest, bm, rest) % p
        ok = np.ones(len(rest), dtype=bool)
        for a in range(1, k):
            for b in range(a + 1, k):
                ok &= gb[:, a - 1, b - 1] == bm[a, b]
        rest = rest[ok]
    else:
        rest = np.zeros((1, 0, k), dtype=np.int64)
    count = 0
    for v, qv in zip(vecs, vec_q):
        if qv != qdiag[0]:
            continue
        bv = (rest @ (bm @ v)) % p  # (N, k-1): b(col_c, first)
        ok = np.all(bv == bm[1:, 0], axis=1) if k > 1 else np.ones(1, dtype=bool)
        if not ok.any():
            continue
        mats = np.concatenate([np.broadcast_to(v, (int(ok.sum()), 1, k)), rest[ok]], axis=1)
        dets = np.array([_det_mod_p(a.T, p) for a in mats])
        count += int(np.count_nonzero(dets))
    return count


def _det_mod_p(a: np.ndarray, p: int) -> int:
    return mx.determinant(a.tolist()) % p


def orthogonal_group_order_naive(q: DiscriminantForm, p: int) -> int:
    """Independent check: test every k x k matrix mod p, no pruning.

    Invertibility is not tested separately; preserving a nondegenerate b
    already forces it.
    """
    if q.group.is_trivial():
        return 1
    k = _check_elementary(q, p)
    m, bm = _scaled_form(q, p)
    qdiag = np.diag(m)
    vecs = np.array(list(product(range(p), repeat=k)), dtype=np.int64)
    nv = len(vecs)
    tail_cols = min(k, 2)
    tail = vecs[np.array(list(product(range(nv), repeat=tail_cols)), dtype=np.int64)]  # (T, tail_cols, k)
    count = 0
    # leading columns by a python loop, the last one or two vectorized
    for head in product(range(nv), repeat=k - tail_cols):
        a = np.empty((len(tail), k, k), dtype=np.int64)
        for c, h in enumerate(head):
            a[:, :, c] = vecs[h]
        a[:, :, k - tail_cols :] = tail.transpose(0, 2, 1)
        qv = np.einsum("nki,kl,nli->ni", a, m, a) % (2 * p)
        bv = np.einsum("nki,kl,nlj->nij", a, bm, a) % p
        ok = np.all(qv == qdiag, axis=1) & np.all(bv == bm, axis=(1, 2))
        count += int(ok.sum())
    return count
