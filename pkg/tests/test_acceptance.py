"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
"""

from __future__ import annotations

import functools
import json
import random
import subprocess
import sys
import time

from occult_lattice import matrix as mx
from occult_lattice.catalog import EMBEDDED, get_entry, lattice_from_expr
from occult_lattice.embedding import invariants_match, isometric_definite, orthogonal_complement
from occult_lattice.enumeration import d_value, short_vectors, vectors_up_to
from occult_lattice.isometry import (
    CyclotomicProfile,
    Isometry,
    MuActionDatum,
    apply_disc_action,
    ball_dimension,
    coxeter_element,
    cyclotomic_profile,
    disc_action,
    disc_action_trivial,
    find_isometry_with_profile,
    fixed_sublattice,
    order_of,
    orthogonal_group_order_mod_p,
    orthogonal_group_order_naive,
    reflection,
)
from occult_lattice.lattice import Lattice, delta, determinant, is_even, make_catalog, signature
from occult_lattice.normal_forms import (
    disc_forms_equivalent,
    discriminant_form,
    discriminant_group,
    smith_normal_form,
)
from occult_lattice.suite import emit_report, run_paper_suite

from _support import coordinate_box, naive_box_vectors, random_positive_definite, scramble


def criterion(number: int, title: str, limit_s: float):
    """Print one PASS/FAIL line; a run over the time limit fails too."""

    def wrap(fn):
        @functools.wraps(fn)
        def inner(*args, **kwargs):
            start = time.perf_counter()
            try:
                detail = fn(*args, **kwargs)
            except BaseException as exc:
                print(f"\nFAIL criterion {number}: {title} ({type(exc).__name__}: {exc})")
                raise
            elapsed = time.perf_counter() - start
            ok = elapsed < limit_s
            tag = "PASS" if ok else "FAIL"
            extra = f"; {detail}" if detail else ""
            print(f"\n{tag} criterion {number}: {title} [{elapsed:.2f}s < {limit_s:g}s]{extra}")
            assert ok, f"took {elapsed:.1f}s, limit {limit_s}s"

        return inner

    return wrap


@criterion(1, "d(U(n)) = n certified for n=1..5; d = 1 for A1+A1(-1)^2 and V+A4(-1)", 5)
def test_criterion_01_lemma_d_values():
    for n in range(1, 6):
        dv = d_value(lattice_from_expr(f"U({n})"))
        assert dv.gcd == n and dv.certified_lower_bound == n
    for expr in ("A1+A1(-1)^2", "V+A4(-1)"):
        lat = lattice_from_expr(expr)
        dv = d_value(lat)
        assert dv.gcd == 1 and dv.exact
        assert dv.witnesses
        for deg, v in dv.witnesses.items():
            assert lat.norm(v) == 2 * deg and mx.content(v) == 1


@criterion(2, "L_K3: rank 22, det -1, signature (3,19), even, trivial disc group", 1)
def test_criterion_02_lk3():
    lk3 = make_catalog("LK3")
    assert lk3.rank == 22
    assert determinant(lk3) == -1
    assert signature(lk3) == (3, 19)
    assert is_even(lk3)
    assert discriminant_group(lk3).is_trivial()


@criterion(3, "complements of L4, L3, L6' match the claimed lattices", 30)
def test_criterion_03_complements():
    out = []
    for eid in ("L4", "L3", "L6prime"):
        entry = get_entry(eid)
        comp, _ = orthogonal_complement(entry.embedding_witness)
        claimed = lattice_from_expr(entry.claimed_complement)
        assert invariants_match(comp, claimed), eid
        out.append(f"{eid}perp = {entry.claimed_complement}")
    return ", ".join(out)


@criterion(4, "delta(M-perp) = delta(M) and q(M-perp) = -q(M) for all five embeddings", 30)
def test_criterion_04_duality():
    for eid in EMBEDDED:
        m = get_entry(eid).lattice
        comp, _ = orthogonal_complement(get_entry(eid).embedding_witness)
        assert delta(comp) == delta(m), eid
        assert disc_forms_equivalent(discriminant_form(comp), discriminant_form(m).negate()), eid


@criterion(5, "|O(q)| = 240 on (Z/5)^3 and 1440 on (Z/3)^4 by brute force", 600)
def test_criterion_05_group_orders():
    q5 = discriminant_form(orthogonal_complement(get_entry("L5").embedding_witness)[0])
    q3 = discriminant_form(orthogonal_complement(get_entry("L6prime").embedding_witness)[0])
    assert q5.group.invariant_factors == (5, 5, 5)
    assert q3.group.invariant_factors == (3, 3, 3, 3)
    assert orthogonal_group_order_mod_p(q5, 5) == 240 == 2 * 120
    assert orthogonal_group_order_mod_p(q3, 3) == 1440 == 2 * 720
    # no pruning at all: every k x k matrix mod p
    assert orthogonal_group_order_naive(q5, 5) == 240
    assert orthogonal_group_order_naive(q3, 3) == 1440


@criterion(6, "ball dimensions 9, 2, 4, 6, 15; six points gives 3 and flags the prose value 4", 1)
def test_criterion_06_ball_dimensions():
    def bd(n, mult, inv):
        return ball_dimension(MuActionDatum(n, CyclotomicProfile.of(mult), inv))

    assert bd(3, {1: 2, 3: 10}, 2) == 9
    assert bd(5, {1: 10, 5: 3}, 10) == 2
    assert bd(3, {1: 12, 3: 5}, 12) == 4
    assert bd(4, {1: 8, 4: 7}, 8) == 6
    assert bd(2, {1: 5, 2: 17}, 5) == 15
    r = run_paper_suite(["balldim"])
    assert r.row("balldim.sixpoints").computed == "3"
    assert r.row("balldim.sixpoints").status == "pass"
    prose = r.row("balldim.sixpoints.prose")
    assert (prose.computed, prose.claimed, prose.status) == ("3", "4", "discrepancy-flag")


@criterion(7, "Coxeter orders 2, 3, 4, 6, 30; c(E8)^10 has m3 = 4 and no fixed vectors", 5)
def test_criterion_07_coxeter():
    for (name, param), h in zip([("A", 1), ("A", 2), ("A", 3), ("D", 4), ("E8", None)], [2, 3, 4, 6, 30]):
        assert order_of(coxeter_element(make_catalog(name, param))) == h
    g = coxeter_element(make_catalog("E8")).power(10)
    assert cyclotomic_profile(g) == CyclotomicProfile.of({3: 4})
    assert fixed_sublattice(g)[0] is None


DEFINITE = ["<1>", "<2>", "<4>", "<6>"] + [f"A{n}" for n in range(1, 9)] + [f"D{n}" for n in range(2, 9)] + ["E6", "E8"]


@criterion(8, "isometric_definite on 20 scrambles of each definite catalog lattice; E8 with m3=4", 120)
def test_criterion_08_isometry_search():
    rng = random.Random(20261019)
    for name in DEFINITE:
        lat = lattice_from_expr(name)
        for _ in range(20):
            sc, _ = scramble(lat, rng, steps=3 * lat.rank + 6)
            t = isometric_definite(lat, sc)
            assert t is not None, name
            assert mx.congruent(sc.gram, t) == lat.gram
    g = find_isometry_with_profile(make_catalog("E8"), {3: 4})
    assert g is not None and cyclotomic_profile(g) == CyclotomicProfile.of({3: 4})
    return f"{len(DEFINITE)} lattices x 20 scrambles"


@criterion(9, "short_vectors equals naive box enumeration on 50 random lattices of rank <= 4", 60)
def test_criterion_09_short_vector_oracle():
    rng = random.Random(9)
    for _ in range(50):
        lat = random_positive_definite(rng.randint(1, 4), rng)
        bound = rng.randint(1, 14)
        naive = naive_box_vectors(lat, bound, coordinate_box(lat, bound))
        fast = vectors_up_to(lat, bound)
        assert set(fast) == naive and len(fast) == len(naive)
        assert 2 * len(short_vectors(lat, bound)) == len(naive)


def _snf_round_trips(rng):
    for _ in range(100):
        nr, nc = rng.randint(1, 5), rng.randint(1, 5)
        m = [[rng.randint(-9, 9) for _ in range(nc)] for _ in range(nr)]
        s = smith_normal_form(m)
        prod = mx.matmul(mx.matmul(s.left, m), s.right)
        assert all(prod[i][j] == (s.diag[i] if i == j else 0) for i in range(nr) for j in range(nc))
        assert abs(mx.determinant(s.left)) == 1 == abs(mx.determinant(s.right))
        nz = [d for d in s.diag if d]
        assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


def _d_divisibility(rng):
    from occult_lattice.enumeration import box_chunks
    from occult_lattice.normal_forms import saturate

    checked = 0
    for expr in ("U(3)+U", "A2+A2(-1)", "U(2)+A1(-1)", "U+D4(-1)", "V+A2(-1)", "L4+U"):
        lat = lattice_from_expr(expr)
        dl = d_value(lat)
        assert dl.exact
        for _ in range(6):
            k = rng.randint(2, lat.rank)
            raw = [[rng.randint(-2, 2) for _ in range(k)] for _ in range(lat.rank)]
            if mx.rank(raw) < k:
                continue
            basis = saturate(raw)
            gram = mx.congruent(lat.gram, basis)
            if mx.determinant(gram) == 0:
                continue
            sub = Lattice(gram)
            if not any(sub.norm(v) > 0 for arr in box_chunks(k, 3) for v in arr.tolist()):
                continue
            assert d_value(sub, 3).gcd % dl.gcd == 0
            checked += 1
    assert checked >= 10
    return checked


def _disc_homomorphism(rng):
    for expr, n in (("A2", 3), ("D4", 3), ("E6", 3), ("A4", 5), ("A2^2", 6)):
        lat = lattice_from_expr(expr)
        factors = discriminant_group(lat).invariant_factors
        pool = [Isometry(lat, mx.identity(lat.rank))]
        g = find_isometry_with_profile(lat, {n: lat.rank // mx.totient(n)})
        assert g is not None
        pool.append(g)
        pool += [reflection(lat, v) for v in short_vectors(lat, 2)[:6]]
        elems = list(discriminant_group(lat).elements())
        for _ in range(10):
            a, b = rng.choice(pool), rng.choice(pool)
            da, db, dab = disc_action(a), disc_action(b), disc_action(a.compose(b))
            for x in elems:
                assert apply_disc_action(dab, x, factors) == apply_disc_action(da, apply_disc_action(db, x, factors), factors)


def _profile_sums():
    for name, param in (("A", 2), ("A", 4), ("D", 4), ("D", 5), ("E6", None), ("E8", None)):
        c = coxeter_element(make_catalog(name, param))
        for k in range(1, 13):
            g = c.power(k)
            prof = cyclotomic_profile(g)
            assert prof.rank == g.rank
            fixed, _ = fixed_sublattice(g)
            assert prof.m(1) == (0 if fixed is None else fixed.rank)


def _minus_id_admissibility():
    for expr in ("U(2)^2+D8(-1)+A1(-1)^2", "A1+A1(-1)^4", "D8", "U(2)", "U(3)", "A2+A2(-1)^3", "V+A4(-1)^2", "U(4)", "D5"):
        lat = lattice_from_expr(expr)
        minus = Isometry(lat, mx.scale(mx.identity(lat.rank), -1))
        two = all(d == 2 for d in discriminant_group(lat).invariant_factors)
        assert disc_action_trivial(minus) == two, expr


@criterion(10, "property suites: SNF, d(L)|d(M), disc-action homomorphism, profile sums, -id admissibility", 120)
def test_criterion_10_properties():
    rng = random.Random(10)
    _snf_round_trips(rng)
    n = _d_divisibility(rng)
    _disc_homomorphism(rng)
    _profile_sums()
    _minus_id_admissibility()
    return f"{n} primitive sublattices checked for divisibility"


EXPECTED_FLAGS = {
    "dclaim.L3.gcd",
    "dclaim.L6.gcd",
    "dclaim.L5.gcd",
    "dclaim.L6prime.gcd",
    "balldim.sixpoints.prose",
}


@criterion(11, "verify-paper: no fail rows, flags exactly where documented, byte-identical output", 900)
def test_criterion_11_verify_paper():
    cmd = [sys.executable, "-m", "occult_lattice.cli", "verify-paper", "--format", "json"]
    first = subprocess.run(cmd, capture_output=True, check=False)
    second = subprocess.run(cmd, capture_output=True, check=False)
    assert first.returncode == 0, first.stderr.decode()
    assert first.stdout == second.stdout
    doc = json.loads(first.stdout)
    rows = doc["checks"]
    assert 25 <= len(rows) <= 35
    assert all(list(r) == ["id", "computed", "claimed", "status", "citation", "runtime_ms"] for r in rows)
    assert not [r for r in rows if r["status"] == "fail"]
    assert {r["id"] for r in rows if r["status"] == "discrepancy-flag"} == EXPECTED_FLAGS
    # library path agrees with the CLI bytes
    assert emit_report(run_paper_suite(), "json") == first.stdout
    return f"{len(rows)} rows"
