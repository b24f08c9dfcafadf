import json

import pytest

from occult_lattice.suite import (
    FIELDS,
    CheckRow,
    VerificationReport,
    check_ids,
    emit_report,
    run_paper_suite,
    sixpoints_witness,
)
from occult_lattice.isometry import CyclotomicProfile, cyclotomic_profile, disc_action_trivial


def test_empty_report_structured():
    doc = json.loads(emit_report(VerificationReport(), "json"))
    assert doc == {"checks": []}


def test_single_row():
    r = VerificationReport([CheckRow("x", "1", "1", "pass", "t")])
    doc = json.loads(emit_report(r, "structured"))
    assert list(doc["checks"][0]) == list(FIELDS)
    assert doc["checks"][0]["status"] == "pass"
    text = emit_report(r, "text").decode()
    assert "x" in text and "1 pass" in text
    with pytest.raises(ValueError):
        CheckRow("x", "1", "1", "ok", "t")
    with pytest.raises(ValueError):
        emit_report(r, "yaml")


def test_check_ids_unique_and_sized():
    ids = check_ids()
    assert len(ids) == len(set(ids))
    assert 25 <= len(ids) <= 35


def test_selection_by_prefix():
    r = run_paper_suite(["lemma"])
    assert [c.id for c in r.checks][:1] == ["lemma.d.U(1)"]
    assert all(c.id.startswith("lemma.") for c in r.checks) and len(r.checks) == 7
    r = run_paper_suite(["balldim.genus4", "lk3.invariants"])
    assert [c.id for c in r.checks] == ["lk3.invariants", "balldim.genus4"]
    with pytest.raises(KeyError):
        run_paper_suite(["nope"])


def test_full_suite_rows():
    r = run_paper_suite()
    assert r.ok
    flagged = {c.id for c in r.checks if c.status == "discrepancy-flag"}
    assert flagged == {
        "balldim.sixpoints.prose",
        "dclaim.L3.gcd",
        "dclaim.L6.gcd",
        "dclaim.L5.gcd",
        "dclaim.L6prime.gcd",
    }
    assert r.row("grouporder.L6prime").computed == "1440"
    assert r.row("dclaim.L4").status == "pass"
    assert all(c.runtime_ms is None for c in r.checks)
    assert emit_report(r, "json") == emit_report(run_paper_suite(), "json")


def test_timings_recorded():
    r = run_paper_suite(["lk3"], timings=True)
    assert r.checks[0].runtime_ms is not None
    assert "runtime_ms" in emit_report(r, "text").decode()


def test_sixpoints_witness():
    g = sixpoints_witness()
    assert cyclotomic_profile(g) == CyclotomicProfile.of({3: 4})
    assert disc_action_trivial(g)
