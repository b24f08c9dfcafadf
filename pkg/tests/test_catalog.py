import pytest

from occult_lattice import matrix as mx
from occult_lattice.catalog import (
    EMBEDDED,
    ENTRIES,
    Atom,
    Sum,
    Twist,
    get_entry,
    lattice_from_expr,
    parse_expr,
    validate_catalog,
)
from occult_lattice.embedding import verify_primitive_embedding
from occult_lattice.lattice import LatticeError, make_catalog, signature


def test_parse_expr_tree():
    assert parse_expr("U") == Atom("U")
    assert parse_expr("U(3)") == Twist(Atom("U"), 3)
    assert parse_expr("A1(-1)^2") == Sum((Twist(Atom("A", 1), -1),) * 2)
    tree = parse_expr("U(2)^2 + D8(-1) + A1(-1)^2")
    assert isinstance(tree, Sum) and len(tree.parts) == 5
    assert parse_expr("<6>") == Atom("<>", 6)


@pytest.mark.parametrize("bad", ["", "W", "U(", "A1^0", "U+", "E7"])
def test_parse_errors(bad):
    with pytest.raises(LatticeError):
        lattice_from_expr(bad)


def test_expression_values():
    assert lattice_from_expr("U^3+E8(-1)^2").gram == make_catalog("LK3").gram
    assert lattice_from_expr("<1>").gram == ((1,),)
    assert lattice_from_expr("<6>").gram == ((6,),)
    with pytest.raises(LatticeError):
        lattice_from_expr("<3>")
    assert lattice_from_expr("L4(-1)").gram == ((0, -3), (-3, 0))


def test_entries():
    assert set(EMBEDDED) | {"LK3"} == set(ENTRIES)
    ranks = {"L4": 2, "L3": 8, "L6": 5, "L5": 10, "L6prime": 14}
    for eid, r in ranks.items():
        lat = get_entry(eid).lattice
        assert lat.rank == r
        assert signature(lat).pos == 1
    with pytest.raises(LatticeError):
        get_entry("L7")


def test_witnesses_are_primitive_embeddings():
    validate_catalog()
    for eid in EMBEDDED:
        e = get_entry(eid).embedding_witness
        assert verify_primitive_embedding(e)
        assert len(e.matrix) == 22


def test_claimed_complement_ranks():
    for eid in EMBEDDED:
        entry = get_entry(eid)
        if entry.claimed_complement:
            assert lattice_from_expr(entry.claimed_complement).rank == 22 - entry.lattice.rank
