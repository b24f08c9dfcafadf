import pytest

from occult_lattice.lattice import make_catalog
from occult_lattice.textio import (
    FormatError,
    format_lattice,
    load_isometry_file,
    load_lattice_file,
    parse_lattice_text,
)


def test_parse_u():
    lat = parse_lattice_text("lattice U\nrank 2\n0 1\n1 0\n")
    assert lat.gram == make_catalog("U").gram and lat.label == "U"


def test_comments_and_blank_lines():
    text = "# hyperbolic plane\nlattice U  # name\n\nrank 2\n0 1 # row one\n1 0\n"
    assert parse_lattice_text(text).gram == ((0, 1), (1, 0))


def test_asymmetric():
    with pytest.raises(FormatError, match="symmetric"):
        parse_lattice_text("lattice X\nrank 2\n0 1\n2 0\n")


def test_degenerate():
    with pytest.raises(FormatError, match="degenerate"):
        parse_lattice_text("lattice X\nrank 2\n1 1\n1 1\n")


@pytest.mark.parametrize(
    "text,line",
    [
        ("latice U\nrank 2\n0 1\n1 0\n", 1),
        ("lattice U\nrnk 2\n0 1\n1 0\n", 2),
        ("lattice U\nrank two\n0 1\n1 0\n", 2),
        ("lattice U\nrank 2\n0 1\n1 x\n", 4),
        ("lattice U\nrank 2\n0 1 0\n1 0\n", 3),
        ("lattice U\nrank 3\n0 1 0\n1 0 0\n", 4),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(FormatError) as info:
        parse_lattice_text(text)
    assert info.value.line == line
    assert f":{line}:" in str(info.value)


def test_empty():
    with pytest.raises(FormatError):
        parse_lattice_text("# nothing\n")


def test_round_trip_files(tmp_path):
    lk3 = make_catalog("LK3")
    p = tmp_path / "lk3.lat"
    p.write_text(format_lattice(lk3))
    assert load_lattice_file(p).gram == lk3.gram
    iso = tmp_path / "swap.iso"
    iso.write_text("isometry swap\nrank 2\n0 1\n1 0\n")
    assert load_isometry_file(iso) == ("swap", ((0, 1), (1, 0)))
    with pytest.raises(FormatError):
        load_isometry_file(p)
