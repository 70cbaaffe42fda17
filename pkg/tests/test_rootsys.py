import pytest
from hypothesis import given
from hypothesis import strategies as st

from e7spectra import intlinalg as il
from e7spectra import rootsys as rs
from e7spectra.errors import DomainError

ROOTS = rs.generate_roots()


def r(i):
    return rs.simple_root(i)


def test_root_count_and_highest_root():
    assert len(ROOTS) == 126
    assert len(rs.positive_roots()) == 63
    assert max(ROOTS, key=rs.height) == rs.R0
    assert rs.height(rs.R0) == 17


def test_named_roots_are_roots():
    for name in ("r0", "r8", "r9", "r10", "r11", "r12"):
        assert rs.is_root(rs.root(name))
    assert rs.R12 == rs.add(r(5), r(6), r(7))


def test_pairing_examples():
    assert rs.pairing(r(1), r(1)) == 2
    assert rs.pairing(r(1), r(3)) == -1
    assert rs.pairing(r(2), r(4)) == -1
    assert rs.pairing(r(2), r(3)) == 0
    assert rs.pairing(rs.R0, r(1)) == 1
    with pytest.raises(DomainError):
        rs.pairing((1, 1, 0, 0, 0, 0, 0), r(1))


@given(st.sampled_from(ROOTS), st.sampled_from(ROOTS))
def test_reflection_closure(a, b):
    # s_b(a) = a - <a, b> b stays in the root system
    k = rs.pairing(a, b)
    assert rs.is_root(tuple(x - k * y for x, y in zip(a, b)))
    assert rs.is_root(rs.neg(a))
    assert k in (-2, -1, 0, 1, 2)


def test_classify_type():
    assert str(rs.classify_type([r(i) for i in range(1, 8)])) == "E7"
    assert str(rs.classify_type([r(2), r(3), r(4), r(5)])) == "D4"
    assert str(rs.classify_type([r(1), r(2)])) == "A1^2"
    assert str(rs.classify_type([])) == "0"


def test_catalog_shape():
    cat = rs.catalog()
    assert len(cat) == 18
    assert cat[0].label == "0" and cat[-1].label == "E7"
    # A1^6 and A1^7 are not centralizer types
    assert not any(s.cartan_type in ("A1^6", "A1^7") for s in cat)


@pytest.mark.parametrize("spec", rs.catalog(), ids=lambda s: s.label)
def test_catalog_type_and_height(spec):
    assert str(rs.classify_type(spec.pi1)) == spec.cartan_type
    assert rs.local_max_height(spec.pi1) == spec.mh
    assert rs.classify_type(spec.pi1).max_height == spec.mh


@pytest.mark.parametrize("spec", rs.catalog(), ids=lambda s: s.label)
def test_center_relations_match_pairings(spec):
    # t commutes with every root element of Phi1 iff sum_i <r, r_i> t_i = 0 for r in Pi1
    derived = [row[: rs.RANK] for row in rs.pairing_relations(spec.pi1)]
    stored = [row[: rs.RANK] for row in spec.center_rows]
    assert all(row[rs.RANK] == 0 for row in spec.center_rows)
    if stored or derived:
        as_cols = lambda rows: [list(c) for c in zip(*rows)] if rows else [[0] for _ in range(rs.RANK)]
        assert il.same_column_lattice(as_cols(stored), as_cols(derived))


def test_max_height_formulas():
    heights = {"A": lambda l: l, "D": lambda l: 2 * l - 3}
    for spec in rs.catalog():
        for comp in rs.classify_type(spec.pi1).components:
            if comp.letter in heights:
                assert comp.max_height == heights[comp.letter](comp.rank)
    assert rs.lookup("E6").mh == 11
    assert rs.lookup("E7").mh == 17


@pytest.mark.parametrize(
    "label, pi2",
    [
        ("A1", [r(2), r(3), r(4), r(5), r(6), r(7)]),
        ("A3", [r(2), r(5), r(6), r(7)]),
        ("A3^2", [r(2)]),
        ("D4", [r(2), r(6), rs.R12]),
        ("(A5)'", [r(6), r(7)]),
        ("(A5)''", [r(7)]),
        ("D5", [r(6)]),
        ("D6", [r(7)]),
        ("E6", []),
    ],
)
def test_orthogonal_system(label, pi2):
    _, got = rs.orthogonal_system(rs.lookup(label).pi1)
    assert sorted(got) == sorted(pi2)


def test_orthogonal_system_a1_is_d6():
    phi2, pi2 = rs.orthogonal_system(rs.lookup("A1").pi1)
    assert len(phi2) == 60
    assert str(rs.classify_type(pi2)) == "D6"


def test_lookup_spellings():
    assert rs.lookup('(A5)"').label == "(A5)''"
    assert rs.lookup("A5''").label == "(A5)''"
    assert rs.lookup("empty").label == "0"
    with pytest.raises(DomainError, match="valid labels"):
        rs.lookup("B3")
