from fractions import Fraction
from math import prod

import numpy as np
import pytest

from e7spectra import intlinalg as il
from e7spectra import rootsys as rs
from e7spectra import spectrum, torus, weyl
from e7spectra.errors import DomainError, StructuralError

from tables import TABLE_ROWS, WORKED_EXAMPLE

A1 = rs.lookup("A1")


def problem(label, w, q, p=None):
    return torus.TorusProblem(rs.lookup(label), w, q, p or spectrum.QSpec.from_q(q).p)


def test_bordered_matrix_layout():
    n = torus.bordered_matrix([[1]], 5, (1,), [(3, 0)])
    assert n == [[4, 0, 3], [1, 2, 0]]


def test_assemble_shape_for_worked_example():
    n = torus.assemble(problem("A1", WORKED_EXAMPLE, 3))
    assert len(n) == 8 and len(n[0]) == 9
    assert n[7][:8] == [0, 1, 0, 0, 1, 0, 1, 2]
    assert [row[8] for row in n] == [1, 0, 0, 0, 0, 0, 0, 0]


@pytest.mark.parametrize("q", [3, 7, 11])
def test_worked_example_q_3_mod_4(q):
    group, z = torus.group_structure(torus.assemble(problem("A1", WORKED_EXAMPLE, q)), q)
    assert group.factors == (4, (q**6 - 1) // 2)
    assert z.order == 2
    assert torus.exponent_mod_z(problem("A1", WORKED_EXAMPLE, q)) == (q**6 - 1) // 2


@pytest.mark.parametrize("q", [5, 9, 13])
def test_worked_example_q_1_mod_4(q):
    group, z = torus.group_structure(torus.assemble(problem("A1", WORKED_EXAMPLE, q)), q)
    # same order 4 * (q^6-1)/2, z inside the large cyclic factor
    assert group.order == 2 * (q**6 - 1)
    assert group.factors == (2, q**6 - 1)
    assert z.coords == (0, (q**6 - 1) // 2)
    assert torus.exponent_mod_z(problem("A1", WORKED_EXAMPLE, q)) == (q**6 - 1) // 2


def test_z_has_zero_twist_coordinate():
    n = torus.assemble(problem("A1", WORKED_EXAMPLE, 3))
    group = torus.solution_group(n, 3)
    z = torus.z_element()
    assert z == tuple(Fraction(x, 2) for x in torus.CENTER_VECTOR) + (Fraction(0),)
    assert group.coordinates(z).order == 2
    # the variant with t0 = 1/2 does not solve the system
    with pytest.raises(DomainError):
        group.coordinates(z[:-1] + (Fraction(1, 2),))


@pytest.mark.parametrize("label", list(TABLE_ROWS))
@pytest.mark.parametrize("q", [3, 5])
def test_table_exponents(label, q):
    for w, expected in TABLE_ROWS[label]:
        assert torus.exponent_mod_z(problem(label, w, q)) == expected(q)


@pytest.mark.parametrize("label", list(TABLE_ROWS))
def test_table_matrices_are_normalizer_elements(whole, label):
    norm = weyl.setwise_stabilizer(rs.lookup(label).pi1, whole)
    for w, _ in TABLE_ROWS[label]:
        assert np.array(w) in norm


def test_unstable_element_rejected():
    with pytest.raises(DomainError):
        torus.assemble(problem("A1", weyl.simple_reflection(1), 3))


def test_prime_power_validation():
    with pytest.raises(DomainError):
        torus.TorusProblem(A1, WORKED_EXAMPLE, 6, 3)
    with pytest.raises(DomainError):
        torus.TorusProblem(A1, WORKED_EXAMPLE, 4, 2)


def test_infinite_group_is_structural_error():
    with pytest.raises(StructuralError):
        torus.solution_group([[0, 0], [0, 1]])


def test_center_component_groups():
    expected_connected = {"A1", "A1^2", "(A1^3)'", "A3", "D4", "(A5)''", "D5", "E6"}
    for spec in rs.catalog()[1:]:
        trivial = torus.center_component_group(spec).is_trivial
        assert trivial == (spec.label in expected_connected), spec.label
    assert torus.center_component_group(rs.lookup("A3^2")).factors == (4,)
    assert torus.center_component_group(rs.lookup("A7")).factors == (4,)
    assert torus.center_component_group(rs.lookup("A1^5")).factors == (2, 2)


@pytest.mark.parametrize("spec", rs.catalog()[1:], ids=lambda s: s.label)
def test_w1_fixes_the_center(spec):
    # Z(R) = {t : t C in Z^k} with C the relation columns; t s = t on Z(R) iff every
    # column of s - 1 lies in the lattice spanned by the columns of C
    rel_cols = [list(c) for c in zip(*[row[: rs.RANK] for row in spec.center_rows])]
    for r in spec.pi1:
        diff = (weyl.reflection(r) - np.eye(rs.RANK, dtype=np.int64)).tolist()
        for col in zip(*diff):
            assert il.in_column_lattice(list(col), rel_cols)


@pytest.mark.parametrize("q", [3, 5, 9])
def test_no_p_torsion_all_classes(q):
    qs = spectrum.QSpec.from_q(q)
    for rc in spectrum.row_classes():
        for c in rc.classes:
            res = torus.analyze(torus.TorusProblem(rc.spec, c.representative, q, qs.p))
            assert all(f % qs.p for f in res.factors)


@pytest.mark.parametrize("label", ["A1", "A3", "D4", "(A5)''", "D5", "A1^2"])
def test_coset_and_conjugation_invariance(w_group, whole, label):
    spec = rs.lookup(label)
    rc = spectrum.classes_for(spec.label)
    w1 = weyl.reflection_subgroup(spec.pi1, w_group)
    norm = weyl.setwise_stabilizer(spec.pi1, whole)
    rng = np.random.default_rng(3)
    for c in rc.classes[:6]:
        w = np.array(c.representative)
        base = torus.exponent_mod_z(torus.TorusProblem(spec, c.representative, 5, 5))
        for k in rng.integers(w1.order, size=3):
            ww1 = w @ w1.mats[k].astype(np.int64)
            assert torus.exponent_mod_z(torus.TorusProblem(spec, ww1, 5, 5)) == base
        for k in rng.integers(norm.order, size=3):
            x = norm.mats[k].astype(np.int64)
            assert torus.exponent_mod_z(torus.TorusProblem(spec, weyl.inverse(x) @ w @ x, 5, 5)) == base


@pytest.mark.parametrize("q", [3, 5, 7])
def test_elimination_matches_snf_order(q):
    for label in ("A1", "A3", "D4", "(A5)''", "D5", "E6"):
        for w, _ in TABLE_ROWS.get(label, [(np.eye(7, dtype=int), None)]):
            prob = problem(label, w, q)
            red = torus.eliminate_center(prob)
            group = torus.solution_group(torus.assemble(prob), q)
            if red.extra_columns == 0:
                assert abs(il.det(red.matrix)) == group.order


def test_elimination_of_worked_example():
    red = torus.eliminate_center(problem("A1", WORKED_EXAMPLE, 3))
    assert red.variables == (2, 3, 4, 5, 6, 7)
    assert abs(il.det(red.matrix)) == 4 * 364


def test_reflection_outside_w1_moves_the_center():
    rel_cols = [list(c) for c in zip(*[row[: rs.RANK] for row in A1.center_rows])]
    diff = (weyl.simple_reflection(1) - np.eye(rs.RANK, dtype=np.int64)).tolist()
    assert not all(il.in_column_lattice(list(col), rel_cols) for col in zip(*diff))


@pytest.mark.parametrize("q", [5, 9, 13])
def test_a3_squared_structure(q):
    qs = spectrum.QSpec.from_q(q)
    spec = rs.lookup("A3^2")
    found = {torus.analyze(torus.TorusProblem(spec, c.representative, q, qs.p)).factors for c in spectrum.classes_for("A3^2").classes}
    assert (2, 2 * (q - 1)) in found and (2, 2 * (q + 1)) in found


def test_worked_example_reduced_block():
    q = 3
    red = torus.eliminate_center(problem("A1", WORKED_EXAMPLE, q))
    assert red.matrix[0][: red.block_columns] == [q - 1, 0, q, q, q, q]


def test_empty_subsystem_identity_block():
    q = 5
    n = torus.assemble(problem("0", weyl.identity(), q))
    assert [row[:7] for row in n[:7]] == [[(q - 1) * (i == j) for j in range(7)] for i in range(7)]
    assert n[7] == [0, 1, 0, 0, 1, 0, 1, 2]


@pytest.mark.parametrize("q", [3, 5, 7, 9])
def test_full_system_center(q):
    res = torus.analyze(problem("E7", weyl.identity(), q))
    assert 4 % prod(res.factors) == 0
    assert res.exponent_mod_z <= 2
