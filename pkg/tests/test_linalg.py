from __future__ import annotations

from fractions import Fraction

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from poincare.linalg import Echelon, integer_row, nullspace, primitive, rank

NCOLS = 6

entries = st.fractions(min_value=-4, max_value=4, max_denominator=3)
rows = st.dictionaries(st.integers(0, NCOLS - 1), entries, max_size=NCOLS)
matrices = st.lists(rows, min_size=1, max_size=7)


def dense(rs):
    def q(x: Fraction) -> sympy.Rational:
        return sympy.Rational(x.numerator, x.denominator)

    return sympy.Matrix([[q(r.get(c, Fraction(0))) for c in range(NCOLS)] for r in rs])


def test_integer_row_is_primitive():
    assert integer_row({0: Fraction(1, 2), 3: Fraction(-3, 4)}) == {0: 2, 3: -3}
    assert primitive({1: 6, 2: -9}) == {1: 2, 2: -3}
    assert integer_row({0: Fraction(0)}) == {}


def test_dependent_rows_are_rejected():
    ech = Echelon(3)
    assert ech.add({0: 1, 1: 2})
    assert ech.add({1: 1, 2: 1})
    assert not ech.add({0: 2, 1: 5, 2: 1})
    assert ech.rank == 2


@settings(max_examples=150, derandomize=True)
@given(matrices)
def test_rank_matches_sympy(rs):
    assert rank(rs, NCOLS) == dense(rs).rank()


@settings(max_examples=150, derandomize=True)
@given(matrices)
def test_nullspace_is_a_kernel_basis(rs):
    basis = nullspace(rs, NCOLS)
    assert len(basis) == NCOLS - dense(rs).rank()
    for vec in basis:
        for r in rs:
            assert sum((x * vec.get(c, 0) for c, x in r.items()), Fraction(0)) == 0
    if basis:
        assert dense(basis).rank() == len(basis)
