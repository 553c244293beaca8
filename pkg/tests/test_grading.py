from __future__ import annotations

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from poincare.algebra import GaussRat, Poly, VarTable
from poincare.errors import ParameterError, ShapeMismatchError, UnknownVariableError
from poincare.grading import (
    JetComponent,
    JetShape,
    WeightSystem,
    graded_component,
    graded_components,
    jet_basis,
    j6_origin_shape,
    monomial_basis,
    preset,
    q_shape,
    two_nondeg_w2_shape,
    weight_of,
)
from poincare.surfaces import J6_TABLE, PAIR_TABLE


def test_presets():
    w1 = preset("W1", PAIR_TABLE)
    assert (w1.weight("z1"), w1.weight("zeta"), w1.weight("w"), w1.weight("u")) == (1, 1, 2, 2)
    w2 = preset("W2", PAIR_TABLE)
    assert (w2.weight("z1"), w2.weight("zeta_bar"), w2.weight("w")) == (2, 1, 4)
    w3 = preset("W3", PAIR_TABLE)
    assert (w3.weight("z1"), w3.weight("z2"), w3.weight("zeta"), w3.weight("w")) == (2, 1, 1, 3)
    with pytest.raises(ParameterError):
        preset("W9", PAIR_TABLE)


def test_weights_must_be_positive():
    T = VarTable.of(("z", "w"))
    with pytest.raises(ParameterError):
        WeightSystem.of(T, {"z": 0, "w": 2}, {"u": 2})
    with pytest.raises(UnknownVariableError):
        WeightSystem.of(T, {"z": 1}, {"u": 2})


@pytest.mark.parametrize("mu", range(0, 9))
def test_unit_weight_basis_matches_stars_and_bars(mu):
    T = VarTable.of(("a", "b", "c"))
    ws = WeightSystem.of(T, {"a": 1, "b": 1, "c": 1}, {"u": 1})
    assert len(monomial_basis(T.holo, ws, mu, T)) == sympy.binomial(mu + 2, 2)


@pytest.mark.parametrize("mu", range(0, 10))
def test_weighted_basis_matches_generating_function(mu):
    # z, zeta, eta of weight 1 and w of weight 2
    x = sympy.symbols("x")
    counts = sympy.Poly(sympy.series(1 / ((1 - x) ** 3 * (1 - x ** 2)), x, 0, 12).removeO(), x)
    ws = preset("W1", J6_TABLE)
    assert len(monomial_basis(J6_TABLE.holo, ws, mu, J6_TABLE)) == counts.coeff_monomial(x ** mu)


def test_basis_monomials_have_the_weight():
    ws = preset("W2", PAIR_TABLE)
    for mu in range(8):
        for key in monomial_basis(PAIR_TABLE.holo, ws, mu, PAIR_TABLE):
            assert weight_of(key, ws, PAIR_TABLE) == mu


monos = st.tuples(*[st.integers(0, 3) for _ in range(len(PAIR_TABLE))])


@settings(max_examples=200, derandomize=True)
@given(st.dictionaries(monos, st.integers(-4, 4), max_size=8))
def test_grading_partitions_polynomials(terms):
    p = Poly(PAIR_TABLE, {k: GaussRat(c) for k, c in terms.items()})
    ws = preset("W3", PAIR_TABLE)
    parts = graded_components(p, ws)
    total = Poly.zero(PAIR_TABLE)
    for mu, part in parts.items():
        assert part == graded_component(p, ws, mu)
        total = total + part
    assert total == p


def test_shape_validation():
    with pytest.raises(ShapeMismatchError):
        JetShape("bad", (JetComponent("f", "z", 1), JetComponent("f", "w", 0)))
    with pytest.raises(ShapeMismatchError):
        JetShape("no-w", (JetComponent("f", "z", 1),))
    with pytest.raises(ShapeMismatchError):
        q_shape().component("x")


def test_floors_drop_constants():
    ws = preset("W1", J6_TABLE)
    names = {name for name, key in jet_basis(j6_origin_shape(), ws, 2, J6_TABLE) if not any(key)}
    # at weight 2 only g would be constant, and its floor is 1
    assert names == set()
    w2 = preset("W2", PAIR_TABLE)
    g_terms = [key for name, key in jet_basis(two_nondeg_w2_shape(), w2, 5, PAIR_TABLE) if name == "g"]
    assert g_terms == []


def test_row_weight_uses_w_component():
    assert q_shape().row_weight(1) == 4
    assert two_nondeg_w2_shape().row_weight(5) == 5
