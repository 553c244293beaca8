from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from poincare.algebra import GaussRat, Poly
from poincare.classify import (
    FormPair,
    JetFamily13,
    JetGroupElement,
    act_on_pair,
    classify_pair,
    congruence,
    det,
    g0_dim,
    g0_table,
    identity,
    induced_s_form,
    jet_action,
    pair_from_surface,
    representative_pair,
)
from poincare.errors import DegenerateFormError, ParameterError, ShapeMismatchError
from poincare.grading import graded_component
from poincare.suites import CLASSIFY_EXAMPLES, G0_TABLE
from poincare.surfaces import J6_TABLE, PAIR_IDS, PAIR_TABLE, TwoNondegParams, s_form, three_nondeg_j6, two_nondeg

small = st.builds(GaussRat, st.integers(-3, 3), st.integers(-3, 3))
matrices = st.tuples(small, small, small, small).map(lambda x: [[x[0], x[1]], [x[2], x[3]]])


# =========================================================
# CLASSES
# =========================================================
@pytest.mark.parametrize("H, kml, cid, params", CLASSIFY_EXAMPLES)
def test_examples(H, kml, cid, params):
    k, m, l = kml
    got = classify_pair(FormPair.from_coefficients(H, k, l, m))
    assert got.id == cid
    for key, value in params.items():
        assert got.params[key] == value


def test_invalid_pairs():
    with pytest.raises(DegenerateFormError):
        FormPair.from_coefficients([[1, 0], [0, 0]], 1, 0, 1)
    with pytest.raises(DegenerateFormError):
        FormPair.from_coefficients([[1, 0], [0, 1]], 0, 0, 0)
    with pytest.raises(ParameterError):
        FormPair.from_coefficients([[1, GaussRat(0, 1)], [GaussRat(0, 1), 1]], 1, 0, 1)
    with pytest.raises(ParameterError):
        FormPair([[1, 0], [0, 1]], [[1, 1], [0, 1]])


def test_jordan_pencil_is_outside_the_list():
    with pytest.raises(ParameterError):
        classify_pair(FormPair.from_coefficients([[0, 1], [1, 0]], 1, 1, 0))


@pytest.mark.parametrize("pair_id", PAIR_IDS)
def test_normal_forms_classify_as_themselves(pair_id):
    assert classify_pair(representative_pair(pair_id)).id == pair_id


def test_class_eight_with_positive_m_is_class_five():
    assert classify_pair(FormPair.normal_form(8, 1, 2)).id == 5


@settings(max_examples=60, derandomize=True)
@given(st.sampled_from(PAIR_IDS), matrices)
def test_class_is_a_congruence_invariant(pair_id, C):
    assume(not det(C).is_zero())
    p = representative_pair(pair_id)
    assert classify_pair(p.transformed(C)).id == pair_id


def test_witness_reaches_the_normal_shape():
    p = FormPair.from_coefficients([[4, 0], [0, 1]], 1, 0, 3)
    got = classify_pair(p)
    assert got.id == 1
    assert not got.needs_extension
    H2, K2 = congruence(p.H, p.K, got.witness)
    assert H2 == identity()
    assert K2[0][1].is_zero() and K2[1][0].is_zero()
    assert classify_pair(FormPair.from_coefficients([[2, 0], [0, 1]], 1, 0, 3)).needs_extension


# =========================================================
# G0
# =========================================================
def test_g0_table():
    assert g0_table() == G0_TABLE


def test_g0_basis_matches_dimension():
    g0 = g0_dim(representative_pair(9))
    assert g0.dim == 4
    assert len(g0.to_json()["basis"]) == 4


@pytest.mark.parametrize("pair_id", PAIR_IDS)
def test_induced_s_form_matches_the_table(pair_id):
    p = representative_pair(pair_id)
    k = p.K[0][0].re if pair_id <= 6 else Fraction(1)
    assert induced_s_form(p) == s_form(pair_id, k, p.K[1][1], PAIR_TABLE)


# =========================================================
# JET ACTION
# =========================================================
@pytest.fixture
def pair_surface():
    return two_nondeg(TwoNondegParams(1, 1, 2, (GaussRat(1), 0, GaussRat(0, 1))))


def test_identity_keeps_the_three_jet(pair_surface):
    s = pair_surface
    image = jet_action(JetGroupElement.identity(), s)
    assert image.F == graded_component(s.F, s.ws, 2) + graded_component(s.F, s.ws, 3)
    assert pair_from_surface(image) == pair_from_surface(s)


def test_beta_scales_k(pair_surface):
    p = pair_from_surface(pair_surface)
    halved = act_on_pair(JetGroupElement(identity(), 1, 2), p)
    assert halved.K == [[x / 2 for x in row] for row in p.K]
    with pytest.raises(ParameterError):
        act_on_pair(JetGroupElement([[2, 0], [0, 2]], 1, 1), p)


def test_action_composes():
    p = representative_pair(1)
    rot = JetGroupElement([[Fraction(3, 5), Fraction(-4, 5)], [Fraction(4, 5), Fraction(3, 5)]], 1, GaussRat(1, 1))
    half = JetGroupElement([[Fraction(1, 2), 0], [0, Fraction(1, 2)]], Fraction(1, 4), 3)
    assert act_on_pair(rot.then(half), p) == act_on_pair(half, act_on_pair(rot, p))
    assert classify_pair(act_on_pair(rot, p)).id == 1


def test_jet_group_validation():
    with pytest.raises(ParameterError):
        JetGroupElement([[1, 1], [1, 1]], 1, 1)
    with pytest.raises(ParameterError):
        JetGroupElement(identity(), 0, 1)
    with pytest.raises(ParameterError):
        JetGroupElement(identity(), 1, 0)
    with pytest.raises(ShapeMismatchError):
        pair_from_surface(three_nondeg_j6())


def test_origin_jet_family():
    assert JetFamily13.real_parameter_count() == 13
    with pytest.raises(ParameterError):
        JetFamily13(lam=0)
    comps = JetFamily13().map_components(J6_TABLE)
    assert comps == {v: Poly.var(J6_TABLE, v) for v in ("z", "zeta", "eta", "w")}
    assert JetFamily13(kappa=Fraction(2)).tau() == GaussRat(0, 2)
