from __future__ import annotations

import pytest

from poincare.algebra import I, Poly
from poincare.errors import ShapeMismatchError, TableMismatchError
from poincare.fixtures import ParamSampler
from poincare.grading import j6_shape, q_shape, quadric_shape, two_nondeg_w1_shape
from poincare.surfaces import cubic_q, quadric, three_nondeg_j6, two_nondeg
from poincare.tangency import (
    FieldJet,
    ResidualBuilder,
    delta_operator,
    explicit_L_2nd,
    explicit_L_j6,
    tangency_residual,
)


@pytest.fixture
def sphere():
    return quadric(1)


def test_field_jet_validation(sphere):
    T = sphere.table
    shape = quadric_shape(1)
    with pytest.raises(ShapeMismatchError):
        FieldJet(shape, T, {"f1": Poly.var(T, "z1_bar")})
    with pytest.raises(ShapeMismatchError):
        FieldJet(shape, T, {"g": Poly.var(T, "z1")})
    with pytest.raises(TableMismatchError):
        FieldJet(shape, T, {"f1": Poly.var(cubic_q().table, "z1")})


def test_split_by_jet_weight(sphere):
    T = sphere.table
    X = FieldJet(quadric_shape(1), T, {"f1": Poly.var(T, "z1"), "e": Poly.var(T, "w").scale(2) + 1})
    parts = X.by_weight(sphere.ws)
    assert sorted(parts) == [-2, 0]
    assert parts[-2]["e"] == Poly.const(T, 1)
    assert X.truncate_jet(sphere.ws, -1) == parts[-2]


def test_sphere_fields(sphere):
    T = sphere.table
    shape = quadric_shape(1)
    dilation = FieldJet(shape, T, {"f1": Poly.var(T, "z1"), "e": Poly.var(T, "w").scale(2)})
    translation = FieldJet(shape, T, {"e": Poly.const(T, 1)})
    assert tangency_residual(sphere, dilation).vanishes()
    assert tangency_residual(sphere, translation).vanishes()
    push = FieldJet(shape, T, {"f1": Poly.const(T, 1)})
    assert tangency_residual(sphere, push).expr == (Poly.var(T, "z1") + Poly.var(T, "z1_bar")).scale(2)


def test_weighted_euler_field_is_tangent_to_q(q_surface):
    T = q_surface.table
    euler = FieldJet(
        q_shape(),
        T,
        {
            "f": Poly.var(T, "z1").scale(2),
            "g": Poly.var(T, "z2"),
            "h": Poly.var(T, "zeta"),
            "e": Poly.var(T, "w").scale(3),
        },
    )
    assert tangency_residual(q_surface, euler).vanishes()
    assert not tangency_residual(q_surface, euler.scale(I)).vanishes()


def test_builder_rejects_absent_targets(q_surface):
    with pytest.raises(ShapeMismatchError):
        ResidualBuilder(q_surface, j6_shape())


def test_delta_operator(sphere):
    T = sphere.table
    u = Poly.var(T, "u")
    z = Poly.var(T, "z1")
    assert delta_operator(z, u * u) == (z * u).scale(2).scale(I)
    with pytest.raises(ShapeMismatchError):
        delta_operator(z, u * z)


def test_explicit_operators_require_their_shape(q_surface):
    X = FieldJet.zero(q_shape(), q_surface.table)
    with pytest.raises(ShapeMismatchError):
        explicit_L_j6(X)


@pytest.mark.parametrize("seed", [11, 12])
def test_j6_operator_matches_term_by_term_form(seed):
    sampler = ParamSampler(seed)
    params = sampler.j6_params()
    s = three_nondeg_j6(params)
    builder = ResidualBuilder(s, j6_shape())
    phi = sampler.jet(j6_shape(), s.ws, s.table, (5, 6), density=0.3)
    assert builder.linearized(phi, 3) == explicit_L_j6(phi, params, 3)


@pytest.mark.parametrize("pair_id", [1, 4, 7, 9])
def test_pair_operator_matches_term_by_term_form(pair_id):
    sampler = ParamSampler(pair_id)
    p = sampler.pair_params(pair_id)
    s = two_nondeg(p)
    shape = two_nondeg_w1_shape()
    phi = sampler.jet(shape, s.ws, s.table, (4, 5), density=0.4)
    assert ResidualBuilder(s, shape).linearized(phi, 2) == explicit_L_2nd(phi, p)
