from __future__ import annotations

from fractions import Fraction

import pytest

from poincare.algebra import GaussRat, I, Poly
from poincare.errors import ExpansionError, ParameterError, UnknownVariableError, VerificationFailure
from poincare.flows import (
    QPoint,
    RationalFunction,
    RationalMap,
    exponentiate_check,
    flow_generator,
    g0_flow_series,
    g1_flow,
    g_minus2_flow_series,
    lie_series,
    lift_table,
    q_translation,
    rational_flow_series,
    shear_z1,
    shear_z2,
    verify_exact_automorphism,
)
from poincare.grading import preset, q_shape
from poincare.surfaces import PAIR_TABLE
from poincare.tangency import FieldJet, tangency_residual

T = PAIR_TABLE
W1 = preset("W1", T)


def v(name: str, table=T) -> Poly:
    return Poly.var(table, name)


# =========================================================
# RATIONAL FUNCTIONS
# =========================================================
def test_denominators_must_be_units():
    with pytest.raises(ExpansionError):
        RationalFunction.frac(v("z1"), v("zeta"))


def test_geometric_expansion():
    q = RationalFunction.frac(Poly.const(T, 1), Poly.const(T, 1) - v("z1"))
    z1 = v("z1")
    assert q.expand(W1, 3) == Poly.const(T, 1) + z1 + z1 * z1 + z1 * z1 * z1
    assert (q * RationalFunction.of(Poly.const(T, 1) - z1)).expand(W1, 5) == Poly.const(T, 1)
    assert (q + q - q.scale(2)).is_zero()


def test_series_in_a_parameter():
    L = lift_table(T)
    t, zeta = v("t", L), v("zeta", L)
    q = RationalFunction.frac(Poly.const(L, 1), Poly.const(L, 1) - t * zeta)
    assert q.series_in("t", 2) == Poly.const(L, 1) + t * zeta + t * t * zeta * zeta
    with pytest.raises(ExpansionError):
        RationalFunction.frac(Poly.const(L, 1), Poly.const(L, 1) - zeta).series_in("t", 2)


def test_map_targets_are_holomorphic():
    with pytest.raises(UnknownVariableError):
        RationalMap(T, {"u": RationalFunction.of(v("z1"))})


# =========================================================
# AUTOMORPHISMS OF Q
# =========================================================
def test_translations(q_surface):
    p = QPoint.on_q(1, GaussRat(0, 1), 2, Fraction(1, 3))
    r = QPoint.on_q(GaussRat(-1, 2), Fraction(1, 2), GaussRat(0, -1))
    assert verify_exact_automorphism(q_surface, q_translation(p))
    assert verify_exact_automorphism(q_surface, q_translation(p).then(q_translation(r)))
    with pytest.raises(ParameterError):
        QPoint(GaussRat(1), GaussRat(0), GaussRat(1), GaussRat(0, 5))


def test_shears(q_surface):
    assert verify_exact_automorphism(q_surface, shear_z1(Fraction(2, 7)))
    assert verify_exact_automorphism(q_surface, shear_z2(-3))
    tilted = RationalMap.from_polys(T, {"z1": v("z1") + v("zeta")})
    assert not verify_exact_automorphism(q_surface, tilted)


def test_g1_flow(q_surface):
    N = GaussRat(1, 1)
    assert verify_exact_automorphism(q_surface, g1_flow(N, Fraction(1, 2)))
    assert verify_exact_automorphism(q_surface, g1_flow(N))
    assert verify_exact_automorphism(q_surface, g1_flow(N), {"t": Fraction(-3, 4)})


def test_g1_flow_needs_its_w_terms(q_surface):
    N, t = GaussRat(1, 1), Fraction(1, 2)
    D = Poly.const(T, 1) - v("zeta").scale(I * N.conj() * t)
    truncated = RationalMap(
        T,
        {
            "z1": RationalFunction.frac(v("z1"), D, 2),
            "z2": RationalFunction.frac(v("z2") - v("z1").scale(I * N * t), D, 2),
            "zeta": RationalFunction.frac(v("zeta"), D, 1),
            "w": RationalFunction.frac(v("w"), D, 2),
        },
    )
    assert not verify_exact_automorphism(q_surface, truncated)


def test_g1_flow_is_a_one_parameter_group():
    N, t = GaussRat(2, -1), Fraction(1, 3)
    back = g1_flow(N, t).then(g1_flow(N, -t))
    for name in T.holo:
        assert back.component(name).expand(W1, 6) == v(name)


def test_g1_generator_is_tangent(q_surface):
    series = rational_flow_series(g1_flow(GaussRat(0, 1)), 5)
    X = flow_generator(series, q_shape(), T)
    assert not X.is_zero()
    assert tangency_residual(q_surface, X).vanishes()
    assert exponentiate_check(X, series, 4)


def test_g0_flow(q_surface):
    series = g0_flow_series(Fraction(1, 2), Fraction(1, 3), GaussRat(1, 1), 5)
    X = flow_generator(series, q_shape(), T)
    assert tangency_residual(q_surface, X).vanishes()
    assert exponentiate_check(X, series, 4)
    assert exponentiate_check(X, lie_series(X, 5), 4)


def test_g_minus2_flow(q_surface):
    series = g_minus2_flow_series(GaussRat(1, 2))
    L = next(iter(series.values())).table
    assert verify_exact_automorphism(q_surface, RationalMap.from_polys(L, series))
    X = flow_generator(series, q_shape(), T)
    assert X["f"] == Poly.const(T, GaussRat(1, 2))
    assert exponentiate_check(X, series, 4)


def test_wrong_flow_is_rejected(q_surface):
    euler = FieldJet(q_shape(), T, {"f": v("z1").scale(2), "g": v("z2"), "h": v("zeta"), "e": v("w").scale(3)})
    series = lie_series(euler, 5)
    assert exponentiate_check(euler, series, 4)
    assert not exponentiate_check(euler.scale(2), series, 4)


def test_fields_outside_the_kernel_are_refused(q_surface):
    X = FieldJet(q_shape(), T, {"f": v("z1") * v("z1")})
    assert not tangency_residual(q_surface, X).vanishes()
    with pytest.raises(VerificationFailure) as info:
        exponentiate_check(X, lie_series(X, 5), 4)
    assert info.value.kind == "verification_failed"
    assert info.value.details["surface"] == q_surface.name
    with pytest.raises(VerificationFailure):
        exponentiate_check(X, lie_series(X, 5), 4, surface=q_surface)
