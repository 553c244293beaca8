from __future__ import annotations

from dataclasses import replace

import pytest

from poincare.algebra import GaussRat, Poly, monomial
from poincare.classify import jet13_dim_check, jet13_uniqueness_slice
from poincare.errors import EmptyWindowError, ShapeMismatchError
from poincare.fixtures import fixture, space
from poincare.grading import q_shape, quadric_shape, two_nondeg_w1_shape
from poincare.kernel import (
    JetSpace,
    RowPolicy,
    assemble,
    graded_profile,
    kernel_basis,
    param_bound,
    real_coordinates,
    stabilizer_count,
    verify_solution,
)
from poincare.suites import Q_PROFILE, Q_STABILIZER, QUADRIC_C4_SPLIT
from poincare.surfaces import quadric
from poincare.tangency import FieldJet, tangency_residual


def test_space_validation():
    with pytest.raises(EmptyWindowError):
        JetSpace("bad", two_nondeg_w1_shape(), "W1", 2, 5, 4)
    with pytest.raises(ShapeMismatchError):
        JetSpace("bad", two_nondeg_w1_shape(), "W1", 0, 4, 5)
    with pytest.raises(EmptyWindowError):
        graded_profile(quadric(1), quadric_shape(1), (3, 1))


def test_row_bounds_follow_the_policy():
    v4 = space("V4")
    assert v4.policy is RowPolicy.JET
    assert v4.row_bound(4) == 5
    assert v4.row_bound(8) == 8
    v5 = space("V5")
    assert v5.row_cap() is None
    assert v5.row_bound(9) == 11
    assert space("V5", (6, 7)).window == (6, 7)


def test_real_coordinates_use_one_of_each_conjugate_pair():
    T = quadric(1).table
    p = Poly.term(T, {"z1": 1}, GaussRat(1, 2)) + Poly.term(T, {"z1_bar": 1}, GaussRat(1, -2))
    coords = dict(real_coordinates(p))
    assert len(coords) == 2
    assert sorted(coords.values()) in ([-2, 1], [1, 2])
    key = monomial(T, {"z1": 1, "z1_bar": 1})
    assert dict(real_coordinates(Poly.term(T, {"z1": 1, "z1_bar": 1}, 3))) == {(key, "re"): 3}


def test_sphere_algebra():
    s = quadric(1)
    prof = graded_profile(s, quadric_shape(1), (-2, 4), with_bases=True)
    assert prof.total == 8
    assert prof.stabilized
    assert prof.dims[-2] == 1
    for basis in prof.bases.values():
        for X in basis:
            assert tangency_residual(s, X).vanishes()
    jets = [X for basis in prof.bases.values() for X in basis]
    assert stabilizer_count(jets) == 5
    assert stabilizer_count([]) == 0


def test_q_profile(q_surface):
    prof = graded_profile(q_surface, q_shape(), (-3, 3), with_bases=True)
    assert prof.dims == Q_PROFILE
    assert prof.total == 16
    jets = [X for basis in prof.bases.values() for X in basis]
    assert stabilizer_count(jets) == Q_STABILIZER


def test_profile_ignores_variable_order(q_surface):
    shuffled = q_surface.reordered(("w", "zeta", "z2", "z1"))
    a = graded_profile(q_surface, q_shape(), (-3, 0))
    b = graded_profile(shuffled, q_shape(), (-3, 0))
    assert a.dims == b.dims


def test_export_text_header():
    s = quadric(1)
    M = assemble(s, JetSpace("probe", quadric_shape(1), "W1", 1, 0, 0))
    lines = M.export_text().splitlines()
    assert lines[0] == f"# surface {s.name}"
    assert lines[1] == "# space probe grading W1 depth 1 window 0..0 policy kernel"
    assert lines[2] == f"# size {M.size[0]} {M.size[1]}"
    assert M.nullity == 2


def test_solutions_are_checked_against_the_space_shape(q_surface):
    with pytest.raises(ShapeMismatchError):
        verify_solution(q_surface, space("V4"), FieldJet.zero(q_shape(), q_surface.table))


@pytest.mark.slow
def test_quadric_c4_split():
    fx = fixture("quadric-c4-split")
    prof = graded_profile(fx.surface(), fx.aut_shape(), fx.aut_range)
    assert {mu: d for mu, d in prof.dims.items() if d} == QUADRIC_C4_SPLIT
    assert prof.total == 24


@pytest.mark.slow
def test_quadric_c3():
    fx = fixture("quadric-c3")
    assert graded_profile(fx.surface(), fx.aut_shape(), fx.aut_range).total == 15


@pytest.mark.slow
def test_j6_window_bounds(j6_generic, j6_zero):
    assert param_bound(j6_zero, space("V5")) == 0
    assert param_bound(j6_generic, space("V5")) == 0
    basis = kernel_basis(assemble(j6_generic, space("V0")))
    assert len(basis) == 1
    assert not basis[0]["f"] and not basis[0]["g"] and not basis[0]["h"]
    assert basis[0]["e"].variables() == ()


@pytest.mark.slow
def test_v5_bound_depends_on_the_row_policy(j6_zero):
    kernel_rows = space("V5")
    jet_rows = replace(kernel_rows, policy=RowPolicy.JET)
    assert kernel_rows.policy is RowPolicy.KERNEL
    assert param_bound(j6_zero, kernel_rows) == 0
    assert param_bound(j6_zero, jet_rows) == 6


@pytest.mark.slow
def test_j6_origin_jets(j6_zero, j6_generic):
    assert jet13_dim_check(j6_zero) == 13
    assert jet13_dim_check(j6_generic) == 13
    assert jet13_uniqueness_slice(j6_zero) == 0


@pytest.mark.slow
@pytest.mark.parametrize("name", ["pair9-special", "pair9-special-3"])
def test_pair9_special_family(name):
    assert param_bound(fixture(name).surface(), space("V5tilde")) == 4


@pytest.mark.slow
@pytest.mark.parametrize("name", ["pair1-generic", "pair5-generic"])
def test_generic_pairs_are_rigid(name):
    assert param_bound(fixture(name).surface(), space("V5tilde")) == 0
