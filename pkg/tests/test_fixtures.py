from __future__ import annotations

import pytest

from poincare.algebra import Poly
from poincare.errors import UnknownFixtureError
from poincare.fixtures import FIXTURES, SPACES, ParamSampler, describe_params, fixture, space
from poincare.grading import j6_shape
from poincare.surfaces import J6_TABLE, PAIR_IDS, pluriharmonic_terms, surface_hash


def test_sampler_is_deterministic():
    a, b = ParamSampler(42), ParamSampler(42)
    assert a.j6_params() == b.j6_params()
    assert [a.pair_params(j) for j in PAIR_IDS] == [b.pair_params(j) for j in PAIR_IDS]
    assert ParamSampler(42).j6_params() != ParamSampler(43).j6_params()


def test_sampler_respects_the_bound():
    s = ParamSampler(5, bound=3)
    for _ in range(50):
        x = s.rational()
        assert x != 0
        assert abs(x.numerator) <= 3 and x.denominator <= 3
    assert all(s.positive() > 0 for _ in range(20))
    assert all(not s.nonreal().is_real() for _ in range(20))


def test_random_jets_stay_in_the_window():
    ws = FIXTURES["j6-zero"].surface().ws
    phi = ParamSampler(1).jet(j6_shape(), ws, J6_TABLE, (5, 6), density=1.0)
    assert set(phi.by_weight(ws)) == {5, 6}


def test_generic_fixtures_depend_on_the_seed():
    fx = fixture("j6-generic")
    assert fx.generic
    assert surface_hash(fx.surface(1)) != surface_hash(fx.surface(2))
    assert surface_hash(fixture("Q").surface(1)) == surface_hash(fixture("Q").surface(2))


def test_registered_names():
    assert {"Q", "quadric-c2", "j6-generic", "pair9-special", "pair1-generic"} <= set(FIXTURES)
    assert set(SPACES) == {"V5", "V0", "jet13", "V4", "V5tilde"}
    assert space("V5tilde").grading == "W2"
    assert describe_params(fixture("pair9-special").surface())["pair"] == 9


def test_unknown_names():
    with pytest.raises(UnknownFixtureError):
        fixture("pair10")
    with pytest.raises(UnknownFixtureError):
        space("V7")


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixture_surfaces_are_real_and_free_of_pluriharmonic_terms(name):
    s = FIXTURES[name].surface()
    assert s.F.conj() == s.F
    assert pluriharmonic_terms(s.F).is_zero()


def test_pluriharmonic_terms_are_detected():
    s = fixture("Q").surface()
    extra = Poly.term(s.table, {"z1": 2}).re2()
    assert pluriharmonic_terms(s.F + extra) == extra
