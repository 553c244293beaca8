from __future__ import annotations

import pytest

from poincare.config import EngineConfig
from poincare.fixtures import DEFAULT_PARAM_BOUND, DEFAULT_SEEDS, ParamSampler, fixture
from poincare.surfaces import PAIR_TABLE, J6_TABLE, cubic_q


@pytest.fixture
def config() -> EngineConfig:
    return EngineConfig(seeds=DEFAULT_SEEDS, param_bound=DEFAULT_PARAM_BOUND, log_level="WARNING", jet_checks=5)


@pytest.fixture
def sampler() -> ParamSampler:
    return ParamSampler(DEFAULT_SEEDS[0])


@pytest.fixture
def pair_table():
    return PAIR_TABLE


@pytest.fixture
def j6_table():
    return J6_TABLE


@pytest.fixture
def q_surface():
    return cubic_q()


@pytest.fixture(params=DEFAULT_SEEDS)
def j6_generic(request):
    return fixture("j6-generic").surface(request.param)


@pytest.fixture
def j6_zero():
    return fixture("j6-zero").surface()
