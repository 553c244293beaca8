"""Fixture surfaces, named jet spaces and the seeded sampler of generic parameters."""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Optional, Tuple

from .algebra import GaussRat, Poly, VarTable, rational_text
from .errors import UnknownFixtureError
from .grading import (
    JetShape,
    WeightSystem,
    jet_basis,
    j6_origin_shape,
    j6_shape,
    q_shape,
    quadric_shape,
    two_nondeg_w1_shape,
    two_nondeg_w2_shape,
)
from .kernel import JetSpace, RowPolicy
from .surfaces import J6Params, ModelSurface, TwoNondegParams, cubic_q, quadric, three_nondeg_j6, two_nondeg
from .tangency import FieldJet

logger = logging.getLogger(__name__)

DEFAULT_SEEDS = (7919, 104729)
DEFAULT_PARAM_BOUND = 97


# =========================================================
# SAMPLER
# =========================================================
class ParamSampler:
    """Rational parameters with numerators and denominators bounded by ``bound``."""

    def __init__(self, seed: int, bound: int = DEFAULT_PARAM_BOUND) -> None:
        self.seed = seed
        self.bound = bound
        self._rng = random.Random(seed)

    def rational(self, nonzero: bool = True) -> Fraction:
        while True:
            x = Fraction(self._rng.randint(-self.bound, self.bound), self._rng.randint(1, self.bound))
            if x or not nonzero:
                return x

    def positive(self) -> Fraction:
        return abs(self.rational())

    def gaussian(self) -> GaussRat:
        return GaussRat(self.rational(nonzero=False), self.rational(nonzero=False))

    def nonreal(self) -> GaussRat:
        return GaussRat(self.rational(nonzero=False), self.rational())

    def j6_params(self) -> J6Params:
        return J6Params(**{name: self.gaussian() for name in J6Params.__dataclass_fields__})

    def pair_params(self, pair_id: int) -> TwoNondegParams:
        k = self.positive()
        m: GaussRat = GaussRat(0)
        if pair_id in (1, 4):
            m = GaussRat(self.positive())
            while m == k:
                m = GaussRat(self.positive())
        elif pair_id == 7:
            m = self.nonreal()
        elif pair_id == 8:
            m = GaussRat(self.rational())
        if pair_id > 6:
            k = Fraction(1)
        R = (self.gaussian(), self.gaussian(), self.gaussian())
        return TwoNondegParams(pair_id, k, m, R)

    def jet(self, shape: JetShape, ws: WeightSystem, table: VarTable, window: Tuple[int, int], density: float = 0.5) -> FieldJet:
        """A random jet over the window; each basis monomial is kept with probability ``density``."""
        comps: Dict[str, Poly] = {}
        for mu in range(window[0], window[1] + 1):
            for name, key in jet_basis(shape, ws, mu, table):
                if self._rng.random() < density:
                    term = Poly(table, {key: self.gaussian() or GaussRat(1)})
                    comps[name] = comps[name] + term if name in comps else term
        return FieldJet(shape, table, comps)


# =========================================================
# SPACES
# =========================================================
SPACES: Dict[str, Callable[[], JetSpace]] = {
    "V5": lambda: JetSpace("V5", j6_shape(), "W1", 3, 5, 9, RowPolicy.KERNEL),
    "V0": lambda: JetSpace("V0", j6_shape(), "W1", 3, 0, 9, RowPolicy.KERNEL),
    "jet13": lambda: JetSpace("jet13", j6_origin_shape(), "W1", 3, 2, 4, RowPolicy.JET),
    "V4": lambda: JetSpace("V4", two_nondeg_w1_shape(), "W1", 2, 4, 8, RowPolicy.JET),
    "V5tilde": lambda: JetSpace("V5tilde", two_nondeg_w2_shape(), "W2", 2, 5, 12, RowPolicy.JET),
}


def space(name: str, window: Optional[Tuple[int, int]] = None) -> JetSpace:
    try:
        sp = SPACES[name]()
    except KeyError:
        raise UnknownFixtureError(f"unknown space {name!r}; known: {sorted(SPACES)}") from None
    return sp.with_window(*window) if window else sp


# =========================================================
# FIXTURES
# =========================================================
@dataclass(frozen=True)
class Fixture:
    name: str
    build: Callable[[int, int], ModelSurface]
    generic: bool
    aut_shape: Optional[Callable[[], JetShape]]
    aut_range: Tuple[int, int]
    default_space: Optional[str]

    def surface(self, seed: int = DEFAULT_SEEDS[0], bound: int = DEFAULT_PARAM_BOUND) -> ModelSurface:
        s = self.build(seed, bound)
        logger.debug(f"fixture {self.name} (seed {seed if self.generic else '-'}) built over {s.table.holo}")
        return s


def _pair(pair_id: int) -> Callable[[int, int], ModelSurface]:
    return lambda seed, bound: two_nondeg(ParamSampler(seed, bound).pair_params(pair_id))


def _pair9(r1: Fraction) -> Callable[[int, int], ModelSurface]:
    return lambda seed, bound: two_nondeg(TwoNondegParams(9, R=(GaussRat(r1), 0, 0)))


def _quadric_fixture(name: str, n: int, signature=None) -> Fixture:
    return Fixture(name, lambda seed, bound: quadric(n, signature), False, lambda: quadric_shape(n), (-2, 4), None)


FIXTURES: Dict[str, Fixture] = {
    f.name: f
    for f in (
        Fixture("Q", lambda seed, bound: cubic_q(), False, q_shape, (-3, 3), None),
        _quadric_fixture("quadric-c2", 1),
        _quadric_fixture("quadric-c3", 2),
        _quadric_fixture("quadric-c4", 3),
        _quadric_fixture("quadric-c4-split", 3, (1, 1, -1)),
        Fixture("j6-zero", lambda seed, bound: three_nondeg_j6(J6Params()), False, None, (0, 0), "V5"),
        Fixture(
            "j6-generic",
            lambda seed, bound: three_nondeg_j6(ParamSampler(seed, bound).j6_params()),
            True,
            None,
            (0, 0),
            "V5",
        ),
        Fixture("pair9-special", _pair9(Fraction(1, 2)), False, None, (0, 0), "V5tilde"),
        Fixture("pair9-special-3", _pair9(Fraction(3)), False, None, (0, 0), "V5tilde"),
        Fixture("pair1-generic", _pair(1), True, None, (0, 0), "V5tilde"),
        Fixture("pair5-generic", _pair(5), True, None, (0, 0), "V5tilde"),
    )
}


def fixture(name: str) -> Fixture:
    try:
        return FIXTURES[name]
    except KeyError:
        raise UnknownFixtureError(f"unknown fixture {name!r}; known: {sorted(FIXTURES)}") from None


def describe_params(s: ModelSurface) -> Dict[str, object]:
    return {k: (rational_text(v) if isinstance(v, Fraction) else v) for k, v in s.params.items()}
