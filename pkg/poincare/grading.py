"""Weight systems, weighted-homogeneous decomposition and jet bases."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .algebra import Monomial, Poly, TruncationSpec, VarTable, monomial
from .errors import ParameterError, ShapeMismatchError, UnknownVariableError

logger = logging.getLogger(__name__)


# =========================================================
# WEIGHT SYSTEMS
# =========================================================
@dataclass(frozen=True)
class WeightSystem:
    name: str
    weights: Tuple[Tuple[str, int], ...]

    @classmethod
    def of(cls, table: VarTable, holo: Mapping[str, int], real: Mapping[str, int], name: str = "custom") -> "WeightSystem":
        w: Dict[str, int] = {}
        for v, a in zip(table.holo, table.anti):
            if v not in holo:
                raise UnknownVariableError(f"no weight given for {v!r}")
            w[v] = w[a] = holo[v]
        for r in table.real:
            if r not in real:
                raise UnknownVariableError(f"no weight given for {r!r}")
            w[r] = real[r]
        for v, k in w.items():
            if not isinstance(k, int) or k <= 0:
                raise ParameterError(f"weight of {v} must be a positive integer, got {k!r}")
        return cls(name, tuple((v, w[v]) for v in table.names))

    def as_dict(self) -> Dict[str, int]:
        return dict(self.weights)

    def weight(self, v: str) -> int:
        try:
            return self.as_dict()[v]
        except KeyError:
            raise UnknownVariableError(f"{v!r} has no weight in {self.name}") from None

    def vector(self, table: VarTable) -> Tuple[int, ...]:
        w = self.as_dict()
        return tuple(w[v] for v in table.names)

    def trunc(self, bound: Optional[int]) -> TruncationSpec:
        return TruncationSpec.of(self.as_dict(), bound)

    def to_json(self) -> Dict[str, int]:
        return self.as_dict()


def _grading_rule(name: str, v: str) -> int:
    if name == "W1":
        return 2 if v in ("w", "u") else 1
    if name == "W2":
        if v in ("w", "u"):
            return 4
        return 1 if v in ("zeta", "eta", "t") else 2
    if name == "W3":
        if v in ("w", "u"):
            return 3
        return 2 if v == "z1" else 1
    raise ParameterError(f"unknown grading preset {name!r}")


def preset(name: str, table: VarTable) -> WeightSystem:
    """W1: [z]=1,[w]=2.  W2: [z]=2,[zeta]=1,[w]=4.  W3: [z1]=2,[z2]=[zeta]=1,[w]=3."""
    holo = {v: _grading_rule(name, v) for v in table.holo}
    real = {r: (1 if r == "t" else _grading_rule(name, r)) for r in table.real}
    return WeightSystem.of(table, holo, real, name=name)


def weight_of(m: Monomial, ws: WeightSystem, table: VarTable) -> int:
    return sum(k * w for k, w in zip(m, ws.vector(table)))


def graded_component(p: Poly, ws: WeightSystem, mu: int) -> Poly:
    vec = ws.vector(p.table)
    return Poly._raw(p.table, {k: c for k, c in p.items() if sum(a * b for a, b in zip(k, vec)) == mu})


def graded_components(p: Poly, ws: WeightSystem) -> Dict[int, Poly]:
    vec = ws.vector(p.table)
    buckets: Dict[int, dict] = {}
    for k, c in p.items():
        buckets.setdefault(sum(a * b for a, b in zip(k, vec)), {})[k] = c
    return {mu: Poly._raw(p.table, terms) for mu, terms in sorted(buckets.items())}


def min_weight(p: Poly, ws: WeightSystem) -> Optional[int]:
    vec = ws.vector(p.table)
    return min((sum(a * b for a, b in zip(k, vec)) for k, _ in p.items()), default=None)


def monomial_basis(variables: Sequence[str], ws: WeightSystem, mu: int, table: VarTable) -> List[Monomial]:
    """All monomials in ``variables`` of weight exactly ``mu``.

    Order: exponent vectors in descending lexicographic order along ``variables``.
    """
    if mu < 0:
        return []
    w = ws.as_dict()
    weights = [w[v] for v in variables]
    out: List[Dict[str, int]] = []

    def walk(i: int, left: int, acc: Dict[str, int]) -> None:
        if i == len(variables):
            if left == 0:
                out.append(dict(acc))
            return
        for k in range(left // weights[i], -1, -1):
            if k:
                acc[variables[i]] = k
            walk(i + 1, left - k * weights[i], acc)
            acc.pop(variables[i], None)

    walk(0, mu, {})
    return [monomial(table, m) for m in out]


# =========================================================
# JET SHAPES
# =========================================================
@dataclass(frozen=True)
class JetComponent:
    name: str
    target: str
    offset: int
    floor: int = 0


@dataclass(frozen=True)
class JetShape:
    """Component conventions: at jet weight mu a component has polynomial weight mu - offset."""

    name: str
    components: Tuple[JetComponent, ...]

    def __post_init__(self) -> None:
        names = [c.name for c in self.components]
        if len(set(names)) != len(names):
            raise ShapeMismatchError(f"duplicate component names in {self.name}")
        if sum(1 for c in self.components if c.target == "w") != 1:
            raise ShapeMismatchError(f"shape {self.name} needs exactly one w-component")

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(c.name for c in self.components)

    def component(self, name: str) -> JetComponent:
        for c in self.components:
            if c.name == name:
                return c
        raise ShapeMismatchError(f"shape {self.name} has no component {name!r}")

    @property
    def w_component(self) -> JetComponent:
        return next(c for c in self.components if c.target == "w")

    def row_weight(self, mu: int) -> int:
        return mu - self.w_component.offset

    def with_floors(self, name: str, **floors: int) -> "JetShape":
        return JetShape(
            name,
            tuple(JetComponent(c.name, c.target, c.offset, floors.get(c.name, c.floor)) for c in self.components),
        )


def jet_variables(table: VarTable) -> Tuple[str, ...]:
    return table.holo


def jet_basis(shape: JetShape, ws: WeightSystem, mu: int, table: VarTable) -> List[Tuple[str, Monomial]]:
    basis: List[Tuple[str, Monomial]] = []
    for c in shape.components:
        d = mu - c.offset
        if d < max(c.floor, 0):
            continue
        basis.extend((c.name, m) for m in monomial_basis(jet_variables(table), ws, d, table))
    return basis


def j6_shape() -> JetShape:
    return JetShape(
        "j6",
        (
            JetComponent("f", "z", 1),
            JetComponent("g", "zeta", 2),
            JetComponent("h", "eta", 3),
            JetComponent("e", "w", 0),
        ),
    )


def j6_origin_shape() -> JetShape:
    return j6_shape().with_floors("j6-origin", f=1, g=1, h=1, e=1)


def two_nondeg_w1_shape() -> JetShape:
    return JetShape(
        "two-nondeg-w1",
        (
            JetComponent("f1", "z1", 1),
            JetComponent("f2", "z2", 1),
            JetComponent("g", "zeta", 2),
            JetComponent("h", "w", 0),
        ),
    )


def two_nondeg_w2_shape() -> JetShape:
    return JetShape(
        "two-nondeg-w2",
        (
            JetComponent("f1", "z1", 2),
            JetComponent("f2", "z2", 2),
            JetComponent("g", "zeta", 4, floor=2),
            JetComponent("h", "w", 0),
        ),
    )


def q_shape() -> JetShape:
    return JetShape(
        "q-fields",
        (
            JetComponent("f", "z1", -2),
            JetComponent("g", "z2", -1),
            JetComponent("h", "zeta", -1),
            JetComponent("e", "w", -3),
        ),
    )


def quadric_shape(n: int) -> JetShape:
    comps = [JetComponent(f"f{j}", f"z{j}", -1) for j in range(1, n + 1)]
    comps.append(JetComponent("e", "w", -2))
    return JetShape(f"quadric-fields-{n}", tuple(comps))


def shape_from_targets(name: str, items: Iterable[Tuple[str, str, int]]) -> JetShape:
    return JetShape(name, tuple(JetComponent(n, t, o) for n, t, o in items))


def field_shape(ws: WeightSystem, table: VarTable) -> JetShape:
    """Weight-shift shape with one component per holomorphic variable, offset -weight."""
    items = [("e" if v == "w" else f"f_{v}", v, -ws.weight(v)) for v in table.holo]
    return shape_from_targets(f"fields-{ws.name}", items)
