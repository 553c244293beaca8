"""Tangency equation of a rigid surface and its graded linearization.

The residual of a holomorphic field (or map perturbation) with components
``X_c`` along the variables ``x_c`` is

    re2( i * X_w  +  2 * sum_c X_c * dF/dx_c )    evaluated at w = u + i F,

which is -2 (Im X_w - 2 Re sum X_c F_{x_c}).  It vanishes identically iff
the field is tangent to v = F.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from .algebra import I, GaussRat, Monomial, Poly, Scalar, VarTable
from .errors import ShapeMismatchError, TableMismatchError
from .grading import JetShape, WeightSystem, graded_components
from .surfaces import J6Params, ModelSurface, TwoNondegParams, hermitian_form, pair_matrices, quadratic_form, s_form

logger = logging.getLogger(__name__)


# =========================================================
# FIELD JETS
# =========================================================
@dataclass(frozen=True)
class FieldJet:
    shape: JetShape
    table: VarTable
    comps: Dict[str, Poly] = field(default_factory=dict)
    window: Optional[Tuple[int, int]] = None

    def __post_init__(self) -> None:
        full = {}
        for name in self.shape.names:
            p = self.comps.get(name, Poly.zero(self.table))
            if p.table != self.table:
                raise TableMismatchError(f"component {name} is over a different table")
            bad = [v for v in p.variables() if v not in self.table.holo]
            if bad:
                raise ShapeMismatchError(f"component {name} uses non-holomorphic variables {bad}")
            full[name] = p
        extra = set(self.comps) - set(self.shape.names)
        if extra:
            raise ShapeMismatchError(f"shape {self.shape.name} has no components {sorted(extra)}")
        object.__setattr__(self, "comps", full)

    @classmethod
    def zero(cls, shape: JetShape, table: VarTable) -> "FieldJet":
        return cls(shape, table, {})

    def __getitem__(self, name: str) -> Poly:
        return self.comps[name]

    def __add__(self, other: "FieldJet") -> "FieldJet":
        self._same(other)
        return FieldJet(self.shape, self.table, {n: self.comps[n] + other.comps[n] for n in self.shape.names})

    def __sub__(self, other: "FieldJet") -> "FieldJet":
        return self + other.scale(-1)

    def scale(self, c: Scalar) -> "FieldJet":
        return FieldJet(self.shape, self.table, {n: p.scale(c) for n, p in self.comps.items()}, self.window)

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.comps.values())

    def _same(self, other: "FieldJet") -> None:
        if self.shape != other.shape or self.table != other.table:
            raise ShapeMismatchError("field jets of different shapes or tables")

    def map(self, fn) -> "FieldJet":
        return FieldJet(self.shape, self.table, {n: fn(p) for n, p in self.comps.items()}, self.window)

    def by_weight(self, ws: WeightSystem) -> Dict[int, "FieldJet"]:
        """Split into homogeneous jets phi_mu keyed by jet weight mu."""
        parts: Dict[int, Dict[str, Poly]] = {}
        for c in self.shape.components:
            for d, piece in graded_components(self.comps[c.name], ws).items():
                parts.setdefault(d + c.offset, {})[c.name] = piece
        return {mu: FieldJet(self.shape, self.table, comps) for mu, comps in sorted(parts.items())}

    def truncate_jet(self, ws: WeightSystem, hi: int) -> "FieldJet":
        parts = self.by_weight(ws)
        out = FieldJet.zero(self.shape, self.table)
        for mu, part in parts.items():
            if mu <= hi:
                out = out + part
        return out


@dataclass(frozen=True)
class TangencyEquation:
    surface: ModelSurface
    expr: Poly
    reliable_weight: Optional[int]

    def vanishes(self) -> bool:
        return self.expr.is_zero()


# =========================================================
# RESIDUALS
# =========================================================
def w_parameterization(s: ModelSurface, F: Optional[Poly] = None) -> Poly:
    """u + i F."""
    F = s.F if F is None else F
    return Poly.var(s.table, "u") + F.scale(I)


class ResidualBuilder:
    """Caches dF/dx and powers of (u + iF) for repeated residual evaluation."""

    def __init__(self, s: ModelSurface, shape: JetShape) -> None:
        for c in shape.components:
            if c.target not in s.table.holo:
                raise ShapeMismatchError(f"component {c.name} targets {c.target!r}, absent from {s.name}")
        self.surface = s
        self.shape = shape
        self.table = s.table
        self.ws = s.ws
        self._w = s.table.position("w")
        self._sub = w_parameterization(s)
        self._powers: Dict[Tuple[int, Optional[int]], Poly] = {}
        self._dF = {c.name: s.F.diff(c.target).scale(2) for c in shape.components if c.target != "w"}

    def _power(self, k: int, bound: Optional[int]) -> Poly:
        key = (k, bound)
        if key not in self._powers:
            if k == 0:
                self._powers[key] = Poly.const(self.table, 1)
            else:
                self._powers[key] = self._power(k - 1, bound).mul(self._sub, self.ws.trunc(bound))
        return self._powers[key]

    def substitute_w(self, p: Poly, bound: Optional[int] = None) -> Poly:
        """p(z, u + iF), truncated at ``bound``."""
        trunc = self.ws.trunc(bound)
        acc = Poly.zero(self.table)
        groups: Dict[int, Dict[Monomial, GaussRat]] = {}
        for key, c in p.items():
            k = key[self._w]
            rest = list(key)
            rest[self._w] = 0
            groups.setdefault(k, {})[tuple(rest)] = c
        for k, terms in sorted(groups.items()):
            head = Poly._raw(self.table, terms)
            acc = acc + (head if k == 0 else head.mul(self._power(k, bound), trunc))
        return acc.truncate(trunc)

    def raw(self, name: str, p: Poly, bound: Optional[int] = None) -> Poly:
        """The pre-re2 contribution of component ``name`` carrying polynomial ``p``."""
        trunc = self.ws.trunc(bound)
        sub = self.substitute_w(p, bound)
        if self.shape.component(name).target == "w":
            return sub.scale(I)
        return sub.mul(self._dF[name], trunc)

    def residual(self, phi: FieldJet, bound: Optional[int] = None) -> Poly:
        acc = Poly.zero(self.table)
        for name, p in phi.comps.items():
            if p:
                acc = acc + self.raw(name, p, bound)
        return acc.re2().truncate(self.ws.trunc(bound))

    def linearized(self, phi: FieldJet, depth: int, cap: Optional[int] = None) -> Poly:
        """Sum over homogeneous parts phi_mu of the residual kept at shifts 0..depth-1."""
        acc = Poly.zero(self.table)
        for mu, part in phi.by_weight(self.ws).items():
            bound = self.shape.row_weight(mu) + depth - 1
            if cap is not None:
                bound = min(bound, cap)
            acc = acc + self.residual(part, bound)
        return acc


def _reliable(s: ModelSurface, phi: FieldJet) -> Optional[int]:
    if s.trunc is None:
        return None
    ws = s.ws
    vec = ws.vector(s.table)
    w_index = s.table.position("w")
    lows: List[int] = []
    for c in phi.shape.components:
        for key, _ in phi.comps[c.name].items():
            d = sum(a * b for a, b in zip(key, vec))
            if c.target != "w":
                lows.append(d - ws.weight(c.target) + s.trunc + 1)
            if key[w_index]:
                lows.append(d - ws.weight("w") + s.trunc + 1)
    return (min(lows) - 1) if lows else None


def tangency_residual(s: ModelSurface, phi: FieldJet) -> TangencyEquation:
    if phi.table != s.table:
        raise TableMismatchError(f"field jet table does not match surface {s.name}")
    rel = _reliable(s, phi)
    expr = ResidualBuilder(s, phi.shape).residual(phi, rel)
    return TangencyEquation(s, expr, rel)


def delta_operator(Fj: Poly, psi: Poly) -> Poly:
    """i * Fj * psi'(u) for psi depending on u only."""
    stray = [v for v in psi.variables() if v != "u"]
    if stray:
        raise ShapeMismatchError(f"delta operator needs a function of u only, got variables {stray}")
    return Fj.mul(psi.diff("u")).scale(I)


# =========================================================
# HAND-TRANSCRIBED OPERATORS
# =========================================================
def _require(phi: FieldJet, names: Iterable[str]) -> None:
    if tuple(names) != phi.shape.names:
        raise ShapeMismatchError(f"expected components {tuple(names)}, got {phi.shape.names}")


def _evaluator(table: VarTable, base: Poly):
    """D^j X = (d/dw)^j X evaluated at w = base."""
    u_plus = Poly.var(table, "u") + base.scale(I)

    def D(x: Poly, j: int = 0) -> Poly:
        for _ in range(j):
            x = x.diff("w")
        return x.substitute("w", u_plus)

    return D


def explicit_L_j6(phi: FieldJet, params: Optional[J6Params] = None, depth: int = 3) -> Poly:
    """Depth-3 operator of the 3-nondegenerate normal form, written out term by term."""
    _require(phi, ("f", "g", "h", "e"))
    p = params or J6Params()
    T = phi.table

    def t(c: Scalar, **exps: int) -> Poly:
        return Poly.term(T, {(k[:-1] + "_bar" if k.endswith("b") else k): v for k, v in exps.items()}, c)

    z, zb = t(1, z=1), t(1, zb=1)
    D = _evaluator(T, z * zb)
    f, g, h, e = phi["f"], phi["g"], phi["h"], phi["e"]
    F3 = t(1, z=2, zetab=1).re2()
    F4 = t(1, z=3, etab=1).re2() + t(4, z=1, zb=1, zeta=1, zetab=1)

    def A1(j: int) -> Poly:
        return D(e, j).scale(I) + (zb * D(f, j)).scale(2) + (zb * zb * D(g, j)).scale(2) + (zb * zb * zb * D(h, j)).scale(2)

    c2h = (
        t(p.r2 * 2, zb=4)
        + t(p.r3.conj() * 4, zb=1, zeta=2, eta=1)
        + t(p.r4.conj() * 8, zb=1, eta=3)
        + t(12, z=1, zb=2, zetab=1)
    )

    def a2(j: int) -> Poly:
        return t(4, z=1, zetab=1) * D(f, j) + t(8, z=1, zb=1, zetab=1) * D(g, j) + c2h * D(h, j)

    c3f = t(6, z=2, etab=1) + t(8, zb=1, zeta=1, zetab=1)
    c3g = (
        t(p.r1 * 2, zb=4)
        + t(p.r3.conj() * 4, zb=1, zeta=1, eta=2)
        + t(8, z=2, zetab=2)
        + t(16, zb=2, zeta=1, zetab=1)
        + t(12, z=2, zb=1, etab=1)
    )
    c3h = (
        t(p.r2 * 16, z=1, zb=3, zetab=1)
        + t(p.r3.conj() * 8, z=1, zeta=2, zetab=1, eta=1)
        + t(p.r4.conj() * 16, z=1, zetab=1, eta=3)
        + t(p.s3 * 2, z=1, zb=4)
        + t(p.s4 * 2, zb=5)
        + t(p.s6 * 2, zb=4, zeta=1)
        + t(p.s7 * 4, zb=4, eta=1)
        + t(p.s8 * 10, zb=1, eta=4)
        + t(24, zb=3, zeta=1, zetab=1)
        + t(24, z=2, zb=1, zetab=2)
        + t(18, z=2, zb=2, etab=1)
    )
    a3 = c3f * D(f) + c3g * D(g) + c3h * D(h)

    L = A1(0)
    if depth >= 2:
        L = L + (F3 * A1(1)).scale(I) + a2(0)
    if depth >= 3:
        L = L + (F4 * A1(1)).scale(I) - (F3 * F3 * A1(2)).scale(GaussRat("1/2")) + (F3 * a2(1)).scale(I) + a3
    return L.re2()


def explicit_L_2nd(phi: FieldJet, p: TwoNondegParams) -> Poly:
    """Depth-2 operator of a 2-nondegenerate model; identical under W1 (L) and W2 (the reweighted operator)."""
    _require(phi, ("f1", "f2", "g", "h"))
    T = phi.table
    H, K = pair_matrices(p.pair_id, p.k, p.m)
    z = [Poly.var(T, "z1"), Poly.var(T, "z2")]
    zb = [Poly.var(T, "z1_bar"), Poly.var(T, "z2_bar")]
    zeta, zetab = Poly.var(T, "zeta"), Poly.var(T, "zeta_bar")
    D = _evaluator(T, hermitian_form(T, H, ("z1", "z2")))
    Kbar = [[c.conj() for c in row] for row in K]
    r1, r2, r3 = p.R
    Rbar = (z[0] * z[0]).scale(r1) + (z[0] * z[1]).scale(r2) + (z[1] * z[1]).scale(r3)
    Rbar = Rbar.conj()
    S = s_form(p.pair_id, p.k, p.m, T)
    F3 = (quadratic_form(T, K, z) * zetab).re2()
    KbarZ = quadratic_form(T, Kbar, zb)

    def A1(j: int) -> Poly:
        f = [D(phi["f1"], j), D(phi["f2"], j)]
        herm = Poly.zero(T)
        for i in range(2):
            for k in range(2):
                if H[i][k]:
                    herm = herm + (f[i] * zb[k]).scale(H[i][k])
        return D(phi["h"], j).scale(I) + herm.scale(2) + (KbarZ * D(phi["g"], j)).scale(2)

    f0 = [D(phi["f1"]), D(phi["f2"])]
    g0 = D(phi["g"])
    L = (
        A1(0)
        + (F3 * A1(1)).scale(I)
        + (quadratic_form(T, K, f0, z) * zetab).scale(4)
        + (Rbar * zeta * g0).scale(4)
        + (S * zetab * g0).scale(2)
    )
    return L.re2()
