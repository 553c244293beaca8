"""Exact checks of closed-form automorphism families of model surfaces.

Maps are rational in the holomorphic coordinates; denominators are kept as
products of factors with nonzero constant term, so sums only multiply by the
factors they are missing and no polynomial gcd is ever needed.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Dict, Mapping, Optional, Tuple

from .algebra import GaussRat, I, Poly, Scalar, VarTable, monomial
from .errors import ExpansionError, ParameterError, ShapeMismatchError, UnknownVariableError, VerificationFailure
from .grading import JetShape, WeightSystem, preset
from .surfaces import PAIR_TABLE, ModelSurface, cubic_q
from .tangency import FieldJet, tangency_residual

logger = logging.getLogger(__name__)

Factors = Tuple[Tuple[Poly, int], ...]


# =========================================================
# RATIONAL FUNCTIONS
# =========================================================
def _inverse_series(f: Poly, truncate: Callable[[Poly], Poly], is_small: Callable[[Poly], bool]) -> Poly:
    """1/f as a truncated geometric series; ``f - f(0)`` must be small for ``truncate``."""
    c0 = f.constant_term()
    if c0.is_zero():
        raise ExpansionError(f"denominator {f.text()} vanishes at the origin")
    rest = f - Poly.const(f.table, c0)
    if not is_small(rest):
        raise ExpansionError(f"denominator {f.text()} is not a unit in the expansion ring")
    step = rest.scale(-c0.inverse())
    acc = Poly.const(f.table, 1)
    power = Poly.const(f.table, 1)
    while True:
        power = truncate(power * step)
        if power.is_zero():
            break
        acc = acc + power
    return truncate(acc).scale(c0.inverse())


@dataclass(frozen=True)
class RationalFunction:
    num: Poly
    den: Factors = ()

    def __post_init__(self) -> None:
        merged: Dict[Poly, int] = {}
        for f, e in self.den:
            if f.table != self.num.table:
                raise ShapeMismatchError("denominator factor over a different table")
            if f.constant_term().is_zero():
                raise ExpansionError(f"denominator factor {f.text()} vanishes at the origin")
            if e > 0:
                merged[f] = merged.get(f, 0) + e
        object.__setattr__(self, "den", tuple(merged.items()))

    @property
    def table(self) -> VarTable:
        return self.num.table

    @classmethod
    def of(cls, p: Poly) -> "RationalFunction":
        return cls(p, ())

    @classmethod
    def frac(cls, num: Poly, den: Poly, power: int = 1) -> "RationalFunction":
        return cls(num, ((den, power),))

    def _den_map(self) -> Dict[Poly, int]:
        return dict(self.den)

    def _lift(self, target: Dict[Poly, int]) -> Poly:
        mine = self._den_map()
        out = self.num
        for f, e in target.items():
            missing = e - mine.get(f, 0)
            if missing > 0:
                out = out * f.pow(missing)
        return out

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        other = _rf(other, self.table)
        lcm = self._den_map()
        for f, e in other.den:
            lcm[f] = max(lcm.get(f, 0), e)
        return RationalFunction(self._lift(lcm) + other._lift(lcm), tuple(lcm.items()))

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return self + (-_rf(other, self.table))

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        other = _rf(other, self.table)
        return RationalFunction(self.num * other.num, self.den + other.den)

    def scale(self, c: Scalar) -> "RationalFunction":
        return RationalFunction(self.num.scale(c), self.den)

    def pow(self, k: int) -> "RationalFunction":
        if k < 0:
            raise ParameterError("negative powers of rational functions are not supported")
        out = RationalFunction.of(Poly.const(self.table, 1))
        for _ in range(k):
            out = out * self
        return out

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        other = _rf(other, self.table)
        extra = Poly.const(self.table, 1)
        for f, e in other.den:
            extra = extra * f.pow(e)
        return RationalFunction(self.num * extra, self.den + ((other.num, 1),))

    def conj(self) -> "RationalFunction":
        return RationalFunction(self.num.conj(), tuple((f.conj(), e) for f, e in self.den))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def map_polys(self, fn: Callable[[Poly], Poly]) -> "RationalFunction":
        return RationalFunction(fn(self.num), tuple((fn(f), e) for f, e in self.den))

    def substitute(self, mapping: Mapping[str, "RationalFunction"]) -> "RationalFunction":
        out = poly_at(self.num, mapping)
        for f, e in self.den:
            out = out / poly_at(f, mapping).pow(e)
        return out

    def expand(self, ws: WeightSystem, bound: int) -> Poly:
        """Power series of the quotient, truncated at weight ``bound``."""
        trunc = ws.trunc(bound)

        def cut(p: Poly) -> Poly:
            return p.truncate(trunc)

        out = cut(self.num)
        for f, e in self.den:
            inv = _inverse_series(f, cut, lambda r: r.constant_term().is_zero())
            for _ in range(e):
                out = cut(out.mul(inv, trunc))
        return out

    def series_in(self, var: str, order: int) -> Poly:
        """Power series in ``var`` up to var^order; every factor must be constant at var = 0."""
        zero = Poly.zero(self.table)

        def cut(p: Poly) -> Poly:
            return p.truncate_degree(var, order)

        def small(r: Poly) -> bool:
            return r.substitute(var, zero).is_zero()

        out = cut(self.num)
        for f, e in self.den:
            inv = _inverse_series(f, cut, small)
            for _ in range(e):
                out = cut(out * inv)
        return out


def _rf(x, table: VarTable) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, Poly):
        return RationalFunction.of(x)
    return RationalFunction.of(Poly.const(table, x))


def poly_at(p: Poly, mapping: Mapping[str, RationalFunction]) -> RationalFunction:
    """p with each variable named in ``mapping`` replaced by a rational function."""
    T = p.table
    names = T.names
    idx = {T.position(v): q for v, q in mapping.items()}
    powers: Dict[Tuple[int, int], RationalFunction] = {}

    def power(i: int, k: int) -> RationalFunction:
        if (i, k) not in powers:
            powers[(i, k)] = idx[i].pow(k) if k <= 1 else power(i, k - 1) * idx[i]
        return powers[(i, k)]

    acc = RationalFunction.of(Poly.zero(T))
    for key, c in p.items():
        rest = {names[i]: k for i, k in enumerate(key) if k and i not in idx}
        term = RationalFunction.of(Poly.term(T, rest, c))
        for i, k in enumerate(key):
            if k and i in idx:
                term = term * power(i, k)
        acc = acc + term
    return acc


# =========================================================
# RATIONAL MAPS
# =========================================================
@dataclass(frozen=True)
class RationalMap:
    """Components keyed by target holomorphic variable; unnamed targets are left fixed."""

    table: VarTable
    components: Dict[str, RationalFunction]

    def __post_init__(self) -> None:
        for v, q in self.components.items():
            if v not in self.table.holo:
                raise UnknownVariableError(f"map target {v!r} is not a holomorphic variable")
            if q.table != self.table:
                raise ShapeMismatchError(f"component {v} is over a different table")

    @classmethod
    def identity(cls, table: VarTable) -> "RationalMap":
        return cls(table, {})

    @classmethod
    def from_polys(cls, table: VarTable, comps: Mapping[str, Poly]) -> "RationalMap":
        return cls(table, {v: RationalFunction.of(p) for v, p in comps.items()})

    def component(self, v: str) -> RationalFunction:
        return self.components.get(v, RationalFunction.of(Poly.var(self.table, v)))

    def then(self, other: "RationalMap") -> "RationalMap":
        """``other`` applied after ``self``."""
        full = {v: self.component(v) for v in self.table.holo}
        return RationalMap(self.table, {v: other.component(v).substitute(full) for v in self.table.holo})

    def with_values(self, values: Mapping[str, Scalar]) -> "RationalMap":
        consts = {v: Poly.const(self.table, x) for v, x in values.items()}
        return RationalMap(self.table, {v: q.map_polys(lambda p: p.compose(consts)) for v, q in self.components.items()})


def lift_table(table: VarTable, extra: str = "t") -> VarTable:
    if extra in table.names:
        return table
    return VarTable(table.holo, table.anti, table.real + (extra,))


def lift_surface(s: ModelSurface, table: VarTable) -> ModelSurface:
    if table == s.table:
        return s
    return ModelSurface(s.name, table, preset(s.ws.name, table), s.F.retable(table), s.trunc, dict(s.params))


def automorphism_residual(s: ModelSurface, m: RationalMap) -> RationalFunction:
    """Im W - F(Z, Z_bar) at w = u + iF, as one rational function."""
    s = lift_surface(s, m.table)
    T = m.table
    onto = {"w": Poly.var(T, "u") + s.F.scale(I)}
    image = {v: m.component(v).map_polys(lambda p: p.compose(onto)) for v in T.holo}
    full: Dict[str, RationalFunction] = dict(image)
    for v, a in zip(T.holo, T.anti):
        full[a] = image[v].conj()
    W = image["w"]
    im_w = (W - W.conj()).scale(GaussRat(0, Fraction(-1, 2)))
    return im_w - poly_at(s.F, full)


def verify_exact_automorphism(
    s: ModelSurface,
    m: RationalMap,
    params: Optional[Mapping[str, Scalar]] = None,
) -> bool:
    if params:
        m = m.with_values(params)
    ok = automorphism_residual(s, m).is_zero()
    if not ok:
        logger.debug(f"map does not preserve {s.name}")
    return ok


# =========================================================
# FAMILIES OF Q
# =========================================================
def _t(T: VarTable, c: Scalar = 1, **exps: int) -> Poly:
    return Poly.term(T, exps, c)


@dataclass(frozen=True)
class QPoint:
    A: GaussRat
    B: GaussRat
    C: GaussRat
    D: GaussRat

    @classmethod
    def on_q(cls, A: Scalar, B: Scalar, C: Scalar, t: Fraction = Fraction(0)) -> "QPoint":
        """Complete (A, B, C) with D = t + i 2Re(A C_bar + B C_bar^2)."""
        A, B, C = GaussRat.of(A), GaussRat.of(B), GaussRat.of(C)
        v = 2 * (A * C.conj() + B * C.conj() * C.conj()).re
        return cls(A, B, C, GaussRat(Fraction(t), v))

    def __post_init__(self) -> None:
        for n in ("A", "B", "C", "D"):
            object.__setattr__(self, n, GaussRat.of(getattr(self, n)))
        v = 2 * (self.A * self.C.conj() + self.B * self.C.conj() * self.C.conj()).re
        if self.D.im != v:
            raise ParameterError(f"({self.A.text()}, {self.B.text()}, {self.C.text()}, {self.D.text()}) is not a point of Q")


def q_translation(p: QPoint, table: VarTable = PAIR_TABLE) -> RationalMap:
    """The element of the simply transitive group of Q carrying 0 to ``p``."""
    T = table
    A, B, C, D = p.A, p.B, p.C, p.D
    Cb = C.conj()
    z1, z2, zeta, w = (Poly.var(T, v) for v in ("z1", "z2", "zeta", "w"))
    W = (
        w
        + Poly.const(T, D)
        + (z1.scale(Cb) - z2.scale(Cb * Cb) + zeta.scale(A.conj() + 2 * B.conj() * C) + (zeta * zeta).scale(B.conj())).scale(2 * I)
    )
    return RationalMap.from_polys(
        T,
        {
            "z1": z1 + Poly.const(T, A) - z2.scale(2 * Cb),
            "z2": z2 + Poly.const(T, B),
            "zeta": zeta + Poly.const(T, C),
            "w": W,
        },
    )


def shear_z1(t: Scalar, table: VarTable = PAIR_TABLE) -> RationalMap:
    """z1 -> z1 + i t zeta, the flow of (i zeta, 0, 0, 0)."""
    return RationalMap.from_polys(table, {"z1": Poly.var(table, "z1") + _t(table, I * t, zeta=1)})


def shear_z2(t: Scalar, table: VarTable = PAIR_TABLE) -> RationalMap:
    """z2 -> z2 + i t zeta^2."""
    return RationalMap.from_polys(table, {"z2": Poly.var(table, "z2") + _t(table, I * t, zeta=2)})


def g1_flow(N: Scalar, t: Optional[Scalar] = None, table: VarTable = PAIR_TABLE) -> RationalMap:
    """Flow of the g1 field with n = 0; ``t=None`` keeps t as a formal real variable."""
    N = GaussRat.of(N)
    T = lift_table(table) if t is None else table
    tt = Poly.var(T, "t") if t is None else Poly.const(T, t)
    z1, z2, zeta, w = (Poly.var(T, v) for v in ("z1", "z2", "zeta", "w"))
    D = Poly.const(T, 1) - (zeta * tt).scale(I * N.conj())
    return RationalMap(
        T,
        {
            "z1": RationalFunction.frac(z1 + (w * tt).scale(N), D, 2),
            "z2": RationalFunction.frac(
                z2 - (z1 * tt).scale(I * N) - (w * tt * tt).scale(I * N * N / 2), D, 2
            ),
            "zeta": RationalFunction.frac(zeta, D, 1),
            "w": RationalFunction.frac(w, D, 2),
        },
    )


def _exp_series(T: VarTable, c: Fraction, order: int) -> Poly:
    """exp(c t) truncated after t^order."""
    return Poly.from_terms(
        T, ((monomial(T, {"t": k}), GaussRat(c ** k / factorial(k))) for k in range(order + 1))
    )


def _expm1_over(T: VarTable, mu: Fraction, order: int) -> Poly:
    """(exp(mu t) - 1)/mu, read as t at mu = 0."""
    return Poly.from_terms(
        T,
        ((monomial(T, {"t": k}), GaussRat(mu ** (k - 1) / factorial(k))) for k in range(1, order + 1)),
    )


def g0_flow_series(l: Scalar, mu: Scalar, m: Scalar, order: int, table: VarTable = PAIR_TABLE) -> Dict[str, Poly]:
    """The g0 flow for real M = 2l - mu/3, Taylor-expanded in t."""
    l, mu = Fraction(GaussRat.of(l).re), Fraction(GaussRat.of(mu).re)
    m = GaussRat.of(m)
    T = lift_table(table)
    E = _expm1_over(T, mu, order)
    z1, z2, zeta, w = (Poly.var(T, v) for v in ("z1", "z2", "zeta", "w"))
    cut = lambda p: p.truncate_degree("t", order)  # noqa: E731
    return {
        "z1": cut((z1 + (E * zeta * zeta).scale(m)) * _exp_series(T, 2 * l - mu / 3, order)),
        "z2": cut((z2 - (E * zeta).scale(m.conj())) * _exp_series(T, l - 2 * mu / 3, order)),
        "zeta": cut(zeta * _exp_series(T, l + mu / 3, order)),
        "w": cut(w * _exp_series(T, 3 * l, order)),
    }


def g_minus2_flow_series(a: Scalar, table: VarTable = PAIR_TABLE) -> Dict[str, Poly]:
    a = GaussRat.of(a)
    T = lift_table(table)
    return {
        "z1": Poly.var(T, "z1") + _t(T, a, t=1),
        "w": Poly.var(T, "w") + _t(T, 2 * I * a.conj(), t=1, zeta=1),
    }


# =========================================================
# FIELDS AND THEIR FLOWS
# =========================================================
def field_by_target(X: FieldJet, table: Optional[VarTable] = None) -> Dict[str, Poly]:
    T = table or X.table
    return {c.target: X[c.name].retable(T) for c in X.shape.components}


def lie_series(X: FieldJet, order: int, table: Optional[VarTable] = None) -> Dict[str, Poly]:
    """exp(tX) x_v = sum_k t^k/k! X^k(x_v) for every target, through t^order."""
    T = lift_table(table or X.table)
    comps = field_by_target(X, T)

    def derive(p: Poly) -> Poly:
        acc = Poly.zero(T)
        for v, Xv in comps.items():
            d = p.diff(v)
            if d:
                acc = acc + d * Xv
        return acc

    out: Dict[str, Poly] = {}
    for v in comps:
        term = Poly.var(T, v)
        series = term
        for k in range(1, order + 1):
            term = derive(term)
            if term.is_zero():
                break
            series = series + term * _t(T, GaussRat(Fraction(1, factorial(k))), t=k)
        out[v] = series
    return out


def exponentiate_check(
    X: FieldJet, flow: Mapping[str, Poly], order: int, surface: Optional[ModelSurface] = None
) -> bool:
    """flow(0) is the identity and d/dt flow = X(flow) through t^(order-1).

    X must be an infinitesimal automorphism of ``surface`` (Q by default);
    otherwise VerificationFailure is raised before any flow is compared.
    """
    s = surface or cubic_q()
    residual = tangency_residual(s, X)
    if not residual.vanishes():
        logger.error(f"exponentiate_check: field is not in the kernel of {s.name}")
        raise VerificationFailure(
            f"field not in computed kernel of {s.name}",
            {"surface": s.name, "residual": residual.expr.text()},
        )
    if not flow:
        return X.is_zero()
    T = next(iter(flow.values())).table
    comps = field_by_target(X, T)
    full = {v: flow.get(v, Poly.var(T, v)) for v in comps}
    zero = Poly.zero(T)
    for v, Xv in comps.items():
        phi = full[v]
        if phi.substitute("t", zero) != Poly.var(T, v):
            logger.debug(f"flow of {v} does not start at the identity")
            return False
        lhs = phi.diff("t").truncate_degree("t", order - 1)
        rhs = Xv.compose(full).truncate_degree("t", order - 1)
        if lhs != rhs:
            logger.debug(f"flow ODE fails for {v}")
            return False
    return True


def rational_flow_series(m: RationalMap, order: int) -> Dict[str, Poly]:
    """Taylor series in the formal parameter t of each component of ``m``."""
    return {v: m.component(v).series_in("t", order) for v in m.table.holo}


def flow_generator(flow: Mapping[str, Poly], shape: JetShape, table: VarTable) -> FieldJet:
    """d/dt of a flow at t = 0, as a field jet of ``shape`` over ``table``."""
    comps: Dict[str, Poly] = {}
    for c in shape.components:
        if c.target in flow:
            p = flow[c.target]
            comps[c.name] = p.diff("t").substitute("t", Poly.zero(p.table)).retable(table)
    return FieldJet(shape, table, comps)
