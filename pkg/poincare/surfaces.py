"""Rigid model hypersurfaces v = F(z, z_bar) and their Levi-degeneracy diagnostics."""
from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .algebra import GaussRat, Poly, Scalar, VarTable, exponent_map, monomial, rational_text
from .errors import ParameterError, ShapeMismatchError, UnknownVariableError
from .grading import WeightSystem, graded_components, min_weight, preset

logger = logging.getLogger(__name__)

J6_TABLE = VarTable.of(("z", "zeta", "eta", "w"))
PAIR_TABLE = VarTable.of(("z1", "z2", "zeta", "w"))


def quadric_table(n: int) -> VarTable:
    return VarTable.of(tuple(f"z{j}" for j in range(1, n + 1)) + ("w",))


# =========================================================
# MODEL SURFACE
# =========================================================
@dataclass(frozen=True)
class ModelSurface:
    """v = F with F real and u-independent.  ``trunc=None`` marks an exact model."""

    name: str
    table: VarTable
    ws: WeightSystem
    F: Poly
    trunc: Optional[int] = None
    params: Dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if self.F.table != self.table:
            raise ShapeMismatchError(f"F of {self.name} is not over the surface's table")
        if not self.F.is_real():
            raise ParameterError(f"F of {self.name} is not conj-fixed")
        for v in ("w", "w_bar") + self.table.real:
            if v in self.table.index and self.F.depends_on(v):
                raise ParameterError(f"F of {self.name} depends on {v}; only rigid surfaces are modelled")
        low = min_weight(self.F, self.ws)
        if low is not None and low < 2:
            raise ParameterError(f"F of {self.name} has a term of weight {low} < 2")

    @property
    def zvars(self) -> Tuple[str, ...]:
        return tuple(v for v in self.table.holo if v != "w")

    def var(self, v: str) -> Poly:
        return Poly.var(self.table, v)

    def components(self) -> Dict[int, Poly]:
        return graded_components(self.F, self.ws)

    def regraded(self, grading: str) -> "ModelSurface":
        """Same F under another preset grading, taken as an exact model there."""
        if grading == self.ws.name:
            return self
        return ModelSurface(f"{self.name}@{grading}", self.table, preset(grading, self.table), self.F, None, dict(self.params))

    def reordered(self, holo_order: Sequence[str]) -> "ModelSurface":
        table = self.table.permuted(holo_order)
        ws = WeightSystem.of(
            table,
            {v: self.ws.weight(v) for v in table.holo},
            {r: self.ws.weight(r) for r in table.real},
            name=self.ws.name,
        )
        return ModelSurface(self.name, table, ws, self.F.retable(table), self.trunc, dict(self.params))


def pluriharmonic_terms(F: Poly) -> Poly:
    """Terms of bidegree (m, 0) or (0, m): holomorphic-only or antiholomorphic-only."""
    t = F.table
    nh = len(t.holo)
    keep = {}
    for key, c in F.items():
        holo = any(key[:nh])
        anti = any(key[nh:2 * nh])
        if not (holo and anti):
            keep[key] = c
    return Poly._raw(t, keep)


# =========================================================
# FIXTURE PARAMETERS
# =========================================================
@dataclass(frozen=True)
class J6Params:
    r1: GaussRat = GaussRat(0)
    r2: GaussRat = GaussRat(0)
    r3: GaussRat = GaussRat(0)
    r4: GaussRat = GaussRat(0)
    s1: GaussRat = GaussRat(0)
    s2: GaussRat = GaussRat(0)
    s3: GaussRat = GaussRat(0)
    s4: GaussRat = GaussRat(0)
    s5: GaussRat = GaussRat(0)
    s6: GaussRat = GaussRat(0)
    s7: GaussRat = GaussRat(0)
    s8: GaussRat = GaussRat(0)

    def __post_init__(self) -> None:
        for name in self.__dataclass_fields__:
            object.__setattr__(self, name, GaussRat.of(getattr(self, name)))

    def as_dict(self) -> Dict[str, str]:
        return {k: getattr(self, k).text() for k in self.__dataclass_fields__}


PAIR_IDS = tuple(range(1, 10))


@dataclass(frozen=True)
class TwoNondegParams:
    pair_id: int
    k: Fraction = Fraction(1)
    m: GaussRat = GaussRat(0)
    R: Tuple[GaussRat, GaussRat, GaussRat] = (GaussRat(0), GaussRat(0), GaussRat(0))

    def __post_init__(self) -> None:
        object.__setattr__(self, "k", Fraction(self.k))
        object.__setattr__(self, "m", GaussRat.of(self.m))
        object.__setattr__(self, "R", tuple(GaussRat.of(r) for r in self.R))
        validate_pair(self.pair_id, self.k, self.m)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "pair": self.pair_id,
            "k": rational_text(self.k),
            "m": self.m.text(),
            "R": [r.text() for r in self.R],
        }


def validate_pair(pair_id: int, k: Fraction, m: GaussRat) -> None:
    if pair_id not in PAIR_IDS:
        raise ParameterError(f"pair id must be 1..9, got {pair_id}")
    if pair_id <= 6 and k <= 0:
        raise ParameterError(f"class {pair_id} needs k > 0")
    if pair_id in (1, 4):
        if not m.is_real() or m.re <= 0 or m.re == k:
            raise ParameterError(f"class {pair_id} needs real m > 0 with m != k")
    if pair_id == 7 and m.is_real():
        raise ParameterError("class 7 needs m outside the reals")
    if pair_id == 8 and (not m.is_real() or m.is_zero()):
        raise ParameterError("class 8 needs real nonzero m")


def pair_matrices(pair_id: int, k: Fraction, m: GaussRat) -> Tuple[List[List[GaussRat]], List[List[GaussRat]]]:
    """(H, K) of the normal-form pair; K(z,z) = k z1^2 + 2 l z1 z2 + m z2^2 read from [[k,l],[l,m]]."""
    one, zero = GaussRat(1), GaussRat(0)
    if pair_id <= 3:
        H = [[one, zero], [zero, one]]
    elif pair_id <= 6:
        H = [[one, zero], [zero, GaussRat(-1)]]
    else:
        H = [[zero, one], [one, zero]]
    kk = GaussRat.of(k)
    if pair_id in (1, 4):
        K = [[kk, zero], [zero, m]]
    elif pair_id in (2, 5):
        K = [[kk, zero], [zero, kk]]
    elif pair_id in (3, 6):
        K = [[kk, zero], [zero, zero]]
    elif pair_id in (7, 8):
        K = [[one, zero], [zero, m]]
    else:
        K = [[one, zero], [zero, zero]]
    return H, K


def hermitian_form(table: VarTable, H: Sequence[Sequence[GaussRat]], zs: Sequence[str]) -> Poly:
    out = Poly.zero(table)
    for i, a in enumerate(zs):
        for j, b in enumerate(zs):
            if H[i][j]:
                out = out + Poly.term(table, {a: 1, table.conjugate_name(b): 1}, H[i][j])
    return out


def quadratic_form(table: VarTable, K: Sequence[Sequence[GaussRat]], xs: Sequence[Poly], ys: Optional[Sequence[Poly]] = None) -> Poly:
    """K(x, y) = sum K_ij x_i y_j; K(x, x) when ``ys`` is omitted."""
    ys = xs if ys is None else ys
    out = Poly.zero(table)
    for i in range(len(xs)):
        for j in range(len(xs)):
            if K[i][j]:
                out = out + (xs[i] * ys[j]).scale(K[i][j])
    return out


def s_form(pair_id: int, k: Fraction, m: GaussRat, table: VarTable = PAIR_TABLE) -> Poly:
    """The real form S(z, z_bar) forced on the |zeta|^2 coefficient by 2-nondegeneracy."""
    z1, z2 = Poly.var(table, "z1"), Poly.var(table, "z2")
    zb1, zb2 = Poly.var(table, "z1_bar"), Poly.var(table, "z2_bar")
    k2 = GaussRat.of(k * k)
    if pair_id == 1:
        return (z1 * zb1).scale(4 * k2) + (z2 * zb2).scale(m * m * 4)
    if pair_id == 2:
        return (z1 * zb1 + z2 * zb2).scale(4 * k2)
    if pair_id in (3, 6):
        return (z1 * zb1).scale(4 * k2)
    if pair_id == 4:
        return (z1 * zb1).scale(4 * k2) - (z2 * zb2).scale(m * m * 4)
    if pair_id == 5:
        return (z1 * zb1 - z2 * zb2).scale(4 * k2)
    if pair_id == 7:
        return (z1 * zb2).scale(m.conj() * 4) + (z2 * zb1).scale(m * 4)
    if pair_id == 8:
        return (z1 * zb2 + z2 * zb1).scale(m * 4)
    return Poly.zero(table)


# =========================================================
# FIXTURE CONSTRUCTORS
# =========================================================
def quadric(n: int, signature: Optional[Sequence[int]] = None) -> ModelSurface:
    if n < 1:
        raise ParameterError(f"quadric needs n >= 1, got {n}")
    signature = list(signature) if signature is not None else [1] * n
    if len(signature) != n or any(e not in (1, -1) for e in signature):
        raise ParameterError(f"signature must be {n} entries of +1/-1, got {signature}")
    table = quadric_table(n)
    F = Poly.zero(table)
    for j, eps in enumerate(signature, start=1):
        F = F + Poly.term(table, {f"z{j}": 1, f"z{j}_bar": 1}, eps)
    sig = "".join("+" if e > 0 else "-" for e in signature)
    return ModelSurface(f"quadric-{n}{sig}", table, preset("W1", table), F, None, {"n": n, "signature": sig})


def three_nondeg_j6(p: Optional[J6Params] = None) -> ModelSurface:
    """v = |z|^2 + F3 + F4 + F5 + F6, truncated at weight 6 under W1."""
    p = p or J6Params()
    T = J6_TABLE

    def t(c: Scalar, **exps: int) -> Poly:
        return Poly.term(T, {(k[:-1] + "_bar" if k.endswith("b") else k): v for k, v in exps.items()}, c)

    F2 = t(1, z=1, zb=1)
    F3 = t(1, z=2, zetab=1).re2()
    F4 = t(1, z=3, etab=1).re2() + t(4, z=1, zb=1, zeta=1, zetab=1)
    F5 = (
        t(p.r1, zb=4, zeta=1)
        + t(p.r2, zb=4, eta=1)
        + t(p.r3, z=1, zetab=2, etab=2)
        + t(p.r4, z=1, etab=4)
        + t(4, z=2, zeta=1, zetab=2)
        + t(6, z=2, zb=1, zeta=1, etab=1)
    ).re2()
    F6 = (
        t(p.r1.conj() * 8, z=3, zb=1, zeta=1, zetab=1)
        + t(p.r2.conj() * 8, z=3, zb=1, zeta=1, etab=1)
        + t(p.r3.conj() * 2, z=1, eta=2, zetab=1, zeta=2)
        + t(p.r4.conj() * 2, z=1, eta=4, zetab=1)
        + t(p.s1, z=1, zb=4, zeta=1)
        + t(p.s2, zb=5, zeta=1)
        + t(p.s3, z=1, zb=4, eta=1)
        + t(p.s4, zb=5, eta=1)
        + t(p.s5, zb=4, zeta=2)
        + t(p.s6, zb=4, zeta=1, eta=1)
        + t(p.s7, zb=4, eta=2)
        + t(p.s8, zb=1, eta=5)
        + t(12, zb=3, zeta=1, zetab=1, eta=1)
        + t(12, z=1, zb=2, zeta=2, etab=1)
    ).re2() + t(16, z=1, zb=1, zeta=2, zetab=2) + t(9, z=2, zb=2, eta=1, etab=1)
    F = F2 + F3 + F4 + F5 + F6
    return ModelSurface("j6", T, preset("W1", T), F, 6, p.as_dict())


def two_nondeg(p: TwoNondegParams) -> ModelSurface:
    """v = <z,z_bar> + 2Re(K(z,z) zeta_bar) + 2Re(R(z,z) zeta_bar^2) + S |zeta|^2, truncated at weight 4."""
    T = PAIR_TABLE
    H, K = pair_matrices(p.pair_id, p.k, p.m)
    z = [Poly.var(T, "z1"), Poly.var(T, "z2")]
    zeta, zetab = Poly.var(T, "zeta"), Poly.var(T, "zeta_bar")
    r1, r2, r3 = p.R
    R = (z[0] * z[0]).scale(r1) + (z[0] * z[1]).scale(r2) + (z[1] * z[1]).scale(r3)
    F = (
        hermitian_form(T, H, ("z1", "z2"))
        + (quadratic_form(T, K, z) * zetab).re2()
        + (R * zetab * zetab).re2()
        + s_form(p.pair_id, p.k, p.m, T) * zeta * zetab
    )
    return ModelSurface(f"pair{p.pair_id}", T, preset("W1", T), F, 4, p.as_dict())


def cubic_q() -> ModelSurface:
    """Q = {v = 2Re(z1 zeta_bar + z2 zeta_bar^2)}, weight-homogeneous of weight 3 under W3."""
    T = PAIR_TABLE
    F = (Poly.term(T, {"z1": 1, "zeta_bar": 1}) + Poly.term(T, {"z2": 1, "zeta_bar": 2})).re2()
    return ModelSurface("Q", T, preset("W3", T), F, None, {})


# =========================================================
# DIAGNOSTICS
# =========================================================
def reliable_weight(s: ModelSurface) -> Optional[int]:
    return None if s.trunc is None else s.trunc - 2


def _mixed(s: ModelSurface, a: str, b: str) -> Poly:
    """F_{a b_bar}."""
    return s.F.diff(a).diff(s.table.conjugate_name(b))


def levi_minors(s: ModelSurface, zvar: str, zetavar: str, etavar: str) -> Tuple[Poly, Poly, Poly]:
    for v in (zvar, zetavar, etavar):
        if v not in s.table.holo:
            raise UnknownVariableError(f"{v!r} is not a holomorphic variable of {s.name}")
    trunc = s.ws.trunc(reliable_weight(s))
    Fzz = _mixed(s, zvar, zvar)
    d1 = Fzz.mul(_mixed(s, zetavar, zetavar), trunc) - _mixed(s, zvar, zetavar).mul(_mixed(s, zetavar, zvar), trunc)
    d2 = Fzz.mul(_mixed(s, zetavar, etavar), trunc) - _mixed(s, zetavar, zvar).mul(_mixed(s, zvar, etavar), trunc)
    d3 = Fzz.mul(_mixed(s, etavar, etavar), trunc) - _mixed(s, zvar, etavar).mul(_mixed(s, etavar, zvar), trunc)
    return d1, d2, d3


def hessian3_det(s: ModelSurface) -> Poly:
    zs = s.zvars
    if len(zs) != 3:
        raise ShapeMismatchError(f"{s.name} has {len(zs)} non-w holomorphic variables, need 3")
    trunc = s.ws.trunc(reliable_weight(s))
    M = [[_mixed(s, a, b) for b in zs] for a in zs]

    def minor(r: int, c: int) -> Poly:
        rows = [i for i in range(3) if i != r]
        cols = [j for j in range(3) if j != c]
        return M[rows[0]][cols[0]].mul(M[rows[1]][cols[1]], trunc) - M[rows[0]][cols[1]].mul(M[rows[1]][cols[0]], trunc)

    det = Poly.zero(s.table)
    for c in range(3):
        term = M[0][c].mul(minor(0, c), trunc)
        det = det + term if c % 2 == 0 else det - term
    return det.truncate(trunc)


# =========================================================
# SURFACE-SPEC JSON
# =========================================================
def surface_spec(s: ModelSurface) -> Dict[str, Any]:
    terms = [
        [rational_text(c.re), rational_text(c.im), exponent_map(s.table, key)]
        for key, c in s.F.items()
    ]
    return {
        "name": s.name,
        "variables": s.table.to_json(),
        "weights": s.ws.to_json(),
        "grading": s.ws.name,
        "F": terms,
        "trunc": s.trunc,
        "params": s.params,
    }


def surface_from_spec(spec: Dict[str, Any]) -> ModelSurface:
    v = spec["variables"]
    table = VarTable(tuple(v["holo"]), tuple(v["anti"]), tuple(v["real"]))
    weights = spec["weights"]
    ws = WeightSystem.of(
        table,
        {x: weights[x] for x in table.holo},
        {x: weights[x] for x in table.real},
        name=spec.get("grading", "custom"),
    )
    F = Poly.from_terms(
        table,
        ((monomial(table, exps), GaussRat(Fraction(re), Fraction(im))) for re, im, exps in spec["F"]),
    )
    return ModelSurface(spec.get("name", "custom"), table, ws, F, spec.get("trunc"), spec.get("params", {}))


def surface_json(s: ModelSurface) -> str:
    return json.dumps(surface_spec(s), sort_keys=True, ensure_ascii=False)


def surface_hash(s: ModelSurface) -> str:
    return hashlib.sha256(surface_json(s).encode("utf-8")).hexdigest()
