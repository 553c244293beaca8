"""Exact multivariate polynomials over the Gaussian rationals.

Holomorphic variables and their conjugates are independent symbols tied
together only by the involution ``conj``; the real locus is imposed at
evaluation time.  Real variables (``u``, a flow time ``t``) are fixed by
``conj``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

from .errors import (
    EvaluationError,
    ParameterError,
    SelfReferenceError,
    TableMismatchError,
    UnknownVariableError,
)

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]
Scalar = Union[int, Fraction, str, "GaussRat"]


# =========================================================
# SCALARS
# =========================================================
class GaussRat:
    """a + bi with a, b exact rationals."""

    __slots__ = ("re", "im")

    def __init__(self, re: Union[int, Fraction, str] = 0, im: Union[int, Fraction, str] = 0) -> None:
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    @classmethod
    def _make(cls, re: Fraction, im: Fraction) -> "GaussRat":
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    @classmethod
    def of(cls, value: Scalar) -> "GaussRat":
        if isinstance(value, GaussRat):
            return value
        if isinstance(value, (int, Fraction)):
            return cls._make(Fraction(value), _ZERO)
        if isinstance(value, str):
            return cls._make(Fraction(value), _ZERO)
        if isinstance(value, tuple) and len(value) == 2:
            return cls(value[0], value[1])
        raise ParameterError(f"Cannot read {value!r} as a Gaussian rational")

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("GaussRat is immutable")

    def __repr__(self) -> str:
        return f"GaussRat({self.re}, {self.im})"

    def text(self) -> str:
        return f"({self.re},{self.im})"

    def __eq__(self, other: object) -> bool:
        if isinstance(other, GaussRat):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def __neg__(self) -> "GaussRat":
        return GaussRat._make(-self.re, -self.im)

    def __add__(self, other: Scalar) -> "GaussRat":
        o = other if isinstance(other, GaussRat) else GaussRat.of(other)
        return GaussRat._make(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: Scalar) -> "GaussRat":
        o = other if isinstance(other, GaussRat) else GaussRat.of(other)
        return GaussRat._make(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: Scalar) -> "GaussRat":
        return GaussRat.of(other) - self

    def __mul__(self, other: Scalar) -> "GaussRat":
        o = other if isinstance(other, GaussRat) else GaussRat.of(other)
        if not o.im:
            return GaussRat._make(self.re * o.re, self.im * o.re)
        if not self.im:
            return GaussRat._make(self.re * o.re, self.re * o.im)
        return GaussRat._make(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussRat":
        n = self.norm2()
        if not n:
            raise ZeroDivisionError("division by the zero Gaussian rational")
        return GaussRat._make(self.re / n, -self.im / n)

    def __truediv__(self, other: Scalar) -> "GaussRat":
        return self * GaussRat.of(other).inverse()

    def __rtruediv__(self, other: Scalar) -> "GaussRat":
        return GaussRat.of(other) * self.inverse()

    def __pow__(self, k: int) -> "GaussRat":
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> "GaussRat":
        return GaussRat._make(self.re, -self.im)


_ZERO = Fraction(0)
ZERO = GaussRat._make(Fraction(0), Fraction(0))
ONE = GaussRat._make(Fraction(1), Fraction(0))
I = GaussRat._make(Fraction(0), Fraction(1))


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise ParameterError(f"Not an exact rational: {text!r}") from e


def rational_text(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


# =========================================================
# VARIABLE TABLES
# =========================================================
@dataclass(frozen=True)
class VarTable:
    holo: Tuple[str, ...]
    anti: Tuple[str, ...]
    real: Tuple[str, ...] = ("u",)
    index: Dict[str, int] = field(init=False, compare=False, repr=False, hash=False)
    conj_index: Tuple[int, ...] = field(init=False, compare=False, repr=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "holo", tuple(self.holo))
        object.__setattr__(self, "anti", tuple(self.anti))
        object.__setattr__(self, "real", tuple(self.real))
        if len(self.holo) != len(self.anti):
            raise TableMismatchError("holomorphic and conjugate variable lists differ in length")
        names = self.names
        if len(set(names)) != len(names):
            raise TableMismatchError(f"duplicate variable names in {names}")
        object.__setattr__(self, "index", {v: i for i, v in enumerate(names)})
        n = len(self.holo)
        perm = list(range(n, 2 * n)) + list(range(n)) + list(range(2 * n, len(names)))
        object.__setattr__(self, "conj_index", tuple(perm))

    @classmethod
    def of(cls, holo: Iterable[str], real: Iterable[str] = ("u",)) -> "VarTable":
        holo = tuple(holo)
        return cls(holo, tuple(f"{v}_bar" for v in holo), tuple(real))

    @property
    def names(self) -> Tuple[str, ...]:
        return self.holo + self.anti + self.real

    def __len__(self) -> int:
        return len(self.holo) + len(self.anti) + len(self.real)

    def position(self, v: str) -> int:
        try:
            return self.index[v]
        except KeyError:
            raise UnknownVariableError(f"Variable {v!r} is not in the table {self.names}") from None

    def conjugate_name(self, v: str) -> str:
        return self.names[self.conj_index[self.position(v)]]

    def permuted(self, holo_order: Iterable[str]) -> "VarTable":
        order = tuple(holo_order)
        if sorted(order) != sorted(self.holo):
            raise TableMismatchError(f"{order} is not a permutation of {self.holo}")
        anti = tuple(self.anti[self.holo.index(v)] for v in order)
        return VarTable(order, anti, self.real)

    def to_json(self) -> Dict[str, List[str]]:
        return {"holo": list(self.holo), "anti": list(self.anti), "real": list(self.real)}


def monomial(table: VarTable, exps: Mapping[str, int]) -> Monomial:
    key = [0] * len(table)
    for v, k in exps.items():
        if k < 0:
            raise ParameterError(f"negative exponent {k} for {v}")
        key[table.position(v)] += k
    return tuple(key)


def exponent_map(table: VarTable, key: Monomial) -> Dict[str, int]:
    names = table.names
    return {names[i]: k for i, k in enumerate(key) if k}


# =========================================================
# TRUNCATION
# =========================================================
@dataclass(frozen=True)
class TruncationSpec:
    """Drop every monomial whose weight exceeds ``bound``; ``bound=None`` keeps all."""

    weights: Tuple[Tuple[str, int], ...]
    bound: Optional[int] = None

    @classmethod
    def of(cls, weights: Mapping[str, int], bound: Optional[int]) -> "TruncationSpec":
        return cls(tuple(sorted(weights.items())), bound)

    def vector(self, table: VarTable) -> Tuple[int, ...]:
        w = dict(self.weights)
        try:
            return tuple(w[v] for v in table.names)
        except KeyError as e:
            raise UnknownVariableError(f"No weight for variable {e.args[0]!r}") from None


def _weight(key: Monomial, vec: Tuple[int, ...]) -> int:
    return sum(k * w for k, w in zip(key, vec) if k)


# =========================================================
# POLYNOMIALS
# =========================================================
class Poly:
    """Immutable sparse polynomial; terms keyed by dense exponent tuples."""

    __slots__ = ("table", "_terms", "_sorted")

    def __init__(self, table: VarTable, terms: Optional[Mapping[Monomial, GaussRat]] = None) -> None:
        self.table = table
        clean: Dict[Monomial, GaussRat] = {}
        if terms:
            n = len(table)
            for key, c in terms.items():
                c = c if isinstance(c, GaussRat) else GaussRat.of(c)
                if len(key) != n:
                    raise TableMismatchError(f"monomial {key} does not fit table of {n} variables")
                if c:
                    clean[tuple(key)] = c
        self._terms = clean
        self._sorted: Optional[List[Tuple[Monomial, GaussRat]]] = None

    @classmethod
    def _raw(cls, table: VarTable, terms: Dict[Monomial, GaussRat]) -> "Poly":
        obj = object.__new__(cls)
        obj.table = table
        obj._terms = terms
        obj._sorted = None
        return obj

    # ----- constructors -----
    @classmethod
    def zero(cls, table: VarTable) -> "Poly":
        return cls._raw(table, {})

    @classmethod
    def const(cls, table: VarTable, c: Scalar) -> "Poly":
        c = GaussRat.of(c)
        return cls._raw(table, {(0,) * len(table): c} if c else {})

    @classmethod
    def var(cls, table: VarTable, v: str) -> "Poly":
        return cls.term(table, {v: 1})

    @classmethod
    def term(cls, table: VarTable, exps: Mapping[str, int], c: Scalar = 1) -> "Poly":
        c = GaussRat.of(c)
        return cls._raw(table, {monomial(table, exps): c} if c else {})

    @classmethod
    def from_terms(cls, table: VarTable, items: Iterable[Tuple[Monomial, Scalar]]) -> "Poly":
        acc: Dict[Monomial, GaussRat] = {}
        for key, c in items:
            c = GaussRat.of(c)
            acc[key] = acc[key] + c if key in acc else c
        return cls._raw(table, {k: c for k, c in acc.items() if c})

    # ----- inspection -----
    def items(self) -> List[Tuple[Monomial, GaussRat]]:
        if self._sorted is None:
            self._sorted = sorted(self._terms.items(), key=lambda kv: (sum(kv[0]), kv[0]))
        return self._sorted

    def __iter__(self) -> Iterator[Tuple[Monomial, GaussRat]]:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coeff(self, exps: Union[Mapping[str, int], Monomial]) -> GaussRat:
        key = exps if isinstance(exps, tuple) else monomial(self.table, exps)
        return self._terms.get(key, ZERO)

    def constant_term(self) -> GaussRat:
        return self._terms.get((0,) * len(self.table), ZERO)

    def variables(self) -> Tuple[str, ...]:
        used = [False] * len(self.table)
        for key in self._terms:
            for i, k in enumerate(key):
                if k:
                    used[i] = True
        return tuple(v for v, flag in zip(self.table.names, used) if flag)

    def depends_on(self, v: str) -> bool:
        i = self.table.position(v)
        return any(key[i] for key in self._terms)

    def degree_in(self, v: str) -> int:
        i = self.table.position(v)
        return max((key[i] for key in self._terms), default=0)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self.table == other.table and self._terms == other._terms
        if isinstance(other, (int, Fraction, GaussRat)):
            return self._terms == Poly.const(self.table, other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.table.names, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"Poly({self.text()})"

    def text(self) -> str:
        if not self._terms:
            return "0"
        names = self.table.names
        parts = []
        for key, c in self.items():
            factors = [c.text()]
            for i, k in enumerate(key):
                if k == 1:
                    factors.append(names[i])
                elif k:
                    factors.append(f"{names[i]}^{k}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    # ----- ring operations -----
    def _check(self, other: "Poly") -> None:
        if self.table != other.table:
            raise TableMismatchError(
                f"variable tables differ: {self.table.names} vs {other.table.names}"
            )

    def _coerce(self, other: Union["Poly", Scalar]) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.const(self.table, other)

    def __add__(self, other: Union["Poly", Scalar]) -> "Poly":
        other = self._coerce(other)
        acc = dict(self._terms)
        for key, c in other._terms.items():
            if key in acc:
                s = acc[key] + c
                if s:
                    acc[key] = s
                else:
                    del acc[key]
            else:
                acc[key] = c
        return Poly._raw(self.table, acc)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.table, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other: Union["Poly", Scalar]) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Scalar) -> "Poly":
        return Poly.const(self.table, other) - self

    def scale(self, c: Scalar) -> "Poly":
        c = GaussRat.of(c)
        if not c:
            return Poly.zero(self.table)
        return Poly._raw(self.table, {k: v * c for k, v in self._terms.items()})

    def mul(self, other: "Poly", trunc: Optional[TruncationSpec] = None) -> "Poly":
        self._check(other)
        if not self._terms or not other._terms:
            return Poly.zero(self.table)
        vec = None
        bound = None
        if trunc is not None and trunc.bound is not None:
            vec = trunc.vector(self.table)
            bound = trunc.bound
        acc: Dict[Monomial, GaussRat] = {}
        right = list(other._terms.items())
        if vec is not None:
            right_w = [(_weight(k, vec), k, c) for k, c in right]
        for k1, c1 in self._terms.items():
            if vec is not None:
                w1 = _weight(k1, vec)
                pairs = [(k2, c2) for w2, k2, c2 in right_w if w1 + w2 <= bound]
            else:
                pairs = right
            for k2, c2 in pairs:
                key = tuple([a + b for a, b in zip(k1, k2)])
                c = c1 * c2
                if key in acc:
                    acc[key] = acc[key] + c
                else:
                    acc[key] = c
        return Poly._raw(self.table, {k: c for k, c in acc.items() if c})

    def __mul__(self, other: Union["Poly", Scalar]) -> "Poly":
        if isinstance(other, Poly):
            return self.mul(other)
        return self.scale(other)

    def __rmul__(self, other: Scalar) -> "Poly":
        return self.scale(other)

    def pow(self, k: int, trunc: Optional[TruncationSpec] = None) -> "Poly":
        if k < 0:
            raise ParameterError("negative powers are not polynomials")
        result = Poly.const(self.table, 1)
        for _ in range(k):
            result = result.mul(self, trunc)
        return result

    def __pow__(self, k: int) -> "Poly":
        return self.pow(k)

    # ----- involution -----
    def conj(self) -> "Poly":
        perm = self.table.conj_index
        out: Dict[Monomial, GaussRat] = {}
        for key, c in self._terms.items():
            new = [0] * len(key)
            for i, k in enumerate(key):
                if k:
                    new[perm[i]] = k
            out[tuple(new)] = c.conj()
        return Poly._raw(self.table, out)

    def re2(self) -> "Poly":
        """p + conj(p), the ubiquitous 2Re(p)."""
        return self + self.conj()

    def is_real(self) -> bool:
        return self.conj() == self

    # ----- calculus -----
    def diff(self, v: str) -> "Poly":
        i = self.table.position(v)
        out: Dict[Monomial, GaussRat] = {}
        for key, c in self._terms.items():
            k = key[i]
            if k:
                new = list(key)
                new[i] = k - 1
                out[tuple(new)] = c * k
        return Poly._raw(self.table, out)

    def truncate(self, trunc: Optional[TruncationSpec]) -> "Poly":
        if trunc is None or trunc.bound is None:
            return self
        vec = trunc.vector(self.table)
        return Poly._raw(
            self.table, {k: c for k, c in self._terms.items() if _weight(k, vec) <= trunc.bound}
        )

    def truncate_degree(self, v: str, order: int) -> "Poly":
        i = self.table.position(v)
        return Poly._raw(self.table, {k: c for k, c in self._terms.items() if k[i] <= order})

    def substitute(self, v: str, q: "Poly", trunc: Optional[TruncationSpec] = None) -> "Poly":
        self._check(q)
        if q.depends_on(v):
            raise SelfReferenceError(f"substituted polynomial still contains {v!r}")
        return self.compose({v: q}, trunc)

    def compose(self, mapping: Mapping[str, "Poly"], trunc: Optional[TruncationSpec] = None) -> "Poly":
        """Simultaneous substitution v -> mapping[v] for every key of ``mapping``."""
        idx = {}
        for v, q in mapping.items():
            self._check(q)
            idx[self.table.position(v)] = q
        if not idx:
            return self.truncate(trunc)
        powers: Dict[Tuple[int, int], Poly] = {}

        def power(i: int, k: int) -> Poly:
            if (i, k) not in powers:
                powers[(i, k)] = (
                    Poly.const(self.table, 1) if k == 0 else power(i, k - 1).mul(idx[i], trunc)
                )
            return powers[(i, k)]

        acc: Dict[Monomial, GaussRat] = {}
        for key, c in self._terms.items():
            rest = list(key)
            factor: Optional[Poly] = None
            for i in idx:
                if key[i]:
                    rest[i] = 0
                    p = power(i, key[i])
                    factor = p if factor is None else factor.mul(p, trunc)
            head = Poly._raw(self.table, {tuple(rest): c})
            piece = head if factor is None else head.mul(factor, trunc)
            for k2, c2 in piece._terms.items():
                if k2 in acc:
                    acc[k2] = acc[k2] + c2
                else:
                    acc[k2] = c2
        return Poly._raw(self.table, {k: c for k, c in acc.items() if c}).truncate(trunc)

    def retable(self, table: VarTable) -> "Poly":
        """Same polynomial over another table that names every variable used here."""
        names = self.table.names
        out: Dict[Monomial, GaussRat] = {}
        for key, c in self._terms.items():
            out[monomial(table, {names[i]: k for i, k in enumerate(key) if k})] = c
        return Poly._raw(table, out)

    # ----- evaluation -----
    def eval(self, point: Mapping[str, Scalar], real_locus: bool = False) -> GaussRat:
        values = {v: GaussRat.of(x) for v, x in point.items()}
        if real_locus:
            for h, a in zip(self.table.holo, self.table.anti):
                if h in values and a in values and values[a] != values[h].conj():
                    raise EvaluationError(f"{a} is not assigned the conjugate of {h}")
            for r in self.table.real:
                if r in values and not values[r].is_real():
                    raise EvaluationError(f"real variable {r} assigned a non-real value")
        names = self.table.names
        total = ZERO
        for key, c in self._terms.items():
            term = c
            for i, k in enumerate(key):
                if k:
                    try:
                        term = term * values[names[i]] ** k
                    except KeyError:
                        raise EvaluationError(f"no value assigned to {names[i]!r}") from None
            total = total + term
        return total
