"""Operator matrices on jet windows, exact kernels, graded profiles and parameter bounds.

A column is one real coordinate of one jet coefficient: (mu, component,
monomial, "re" | "im").  A row is one real coordinate of the residual on the
canonical half of conjugate monomial pairs.  Entries are Fractions.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from . import linalg
from .algebra import ONE, GaussRat, I, Monomial, Poly, VarTable, exponent_map, rational_text
from .errors import EmptyWindowError, ShapeMismatchError
from .grading import JetShape, jet_basis
from .metrics import ASSEMBLY_LATENCY, ELIMINATION_LATENCY, MATRIX_COLUMNS, timed
from .surfaces import ModelSurface
from .tangency import FieldJet, ResidualBuilder

logger = logging.getLogger(__name__)

RowKey = Tuple[Monomial, str]
ColKey = Tuple[int, str, Monomial, str]


class RowPolicy(str, enum.Enum):
    KERNEL = "kernel"  # all output weights of the depth-k operator on the window
    JET = "jet"  # output weights up to the top row of the window only


@dataclass(frozen=True)
class JetSpace:
    name: str
    shape: JetShape
    grading: str
    depth: int
    lo: int
    hi: int
    policy: RowPolicy = RowPolicy.KERNEL

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise EmptyWindowError(f"window {self.lo}..{self.hi} of {self.name} is empty")
        if self.depth < 1:
            raise ShapeMismatchError(f"depth must be >= 1, got {self.depth}")

    @property
    def window(self) -> Tuple[int, int]:
        return (self.lo, self.hi)

    def row_cap(self) -> Optional[int]:
        if self.policy == RowPolicy.JET:
            return self.shape.row_weight(self.hi)
        return None

    def row_bound(self, mu: int) -> int:
        bound = self.shape.row_weight(mu) + self.depth - 1
        cap = self.row_cap()
        return bound if cap is None else min(bound, cap)

    def with_window(self, lo: int, hi: int) -> "JetSpace":
        return JetSpace(self.name, self.shape, self.grading, self.depth, lo, hi, self.policy)


def monomial_text(table: VarTable, key: Monomial) -> str:
    exps = exponent_map(table, key)
    if not exps:
        return "1"
    return "*".join(v if k == 1 else f"{v}^{k}" for v, k in exps.items())


def conj_key(table: VarTable, key: Monomial) -> Monomial:
    out = [0] * len(key)
    for i, k in enumerate(key):
        if k:
            out[table.conj_index[i]] = k
    return tuple(out)


def real_coordinates(p: Poly) -> Iterator[Tuple[RowKey, Fraction]]:
    """Coordinates of a conj-fixed polynomial on the canonical half of its monomials."""
    for key, c in p.items():
        other = conj_key(p.table, key)
        if other == key:
            if c.re:
                yield (key, "re"), c.re
        elif key < other:
            if c.re:
                yield (key, "re"), c.re
            if c.im:
                yield (key, "im"), c.im


# =========================================================
# OPERATOR MATRIX
# =========================================================
@dataclass
class LinearOperatorMatrix:
    surface: str
    space: JetSpace
    table: VarTable
    rows: List[RowKey]
    cols: List[ColKey]
    columns: List[Dict[int, Fraction]]
    _echelon: Optional[linalg.Echelon] = field(default=None, repr=False)

    @property
    def size(self) -> Tuple[int, int]:
        return (len(self.rows), len(self.cols))

    def row_dicts(self) -> List[Dict[int, Fraction]]:
        out: List[Dict[int, Fraction]] = [{} for _ in self.rows]
        for j, col in enumerate(self.columns):
            for i, x in col.items():
                out[i][j] = x
        return out

    def echelon(self) -> linalg.Echelon:
        if self._echelon is None:
            with timed(ELIMINATION_LATENCY, self.surface):
                self._echelon = linalg.echelon(self.row_dicts(), len(self.cols))
            logger.info(
                f"{self.surface}/{self.space.name} {self.space.window}: "
                f"{len(self.rows)}x{len(self.cols)}, rank {self._echelon.rank}"
            )
        return self._echelon

    @property
    def rank(self) -> int:
        return self.echelon().rank

    @property
    def nullity(self) -> int:
        return len(self.cols) - self.rank

    def export_text(self) -> str:
        lines = [
            f"# surface {self.surface}",
            f"# space {self.space.name} grading {self.space.grading} depth {self.space.depth} "
            f"window {self.space.lo}..{self.space.hi} policy {self.space.policy.value}",
            f"# size {len(self.rows)} {len(self.cols)}",
        ]
        for i, (key, part) in enumerate(self.rows):
            lines.append(f"# row {i} {monomial_text(self.table, key)} {part}")
        for j, (mu, name, key, part) in enumerate(self.cols):
            lines.append(f"# col {j} {mu} {name} {monomial_text(self.table, key)} {part}")
        for i, row in enumerate(self.row_dicts()):
            for j in sorted(row):
                lines.append(f"{i} {j} {rational_text(row[j])}")
        return "\n".join(lines) + "\n"


def assemble(s: ModelSurface, space: JetSpace) -> LinearOperatorMatrix:
    s = s.regraded(space.grading)
    builder = ResidualBuilder(s, space.shape)
    rows: List[RowKey] = []
    row_index: Dict[RowKey, int] = {}
    cols: List[ColKey] = []
    columns: List[Dict[int, Fraction]] = []

    def add_column(label: ColKey, p: Poly) -> None:
        col: Dict[int, Fraction] = {}
        for rk, x in real_coordinates(p):
            i = row_index.get(rk)
            if i is None:
                i = row_index[rk] = len(rows)
                rows.append(rk)
            col[i] = x
        cols.append(label)
        columns.append(col)

    with timed(ASSEMBLY_LATENCY, s.name):
        for mu in range(space.lo, space.hi + 1):
            basis = jet_basis(space.shape, s.ws, mu, s.table)
            bound = space.row_bound(mu)
            logger.debug(f"{s.name}/{space.name}: weight {mu}, {len(basis)} coefficients, rows <= {bound}")
            for name, key in basis:
                A = builder.raw(name, Poly._raw(s.table, {key: ONE}), bound)
                add_column((mu, name, key, "re"), A.re2())
                add_column((mu, name, key, "im"), A.scale(I).re2())
    MATRIX_COLUMNS.labels(fixture=s.name).observe(len(cols))
    logger.info(f"assembled {s.name}/{space.name} window {space.window}: {len(rows)} rows, {len(cols)} columns")
    return LinearOperatorMatrix(s.name, space, s.table, rows, cols, columns)


def vector_to_jet(M: LinearOperatorMatrix, vec: Dict[int, Fraction]) -> FieldJet:
    comps: Dict[str, Dict[Monomial, GaussRat]] = {}
    for j, x in vec.items():
        if not x:
            continue
        _, name, key, part = M.cols[j]
        c = GaussRat(x, 0) if part == "re" else GaussRat(0, x)
        terms = comps.setdefault(name, {})
        terms[key] = terms[key] + c if key in terms else c
    return FieldJet(
        M.space.shape,
        M.table,
        {n: Poly(M.table, t) for n, t in comps.items()},
        M.space.window,
    )


def kernel_vectors(M: LinearOperatorMatrix) -> List[Dict[int, Fraction]]:
    return M.echelon().nullspace()


def kernel_basis(M: LinearOperatorMatrix) -> List[FieldJet]:
    return [vector_to_jet(M, v) for v in kernel_vectors(M)]


# =========================================================
# PROFILES AND BOUNDS
# =========================================================
@dataclass(frozen=True)
class GradedProfile:
    dims: Dict[int, int]
    window: Tuple[int, int]
    stabilized: bool
    bases: Dict[int, List[FieldJet]] = field(default_factory=dict, compare=False)

    @property
    def total(self) -> int:
        return sum(self.dims.values())

    def to_json(self) -> Dict[str, object]:
        return {
            "weights": {str(mu): d for mu, d in sorted(self.dims.items())},
            "total": self.total,
            "window": list(self.window),
            "stabilized": self.stabilized,
        }


def graded_space(shape: JetShape, grading: str, mu: int) -> JetSpace:
    return JetSpace(f"{shape.name}@{mu}", shape, grading, 1, mu, mu, RowPolicy.KERNEL)


def graded_profile(
    s: ModelSurface,
    shape: JetShape,
    mu_range: Tuple[int, int],
    with_bases: bool = False,
) -> GradedProfile:
    lo, hi = mu_range
    if lo > hi:
        raise EmptyWindowError(f"weight range {lo}..{hi} is empty")
    dims: Dict[int, int] = {}
    bases: Dict[int, List[FieldJet]] = {}
    for mu in range(lo, hi + 1):
        M = assemble(s, graded_space(shape, s.ws.name, mu))
        dims[mu] = M.nullity
        if with_bases or dims[mu]:
            bases[mu] = kernel_basis(M) if dims[mu] else []
    top = [dims[mu] for mu in range(max(lo, hi - 1), hi + 1)]
    stabilized = hi - lo >= 1 and all(d == 0 for d in top)
    return GradedProfile(dims, (lo, hi), stabilized, bases)


def stabilizer_count(jets: Sequence[FieldJet]) -> int:
    """Fields vanishing at the origin: count minus the real rank of evaluation at 0."""
    rows: List[Dict[int, Fraction]] = []
    for X in jets:
        row: Dict[int, Fraction] = {}
        for i, name in enumerate(X.shape.names):
            c = X[name].constant_term()
            if c.re:
                row[2 * i] = c.re
            if c.im:
                row[2 * i + 1] = c.im
        rows.append(row)
    if not jets:
        return 0
    # rank of the evaluation map equals the row rank of this (fields x coordinates) matrix
    ncols = 2 * len(jets[0].shape.names)
    return len(jets) - linalg.rank(rows, ncols)


def param_bound(s: ModelSurface, space: JetSpace) -> int:
    return assemble(s, space).nullity


def restrict_to_window(phi: FieldJet, s: ModelSurface, space: JetSpace) -> FieldJet:
    ws = s.regraded(space.grading).ws
    out = FieldJet.zero(phi.shape, phi.table)
    for mu, part in phi.by_weight(ws).items():
        if space.lo <= mu <= space.hi:
            out = out + part
    return out


def solution_residual(s: ModelSurface, space: JetSpace, phi: FieldJet) -> Poly:
    if phi.shape.names != space.shape.names:
        raise ShapeMismatchError(f"jet of shape {phi.shape.name} checked against space {space.name}")
    s = s.regraded(space.grading)
    builder = ResidualBuilder(s, space.shape)
    return builder.linearized(restrict_to_window(phi, s, space), space.depth, space.row_cap())


def verify_solution(s: ModelSurface, space: JetSpace, phi: FieldJet) -> bool:
    """True iff the windowed part of ``phi`` solves the depth-k equations at every admissible row."""
    ok = solution_residual(s, space, phi).is_zero()
    if not ok:
        logger.debug(f"{space.name}: jet is not a window solution on {s.name}")
    return ok
