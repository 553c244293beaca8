"""Closed-form solutions of the linearized equations of two-nondegenerate models."""
from __future__ import annotations

import logging
from typing import List, Optional

from .algebra import GaussRat, I, Poly, Scalar, VarTable
from .errors import VerificationFailure
from .flows import RationalFunction
from .grading import JetShape, two_nondeg_w1_shape, two_nondeg_w2_shape
from .surfaces import PAIR_TABLE, TwoNondegParams, two_nondeg
from .tangency import FieldJet, ResidualBuilder, explicit_L_2nd

logger = logging.getLogger(__name__)


def pair9_family(n1: Scalar, n2: Scalar, r1: Scalar, hi: int = 12, table: VarTable = PAIR_TABLE) -> FieldJet:
    """The 4-real-parameter solution family of pair 9 with R = r1 z1^2, expanded through jet weight ``hi`` under W2.

    f1 = i n1_bar z1^2, f2 = 2i n1_bar z1 z2 - n2_bar z1^2 + n1 w,
    g = (n2 z1 - i n1 z2 + 2i n1_bar z1 zeta) / (1 + 2 r1_bar zeta), h = 2i n1_bar z1 w.
    """
    T = table
    n1, n2, r1 = GaussRat.of(n1), GaussRat.of(n2), GaussRat.of(r1)
    n1b = n1.conj()
    z1, z2, zeta, w = (Poly.var(T, v) for v in ("z1", "z2", "zeta", "w"))
    shape = two_nondeg_w2_shape()
    ws = two_nondeg(TwoNondegParams(9, R=(r1, 0, 0))).regraded("W2").ws
    g = RationalFunction.frac(
        z1.scale(n2) - z2.scale(I * n1) + (z1 * zeta).scale(2 * I * n1b),
        Poly.const(T, 1) + zeta.scale(2 * r1.conj()),
    )
    comps = {
        "f1": (z1 * z1).scale(I * n1b),
        "f2": (z1 * z2).scale(2 * I * n1b) - (z1 * z1).scale(n2.conj()) + w.scale(n1),
        "g": g.expand(ws, hi - shape.component("g").offset),
        "h": (z1 * w).scale(2 * I * n1b),
    }
    return FieldJet(shape, T, comps).truncate_jet(ws, hi)


def pair9_family_basis(r1: Scalar, hi: int = 12) -> List[FieldJet]:
    """Real basis n1 in {1, i}, n2 in {1, i}."""
    out = []
    for n1, n2 in ((1, 0), (I, 0), (0, 1), (0, I)):
        out.append(pair9_family(n1, n2, r1, hi))
    return out


def trivial_solutions(shape: Optional[JetShape] = None, table: VarTable = PAIR_TABLE) -> List[FieldJet]:
    """h = 1, and the dilation f = z, g = 0, h = 2w."""
    shape = shape or two_nondeg_w1_shape()
    T = table
    return [
        FieldJet(shape, T, {"h": Poly.const(T, 1)}),
        FieldJet(shape, T, {"f1": Poly.var(T, "z1"), "f2": Poly.var(T, "z2"), "h": Poly.var(T, "w").scale(2)}),
    ]


def zeta4_jet(table: VarTable = PAIR_TABLE, gamma: Scalar = 1) -> FieldJet:
    return FieldJet(two_nondeg_w2_shape(), table, {"h": Poly.term(table, {"zeta": 4}, gamma)})


def zeta4_obstruction(p: TwoNondegParams) -> bool:
    """True when the only W2-weight-4 jet (0, 0, zeta^4) is not annihilated, so it cannot start a solution."""
    phi = zeta4_jet()
    explicit = explicit_L_2nd(phi, p)
    s = two_nondeg(p).regraded("W2")
    derived = ResidualBuilder(s, phi.shape).linearized(phi, 2)
    if explicit != derived:
        logger.error(f"pair {p.pair_id}: derived and explicit operators disagree on (0, 0, zeta^4)")
        raise VerificationFailure(
            f"pair {p.pair_id}: derived and explicit operators disagree on (0, 0, zeta^4)",
            {"pair": p.pair_id, "explicit": explicit.text(), "derived": derived.text()},
        )
    return not explicit.is_zero()
