"""Sparse fraction-free elimination over the integers.

Rows are dicts column -> int.  Eliminating column c of row R with pivot
row P (pivot entry a) replaces R by a*R - R[c]*P and strips the row
content, so entries stay integral and small; kernels come out as exact
rationals.
"""
from __future__ import annotations

import logging
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Mapping

logger = logging.getLogger(__name__)

Row = Dict[int, int]


def integer_row(row: Mapping[int, Fraction]) -> Row:
    """Scale a rational row to a primitive integer row."""
    den = 1
    for x in row.values():
        den = den * x.denominator // gcd(den, x.denominator)
    out = {c: int(x * den) for c, x in row.items() if x}
    return primitive(out)


def primitive(row: Row) -> Row:
    g = 0
    for x in row.values():
        g = gcd(g, x)
        if g == 1:
            return row
    if g > 1:
        return {c: x // g for c, x in row.items()}
    return row


def _combine(a: int, row: Row, b: int, pivot: Row) -> Row:
    """a*row - b*pivot with the resulting zeros dropped."""
    out = {c: a * x for c, x in row.items()}
    for c, y in pivot.items():
        v = out.get(c, 0) - b * y
        if v:
            out[c] = v
        else:
            out.pop(c, None)
    return primitive(out)


class Echelon:
    """Incremental row echelon form; each stored row's smallest column is its pivot."""

    def __init__(self, ncols: int) -> None:
        self.ncols = ncols
        self.pivots: Dict[int, Row] = {}
        self._reduced = True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add(self, row: Row) -> bool:
        row = primitive(dict(row))
        while row:
            c = min(row)
            pivot = self.pivots.get(c)
            if pivot is None:
                if row[c] < 0:
                    row = {k: -v for k, v in row.items()}
                self.pivots[c] = row
                self._reduced = False
                return True
            row = _combine(pivot[c], row, row[c], pivot)
        return False

    def reduce(self) -> None:
        """Back-substitute to reduced row echelon form."""
        if self._reduced:
            return
        order = sorted(self.pivots)
        for p in reversed(order):
            P = self.pivots[p]
            for q in order:
                if q >= p:
                    break
                Q = self.pivots[q]
                if p in Q:
                    self.pivots[q] = _combine(P[p], Q, Q[p], P)
        self._reduced = True

    def nullspace(self) -> List[Dict[int, Fraction]]:
        self.reduce()
        free = [c for c in range(self.ncols) if c not in self.pivots]
        by_free: Dict[int, List[int]] = {c: [] for c in free}
        for p, P in self.pivots.items():
            for c in P:
                if c != p:
                    by_free[c].append(p)
        basis = []
        for j in free:
            vec: Dict[int, Fraction] = {j: Fraction(1)}
            for p in by_free[j]:
                P = self.pivots[p]
                vec[p] = Fraction(-P[j], P[p])
            basis.append(vec)
        return basis


def echelon(rows: Iterable[Mapping[int, Fraction]], ncols: int) -> Echelon:
    ech = Echelon(ncols)
    for r in rows:
        if r:
            ech.add(integer_row(r))
    return ech


def rank(rows: Iterable[Mapping[int, Fraction]], ncols: int) -> int:
    return echelon(rows, ncols).rank


def nullspace(rows: Iterable[Mapping[int, Fraction]], ncols: int) -> List[Dict[int, Fraction]]:
    return echelon(rows, ncols).nullspace()
