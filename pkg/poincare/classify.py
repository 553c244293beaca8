"""Pairs (Hermitian form, quadratic form) on C^2: normal-form classes, G0 algebras, jet action.

Conventions: <z, z_bar> = sum H_ij z_i z_bar_j and K(z, z) = z^T K z with
K = [[k, l], [l, m]].  A linear change z -> C z sends (H, K) to
(C^T H C_bar, C^T K C).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from . import linalg
from .algebra import ONE, ZERO, GaussRat, I, Poly, Scalar, VarTable, rational_text
from .errors import DegenerateFormError, ParameterError, ShapeMismatchError
from .fixtures import space
from .kernel import param_bound
from .surfaces import PAIR_IDS, PAIR_TABLE, ModelSurface, hermitian_form, pair_matrices, quadratic_form

logger = logging.getLogger(__name__)

Matrix = List[List[GaussRat]]


# =========================================================
# 2x2 MATRICES
# =========================================================
def mat(rows: Sequence[Sequence[Scalar]]) -> Matrix:
    out = [[GaussRat.of(x) for x in row] for row in rows]
    if len(out) != 2 or any(len(r) != 2 for r in out):
        raise ShapeMismatchError("expected a 2x2 matrix")
    return out


def identity() -> Matrix:
    return [[ONE, ZERO], [ZERO, ONE]]


def mul(A: Matrix, B: Matrix) -> Matrix:
    return [[A[i][0] * B[0][j] + A[i][1] * B[1][j] for j in range(2)] for i in range(2)]


def transpose(A: Matrix) -> Matrix:
    return [[A[j][i] for j in range(2)] for i in range(2)]


def conj(A: Matrix) -> Matrix:
    return [[x.conj() for x in row] for row in A]


def det(A: Matrix) -> GaussRat:
    return A[0][0] * A[1][1] - A[0][1] * A[1][0]


def inverse(A: Matrix) -> Matrix:
    d = det(A)
    if d.is_zero():
        raise DegenerateFormError("matrix is singular")
    return [[A[1][1] / d, -A[0][1] / d], [-A[1][0] / d, A[0][0] / d]]


def scale(A: Matrix, c: Scalar) -> Matrix:
    return [[x * c for x in row] for row in A]


def is_scalar(A: Matrix) -> bool:
    return A[0][1].is_zero() and A[1][0].is_zero() and A[0][0] == A[1][1]


def matrix_text(A: Matrix) -> List[List[str]]:
    return [[x.text() for x in row] for row in A]


def congruence(H: Matrix, K: Matrix, C: Matrix) -> Tuple[Matrix, Matrix]:
    """(C^T H C_bar, C^T K C)."""
    Ct = transpose(C)
    return mul(mul(Ct, H), conj(C)), mul(mul(Ct, K), C)


def _rational_sqrt(x: Fraction) -> Optional[Fraction]:
    if x < 0:
        return None
    num, den = x.numerator, x.denominator
    rn, rd = _isqrt(num), _isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def _isqrt(n: int) -> int:
    if n < 2:
        return n
    x = n
    y = (x + 1) // 2
    while y < x:
        x, y = y, (y + n // y) // 2
    return x


# =========================================================
# FORM PAIRS
# =========================================================
@dataclass(frozen=True)
class FormPair:
    H: Matrix
    K: Matrix

    def __post_init__(self) -> None:
        H, K = mat(self.H), mat(self.K)
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "K", K)
        for i in range(2):
            for j in range(2):
                if H[i][j] != H[j][i].conj():
                    raise ParameterError("H is not Hermitian")
        if K[0][1] != K[1][0]:
            raise ParameterError("K is not symmetric")
        if det(H).is_zero():
            raise DegenerateFormError("the Hermitian form is degenerate (det H = 0)")
        if all(x.is_zero() for row in K for x in row):
            raise DegenerateFormError("the quadratic form K vanishes identically")

    @classmethod
    def from_coefficients(cls, H: Sequence[Sequence[Scalar]], k: Scalar, l: Scalar, m: Scalar) -> "FormPair":
        return cls(mat(H), mat([[k, l], [l, m]]))

    @classmethod
    def normal_form(cls, pair_id: int, k: Scalar = 1, m: Scalar = 0) -> "FormPair":
        H, K = pair_matrices(pair_id, Fraction(GaussRat.of(k).re), GaussRat.of(m))
        return cls(H, K)

    def transformed(self, C: Matrix) -> "FormPair":
        return FormPair(*congruence(self.H, self.K, C))

    def to_json(self) -> Dict[str, Any]:
        return {"H": matrix_text(self.H), "K": matrix_text(self.K)}


@dataclass(frozen=True)
class PairClass:
    id: int
    params: Dict[str, str] = field(default_factory=dict)
    witness: Optional[Matrix] = None
    needs_extension: bool = False

    def __post_init__(self) -> None:
        if self.id not in PAIR_IDS:
            raise ParameterError(f"class id must be 1..9, got {self.id}")

    def to_json(self) -> Dict[str, Any]:
        return {
            "class": self.id,
            "params": dict(self.params),
            "witness": matrix_text(self.witness) if self.witness is not None else None,
            "needs_extension": self.needs_extension,
        }


def pencil_operator(p: FormPair) -> Matrix:
    """H_bar^-1 K_bar H^-1 K; transforms by similarity under z -> C z."""
    return mul(mul(inverse(conj(p.H)), conj(p.K)), mul(inverse(p.H), p.K))


def induced_s_form(p: FormPair, table: VarTable = PAIR_TABLE) -> Poly:
    """4 <H^-1 K z, conj(K z)>, the |zeta|^2 coefficient that 2-nondegeneracy forces."""
    z = [Poly.var(table, "z1"), Poly.var(table, "z2")]
    Kz = [z[0].scale(p.K[i][0]) + z[1].scale(p.K[i][1]) for i in range(2)]
    G = inverse(p.H)
    out = Poly.zero(table)
    for i in range(2):
        for j in range(2):
            if G[i][j]:
                out = out + (Kz[i] * Kz[j].conj()).scale(G[i][j])
    return out.scale(4)


def _real(x: GaussRat, what: str) -> Fraction:
    if not x.is_real():
        raise ParameterError(f"{what} is not real: {x.text()}")
    return x.re


def _null_kernel_vector(K: Matrix) -> Matrix:
    """A nonzero vector spanning ker K for rank-one K, as a 2x1 column."""
    if not (K[0][0].is_zero() and K[0][1].is_zero()):
        return [[-K[0][1]], [K[0][0]]]
    return [[-K[1][1]], [K[1][0]]]


def _class_id(p: FormPair) -> int:
    dH = _real(det(p.H), "det H")
    definite = dH > 0
    if det(p.K).is_zero():
        if definite:
            return 3
        v = _null_kernel_vector(p.K)
        hv = sum((v[i][0] * p.H[i][j] * v[j][0].conj() for i in range(2) for j in range(2)), ZERO)
        return 6 if not hv.is_zero() else 9
    B = pencil_operator(p)
    tr = _real(B[0][0] + B[1][1], "trace of the pencil operator")
    dt = _real(det(B), "determinant of the pencil operator")
    disc = tr * tr - 4 * dt
    if disc < 0:
        if definite:
            raise ParameterError("definite pair with non-real pencil eigenvalues")
        return 7
    if disc > 0:
        return 1 if definite else 4
    if not is_scalar(B):
        raise ParameterError("pencil operator is not diagonalizable; the pair is outside the normal-form list")
    if definite:
        return 2
    return 5 if tr > 0 else 8


def _params(cid: int, p: FormPair) -> Dict[str, str]:
    if cid in (3, 6, 9):
        return {}
    B = pencil_operator(p)
    tr = B[0][0].re + B[1][1].re
    dt = det(B).re
    out = {"trace": rational_text(tr), "det": rational_text(dt)}
    disc = tr * tr - 4 * dt
    root = _rational_sqrt(disc)
    if root is not None:
        lo, hi = (tr - root) / 2, (tr + root) / 2
        k, m = _rational_sqrt(lo), _rational_sqrt(hi)
        if k is not None and m is not None and cid in (1, 2, 4, 5):
            out["k"], out["m"] = rational_text(k), rational_text(m)
    return out


def _witness(cid: int, p: FormPair) -> Optional[Matrix]:
    """A rational C with (C^T H C_bar, C^T K C) in the class's normal shape, when one is found directly."""
    H, K = p.H, p.K
    if not (K[0][1].is_zero() and K[1][0].is_zero()):
        return None
    if H[0][1].is_zero():
        h = [H[0][0].re, H[1][1].re]
        # the sign of H is absorbed by rho, so only a rank-one K fixes the order
        order = [1, 0] if cid in (3, 6) and K[0][0].is_zero() else [0, 1]
        c = [_rational_sqrt(abs(h[i])) for i in order]
        if any(x is None or x == 0 for x in c):
            return None
        C = [[ZERO, ZERO], [ZERO, ZERO]]
        for col, row in enumerate(order):
            C[row][col] = GaussRat(1 / c[col])
    elif H[0][0].is_zero() and H[1][1].is_zero():
        if K[0][0].is_zero():
            return None
        C = [[H[0][1].inverse(), ZERO], [ZERO, ONE]]
    else:
        return None
    H2, K2 = congruence(H, K, C)
    if not (H2[0][1].is_zero() or (H2[0][0].is_zero() and H2[1][1].is_zero())):
        return None
    if not (K2[0][1].is_zero() and K2[1][0].is_zero()):
        return None
    return C


def classify_pair(p: FormPair) -> PairClass:
    cid = _class_id(p)
    witness = _witness(cid, p)
    logger.debug(f"pair classified as {cid}, witness {'found' if witness else 'not rational'}")
    return PairClass(cid, _params(cid, p), witness, witness is None)


# =========================================================
# G0 LIE ALGEBRA
# =========================================================
# unknowns: A_ij = x[2(2i+j)] + i x[2(2i+j)+1], r = x[8], b = x[9] + i x[10]
G0_UNKNOWNS = 11


def _A(i: int, j: int, bar: bool = False) -> Dict[int, GaussRat]:
    n = 2 * (2 * i + j)
    return {n: ONE, n + 1: -I if bar else I}


_R: Dict[int, GaussRat] = {8: ONE}
_BBAR: Dict[int, GaussRat] = {9: ONE, 10: -I}


def _accumulate(acc: Dict[int, GaussRat], form: Dict[int, GaussRat], c: GaussRat) -> None:
    if c.is_zero():
        return
    for k, v in form.items():
        acc[k] = acc.get(k, ZERO) + v * c


def _real_rows(eq: Dict[int, GaussRat]) -> List[Dict[int, Fraction]]:
    re = {k: v.re for k, v in eq.items() if v.re}
    im = {k: v.im for k, v in eq.items() if v.im}
    return [r for r in (re, im) if r]


@dataclass(frozen=True)
class G0Algebra:
    dim: int
    basis: List[Tuple[Matrix, Fraction, GaussRat]]

    def to_json(self) -> Dict[str, Any]:
        return {
            "dim": self.dim,
            "basis": [
                {"A": matrix_text(A), "r": rational_text(r), "b": b.text()} for A, r, b in self.basis
            ],
        }


def g0_equations(p: FormPair) -> List[Dict[int, Fraction]]:
    """Linearization of <Cz, conj(Cz)> = rho <z,z_bar> and K(Cz,Cz) = (rho/beta_bar) K(z,z) at the identity."""
    H, K = p.H, p.K
    rows: List[Dict[int, Fraction]] = []
    for a in range(2):
        for c in range(2):
            eq: Dict[int, GaussRat] = {}
            for k in range(2):
                _accumulate(eq, _A(k, a), H[k][c])
                _accumulate(eq, _A(k, c, bar=True), H[a][k])
            _accumulate(eq, _R, -H[a][c])
            rows.extend(_real_rows(eq))
            eq = {}
            for k in range(2):
                _accumulate(eq, _A(k, a), K[k][c])
                _accumulate(eq, _A(k, c), K[a][k])
            _accumulate(eq, _R, -K[a][c])
            _accumulate(eq, _BBAR, K[a][c])
            rows.extend(_real_rows(eq))
    return rows


def g0_dim(p: FormPair) -> G0Algebra:
    null = linalg.nullspace(g0_equations(p), G0_UNKNOWNS)
    basis = []
    for vec in null:
        x = [vec.get(i, Fraction(0)) for i in range(G0_UNKNOWNS)]
        A = [[GaussRat(x[2 * (2 * i + j)], x[2 * (2 * i + j) + 1]) for j in range(2)] for i in range(2)]
        basis.append((A, x[8], GaussRat(x[9], x[10])))
    return G0Algebra(len(null), basis)


def representative_pair(pair_id: int) -> FormPair:
    """Normal form of the class with fixed admissible parameters."""
    k = 1
    m: Scalar = {1: 2, 4: 2, 7: I, 8: -1}.get(pair_id, 0)
    return FormPair.normal_form(pair_id, k, m)


def g0_table() -> Tuple[int, ...]:
    return tuple(g0_dim(representative_pair(j)).dim for j in PAIR_IDS)


# Widely quoted per-class dimensions; classes 7 and 9 disagree with the exact linearization.
LISTED_G0_DIMS = {1: 2, 2: 3, 3: 3, 4: 2, 5: 3, 6: 3, 7: 3, 8: 3, 9: 3}


def g0_table_note(pair_class: int, dim: int) -> Optional[str]:
    listed = LISTED_G0_DIMS.get(pair_class)
    if listed is None or listed == dim:
        return None
    return f"class {pair_class}: computed g0 dimension {dim} differs from the listed value {listed}"


# =========================================================
# JET ACTION
# =========================================================
@dataclass(frozen=True)
class JetGroupElement:
    C: Matrix
    rho: Fraction
    beta: GaussRat
    a: Tuple[GaussRat, GaussRat] = (ZERO, ZERO)
    alpha: Tuple[GaussRat, GaussRat] = (ZERO, ZERO)

    def __post_init__(self) -> None:
        object.__setattr__(self, "C", mat(self.C))
        object.__setattr__(self, "rho", Fraction(self.rho))
        object.__setattr__(self, "beta", GaussRat.of(self.beta))
        object.__setattr__(self, "a", tuple(GaussRat.of(x) for x in self.a))
        object.__setattr__(self, "alpha", tuple(GaussRat.of(x) for x in self.alpha))
        if det(self.C).is_zero():
            raise ParameterError("C must be invertible")
        if self.rho == 0:
            raise ParameterError("rho must be nonzero")
        if self.beta.is_zero():
            raise ParameterError("beta must be nonzero")

    @classmethod
    def identity(cls) -> "JetGroupElement":
        return cls(identity(), Fraction(1), ONE)

    def then(self, other: "JetGroupElement") -> "JetGroupElement":
        """Apply ``self`` first, then ``other``; the K-level action composes this way."""
        return JetGroupElement(mul(other.C, self.C), self.rho * other.rho, self.beta * other.beta)


def act_on_pair(e: JetGroupElement, p: FormPair) -> FormPair:
    """H = rho C^-T H C_bar^-1 must hold; K~ = (rho / beta_bar) C^-T K C^-1."""
    Ci = inverse(e.C)
    H2, K2 = congruence(p.H, p.K, Ci)
    if scale(H2, e.rho) != p.H:
        raise ParameterError("(C, rho) does not preserve the Hermitian form")
    return FormPair(p.H, scale(K2, GaussRat(e.rho) / e.beta.conj()))


def pair_from_surface(s: ModelSurface) -> FormPair:
    for v in ("z1", "z2", "zeta"):
        if v not in s.table.holo:
            raise ShapeMismatchError(f"{s.name} is not a two-nondegenerate model over (z1, z2, zeta, w)")
    zs = ("z1", "z2")
    H = [[s.F.coeff({zs[i]: 1, f"{zs[j]}_bar": 1}) for j in range(2)] for i in range(2)]
    k = s.F.coeff({"z1": 2, "zeta_bar": 1})
    l = s.F.coeff({"z1": 1, "z2": 1, "zeta_bar": 1}) / 2
    m = s.F.coeff({"z2": 2, "zeta_bar": 1})
    return FormPair(H, [[k, l], [l, m]])


def jet_action(e: JetGroupElement, s: ModelSurface) -> ModelSurface:
    """The 3-jet v = <z,z_bar> + 2Re(K~(z,z) zeta_bar) of the image surface."""
    p = act_on_pair(e, pair_from_surface(s))
    T = s.table
    z = [Poly.var(T, "z1"), Poly.var(T, "z2")]
    F = hermitian_form(T, p.H, ("z1", "z2")) + (quadratic_form(T, p.K, z) * Poly.var(T, "zeta_bar")).re2()
    return ModelSurface(f"{s.name}~", T, s.ws, F, 3, {"K": matrix_text(p.K)})


# =========================================================
# THREE-NONDEGENERATE JETS
# =========================================================
@dataclass(frozen=True)
class JetFamily13:
    """Origin-preserving 3-jet family of the 3-nondegenerate model: lambda in C*, a, alpha, beta, nu in C, gamma, delta, kappa real."""

    lam: GaussRat = ONE
    a: GaussRat = ZERO
    alpha: GaussRat = ZERO
    beta: GaussRat = ZERO
    nu: GaussRat = ZERO
    gamma: Fraction = Fraction(0)
    delta: Fraction = Fraction(0)
    kappa: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        for n in ("lam", "a", "alpha", "beta", "nu"):
            object.__setattr__(self, n, GaussRat.of(getattr(self, n)))
        for n in ("gamma", "delta", "kappa"):
            object.__setattr__(self, n, Fraction(getattr(self, n)))
        if self.lam.is_zero():
            raise ParameterError("lambda must be nonzero")

    @staticmethod
    def real_parameter_count() -> int:
        return 2 + 2 * 4 + 3

    def tau(self) -> GaussRat:
        # the kappa direction is the imaginary part of the z^2 coefficient of zeta
        a, al = self.a, self.alpha
        t = 2 * a * I + al
        re = (
            self.delta
            - 2 * al.norm2()
            - a.norm2() / 2
            - t.norm2() / 2
            - 2 * (I * a * al.conj()).re
        )
        return GaussRat(re, self.kappa)

    def map_components(self, table: VarTable) -> Dict[str, Poly]:
        """The polynomial map z, zeta, eta, w -> ... of the family."""
        T = table
        z, zeta, eta, w = (Poly.var(T, v) for v in ("z", "zeta", "eta", "w"))
        lam, a, al, be, nu = self.lam, self.a, self.alpha, self.beta, self.nu
        ab, alb, bb = a.conj(), al.conj(), be.conj()
        c2 = 2 * I * ab - alb
        c3 = -4 * ab * ab + 2 * I * ab * alb + 2 * bb - nu.conj()
        czw = GaussRat(a.norm2() - 2 * (a * alb).re, self.delta)
        f = z + w.scale(a) + (z * z).scale(c2) + (z * z * z).scale(c3) + (z * w).scale(czw) + (zeta * w).scale(ab)
        g = zeta + z.scale(al) + (z * z).scale(self.tau()) + (z * zeta).scale(I * a + 2 * al) + w.scale(be)
        h = eta + z.scale(nu) - zeta.scale(a)
        e = (
            w
            + (z * w).scale(2 * I * ab)
            + (z * z * w).scale(2 * I * ab * ab - ab * alb + bb)
            + (w * w).scale(GaussRat(self.gamma, a.norm2()))
        )
        lb = lam.conj()
        return {
            "z": f.scale(lam),
            "zeta": g.scale(lam / lb),
            "eta": h.scale(lam / (lb * lb)),
            "w": e.scale(GaussRat(lam.norm2())),
        }


def jet13_dim_check(s: ModelSurface) -> int:
    """Dimension of the origin-preserving low-weight jet solutions; 13 for every 3-nondegenerate model."""
    if s.table.holo != ("z", "zeta", "eta", "w"):
        raise ShapeMismatchError(f"{s.name} is not a 3-nondegenerate model over (z, zeta, eta, w)")
    return param_bound(s, space("jet13"))


def jet13_uniqueness_slice(s: ModelSurface, hi: int = 9) -> int:
    """Solutions vanishing through weight 4, i.e. the V5 window kernel; 0 means the 3-jet determines the map."""
    return param_bound(s, space("V5", (5, hi)))
