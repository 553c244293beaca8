"""Named verification suites run by ``verify``.

A check returns ``None`` when it holds and a short failure detail otherwise.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence

from .algebra import GaussRat
from .classify import (
    FormPair,
    JetGroupElement,
    act_on_pair,
    classify_pair,
    g0_table,
    induced_s_form,
    jet13_dim_check,
    jet13_uniqueness_slice,
    representative_pair,
)
from .config import EngineConfig
from .errors import PoincareError, UnknownFixtureError
from .fixtures import ParamSampler, fixture, space
from .flows import (
    QPoint,
    RationalMap,
    exponentiate_check,
    flow_generator,
    g0_flow_series,
    g1_flow,
    g_minus2_flow_series,
    lie_series,
    q_translation,
    rational_flow_series,
    shear_z1,
    shear_z2,
    verify_exact_automorphism,
)
from .grading import graded_component, j6_shape, q_shape, two_nondeg_w1_shape, two_nondeg_w2_shape
from .kernel import GradedProfile, assemble, graded_profile, kernel_basis, param_bound, stabilizer_count, verify_solution
from .metrics import CHECK_COUNT
from .reports import CheckResult, VerifyPayload
from .solutions import pair9_family_basis, trivial_solutions, zeta4_obstruction
from .surfaces import PAIR_IDS, PAIR_TABLE, TwoNondegParams, cubic_q, hessian3_det, levi_minors, reliable_weight, s_form, three_nondeg_j6, two_nondeg
from .tangency import ResidualBuilder, explicit_L_2nd, explicit_L_j6, tangency_residual

logger = logging.getLogger(__name__)

Q_PROFILE = {-3: 1, -2: 2, -1: 5, 0: 5, 1: 3, 2: 0, 3: 0}
Q_STABILIZER = 9
QUADRIC_TOTALS = {"quadric-c2": 8, "quadric-c3": 15, "quadric-c4": 24, "quadric-c4-split": 24}
QUADRIC_C4_SPLIT = {-2: 1, -1: 6, 0: 10, 1: 6, 2: 1}
G0_TABLE = (2, 3, 3, 2, 3, 3, 2, 3, 4)
FLOW_POINTS = 5
FLOW_ORDER = 4

CheckFn = Callable[[EngineConfig], Optional[str]]


@dataclass(frozen=True)
class SuiteCheck:
    name: str
    reference: str
    run: CheckFn


SUITES: Dict[str, List[SuiteCheck]] = {}


def check(suite: str, name: str, reference: str) -> Callable[[CheckFn], CheckFn]:
    def register(fn: CheckFn) -> CheckFn:
        SUITES.setdefault(suite, []).append(SuiteCheck(name, reference, fn))
        return fn

    return register


def _expect(actual, expected, what: str) -> Optional[str]:
    return None if actual == expected else f"{what}: expected {expected}, got {actual}"


def _first(details: Sequence[Optional[str]]) -> Optional[str]:
    return next((d for d in details if d), None)


# =========================================================
# AUT
# =========================================================
@lru_cache(maxsize=None)
def _q_profile() -> GradedProfile:
    return graded_profile(cubic_q(), q_shape(), (-3, 3), with_bases=True)


@check("aut", "aut-q-profile", "graded profile of aut Q sums to 16")
def _aut_q_profile(config: EngineConfig) -> Optional[str]:
    prof = _q_profile()
    return _first([_expect(prof.dims, Q_PROFILE, "profile"), _expect(prof.total, 16, "total")])


@check("aut", "aut-q-stabilizer", "isotropy of aut Q at the origin has dimension 9")
def _aut_q_stabilizer(config: EngineConfig) -> Optional[str]:
    jets = [X for basis in _q_profile().bases.values() for X in basis]
    return _expect(stabilizer_count(jets), Q_STABILIZER, "stabilizer")


@check("aut", "aut-quadrics", "quadric algebras have dimensions 8, 15 and 24")
def _aut_quadrics(config: EngineConfig) -> Optional[str]:
    details = []
    for name, total in QUADRIC_TOTALS.items():
        fx = fixture(name)
        prof = graded_profile(fx.surface(), fx.aut_shape(), fx.aut_range)
        details.append(_expect(prof.total, total, name))
        if name == "quadric-c4":
            details.append(_expect({mu: d for mu, d in prof.dims.items() if d}, QUADRIC_C4_SPLIT, "C^4 split"))
    return _first(details)


# =========================================================
# KERNEL
# =========================================================
@check("kernel", "j6-v5-trivial", "no window solutions on V5 for 3-nondegenerate models")
def _j6_v5(config: EngineConfig) -> Optional[str]:
    details = [_expect(param_bound(fixture("j6-zero").surface(), space("V5")), 0, "j6-zero")]
    for seed in config.SEEDS:
        s = fixture("j6-generic").surface(seed, config.PARAM_BOUND)
        details.append(_expect(param_bound(s, space("V5")), 0, f"j6-generic seed {seed}"))
    return _first(details)


@check("kernel", "j6-v0-constant", "extending the window to weight 0 adds only the constant e-direction")
def _j6_v0(config: EngineConfig) -> Optional[str]:
    s = fixture("j6-generic").surface(config.SEEDS[0], config.PARAM_BOUND)
    basis = kernel_basis(assemble(s, space("V0")))
    if len(basis) != 1:
        return f"expected one solution, got {len(basis)}"
    X = basis[0]
    if any(X[n] for n in ("f", "g", "h")) or X["e"].variables():
        return f"solution is not a constant e-direction: {X['e'].text()}"
    return None


@check("kernel", "j6-jet13", "origin-preserving low-weight jets form a 13-dimensional family")
def _j6_jet13(config: EngineConfig) -> Optional[str]:
    return _first(
        [
            _expect(jet13_dim_check(fixture("j6-zero").surface()), 13, "j6-zero"),
            _expect(jet13_dim_check(fixture("j6-generic").surface(config.SEEDS[0], config.PARAM_BOUND)), 13, "j6-generic"),
            _expect(jet13_uniqueness_slice(fixture("j6-zero").surface()), 0, "uniqueness slice"),
        ]
    )


@check("kernel", "pair9-special-family", "the pair-9 model with R = r1 z1^2 has a 4-parameter solution family")
def _pair9(config: EngineConfig) -> Optional[str]:
    details = []
    for name, r1 in (("pair9-special", Fraction(1, 2)), ("pair9-special-3", Fraction(3))):
        s = fixture(name).surface()
        sp = space("V5tilde")
        details.append(_expect(param_bound(s, sp), 4, name))
        bad = [i for i, phi in enumerate(pair9_family_basis(r1, sp.hi)) if not verify_solution(s, sp, phi)]
        details.append(f"{name}: family members {bad} are not solutions" if bad else None)
    return _first(details)


@check("kernel", "pair-generic-trivial", "generic pairs 1 and 5 admit no window solutions")
def _pair_generic(config: EngineConfig) -> Optional[str]:
    details = []
    for name in ("pair1-generic", "pair5-generic"):
        for seed in config.SEEDS:
            s = fixture(name).surface(seed, config.PARAM_BOUND)
            details.append(_expect(param_bound(s, space("V5tilde")), 0, f"{name} seed {seed}"))
    return _first(details)


# =========================================================
# CLASSIFY
# =========================================================
# K given as (k, m, l)
CLASSIFY_EXAMPLES = (
    (((1, 0), (0, 1)), (1, 2, 0), 1, {"k": "1/1", "m": "2/1"}),
    (((1, 0), (0, -1)), (1, 1, 0), 5, {}),
    (((0, 1), (1, 0)), (1, 0, 0), 9, {}),
)


@check("classify", "classify-examples", "normal-form classes of sample pairs")
def _classify_examples(config: EngineConfig) -> Optional[str]:
    details = []
    for H, (k, m, l), cid, params in CLASSIFY_EXAMPLES:
        got = classify_pair(FormPair.from_coefficients(H, k, l, m))
        details.append(_expect(got.id, cid, f"class of H={H}, (k, m, l)={(k, m, l)}"))
        for key, value in params.items():
            details.append(_expect(got.params.get(key), value, f"{key} of class {cid}"))
    return _first(details)


@check("classify", "classify-normal-forms", "every normal form is recognized as its own class")
def _classify_normal_forms(config: EngineConfig) -> Optional[str]:
    return _first([_expect(classify_pair(representative_pair(j)).id, j, f"normal form {j}") for j in PAIR_IDS])


@check("classify", "g0-table", "dimensions of the linear stabilizers G0 for the nine classes")
def _g0(config: EngineConfig) -> Optional[str]:
    return _expect(g0_table(), G0_TABLE, "g0 dimensions")


@check("classify", "jet-action-invariance", "the 3-jet action preserves the class and composes")
def _jet_action(config: EngineConfig) -> Optional[str]:
    sampler = ParamSampler(config.SEEDS[0], config.PARAM_BOUND)
    p = FormPair.from_coefficients(((1, 0), (0, 1)), 1, 0, 2)
    rot = [[Fraction(3, 5), Fraction(-4, 5)], [Fraction(4, 5), Fraction(3, 5)]]
    e1 = JetGroupElement(rot, Fraction(1), sampler.gaussian() or GaussRat(1))
    e2 = JetGroupElement([[Fraction(1, 2), 0], [0, Fraction(1, 2)]], Fraction(1, 4), sampler.gaussian() or GaussRat(2))
    composed = act_on_pair(e1.then(e2), p)
    stepwise = act_on_pair(e2, act_on_pair(e1, p))
    return _first(
        [
            _expect(classify_pair(act_on_pair(e1, p)).id, 1, "class after the action"),
            None if composed == stepwise else "composition does not match successive actions",
        ]
    )


# =========================================================
# DIAGNOSTICS
# =========================================================
@check("diagnostics", "q-hessian-degenerate", "the complex Hessian of Q vanishes identically")
def _q_hessian(config: EngineConfig) -> Optional[str]:
    det = hessian3_det(cubic_q())
    return None if det.is_zero() else f"det = {det.text()}"


@check("diagnostics", "j6-levi-minors", "Levi minors of the 3-nondegenerate model vanish through the reliable weight")
def _j6_minors(config: EngineConfig) -> Optional[str]:
    details = []
    for seed in config.SEEDS:
        s = fixture("j6-generic").surface(seed, config.PARAM_BOUND)
        top = reliable_weight(s)
        for i, d in enumerate(levi_minors(s, "z", "zeta", "eta"), start=1):
            live = [mu for mu in range(top + 1) if graded_component(d, s.ws, mu)]
            details.append(f"seed {seed}: minor {i} lives at weights {live}" if live else None)
    return _first(details)


@check("diagnostics", "s-form-table", "the |zeta|^2 coefficient of each class is 4<H^-1 K z, conj(K z)>")
def _s_forms(config: EngineConfig) -> Optional[str]:
    details = []
    for j in PAIR_IDS:
        p = representative_pair(j)
        k = Fraction(p.K[0][0].re) if j <= 6 else Fraction(1)
        m = p.K[1][1]
        expected = s_form(j, k, m, PAIR_TABLE)
        details.append(None if expected == induced_s_form(p) else f"class {j}: {expected.text()}")
    return _first(details)


# =========================================================
# FLOWS
# =========================================================
@check("flows", "q-translations", "the translation group of Q acts by exact automorphisms")
def _q_translations(config: EngineConfig) -> Optional[str]:
    sampler = ParamSampler(config.SEEDS[0], config.PARAM_BOUND)
    Q = cubic_q()
    for _ in range(FLOW_POINTS):
        p = QPoint.on_q(sampler.gaussian(), sampler.gaussian(), sampler.gaussian(), sampler.rational(nonzero=False))
        if not verify_exact_automorphism(Q, q_translation(p)):
            return f"translation to ({p.A.text()}, {p.B.text()}, {p.C.text()}, {p.D.text()}) fails"
    return None


@check("flows", "q-shears", "both shears of Q are automorphisms")
def _q_shears(config: EngineConfig) -> Optional[str]:
    t = ParamSampler(config.SEEDS[0], config.PARAM_BOUND).rational()
    Q = cubic_q()
    return _first(
        [
            None if verify_exact_automorphism(Q, shear_z1(t)) else "z1 shear",
            None if verify_exact_automorphism(Q, shear_z2(t)) else "z2 shear",
        ]
    )


@check("flows", "g1-flow", "the g1 flow preserves Q and integrates its field")
def _g1(config: EngineConfig) -> Optional[str]:
    sampler = ParamSampler(config.SEEDS[0], config.PARAM_BOUND)
    N, t = sampler.gaussian() or GaussRat(1), sampler.rational()
    Q = cubic_q()
    series = rational_flow_series(g1_flow(N), FLOW_ORDER + 1)
    X = flow_generator(series, q_shape(), Q.table)
    return _first(
        [
            None if verify_exact_automorphism(Q, g1_flow(N, t)) else f"g1 flow at N={N.text()}, t={t}",
            None if verify_exact_automorphism(Q, g1_flow(N)) else "g1 flow with formal t",
            None if tangency_residual(Q, X).vanishes() else "g1 field is not tangent",
            None if exponentiate_check(X, series, FLOW_ORDER) else "g1 flow does not integrate its field",
        ]
    )


@check("flows", "g0-flow", "the g0 flow solves its field's ODE through order 4")
def _g0_flow(config: EngineConfig) -> Optional[str]:
    sampler = ParamSampler(config.SEEDS[1 % len(config.SEEDS)], config.PARAM_BOUND)
    l, mu, m = sampler.rational(), sampler.rational(), sampler.gaussian()
    Q = cubic_q()
    series = g0_flow_series(l, mu, m, FLOW_ORDER + 1)
    X = flow_generator(series, q_shape(), Q.table)
    return _first(
        [
            None if tangency_residual(Q, X).vanishes() else "g0 field is not tangent",
            None if exponentiate_check(X, series, FLOW_ORDER) else "closed-form g0 flow",
            None if exponentiate_check(X, lie_series(X, FLOW_ORDER + 1), FLOW_ORDER) else "Lie series of the g0 field",
        ]
    )


@check("flows", "g-2-flow", "the weight -2 translations preserve Q")
def _g_minus2(config: EngineConfig) -> Optional[str]:
    a = ParamSampler(config.SEEDS[0], config.PARAM_BOUND).nonreal()
    series = g_minus2_flow_series(a)
    T = next(iter(series.values())).table
    X = flow_generator(series, q_shape(), PAIR_TABLE)
    return _first(
        [
            None if verify_exact_automorphism(cubic_q(), RationalMap.from_polys(T, series)) else "not an automorphism",
            None if exponentiate_check(X, series, FLOW_ORDER) else "flow does not integrate its field",
        ]
    )


@check("flows", "trivial-solutions", "constant and dilation fields solve the linearized equations")
def _trivial(config: EngineConfig) -> Optional[str]:
    details = []
    for seed in config.SEEDS:
        p = ParamSampler(seed, config.PARAM_BOUND).pair_params(1)
        s = two_nondeg(p)
        for grading, shape in (("W1", two_nondeg_w1_shape()), ("W2", two_nondeg_w2_shape())):
            sg = s.regraded(grading)
            builder = ResidualBuilder(sg, shape)
            for X in trivial_solutions(shape):
                if not builder.linearized(X, 2).is_zero():
                    details.append(f"{grading} seed {seed}: {X['h'].text()}")
    return _first(details)


# =========================================================
# CROSS-CHECK
# =========================================================
def _compare(derive: Callable, explicit: Callable, jets: Sequence) -> Optional[str]:
    for i, phi in enumerate(jets):
        lhs, rhs = derive(phi), explicit(phi)
        if lhs != rhs:
            return f"jet {i}: difference {(lhs - rhs).text()[:120]}"
    return None


@check("cross-check", "j6-operator", "derived depth-3 operator equals its term-by-term form")
def _cross_j6(config: EngineConfig) -> Optional[str]:
    sampler = ParamSampler(config.SEEDS[0], config.PARAM_BOUND)
    params = sampler.j6_params()
    s = three_nondeg_j6(params)
    builder = ResidualBuilder(s, j6_shape())
    jets = [sampler.jet(j6_shape(), s.ws, s.table, (5, 7)) for _ in range(config.JET_CHECKS)]
    return _compare(lambda phi: builder.linearized(phi, 3), lambda phi: explicit_L_j6(phi, params, 3), jets)


@check("cross-check", "two-nondeg-operator", "derived depth-2 operator equals its term-by-term form")
def _cross_pair(config: EngineConfig) -> Optional[str]:
    sampler = ParamSampler(config.SEEDS[0], config.PARAM_BOUND)
    details = []
    for pair_id in PAIR_IDS:
        p = sampler.pair_params(pair_id)
        s = two_nondeg(p)
        builder = ResidualBuilder(s, two_nondeg_w1_shape())
        jets = [sampler.jet(two_nondeg_w1_shape(), s.ws, s.table, (4, 6)) for _ in range(max(1, config.JET_CHECKS // 9))]
        details.append(_compare(lambda phi: builder.linearized(phi, 2), lambda phi: explicit_L_2nd(phi, p), jets))
    return _first(details)


@check("cross-check", "reweighted-operator", "the reweighted depth-2 truncation agrees with the two-stage operator")
def _cross_reweighted(config: EngineConfig) -> Optional[str]:
    sampler = ParamSampler(config.SEEDS[-1], config.PARAM_BOUND)
    details = []
    for pair_id in (1, 5, 9):
        p = sampler.pair_params(pair_id)
        s = two_nondeg(p).regraded("W2")
        shape = two_nondeg_w2_shape()
        builder = ResidualBuilder(s, shape)
        jets = [sampler.jet(shape, s.ws, s.table, (5, 8)) for _ in range(max(1, config.JET_CHECKS // 3))]
        details.append(_compare(lambda phi: builder.linearized(phi, 2), lambda phi: explicit_L_2nd(phi, p), jets))
    return _first(details)


@check("cross-check", "zeta4-obstruction", "the weight-4 jet (0, 0, zeta^4) never solves the reweighted equations")
def _zeta4(config: EngineConfig) -> Optional[str]:
    sampler = ParamSampler(config.SEEDS[0], config.PARAM_BOUND)
    pairs = [TwoNondegParams(9, R=(GaussRat(Fraction(1, 2)), 0, 0))] + [sampler.pair_params(j) for j in (1, 5)]
    return _first([None if zeta4_obstruction(p) else f"pair {p.pair_id}" for p in pairs])


# =========================================================
# RUNNER
# =========================================================
SUITE_ORDER = ("aut", "kernel", "classify", "diagnostics", "flows", "cross-check")


def suite_names() -> List[str]:
    return ["all", *SUITE_ORDER]


def run_suite(name: str, config: EngineConfig) -> VerifyPayload:
    if name == "all":
        selected = [(s, c) for s in SUITE_ORDER for c in SUITES[s]]
    elif name in SUITES:
        selected = [(name, c) for c in SUITES[name]]
    else:
        raise UnknownFixtureError(f"unknown suite {name!r}; known: {suite_names()}")
    results: List[CheckResult] = []
    for suite, c in selected:
        logger.info(f"running {suite}/{c.name}")
        try:
            detail = c.run(config)
        except PoincareError as e:
            detail = f"{e.kind}: {e.message}"
        passed = detail is None
        CHECK_COUNT.labels(suite=suite, outcome="pass" if passed else "fail").inc()
        if not passed:
            logger.error(f"{suite}/{c.name} failed: {detail}")
        results.append(CheckResult(name=c.name, passed=passed, reference=c.reference, detail=detail))
    failed = sum(1 for r in results if not r.passed)
    return VerifyPayload(suite=name, passed=len(results) - failed, failed=failed, checks=results)
