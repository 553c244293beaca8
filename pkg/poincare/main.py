"""Command line: automorphism profiles, window bounds, pair classification, verification suites and exports."""
import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from .algebra import GaussRat
from .classify import FormPair, classify_pair, g0_dim, g0_table_note
from .config import EngineConfig
from .errors import EXIT_OK, EXIT_VERIFICATION_FAILED, ParameterError, PoincareError, UnknownFixtureError
from .fixtures import FIXTURES, SPACES, fixture, space
from .grading import field_shape
from .kernel import RowPolicy, assemble, graded_profile, kernel_basis, stabilizer_count
from .metrics import ERROR_COUNT, write_metrics
from .reports import (
    POLICY_NOTES,
    BoundPayload,
    ClassifyPayload,
    JetPayload,
    ProfilePayload,
    Report,
    SurfaceSpec,
    error_envelope,
)
from .suites import run_suite, suite_names
from .surfaces import ModelSurface, surface_from_spec, surface_json

logger = logging.getLogger(__name__)


# =========================================================
# ARGUMENT PARSING
# =========================================================
def parse_range(text: str) -> Tuple[int, int]:
    """``lo..hi``; negative bounds need the ``--range=-3..3`` form."""
    try:
        lo, hi = text.split("..")
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo..hi, got {text!r}") from None


def parse_scalar(text: str) -> GaussRat:
    """``re`` or ``re:im`` with rational parts such as ``1/2``."""
    re, _, im = text.strip().partition(":")
    try:
        return GaussRat(re or "0", im or "0")
    except (ValueError, ZeroDivisionError):
        raise ParameterError(f"not a Gaussian rational: {text!r}") from None


def parse_scalars(text: str, count: int) -> List[GaussRat]:
    parts = [parse_scalar(x) for x in text.split(",")]
    if len(parts) != count:
        raise ParameterError(f"expected {count} comma-separated entries, got {len(parts)}")
    return parts


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, action="append", help="parameter seed; repeat for several")
    common.add_argument("--metrics", help="write prometheus metrics to this file")
    common.add_argument("--log-level", help="overrides POINCARE_LOG_LEVEL")

    surface = argparse.ArgumentParser(add_help=False)
    source = surface.add_mutually_exclusive_group(required=True)
    source.add_argument("--fixture", help=f"one of {', '.join(sorted(FIXTURES))}")
    source.add_argument("--surface", help="surface-spec JSON file")

    parser = argparse.ArgumentParser(prog="poincare", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    aut = sub.add_parser("aut", parents=[common, surface], help="graded profile of the automorphism algebra")
    aut.add_argument("--range", type=parse_range, help="weight range lo..hi")
    aut.add_argument("--basis", action="store_true", help="include kernel bases")

    bound = sub.add_parser("bound", parents=[common, surface], help="window-kernel dimension")
    bound.add_argument("--space", help=f"one of {', '.join(sorted(SPACES))}")
    bound.add_argument("--range", type=parse_range, help="override the window lo..hi")
    bound.add_argument("--policy", choices=[p.value for p in RowPolicy], help="override the space's row policy")
    bound.add_argument("--basis", action="store_true")

    cls = sub.add_parser("classify", parents=[common], help="normal-form class of a pair (H, K)")
    cls.add_argument("--H", dest="H", required=True, help="h11,h12,h21,h22 with entries re or re:im")
    cls.add_argument("--K", dest="K", required=True, help="k,m,l of K(z,z) = k z1^2 + 2l z1 z2 + m z2^2")

    verify = sub.add_parser("verify", parents=[common], help="run a verification suite")
    verify.add_argument("suite", choices=suite_names(), nargs="?", default="all")

    es = sub.add_parser("export-surface", parents=[common, surface], help="surface-spec JSON")
    es.add_argument("--out")

    em = sub.add_parser("export-matrix", parents=[common, surface], help="assembled operator matrix")
    em.add_argument("--space", required=True)
    em.add_argument("--range", type=parse_range)
    em.add_argument("--out")
    return parser


# =========================================================
# COMMANDS
# =========================================================
def load_surface(args: argparse.Namespace, config: EngineConfig) -> Tuple[str, ModelSurface, List[int]]:
    if args.surface:
        path = Path(args.surface)
        try:
            spec = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise UnknownFixtureError(f"cannot read surface spec {path}: {e}") from None
        return path.stem, surface_from_spec(spec), []
    fx = fixture(args.fixture)
    seed = config.SEEDS[0]
    return fx.name, fx.surface(seed, config.PARAM_BOUND), [seed] if fx.generic else []


def cmd_aut(args: argparse.Namespace, config: EngineConfig) -> Report:
    name, s, seeds = load_surface(args, config)
    fx = FIXTURES.get(name)
    if fx is not None and fx.aut_shape is not None:
        shape, window = fx.aut_shape(), args.range or fx.aut_range
    else:
        if args.range is None:
            raise ParameterError(f"{name!r} has no registered weight range; pass --range")
        shape, window = field_shape(s.ws, s.table), args.range
    prof = graded_profile(s, shape, window, with_bases=True)
    jets = [X for basis in prof.bases.values() for X in basis]
    bases = None
    if args.basis:
        bases = {str(mu): [JetPayload.from_jet(X) for X in basis] for mu, basis in sorted(prof.bases.items())}
    payload = ProfilePayload(
        weights={str(mu): d for mu, d in sorted(prof.dims.items())},
        total=prof.total,
        window=prof.window,
        stabilized=prof.stabilized,
        stabilizer=stabilizer_count(jets),
        bases=bases,
    )
    logger.info(f"aut {name}: total {prof.total}")
    return Report.for_surface("aut", name, s, window=prof.window, policy="kernel", seeds=seeds, data=payload)


def _space_for(args: argparse.Namespace, name: str):
    space_name = args.space
    if space_name is None:
        fx = FIXTURES.get(name)
        space_name = fx.default_space if fx else None
    if space_name is None:
        raise UnknownFixtureError(f"fixture {name!r} has no default space; pass --space")
    return space(space_name, args.range)


def cmd_bound(args: argparse.Namespace, config: EngineConfig) -> Report:
    name, s, seeds = load_surface(args, config)
    sp = _space_for(args, name)
    if args.policy:
        sp = replace(sp, policy=RowPolicy(args.policy))
    M = assemble(s, sp)
    payload = BoundPayload(
        space=sp.name,
        grading=sp.grading,
        depth=sp.depth,
        bound=M.nullity,
        matrix_size=M.size,
        policy_note=POLICY_NOTES[sp.policy.value],
        basis=[JetPayload.from_jet(X) for X in kernel_basis(M)] if args.basis else None,
    )
    logger.info(f"bound {name} on {sp.name}: {payload.bound}")
    return Report.for_surface("bound", name, s, window=sp.window, policy=sp.policy.value, seeds=seeds, data=payload)


def cmd_classify(args: argparse.Namespace, config: EngineConfig) -> Report:
    h = parse_scalars(args.H, 4)
    k, m, l = parse_scalars(args.K, 3)
    p = FormPair.from_coefficients([h[:2], h[2:]], k, l, m)
    result = classify_pair(p)
    g0 = g0_dim(p)
    out = result.to_json()
    payload = ClassifyPayload(
        pair_class=result.id,
        params=out["params"],
        witness=out["witness"],
        needs_extension=result.needs_extension,
        g0_dim=g0.dim,
        g0_basis=g0.to_json()["basis"],
        g0_note=g0_table_note(result.id, g0.dim),
    )
    return Report(command="classify", data=payload)


def cmd_verify(args: argparse.Namespace, config: EngineConfig) -> Report:
    payload = run_suite(args.suite, config)
    return Report(command="verify", seeds=list(config.SEEDS), success=payload.ok, data=payload)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
        logger.info(f"written to {out}")
    else:
        print(text)


def cmd_export_surface(args: argparse.Namespace, config: EngineConfig) -> None:
    name, s, seeds = load_surface(args, config)
    if args.format == "text":
        report = Report.for_surface("export-surface", name, s, seeds=seeds, data=SurfaceSpec.from_surface(s))
        _emit(report.to_text(), args.out)
    else:
        _emit(surface_json(s), args.out)


def cmd_export_matrix(args: argparse.Namespace, config: EngineConfig) -> None:
    name, s, _ = load_surface(args, config)
    _emit(assemble(s, _space_for(args, name)).export_text().rstrip("\n"), args.out)


COMMANDS = {
    "aut": cmd_aut,
    "bound": cmd_bound,
    "classify": cmd_classify,
    "verify": cmd_verify,
    "export-surface": cmd_export_surface,
    "export-matrix": cmd_export_matrix,
}


# =========================================================
# ENTRY POINT
# =========================================================
def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = EngineConfig(
            seeds=tuple(args.seed) if args.seed else None,
            log_level=args.log_level,
            metrics_path=args.metrics,
        )
    except PoincareError as e:
        ERROR_COUNT.labels(kind=e.kind).inc()
        print(error_envelope(e))
        return e.exit_code
    logging.basicConfig(level=config.LOG_LEVEL, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")

    code = EXIT_OK
    try:
        report = COMMANDS[args.command](args, config)
        if report is not None:
            print(report.render(args.format))
            if not report.success:
                code = EXIT_VERIFICATION_FAILED
    except PoincareError as e:
        ERROR_COUNT.labels(kind=e.kind).inc()
        logger.error(f"{args.command}: {e.message}")
        print(error_envelope(e))
        code = e.exit_code
    finally:
        write_metrics(config.METRICS_PATH)
    return code


if __name__ == "__main__":
    sys.exit(main())
