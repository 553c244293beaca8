import logging
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional

# =========================================================
# PROMETHEUS
# =========================================================
from prometheus_client import CollectorRegistry, Counter, Histogram, generate_latest

logger = logging.getLogger(__name__)

REGISTRY = CollectorRegistry()

ASSEMBLY_LATENCY = Histogram(
    "poincare_assembly_seconds",
    "Operator matrix assembly time",
    ["fixture"],
    registry=REGISTRY,
)

ELIMINATION_LATENCY = Histogram(
    "poincare_elimination_seconds",
    "Fraction-free elimination time",
    ["fixture"],
    registry=REGISTRY,
)

MATRIX_COLUMNS = Histogram(
    "poincare_matrix_columns",
    "Columns of assembled operator matrices",
    ["fixture"],
    buckets=(8, 32, 128, 512, 2048, 8192, 32768),
    registry=REGISTRY,
)

CHECK_COUNT = Counter(
    "poincare_checks_total",
    "Verification checks run",
    ["suite", "outcome"],
    registry=REGISTRY,
)

ERROR_COUNT = Counter(
    "poincare_errors_total",
    "Errors surfaced to the command line",
    ["kind"],
    registry=REGISTRY,
)


@contextmanager
def timed(histogram: Histogram, fixture: str) -> Iterator[None]:
    start = time.perf_counter()
    try:
        yield
    finally:
        histogram.labels(fixture=fixture).observe(time.perf_counter() - start)


def write_metrics(path: Optional[str]) -> None:
    if not path:
        return
    Path(path).write_bytes(generate_latest(REGISTRY))
    logger.info(f"metrics written to {path}")
