"""Report models of the command line and their JSON and text renderings."""
from __future__ import annotations

import json
import logging
from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, Field

from .errors import PoincareError
from .surfaces import ModelSurface, surface_hash, surface_spec
from .tangency import FieldJet

logger = logging.getLogger(__name__)

BOUND_NOTE = (
    "3-nondegenerate: 7 + 13 = 20; 2-nondegenerate: 6 + 3 + 8 = 17. "
    "These totals combine the window-kernel bounds with external results and are not recomputed here."
)

POLICY_NOTES = {
    "kernel": (
        "kernel rows: every output weight of the depth-k operator is imposed, so jets above the window "
        "count as zero and the bound is the polynomial kernel on the window."
    ),
    "jet": (
        "jet rows: output weights above the window top are left free, so the bound counts "
        "truncated jets that may continue as series solutions."
    ),
}


# =========================================================
# PAYLOADS
# =========================================================
class SurfaceSpec(BaseModel):
    name: str
    variables: Dict[str, List[str]]
    weights: Dict[str, int]
    grading: str
    F: List[Tuple[str, str, Dict[str, int]]]
    trunc: Optional[int] = None
    params: Dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def from_surface(cls, s: ModelSurface) -> "SurfaceSpec":
        return cls(**surface_spec(s))


class JetPayload(BaseModel):
    components: Dict[str, str]

    @classmethod
    def from_jet(cls, phi: FieldJet) -> "JetPayload":
        return cls(components={name: phi[name].text() for name in phi.shape.names})


class ProfilePayload(BaseModel):
    weights: Dict[str, int]
    total: int
    window: Tuple[int, int]
    stabilized: bool
    stabilizer: int
    bases: Optional[Dict[str, List[JetPayload]]] = None


class BoundPayload(BaseModel):
    space: str
    grading: str
    depth: int
    bound: int
    matrix_size: Tuple[int, int]
    policy_note: str
    bound_note: str = BOUND_NOTE
    basis: Optional[List[JetPayload]] = None


class ClassifyPayload(BaseModel):
    pair_class: int
    params: Dict[str, str]
    witness: Optional[List[List[str]]] = None
    needs_extension: bool = False
    g0_dim: int
    g0_basis: List[Dict[str, Any]] = Field(default_factory=list)
    g0_note: Optional[str] = None


class CheckResult(BaseModel):
    name: str
    passed: bool
    reference: str
    detail: Optional[str] = None


class VerifyPayload(BaseModel):
    suite: str
    passed: int
    failed: int
    checks: List[CheckResult]

    @property
    def ok(self) -> bool:
        return self.failed == 0


Payload = Union[ProfilePayload, BoundPayload, ClassifyPayload, VerifyPayload, SurfaceSpec, Dict[str, Any]]


# =========================================================
# REPORT
# =========================================================
class Report(BaseModel):
    command: str
    fixture: Optional[str] = None
    surface_hash: Optional[str] = None
    window: Optional[Tuple[int, int]] = None
    policy: Optional[str] = None
    seeds: List[int] = Field(default_factory=list)
    success: bool = True
    data: Optional[Payload] = None

    @classmethod
    def for_surface(cls, command: str, fixture: str, s: ModelSurface, **kwargs: Any) -> "Report":
        return cls(command=command, fixture=fixture, surface_hash=surface_hash(s), **kwargs)

    def to_json(self) -> str:
        # pydantic does not sort keys, json does
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, indent=2, ensure_ascii=False)

    def to_text(self) -> str:
        lines = [f"{'command':<14}{self.command}"]
        if self.fixture:
            lines.append(f"{'fixture':<14}{self.fixture}")
        if self.surface_hash:
            lines.append(f"{'surface':<14}{self.surface_hash[:16]}")
        if self.window:
            lines.append(f"{'window':<14}{self.window[0]}..{self.window[1]}")
        if self.policy:
            lines.append(f"{'rows':<14}{self.policy}")
        if self.seeds:
            lines.append(f"{'seeds':<14}{', '.join(str(x) for x in self.seeds)}")
        lines.extend(_payload_text(self.data))
        return "\n".join(lines)

    def render(self, fmt: str) -> str:
        return self.to_text() if fmt == "text" else self.to_json()


def _payload_text(data: Optional[Payload]) -> List[str]:
    if isinstance(data, ProfilePayload):
        out = [f"{'weight':>8}{'dim':>6}"]
        out += [f"{mu:>8}{d:>6}" for mu, d in sorted(data.weights.items(), key=lambda kv: int(kv[0]))]
        out.append(f"{'total':>8}{data.total:>6}")
        out.append(f"{'stabilizer':>8}{data.stabilizer:>6}")
        if not data.stabilized:
            out.append("warning: top weights of the range are not empty")
        return out
    if isinstance(data, BoundPayload):
        return [
            f"{'space':<14}{data.space} ({data.grading}, depth {data.depth})",
            f"{'matrix':<14}{data.matrix_size[0]} x {data.matrix_size[1]}",
            f"{'bound':<14}{data.bound}",
            data.policy_note,
            data.bound_note,
        ]
    if isinstance(data, ClassifyPayload):
        params = ", ".join(f"{k}={v}" for k, v in sorted(data.params.items())) or "-"
        out = [f"{'class':<14}{data.pair_class}", f"{'params':<14}{params}", f"{'g0 dim':<14}{data.g0_dim}"]
        if data.g0_note:
            out.append(data.g0_note)
        return out
    if isinstance(data, VerifyPayload):
        out = [f"{'PASS' if c.passed else 'FAIL':<6}{c.name:<40}{c.reference}" for c in data.checks]
        out.append(f"{data.passed} passed, {data.failed} failed")
        return out
    if isinstance(data, SurfaceSpec):
        return [json.dumps(data.model_dump(mode="json"), sort_keys=True)]
    if data:
        return [json.dumps(data, sort_keys=True)]
    return []


def error_envelope(err: PoincareError) -> str:
    return json.dumps(err.to_response(), sort_keys=True, indent=2)
