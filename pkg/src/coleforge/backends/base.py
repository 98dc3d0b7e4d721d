"""Backend adapter contracts and the suite container.

Every stage of the generation pipeline talks to one adapter. Adapters are
either deterministic mocks (safe to share across pipelines; they hold no
mutable state) or remote HTTP clients (one client per suite; clone the
suite per concurrent pipeline run).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol, runtime_checkable

from ..codec import TypographySpec
from ..compositor import Raster
from ..metrics import QualityReport
from ..schema import DesignIntent, DesignPlan
from ..typesetter import Canvas


@runtime_checkable
class Backend(Protocol):
    backend_id: str
    kind: str  # "mock" or "remote"

    def health(self) -> bool: ...


class PlannerBackend(Backend, Protocol):
    def plan(self, intent: DesignIntent, seed: int) -> DesignPlan: ...


class BackgroundBackend(Backend, Protocol):
    def generate(self, caption: str, keywords, seed: int, canvas: Canvas) -> Raster: ...


class ObjectBackend(Backend, Protocol):
    def generate(self, caption: str, background: Raster, seed: int) -> tuple[Raster, Raster]: ...


class TypographyBackend(Backend, Protocol):
    def place(self, plan: DesignPlan, composed: Raster, canvas: Canvas, seed: int) -> tuple[TypographySpec, ...]: ...


class ReflectBackend(Backend, Protocol):
    def propose(self, blocks, preview: Raster, canvas: Canvas) -> tuple[TypographySpec, ...]: ...


class QualityBackend(Backend, Protocol):
    def score(self, preview: Raster, plan: DesignPlan, blocks) -> QualityReport: ...


@dataclass(frozen=True)
class BackendSuite:
    planner: PlannerBackend
    background_gen: BackgroundBackend
    object_gen: ObjectBackend
    typographer: TypographyBackend
    reflector: ReflectBackend
    quality_judge: QualityBackend

    def __post_init__(self):
        for name, adapter in self.items():
            if not getattr(adapter, "backend_id", ""):
                raise ValueError(f"backend {name} must carry a non-empty id")

    def items(self):
        return (
            ("planner", self.planner),
            ("background_gen", self.background_gen),
            ("object_gen", self.object_gen),
            ("typographer", self.typographer),
            ("reflector", self.reflector),
            ("quality_judge", self.quality_judge),
        )

    def backend_ids(self) -> dict[str, str]:
        return {name: adapter.backend_id for name, adapter in self.items()}

    def healthy(self) -> dict[str, bool]:
        return {name: adapter.health() for name, adapter in self.items()}


@dataclass(frozen=True)
class PipelineConfig:
    canvas: Canvas = field(default_factory=Canvas)
    max_reflect_iters: int = 3
    stage_timeout_s: float = 120.0
    token_budget: int = 512
    on_oversize: str = "reject"  # or "truncate"
