"""Pipeline orchestration: intent -> plan -> background -> object -> typography
-> layered SVG, plus the critique/adjust loop over typography.

Stages run strictly in order; a failing stage raises StageFailure carrying
the artifacts completed so far, so earlier work is never corrupted.
Determinism: with a mock suite and a fixed seed, the bundle content digest
is bit-reproducible (wall times and wire logs are provenance only and are
excluded from the digest).
"""

from __future__ import annotations

import base64
import hashlib
import json
import time
from concurrent.futures import ThreadPoolExecutor
from concurrent.futures import TimeoutError as FutureTimeout
from dataclasses import dataclass, field, replace

from .backends.base import BackendSuite, PipelineConfig
from .codec import TypographySpec
from .compositor import Raster
from .errors import ColeforgeError, StageFailure
from .metrics import QualityReport
from .schema import DesignIntent, DesignPlan, validate_plan
from .typesetter import LayerStack, ObjectTransform, SvgDocument, rasterize_preview, render_svg

BUNDLE_SCHEMA_VERSION = 1


@dataclass
class Provenance:
    seed: int
    backend_ids: dict[str, str] = field(default_factory=dict)
    stage_times_ms: dict[str, float] = field(default_factory=dict)
    reflect_history: list[dict] = field(default_factory=list)
    wire_log: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "backend_ids": dict(self.backend_ids),
            "stage_times_ms": dict(self.stage_times_ms),
            "reflect_history": list(self.reflect_history),
            "wire_log": list(self.wire_log),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Provenance":
        return cls(
            seed=data["seed"],
            backend_ids=dict(data.get("backend_ids", {})),
            stage_times_ms=dict(data.get("stage_times_ms", {})),
            reflect_history=list(data.get("reflect_history", [])),
            wire_log=list(data.get("wire_log", [])),
        )


@dataclass
class DesignBundle:
    intent: DesignIntent
    plan: DesignPlan
    stack: LayerStack
    svg: SvgDocument
    provenance: Provenance
    scores: QualityReport | None = None

    def to_dict(self) -> dict:
        obj_png = alpha_png = None
        if self.stack.object_layer is not None:
            rgb, alpha = self.stack.object_layer
            obj_png = base64.b64encode(rgb.to_png_bytes()).decode("ascii")
            alpha_png = base64.b64encode(alpha.to_png_bytes()).decode("ascii")
        return {
            "schema_version": BUNDLE_SCHEMA_VERSION,
            "intent": {"text": self.intent.text, "category": self.intent.category.value},
            "plan": self.plan.to_dict(),
            "typography": [b.to_dict() for b in self.stack.text_blocks],
            "object_transform": self.stack.object_transform.to_dict(),
            "background_png_base64": base64.b64encode(self.stack.background.to_png_bytes()).decode("ascii"),
            "object_png_base64": obj_png,
            "alpha_png_base64": alpha_png,
            "svg": self.svg.markup,
            "layer_index": dict(self.svg.layer_index),
            "provenance": self.provenance.to_dict(),
            "scores": self.scores.to_dict() if self.scores else None,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DesignBundle":
        from .schema import Category

        object_layer = None
        if data.get("object_png_base64"):
            object_layer = (
                Raster.from_png_bytes(base64.b64decode(data["object_png_base64"])),
                Raster.from_png_bytes(base64.b64decode(data["alpha_png_base64"])),
            )
        t = data.get("object_transform", {})
        stack = LayerStack(
            background=Raster.from_png_bytes(base64.b64decode(data["background_png_base64"])),
            object_layer=object_layer,
            text_blocks=tuple(TypographySpec.from_dict(b) for b in data["typography"]),
            object_transform=ObjectTransform(t.get("dx", 0.0), t.get("dy", 0.0), t.get("scale", 1.0)),
        )
        scores = None
        if data.get("scores"):
            scores = QualityReport(
                {k: v["score"] for k, v in data["scores"].items()},
                {k: v.get("rationale", "") for k, v in data["scores"].items()},
            )
        return cls(
            intent=DesignIntent(data["intent"]["text"], Category(data["intent"]["category"])),
            plan=DesignPlan(**{k: (tuple(v) if k == "keywords" else v) for k, v in data["plan"].items()}),
            stack=stack,
            svg=SvgDocument(data["svg"], dict(data.get("layer_index", {}))),
            provenance=Provenance.from_dict(data["provenance"]),
            scores=scores,
        )

    def serialize(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2, sort_keys=True) + "\n"

    def digest(self) -> str:
        """Content digest over the deterministic design payload; excludes
        wall times and wire logs."""
        doc = self.to_dict()
        doc["provenance"] = {
            "seed": self.provenance.seed,
            "backend_ids": dict(self.provenance.backend_ids),
        }
        blob = json.dumps(doc, ensure_ascii=False, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()

    def validate(self) -> list[str]:
        problems = [f"plan.{f.field}: {f.message}" for f in validate_plan(self.plan).findings]
        if self.plan.object_flag != (self.stack.object_layer is not None):
            problems.append("object layer presence disagrees with plan.object_flag")
        for i, block in enumerate(self.stack.text_blocks):
            problems += [f"typography[{i}]: {p}" for p in block.validate()]
        return problems


def _run_stage(name: str, fn, timeout_s: float, partial: dict):
    start = time.perf_counter()
    with ThreadPoolExecutor(max_workers=1) as pool:
        future = pool.submit(fn)
        try:
            result = future.result(timeout=timeout_s)
        except FutureTimeout as exc:
            raise StageFailure(name, f"timed out after {timeout_s}s", dict(partial)) from exc
        except StageFailure:
            raise
        except Exception as exc:
            raise StageFailure(name, exc, dict(partial)) from exc
    return result, (time.perf_counter() - start) * 1000.0


def run_pipeline(
    intent: DesignIntent,
    suite: BackendSuite,
    cfg: PipelineConfig = PipelineConfig(),
    seed: int = 0,
) -> DesignBundle:
    """Execute planner -> background -> object (if flagged) -> typography ->
    render and assemble a validated bundle."""
    unhealthy = [name for name, ok in suite.healthy().items() if not ok]
    if unhealthy:
        raise StageFailure("health", f"backends unhealthy: {', '.join(unhealthy)}", {})

    canvas = cfg.canvas
    partial: dict = {"intent": intent}
    provenance = Provenance(seed=seed, backend_ids=suite.backend_ids())

    plan, ms = _run_stage("planner", lambda: suite.planner.plan(intent, seed), cfg.stage_timeout_s, partial)
    provenance.stage_times_ms["planner"] = ms
    report = validate_plan(plan)
    if not report.ok:
        raise StageFailure("planner", [f"{f.field}: {f.message}" for f in report.findings], dict(partial))
    partial["plan"] = plan

    background, ms = _run_stage(
        "background",
        lambda: suite.background_gen.generate(plan.background_caption, plan.keywords, seed, canvas),
        cfg.stage_timeout_s,
        partial,
    )
    provenance.stage_times_ms["background"] = ms
    partial["background"] = background

    object_layer = None
    if plan.object_flag:
        object_layer, ms = _run_stage(
            "object",
            lambda: suite.object_gen.generate(plan.object_caption, background, seed),
            cfg.stage_timeout_s,
            partial,
        )
        provenance.stage_times_ms["object"] = ms
        partial["object"] = object_layer

    stack = LayerStack(background=background, object_layer=object_layer)
    composed = stack.composed()
    blocks, ms = _run_stage(
        "typography",
        lambda: suite.typographer.place(plan, composed, canvas, seed),
        cfg.stage_timeout_s,
        partial,
    )
    provenance.stage_times_ms["typography"] = ms
    stack = replace(stack, text_blocks=tuple(blocks))
    partial["typography"] = blocks

    svg, ms = _run_stage("render", lambda: render_svg(stack, canvas), cfg.stage_timeout_s, partial)
    provenance.stage_times_ms["render"] = ms

    bundle = DesignBundle(intent=intent, plan=plan, stack=stack, svg=svg, provenance=provenance)
    problems = bundle.validate()
    if problems:
        raise StageFailure("validate", problems, dict(partial))

    if hasattr(suite.planner, "session"):
        provenance.wire_log = list(suite.planner.session.wire_log)
    return bundle


def run_reflect(
    bundle: DesignBundle,
    suite: BackendSuite,
    max_iters: int = 3,
    cfg: PipelineConfig = PipelineConfig(),
) -> DesignBundle:
    """Iterate judge -> reflect -> re-render until the score stops improving
    or the iteration budget runs out; returns the best-scoring bundle."""
    if max_iters < 0:
        raise ValueError("max_iters must be >= 0")
    if max_iters == 0:
        return bundle

    canvas = cfg.canvas

    def scored(b: DesignBundle) -> tuple[QualityReport, Raster]:
        preview = rasterize_preview(b.svg)
        report = suite.quality_judge.score(preview, b.plan, b.stack.text_blocks)
        return report, preview

    try:
        best_report, preview = scored(bundle)
    except ColeforgeError as exc:
        raise StageFailure("quality", exc, {"bundle": bundle}) from exc
    # Copy provenance so the caller's bundle is left untouched.
    best = replace(
        bundle, scores=best_report, provenance=Provenance.from_dict(bundle.provenance.to_dict())
    )
    best.provenance.reflect_history.append(
        {"iteration": 0, "mean_score": best_report.mean, "accepted": True}
    )

    current = best
    for iteration in range(1, max_iters + 1):
        try:
            new_blocks = suite.reflector.propose(current.stack.text_blocks, preview, canvas)
            new_stack = replace(current.stack, text_blocks=tuple(new_blocks))
            new_svg = render_svg(new_stack, canvas)
            candidate = replace(current, stack=new_stack, svg=new_svg)
            report, preview = scored(candidate)
        except ColeforgeError as exc:
            best.provenance.reflect_history.append(
                {"iteration": iteration, "error": str(exc), "accepted": False}
            )
            return best
        improved = report.mean > best.scores.mean
        best.provenance.reflect_history.append(
            {"iteration": iteration, "mean_score": report.mean, "accepted": improved}
        )
        if improved:
            candidate = replace(candidate, scores=report, provenance=best.provenance)
            best = candidate
            current = candidate
        else:
            break
    return best
