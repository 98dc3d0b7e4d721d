"""Benchmark harness: load the intention corpus, drive pipelines over it,
and aggregate judge scores into a report.

Corpus format is JSONL with one {"category", "intention"} object per line.
Outputs land in ``out/<category>/<slug>/`` (bundle.json, design.svg,
preview.png, scores.json); re-running skips directories that already hold a
bundle, so a sweep is restartable. Per-intent failures are tallied in the
report and never abort the sweep.
"""

from __future__ import annotations

import json
import logging
import re
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .backends.base import BackendSuite, PipelineConfig
from .errors import ColeforgeError, ParseError
from .metrics import QUALITY_CRITERIA
from .pipeline import DesignBundle, run_pipeline
from .schema import CATEGORY_VALUES, DesignIntent
from .typesetter import rasterize_preview

log = logging.getLogger(__name__)


def load_benchmark(path) -> list[DesignIntent]:
    """Parse the corpus JSONL into intents, validating every category."""
    intents: list[DesignIntent] = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(line_no, f"invalid JSON: {exc}") from exc
            if not isinstance(data, dict) or "category" not in data or "intention" not in data:
                raise ParseError(line_no, "expected an object with 'category' and 'intention'")
            if data["category"] not in CATEGORY_VALUES:
                raise ParseError(line_no, f"unknown category {data['category']!r}")
            if not isinstance(data["intention"], str) or not data["intention"].strip():
                raise ParseError(line_no, "intention must be a non-empty string")
            intents.append(DesignIntent(data["intention"], data["category"]))
    if not intents:
        log.warning("benchmark corpus %s is empty", path)
    else:
        counts = category_counts(intents)
        log.info("loaded %d intents: %s", len(intents), dict(counts))
    return intents


def category_counts(intents) -> Counter:
    return Counter(intent.category.value for intent in intents)


def intent_slug(intent: DesignIntent, index: int) -> str:
    """Directory slug: zero-padded corpus index plus the leading words of the
    intent. The index keeps repeated prompts from colliding."""
    words = re.sub(r"[^a-z0-9]+", "-", intent.text.lower()).strip("-").split("-")
    return f"{index:03d}-" + "-".join(words[:6])


@dataclass
class EvalResult:
    slug: str
    category: str
    ok: bool
    digest: str | None = None
    scores: dict | None = None
    error: str | None = None
    skipped: bool = False


@dataclass
class EvalReport:
    results: list[EvalResult] = field(default_factory=list)

    @property
    def ok_count(self) -> int:
        return sum(1 for r in self.results if r.ok)

    @property
    def failed_count(self) -> int:
        return sum(1 for r in self.results if not r.ok)

    def per_category_means(self) -> dict[str, dict[str, float]]:
        """Mean judge score per criterion per category, over scored bundles."""
        buckets: dict[str, list[dict]] = {}
        for r in self.results:
            if r.ok and r.scores:
                buckets.setdefault(r.category, []).append(r.scores)
        return {
            category: {
                name: sum(s[name]["score"] for s in scored) / len(scored)
                for name in QUALITY_CRITERIA
            }
            for category, scored in sorted(buckets.items())
        }

    def to_dict(self) -> dict:
        return {
            "ok": self.ok_count,
            "failed": self.failed_count,
            "per_category_means": self.per_category_means(),
            "results": [
                {
                    "slug": r.slug,
                    "category": r.category,
                    "ok": r.ok,
                    "digest": r.digest,
                    "error": r.error,
                    "skipped": r.skipped,
                }
                for r in self.results
            ],
        }

    def to_markdown(self) -> str:
        lines = [
            "# Benchmark report",
            "",
            f"Bundles: {self.ok_count} ok, {self.failed_count} failed",
            "",
            "| category | " + " | ".join(QUALITY_CRITERIA) + " |",
            "|" + "---|" * (len(QUALITY_CRITERIA) + 1),
        ]
        for category, means in self.per_category_means().items():
            cells = " | ".join(f"{means[name]:.2f}" for name in QUALITY_CRITERIA)
            lines.append(f"| {category} | {cells} |")
        return "\n".join(lines) + "\n"


def _evaluate_one(intent: DesignIntent, index: int, suite, cfg, seed: int, out_dir: Path) -> EvalResult:
    slug = intent_slug(intent, index)
    target = out_dir / intent.category.value / slug
    bundle_path = target / "bundle.json"
    if bundle_path.exists():
        try:
            existing = json.loads((target / "scores.json").read_text(encoding="utf-8"))
            return EvalResult(
                slug,
                intent.category.value,
                ok=True,
                digest=existing.get("digest"),
                scores=existing.get("scores"),
                skipped=True,
            )
        except (OSError, json.JSONDecodeError):
            pass  # incomplete directory; regenerate

    try:
        bundle = run_pipeline(intent, suite, cfg, seed=seed)
    except ColeforgeError as exc:
        return EvalResult(slug, intent.category.value, ok=False, error=str(exc))

    scores = None
    try:
        preview = rasterize_preview(bundle.svg)
        report = suite.quality_judge.score(preview, bundle.plan, bundle.stack.text_blocks)
        scores = report.to_dict()
    except Exception as exc:  # scores are optional; the bundle still counts
        log.warning("judge unavailable for %s: %s", slug, exc)
        preview = rasterize_preview(bundle.svg)

    target.mkdir(parents=True, exist_ok=True)
    bundle_path.write_text(bundle.serialize(), encoding="utf-8")
    (target / "design.svg").write_text(bundle.svg.markup, encoding="utf-8")
    (target / "preview.png").write_bytes(preview.to_png_bytes())
    digest = bundle.digest()
    (target / "scores.json").write_text(
        json.dumps({"digest": digest, "scores": scores}, ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8",
    )
    return EvalResult(slug, intent.category.value, ok=True, digest=digest, scores=scores)


def run_eval(
    intents,
    suite: BackendSuite,
    cfg: PipelineConfig = PipelineConfig(),
    out_dir="bench-out",
    seed: int = 0,
    workers: int = 4,
) -> EvalReport:
    """Evaluate every intent; failures are recorded, never raised."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        futures = [
            pool.submit(_evaluate_one, intent, i, suite, cfg, seed, out_dir)
            for i, intent in enumerate(intents)
        ]
        results = [f.result() for f in futures]
    return EvalReport(results)


def write_report(report: EvalReport, out_dir) -> dict[str, Path]:
    """Persist report.json, report.md, and a per-category score figure."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "json": out_dir / "report.json",
        "markdown": out_dir / "report.md",
        "figure": out_dir / "scores_by_category.png",
    }
    paths["json"].write_text(
        json.dumps(report.to_dict(), ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
    paths["markdown"].write_text(report.to_markdown(), encoding="utf-8")
    _render_score_figure(report, paths["figure"])
    return paths


def _render_score_figure(report: EvalReport, path: Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    means = report.per_category_means()
    fig, ax = plt.subplots(figsize=(9, 4.5))
    if means:
        categories = list(means)
        x = range(len(categories))
        width = 0.15
        for j, name in enumerate(QUALITY_CRITERIA):
            offs = [i + (j - 2) * width for i in x]
            ax.bar(offs, [means[c][name] for c in categories], width=width, label=name)
        ax.set_xticks(list(x))
        ax.set_xticklabels(categories, rotation=20, ha="right")
        ax.set_ylim(0, 10)
        ax.legend(fontsize=8)
    else:
        ax.text(0.5, 0.5, "no scored bundles", ha="center", va="center")
    ax.set_ylabel("mean judge score")
    ax.set_title("Judge scores by category")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def load_bundle(path) -> DesignBundle:
    """Read a persisted bundle.json back into a DesignBundle."""
    with open(path, encoding="utf-8") as fh:
        return DesignBundle.from_dict(json.load(fh))
