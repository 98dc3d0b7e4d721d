"""Text-box localization metrics and judge-response handling.

Predicted and ground-truth boxes are paired by index; mIoU is the mean of
per-pair IoUs and AP at threshold tau is the fraction of pairs with
IoU >= tau. Unequal list lengths are an error, not a matching problem.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .errors import LengthMismatch, MalformedJudgeResponse, UnparseableVerdict

QUALITY_CRITERIA = (
    "design_layout",
    "content_relevance",
    "typography_color",
    "graphics_images",
    "innovation",
)


@dataclass(frozen=True)
class Box:
    left: float
    top: float
    width: float
    height: float

    def __post_init__(self):
        if self.width < 0 or self.height < 0:
            raise ValueError("width and height must be >= 0")

    @property
    def area(self) -> float:
        return self.width * self.height


def iou(a: Box, b: Box) -> float:
    """Intersection over union; 0 for degenerate-disjoint pairs."""
    ix = max(0.0, min(a.left + a.width, b.left + b.width) - max(a.left, b.left))
    iy = max(0.0, min(a.top + a.height, b.top + b.height) - max(a.top, b.top))
    inter = ix * iy
    union = a.area + b.area - inter
    if union <= 0.0:
        return 0.0
    # Clamp: float rounding in inter can nudge the ratio past 1 for
    # identical boxes.
    return min(1.0, inter / union)


def _paired_ious(preds, gts) -> list[float]:
    if len(preds) != len(gts):
        raise LengthMismatch(f"{len(preds)} predictions vs {len(gts)} ground truths")
    return [iou(p, g) for p, g in zip(preds, gts)]


def miou(preds, gts) -> float:
    """Mean IoU over index-paired boxes."""
    ious = _paired_ious(preds, gts)
    return sum(ious) / len(ious) if ious else 0.0


def ap_at(preds, gts, tau: float) -> float:
    """Fraction of index-paired boxes with IoU >= tau."""
    ious = _paired_ious(preds, gts)
    if not ious:
        return 0.0
    return sum(1 for v in ious if v >= tau) / len(ious)


def localization_report(preds, gts) -> dict:
    return {
        "miou": miou(preds, gts),
        "ap25": ap_at(preds, gts, 0.25),
        "ap50": ap_at(preds, gts, 0.50),
        "ap75": ap_at(preds, gts, 0.75),
        "pairs": len(preds),
    }


# ---------------------------------------------------------------------------
# Judge scoring


@dataclass(frozen=True)
class QualityReport:
    """Five criterion scores, each an integer in [1, 10], with rationales."""

    scores: dict[str, int]
    rationales: dict[str, str]

    @property
    def mean(self) -> float:
        return sum(self.scores.values()) / len(self.scores)

    def to_dict(self) -> dict:
        return {
            name: {"score": self.scores[name], "rationale": self.rationales.get(name, "")}
            for name in QUALITY_CRITERIA
        }


def parse_judge(response_text: str) -> QualityReport:
    """Strict-parse the judge JSON. Criteria may be bare integers or objects
    with ``score`` and optional ``rationale``."""
    try:
        data = json.loads(response_text)
    except json.JSONDecodeError as exc:
        raise MalformedJudgeResponse(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise MalformedJudgeResponse("judge response must be a JSON object")
    scores: dict[str, int] = {}
    rationales: dict[str, str] = {}
    problems = []
    for name in QUALITY_CRITERIA:
        if name not in data:
            problems.append(f"missing criterion {name}")
            continue
        entry = data[name]
        rationale = ""
        if isinstance(entry, dict):
            score = entry.get("score")
            rationale = str(entry.get("rationale", ""))
        else:
            score = entry
        if not isinstance(score, int) or isinstance(score, bool) or not 1 <= score <= 10:
            problems.append(f"{name} score must be an integer in [1, 10], got {score!r}")
            continue
        scores[name] = score
        rationales[name] = rationale
    if problems:
        raise MalformedJudgeResponse("; ".join(problems))
    return QualityReport(scores, rationales)


# ---------------------------------------------------------------------------
# Pairwise comparison


def _load_template(name: str) -> str:
    return resources.files("coleforge").joinpath(f"assets/prompts/{name}").read_text(encoding="utf-8")


def render_quality_prompt() -> str:
    """The judge system prompt (static template)."""
    return _load_template("quality_assurance.txt")


def render_pairwise_prompt(caption: str, required_texts) -> str:
    """Render the two-image comparison prompt for a caption and its
    must-appear texts."""
    template = _load_template("pairwise_comparison.txt")
    lines = [
        template.rstrip("\n"),
        "",
        f"Caption: {caption}",
        f"Required texts: {' | '.join(required_texts)}",
        "",
    ]
    return "\n".join(lines)


def parse_verdict(text: str) -> int:
    """Accept only verdicts ending in '| Image 1' or '| Image 2'."""
    stripped = text.strip()
    if stripped.endswith("| Image 1"):
        return 1
    if stripped.endswith("| Image 2"):
        return 2
    raise UnparseableVerdict(f"verdict not recognized: {text!r}")
