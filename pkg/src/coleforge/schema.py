"""Design plan document: validation, canonical (de)serialization, and the
masked-field encoding used to drive planner backends.

The plan file format is UTF-8 JSON with a fixed key order (see PLAN_FIELDS)
so that serialize(deserialize(text)) == text for canonical documents.
Masked fields are represented by ``<MASK:field_path>`` sentinel strings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from importlib import resources

from .errors import (
    MissingSlot,
    PlanValidationError,
    TypeCoercionFailure,
    UnknownFieldPath,
)


class Category(str, Enum):
    ADVERTISING = "advertising"
    EVENTS = "events"
    MARKETING = "marketing"
    POSTS = "posts"
    COVERS_AND_HEADERS = "covers_and_headers"
    CREATIVE = "creative"


CATEGORY_VALUES = tuple(c.value for c in Category)

# Canonical field order of the plan document. Both serialization and the
# masked encoding iterate fields in exactly this order.
PLAN_FIELDS = (
    "global_caption",
    "category",
    "keywords",
    "background_caption",
    "object_flag",
    "object_caption",
    "heading",
    "sub_heading",
    "body_text",
)

_STRING_FIELDS = frozenset(PLAN_FIELDS) - {"keywords", "object_flag"}


@dataclass(frozen=True)
class DesignIntent:
    """A user's free-form design request plus its benchmark category."""

    text: str
    category: Category

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError("intent text must be non-empty after trimming")
        if not isinstance(self.category, Category):
            object.__setattr__(self, "category", Category(self.category))


@dataclass(frozen=True)
class DesignPlan:
    """Structured plan document: captions, keywords, object flag, and the
    content of the three text layers. Any text field may be empty."""

    global_caption: str = ""
    category: str = ""
    keywords: tuple[str, ...] = ()
    background_caption: str = ""
    object_flag: bool = False
    object_caption: str = ""
    heading: str = ""
    sub_heading: str = ""
    body_text: str = ""

    def __post_init__(self):
        object.__setattr__(self, "keywords", tuple(self.keywords))

    def to_dict(self) -> dict:
        return {
            "global_caption": self.global_caption,
            "category": self.category,
            "keywords": list(self.keywords),
            "background_caption": self.background_caption,
            "object_flag": self.object_flag,
            "object_caption": self.object_caption,
            "heading": self.heading,
            "sub_heading": self.sub_heading,
            "body_text": self.body_text,
        }


@dataclass(frozen=True)
class Finding:
    field: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.findings


def validate_plan(plan: DesignPlan) -> ValidationReport:
    """Check every plan invariant. Never raises; returns all findings."""
    findings: list[Finding] = []
    if plan.category not in CATEGORY_VALUES:
        findings.append(Finding("category", f"unknown category {plan.category!r}"))
    if not plan.object_flag and plan.object_caption:
        findings.append(Finding("object_caption", "object_caption must be empty when object_flag is false"))
    for i, kw in enumerate(plan.keywords):
        if not isinstance(kw, str) or not kw.strip():
            findings.append(Finding("keywords", f"keyword {i} is empty"))
    for name in _STRING_FIELDS:
        if not isinstance(getattr(plan, name), str):
            findings.append(Finding(name, "must be a string"))
    if not isinstance(plan.object_flag, bool):
        findings.append(Finding("object_flag", "must be a boolean"))
    return ValidationReport(tuple(findings))


def serialize_plan(plan: DesignPlan) -> str:
    """Canonical UTF-8 JSON: fixed key order, 2-space indent, trailing newline."""
    return json.dumps(plan.to_dict(), ensure_ascii=False, indent=2) + "\n"


def deserialize_plan(text: str) -> DesignPlan:
    data = json.loads(text)
    if not isinstance(data, dict):
        raise PlanValidationError([Finding("", "plan document must be a JSON object")])
    unknown = set(data) - set(PLAN_FIELDS)
    if unknown:
        raise PlanValidationError([Finding(k, "unknown field") for k in sorted(unknown)])
    plan = DesignPlan(**{k: (tuple(v) if k == "keywords" else v) for k, v in data.items()})
    report = validate_plan(plan)
    if not report.ok:
        raise PlanValidationError(report.findings)
    return plan


# ---------------------------------------------------------------------------
# Masked-field encoding


def sentinel(field_path: str) -> str:
    return f"<MASK:{field_path}>"


@dataclass(frozen=True)
class MaskedPlanEncoding:
    """A plan document with sentinel placeholders for the fields a planner
    backend must fill. ``mask_slots`` pairs each field path with its slot id,
    in canonical field order."""

    prompt_text: str
    mask_slots: tuple[tuple[str, str], ...]


def encode_masked(plan_partial: DesignPlan, fields_to_mask) -> MaskedPlanEncoding:
    """Serialize the plan with masked fields replaced by sentinels.

    Known field values appear verbatim; sentinels appear in canonical order.
    """
    to_mask = set(fields_to_mask)
    unknown = to_mask - set(PLAN_FIELDS)
    if unknown:
        raise UnknownFieldPath(", ".join(sorted(unknown)))
    doc = plan_partial.to_dict()
    slots = []
    for name in PLAN_FIELDS:
        if name in to_mask:
            doc[name] = sentinel(name)
            slots.append((name, name))
    prompt_text = json.dumps(doc, ensure_ascii=False, indent=2) + "\n"
    return MaskedPlanEncoding(prompt_text, tuple(slots))


def _coerce(field_path: str, raw: str):
    if field_path == "object_flag":
        lowered = raw.strip().lower()
        if lowered == "true":
            return True
        if lowered == "false":
            return False
        raise TypeCoercionFailure(f"object_flag fill {raw!r} is not a boolean")
    if field_path == "keywords":
        try:
            value = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise TypeCoercionFailure(f"keywords fill is not a JSON array: {exc}") from exc
        if not isinstance(value, list) or not all(isinstance(k, str) for k in value):
            raise TypeCoercionFailure("keywords fill must be a JSON array of strings")
        return tuple(value)
    return raw


def decode_masked(encoding: MaskedPlanEncoding, fills: dict[str, str]) -> DesignPlan:
    """Fill every slot and decode back into a validated plan."""
    doc = json.loads(encoding.prompt_text)
    for field_path, slot_id in encoding.mask_slots:
        if slot_id not in fills:
            raise MissingSlot(slot_id)
        doc[field_path] = _coerce(field_path, fills[slot_id])
    plan = DesignPlan(**{k: (tuple(v) if k == "keywords" else v) for k, v in doc.items()})
    report = validate_plan(plan)
    if not report.ok:
        raise PlanValidationError(report.findings)
    return plan


def ground_truth_fills(plan: DesignPlan, encoding: MaskedPlanEncoding) -> dict[str, str]:
    """Textual fills that reproduce ``plan`` when decoded (inverse of masking)."""
    fills = {}
    for field_path, slot_id in encoding.mask_slots:
        value = getattr(plan, field_path)
        if field_path == "object_flag":
            fills[slot_id] = "true" if value else "false"
        elif field_path == "keywords":
            fills[slot_id] = json.dumps(list(value), ensure_ascii=False)
        else:
            fills[slot_id] = value
    return fills


# ---------------------------------------------------------------------------
# Intention prompt rendering


@dataclass(frozen=True)
class RawImageInfo:
    """Raw metadata of an existing design image, used to synthesize the
    intention that could have produced it."""

    title: str
    format: str
    keywords: tuple[str, ...] = ()
    texts: tuple[str, ...] = ()


def _load_template(name: str) -> str:
    return resources.files("coleforge").joinpath(f"assets/prompts/{name}").read_text(encoding="utf-8")


def render_intention_prompt(raw: RawImageInfo) -> str:
    """Render the intention-synthesis prompt with the image info substituted."""
    template = _load_template("intention_generation.txt")
    lines = [
        template.rstrip("\n"),
        "",
        f"Image title: {raw.title}",
        f"Image format: {raw.format}",
        f"Image keywords: {', '.join(raw.keywords)}",
        f"Image texts: {' | '.join(raw.texts)}",
        "",
    ]
    return "\n".join(lines)


def plan_with_updates(plan: DesignPlan, **updates) -> DesignPlan:
    return replace(plan, **updates)
