"""Discretization of continuous typography attributes into bin tokens.

Each attribute has a fixed range split into equal-width bins; a value maps
to the index of the bin containing it (the upper range edge folds into the
last bin) and reconstructs to the bin center. Token text form is
``ATTR:binIndex`` for binned attributes; text, font family, alignment and
role travel as literal tokens.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from enum import Enum
from importlib import resources

from .errors import IndexOutOfRange, OutOfRange

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class BinSpec:
    lo: float
    hi: float
    n_bins: int

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("lo must be < hi")
        if self.n_bins < 1:
            raise ValueError("n_bins must be >= 1")

    @property
    def width(self) -> float:
        return (self.hi - self.lo) / self.n_bins


def quantize(x: float, spec: BinSpec, clamp: bool = False) -> int:
    """Map x to its bin index in [0, n_bins-1].

    The upper edge folds into the last bin. Out-of-range values are clamped
    when ``clamp`` is set and raise OutOfRange otherwise.
    """
    if x < spec.lo or x > spec.hi:
        if not clamp:
            raise OutOfRange(f"{x} outside [{spec.lo}, {spec.hi}]")
        x = min(max(x, spec.lo), spec.hi)
    idx = int(math.floor((x - spec.lo) * spec.n_bins / (spec.hi - spec.lo)))
    return min(idx, spec.n_bins - 1)


def dequantize(b: int, spec: BinSpec) -> float:
    """Reconstruct the bin center lo + (b + 0.5) * width."""
    if not 0 <= b < spec.n_bins:
        raise IndexOutOfRange(f"bin {b} outside [0, {spec.n_bins})")
    return spec.lo + (b + 0.5) * (spec.hi - spec.lo) / spec.n_bins


# The seven binned attribute families and their fixed partitions.
CODEC_TABLE: dict[str, BinSpec] = {
    "font_size": BinSpec(2.0, 200.0, 100),
    "angle": BinSpec(0.0, TWO_PI, 64),
    "color_channel": BinSpec(0.0, 255.0, 32),
    "box_coord": BinSpec(-1.0, 1.0, 256),
    "opacity": BinSpec(0.0, 255.0, 8),
    "letter_spacing": BinSpec(0.0, 1.0, 40),
    "line_spacing": BinSpec(0.0, 1.0, 40),
}


class Alignment(str, Enum):
    LEFT = "left"
    CENTER = "center"
    RIGHT = "right"


class TextRole(str, Enum):
    HEADING = "heading"
    SUB_HEADING = "sub_heading"
    BODY_TEXT = "body_text"


def font_vocabulary() -> tuple[str, ...]:
    data = resources.files("coleforge").joinpath("assets/fonts.json").read_text(encoding="utf-8")
    return tuple(json.loads(data))


# Canonical key order for the typography JSON format.
SPEC_FIELDS = (
    "text",
    "font_family",
    "font_size",
    "angle",
    "color_r",
    "color_g",
    "color_b",
    "opacity",
    "left",
    "top",
    "width",
    "height",
    "letter_spacing",
    "line_spacing",
    "alignment",
    "role",
)

# Map of binned numeric attributes to their bin-spec family, in token order.
BINNED_ATTRS = (
    ("font_size", "font_size"),
    ("angle", "angle"),
    ("color_r", "color_channel"),
    ("color_g", "color_channel"),
    ("color_b", "color_channel"),
    ("opacity", "opacity"),
    ("left", "box_coord"),
    ("top", "box_coord"),
    ("width", "box_coord"),
    ("height", "box_coord"),
    ("letter_spacing", "letter_spacing"),
    ("line_spacing", "line_spacing"),
)


@dataclass(frozen=True)
class TypographySpec:
    """One text block: its content plus the 15 predicted visual attributes
    (three color channels counted separately)."""

    text: str
    font_family: str
    font_size: float
    angle: float
    color: tuple[float, float, float]
    opacity: float
    left: float
    top: float
    width: float
    height: float
    letter_spacing: float
    line_spacing: float
    alignment: Alignment
    role: TextRole

    def __post_init__(self):
        if not isinstance(self.alignment, Alignment):
            object.__setattr__(self, "alignment", Alignment(self.alignment))
        if not isinstance(self.role, TextRole):
            object.__setattr__(self, "role", TextRole(self.role))
        object.__setattr__(self, "color", tuple(self.color))

    def validate(self) -> list[str]:
        problems = []
        if not self.width > 0:
            problems.append("width must be > 0")
        if not self.height > 0:
            problems.append("height must be > 0")
        for name in ("left", "top"):
            v = getattr(self, name)
            if not -1.0 <= v <= 1.0:
                problems.append(f"{name} outside [-1, 1]")
        if self.left + self.width > 1.0 + 1e-9:
            problems.append("box exceeds right canvas edge")
        if self.top + self.height > 1.0 + 1e-9:
            problems.append("box exceeds bottom canvas edge")
        for i, ch in enumerate(self.color):
            if not 0 <= ch <= 255:
                problems.append(f"color channel {i} outside [0, 255]")
        if not 0 <= self.opacity <= 255:
            problems.append("opacity outside [0, 255]")
        if not 0 <= self.angle < TWO_PI:
            problems.append("angle outside [0, 2*pi)")
        if not 2 <= self.font_size <= 200:
            problems.append("font_size outside [2, 200]")
        for name in ("letter_spacing", "line_spacing"):
            if not 0 <= getattr(self, name) <= 1:
                problems.append(f"{name} outside [0, 1]")
        return problems

    def attr_value(self, name: str) -> float:
        if name == "color_r":
            return self.color[0]
        if name == "color_g":
            return self.color[1]
        if name == "color_b":
            return self.color[2]
        return getattr(self, name)

    def to_dict(self) -> dict:
        return {
            "text": self.text,
            "font_family": self.font_family,
            "font_size": self.font_size,
            "angle": self.angle,
            "color_r": self.color[0],
            "color_g": self.color[1],
            "color_b": self.color[2],
            "opacity": self.opacity,
            "left": self.left,
            "top": self.top,
            "width": self.width,
            "height": self.height,
            "letter_spacing": self.letter_spacing,
            "line_spacing": self.line_spacing,
            "alignment": self.alignment.value,
            "role": self.role.value,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TypographySpec":
        return cls(
            text=data["text"],
            font_family=data["font_family"],
            font_size=data["font_size"],
            angle=data["angle"],
            color=(data["color_r"], data["color_g"], data["color_b"]),
            opacity=data["opacity"],
            left=data["left"],
            top=data["top"],
            width=data["width"],
            height=data["height"],
            letter_spacing=data["letter_spacing"],
            line_spacing=data["line_spacing"],
            alignment=Alignment(data["alignment"]),
            role=TextRole(data["role"]),
        )


def serialize_spec(spec: TypographySpec) -> str:
    """Canonical one-object JSON form of a text block."""
    return json.dumps(spec.to_dict(), ensure_ascii=False, indent=2) + "\n"


def deserialize_spec(text: str) -> TypographySpec:
    return TypographySpec.from_dict(json.loads(text))


def encode_spec(spec: TypographySpec, table: dict[str, BinSpec] = CODEC_TABLE) -> list[str]:
    """Tokenize a typography spec: literal tokens for text/font/alignment/role
    followed by ``ATTR:binIndex`` tokens for the binned attributes."""
    tokens = [
        f"TEXT:{spec.text}",
        f"FONT_FAMILY:{spec.font_family}",
        f"ALIGNMENT:{spec.alignment.value}",
        f"ROLE:{spec.role.value}",
    ]
    for attr, family in BINNED_ATTRS:
        b = quantize(spec.attr_value(attr), table[family])
        tokens.append(f"{attr.upper()}:{b}")
    return tokens


def decode_spec(tokens: list[str], table: dict[str, BinSpec] = CODEC_TABLE) -> TypographySpec:
    """Invert encode_spec up to per-attribute quantization error."""
    literals: dict[str, str] = {}
    bins: dict[str, int] = {}
    binned_names = {attr for attr, _ in BINNED_ATTRS}
    for token in tokens:
        key, _, value = token.partition(":")
        lowered = key.lower()
        if lowered in binned_names:
            bins[lowered] = int(value)
        else:
            literals[lowered] = value
    values = {
        attr: dequantize(bins[attr], table[family]) for attr, family in BINNED_ATTRS
    }
    return TypographySpec(
        text=literals["text"],
        font_family=literals["font_family"],
        font_size=values["font_size"],
        angle=values["angle"],
        color=(values["color_r"], values["color_g"], values["color_b"]),
        opacity=values["opacity"],
        left=values["left"],
        top=values["top"],
        width=values["width"],
        height=values["height"],
        letter_spacing=values["letter_spacing"],
        line_spacing=values["line_spacing"],
        alignment=Alignment(literals["alignment"]),
        role=TextRole(literals["role"]),
    )


def spec_with_updates(spec: TypographySpec, **updates) -> TypographySpec:
    return replace(spec, **updates)
