"""Deterministic desk-scale backends.

Every mock derives its randomness from sha256(text, seed), so a run is
bit-reproducible given (intent, seed). The palette rule is documented:
color words found in the intent text are sorted, joined with '|', and the
signature is that token string followed by '#' and the first 8 hex digits
of sha256("palette:" + tokens + ":" + str(seed)).
"""

from __future__ import annotations

import hashlib
import math
import re
from dataclasses import dataclass

import numpy as np

from ..codec import Alignment, TextRole, TypographySpec, font_vocabulary, spec_with_updates
from ..compositor import Raster
from ..metrics import QUALITY_CRITERIA, QualityReport
from ..schema import (
    DesignIntent,
    DesignPlan,
    PLAN_FIELDS,
    decode_masked,
    encode_masked,
    ground_truth_fills,
)
from .base import BackendSuite
from ..typesetter import Canvas

COLOR_WORDS = {
    "pink": (236, 130, 175),
    "red": (205, 60, 60),
    "orange": (235, 140, 52),
    "yellow": (240, 200, 70),
    "green": (80, 165, 95),
    "blue": (60, 100, 190),
    "purple": (130, 80, 180),
    "brown": (140, 100, 70),
    "black": (35, 35, 40),
    "white": (245, 245, 242),
    "gold": (212, 175, 55),
    "golden": (212, 175, 55),
}

_STOPWORDS = frozenset(
    "a an and are as at be by for from in is it its of on or that the this to with "
    "create design please should will your our their may can featuring includes include".split()
)


def _digest(*parts) -> int:
    h = hashlib.sha256("\x1f".join(str(p) for p in parts).encode("utf-8"))
    return int.from_bytes(h.digest()[:8], "big")


def palette_tokens(text: str) -> list[str]:
    lowered = re.findall(r"[a-z0-9']+", text.lower())
    return sorted({w for w in lowered if w in COLOR_WORDS})


def palette_signature(text: str, seed: int) -> str:
    tokens = palette_tokens(text)
    joined = "|".join(tokens)
    tail = hashlib.sha256(f"palette:{joined}:{seed}".encode("utf-8")).hexdigest()[:8]
    return f"{joined}#{tail}"


def _palette_colors(text: str, seed: int) -> list[tuple[int, int, int]]:
    tokens = palette_tokens(text)
    colors = [COLOR_WORDS[t] for t in tokens]
    rng = np.random.default_rng(_digest("palette", text, seed))
    while len(colors) < 2:
        colors.append(tuple(int(v) for v in rng.integers(40, 220, size=3)))
    return colors


def _keywords(text: str) -> tuple[str, ...]:
    words = re.findall(r"[a-z0-9']+", text.lower())
    seen: list[str] = []
    for w in words:
        if w in _STOPWORDS or len(w) < 3 or w in seen:
            continue
        seen.append(w)
        if len(seen) == 8:
            break
    return tuple(seen)


@dataclass
class MockPlanner:
    seed: int
    backend_id: str = "mock-planner"
    kind: str = "mock"
    force_object_flag: bool | None = None

    def health(self) -> bool:
        return True

    def plan(self, intent: DesignIntent, seed: int) -> DesignPlan:
        words = intent.text.split()
        keywords = _keywords(intent.text)
        if self.force_object_flag is not None:
            object_flag = self.force_object_flag
        else:
            object_flag = _digest("flag", intent.text, seed) % 4 != 0
        subject = keywords[0] if keywords else "the design"
        target = DesignPlan(
            global_caption=intent.text,
            category=intent.category.value,
            keywords=keywords,
            background_caption=(
                f"A clean {intent.category.value.replace('_', ' ')} background about {subject}, "
                f"leaving open space for text, palette {palette_signature(intent.text, seed)}"
            ),
            object_flag=object_flag,
            object_caption=f"A decorative {subject} illustration with soft edges" if object_flag else "",
            heading=" ".join(words[:5]),
            sub_heading=" ".join(words[5:11]),
            body_text=" ".join(words[11:24]),
        )
        # Exercise the masked-field path: encode with every field masked,
        # fill from the derived values, and decode back.
        encoding = encode_masked(DesignPlan(category=intent.category.value), PLAN_FIELDS)
        return decode_masked(encoding, ground_truth_fills(target, encoding))


@dataclass
class MockBackground:
    seed: int
    backend_id: str = "mock-background"
    kind: str = "mock"
    clear_band: tuple[float, float] = (0.35, 0.75)  # fraction of height kept clear

    def health(self) -> bool:
        return True

    def generate(self, caption: str, keywords, seed: int, canvas: Canvas) -> Raster:
        colors = _palette_colors(caption, seed)
        top = np.array(colors[0], dtype=np.float64)
        bottom = np.array(colors[1], dtype=np.float64)
        t = np.linspace(0.0, 1.0, canvas.height)[:, None]
        rows = top[None, :] * (1.0 - t) + bottom[None, :] * t
        img = np.repeat(rows[:, None, :], canvas.width, axis=1)
        # Reserve a clear band for text and object placement.
        y0 = int(self.clear_band[0] * canvas.height)
        y1 = int(self.clear_band[1] * canvas.height)
        img[y0:y1] = img[y0:y1] * 0.25 + 255.0 * 0.75
        return Raster.from_array(np.floor(img + 0.5).astype(np.uint8))


@dataclass
class MockObject:
    seed: int
    backend_id: str = "mock-object"
    kind: str = "mock"

    def health(self) -> bool:
        return True

    def generate(self, caption: str, background: Raster, seed: int) -> tuple[Raster, Raster]:
        h, w = background.height, background.width
        rng = np.random.default_rng(_digest("object", caption, seed))
        cx = w * float(rng.uniform(0.55, 0.8))
        cy = h * float(rng.uniform(0.5, 0.7))
        rx = w * float(rng.uniform(0.1, 0.18))
        ry = h * float(rng.uniform(0.1, 0.18))
        color = _palette_colors(caption, seed + 1)[0]
        yy, xx = np.mgrid[0:h, 0:w]
        d2 = ((xx - cx) / rx) ** 2 + ((yy - cy) / ry) ** 2
        alpha = np.clip(255.0 * np.exp(-np.maximum(d2 - 1.0, 0.0) * 6.0), 0, 255)
        alpha[d2 <= 1.0] = 255.0
        shade = np.clip(1.0 - 0.25 * np.sqrt(np.minimum(d2, 1.0)), 0.0, 1.0)
        rgb = np.stack([shade * c for c in color], axis=-1)
        return (
            Raster.from_array(np.floor(rgb + 0.5).astype(np.uint8)),
            Raster.from_array(np.floor(alpha + 0.5).astype(np.uint8)),
        )


@dataclass
class MockTypographer:
    seed: int
    backend_id: str = "mock-typographer"
    kind: str = "mock"

    def health(self) -> bool:
        return True

    def place(self, plan: DesignPlan, composed: Raster, canvas: Canvas, seed: int) -> tuple[TypographySpec, ...]:
        fonts = font_vocabulary()
        rng = np.random.default_rng(_digest("typography", plan.global_caption, seed))
        font = fonts[int(rng.integers(0, len(fonts)))]
        # Dark ink on the clear band; deterministic per plan.
        ink = (30, 30, 35)
        placements = (
            (TextRole.HEADING, plan.heading, -0.72, 64.0, 0.22),
            (TextRole.SUB_HEADING, plan.sub_heading, -0.18, 40.0, 0.2),
            (TextRole.BODY_TEXT, plan.body_text, 0.34, 24.0, 0.3),
        )
        blocks = []
        for role, text, top, font_size, height in placements:
            if not text:
                continue
            blocks.append(
                TypographySpec(
                    text=text,
                    font_family=font,
                    font_size=font_size,
                    angle=0.0,
                    color=ink,
                    opacity=255.0,
                    left=-0.8,
                    top=top,
                    width=1.6,
                    height=height,
                    letter_spacing=0.0,
                    line_spacing=0.25,
                    alignment=Alignment.CENTER,
                    role=role,
                )
            )
        return tuple(blocks)


@dataclass
class MockReflector:
    """Nudges every block halfway toward horizontal center each iteration."""

    seed: int
    backend_id: str = "mock-reflector"
    kind: str = "mock"

    def health(self) -> bool:
        return True

    def propose(self, blocks, preview: Raster, canvas: Canvas) -> tuple[TypographySpec, ...]:
        out = []
        for block in blocks:
            centered_left = -block.width / 2.0
            new_left = centered_left + (block.left - centered_left) * 0.5
            out.append(spec_with_updates(block, left=new_left))
        return tuple(out)


@dataclass
class MockJudge:
    """Scores horizontal centering of the text blocks; other criteria are a
    deterministic function of the plan. Monotone in centering error."""

    seed: int
    backend_id: str = "mock-judge"
    kind: str = "mock"

    def health(self) -> bool:
        return True

    def score(self, preview: Raster, plan: DesignPlan, blocks) -> QualityReport:
        if blocks:
            err = sum(abs(b.left + b.width / 2.0) for b in blocks) / len(blocks)
        else:
            err = 1.0
        layout = max(1, min(10, 10 - int(math.ceil(err * 9.0 - 1e-9))))
        base = 4 + _digest("judge", plan.global_caption, self.seed) % 4
        scores = {
            "design_layout": layout,
            "content_relevance": base,
            "typography_color": max(1, min(10, base + 1)),
            "graphics_images": max(1, min(10, base - 1)),
            "innovation": base,
        }
        rationales = {name: "mock heuristic" for name in QUALITY_CRITERIA}
        return QualityReport(scores, rationales)


def mock_suite(seed: int = 0, force_object_flag: bool | None = None) -> BackendSuite:
    """A fully deterministic suite; same (intent, seed) gives identical bundles."""
    return BackendSuite(
        planner=MockPlanner(seed, force_object_flag=force_object_flag),
        background_gen=MockBackground(seed),
        object_gen=MockObject(seed),
        typographer=MockTypographer(seed),
        reflector=MockReflector(seed),
        quality_judge=MockJudge(seed),
    )
