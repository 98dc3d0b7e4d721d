"""Text layout and layered SVG rendering.

Coordinates: plan/typography boxes live in normalized [-1, 1] canvas units.
Positions map to pixels by px = (v + 1) / 2 * dim; extents span half that,
so a normalized width of 2 covers the full canvas.

Layout is greedy word wrap with uniform tracking: per-glyph advance is the
metric advance plus letter_spacing * canvas.width, and the baseline step is
font_size * (1 + line_spacing). Rotation is applied about the block center
at render time, which preserves line containment in the block box.
"""

from __future__ import annotations

import base64
import io
import math
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import Protocol

import numpy as np
from PIL import Image

from .codec import Alignment, TypographySpec
from .compositor import Raster, blend
from .errors import InvalidStack, RasterizerUnavailable


@dataclass(frozen=True)
class Canvas:
    width: int = 1024
    height: int = 1024

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("canvas dims must be positive")

    def to_px(self, x: float, y: float) -> tuple[float, float]:
        return (x + 1.0) / 2.0 * self.width, (y + 1.0) / 2.0 * self.height

    def to_norm(self, x_px: float, y_px: float) -> tuple[float, float]:
        return x_px / self.width * 2.0 - 1.0, y_px / self.height * 2.0 - 1.0

    def len_px(self, w: float, h: float) -> tuple[float, float]:
        return w / 2.0 * self.width, h / 2.0 * self.height


class FontMetricsProvider(Protocol):
    def advance(self, char: str, font_family: str, font_size: float) -> float: ...


class MonospaceMetrics:
    """Deterministic mock metrics: every glyph advances 0.6 * font_size."""

    factor = 0.6

    def advance(self, char: str, font_family: str, font_size: float) -> float:
        return self.factor * font_size


@dataclass(frozen=True)
class LineBox:
    text: str
    x: float
    y: float
    width: float
    height: float

    @property
    def baseline(self) -> float:
        return self.y + self.height


@dataclass(frozen=True)
class LayoutResult:
    lines: tuple[LineBox, ...]
    findings: tuple[str, ...] = ()

    @property
    def overflow(self) -> bool:
        return bool(self.findings)


def _line_width(text: str, adv) -> float:
    return sum(adv(ch) for ch in text)


def _hard_break(word: str, max_width: float, adv) -> list[str]:
    chunks = []
    current = ""
    for ch in word:
        if current and _line_width(current + ch, adv) > max_width:
            chunks.append(current)
            current = ch
        else:
            current += ch
    if current:
        chunks.append(current)
    return chunks


def layout_text(
    block: TypographySpec,
    canvas: Canvas = Canvas(),
    metrics: FontMetricsProvider | None = None,
) -> LayoutResult:
    """Wrap the block text into line boxes inside its pixel box.

    Overflow is reported as findings, never raised.
    """
    metrics = metrics or MonospaceMetrics()
    tracking = block.letter_spacing * canvas.width

    def adv(ch: str) -> float:
        return metrics.advance(ch, block.font_family, block.font_size) + tracking

    x0, y0 = canvas.to_px(block.left, block.top)
    box_w, box_h = canvas.len_px(block.width, block.height)

    if not block.text.strip():
        return LayoutResult(())

    findings: list[str] = []
    lines: list[str] = []
    current = ""
    for word in block.text.split(" "):
        if not word:
            continue
        candidate = word if not current else current + " " + word
        if _line_width(candidate, adv) <= box_w or not current:
            if _line_width(word, adv) > box_w and not current:
                pieces = _hard_break(word, box_w, adv)
                lines.extend(pieces[:-1])
                current = pieces[-1]
            else:
                current = candidate
        else:
            lines.append(current)
            if _line_width(word, adv) > box_w:
                pieces = _hard_break(word, box_w, adv)
                lines.extend(pieces[:-1])
                current = pieces[-1]
            else:
                current = word
    if current:
        lines.append(current)

    step = block.font_size * (1.0 + block.line_spacing)
    boxes = []
    for i, text in enumerate(lines):
        lw = _line_width(text, adv)
        if block.alignment is Alignment.CENTER:
            lx = x0 + (box_w - lw) / 2.0
        elif block.alignment is Alignment.RIGHT:
            lx = x0 + box_w - lw
        else:
            lx = x0
        boxes.append(LineBox(text, lx, y0 + i * step, lw, block.font_size))
        if lw > box_w + 1e-6:
            findings.append(f"line {i} wider than block ({lw:.1f}px > {box_w:.1f}px)")
    used_h = (len(lines) - 1) * step + block.font_size if lines else 0.0
    if used_h > box_h + 1e-6:
        findings.append(f"text height exceeds block ({used_h:.1f}px > {box_h:.1f}px)")
    return LayoutResult(tuple(boxes), tuple(findings))


# ---------------------------------------------------------------------------
# Layer stack and SVG rendering


@dataclass(frozen=True)
class ObjectTransform:
    """Post-generation edit transform of the object layer, applied at render."""

    dx: float = 0.0  # normalized units
    dy: float = 0.0
    scale: float = 1.0

    @property
    def is_identity(self) -> bool:
        return self.dx == 0.0 and self.dy == 0.0 and self.scale == 1.0

    def to_dict(self) -> dict:
        return {"dx": self.dx, "dy": self.dy, "scale": self.scale}


@dataclass(frozen=True)
class LayerStack:
    background: Raster
    object_layer: tuple[Raster, Raster] | None = None  # (rgb, alpha)
    text_blocks: tuple[TypographySpec, ...] = ()
    object_transform: ObjectTransform = ObjectTransform()

    def __post_init__(self):
        object.__setattr__(self, "text_blocks", tuple(self.text_blocks))

    def composed(self) -> Raster:
        if self.object_layer is None:
            return self.background
        rgb, alpha = self.object_layer
        return blend(self.background, rgb, alpha)


@dataclass(frozen=True)
class SvgDocument:
    markup: str
    layer_index: dict[str, str] = field(default_factory=dict)


def _fmt(v: float) -> str:
    text = f"{v:.6f}".rstrip("0").rstrip(".")
    return text if text not in ("", "-0") else "0"


def _png_data_uri(raster: Raster) -> str:
    return "data:image/png;base64," + base64.b64encode(raster.to_png_bytes()).decode("ascii")


def render_svg(stack: LayerStack, canvas: Canvas = Canvas(), metrics: FontMetricsProvider | None = None) -> SvgDocument:
    """Emit the layered SVG: background image, masked object image, and one
    group per text block with all typography attributes expressed."""
    if stack.background.width != canvas.width or stack.background.height != canvas.height:
        raise InvalidStack("background does not match canvas dimensions")
    if stack.object_layer is not None:
        rgb, alpha = stack.object_layer
        if not (rgb.same_dims(stack.background) and alpha.same_dims(stack.background)):
            raise InvalidStack("object layer does not match canvas dimensions")

    w, h = canvas.width, canvas.height
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        '  <g id="layer-background" data-layer-role="background">',
        f'    <image x="0" y="0" width="{w}" height="{h}" href="{_png_data_uri(stack.background)}" />',
        "  </g>",
    ]
    layer_index = {"layer-background": "background"}

    if stack.object_layer is not None:
        rgb, alpha = stack.object_layer
        t = stack.object_transform
        tx, ty = t.dx / 2.0 * w, t.dy / 2.0 * h
        transform = f' transform="translate({_fmt(tx)} {_fmt(ty)}) scale({_fmt(t.scale)})"' if not t.is_identity else ""
        out += [
            f'  <g id="layer-object" data-layer-role="object"{transform}>',
            '    <mask id="object-alpha">',
            f'      <image x="0" y="0" width="{w}" height="{h}" href="{_png_data_uri(alpha)}" />',
            "    </mask>",
            f'    <image x="0" y="0" width="{w}" height="{h}" mask="url(#object-alpha)" href="{_png_data_uri(rgb)}" />',
            "  </g>",
        ]
        layer_index["layer-object"] = "object"

    out.append('  <g id="layer-text" data-layer-role="text">')
    layer_index["layer-text"] = "text"
    anchors = {Alignment.LEFT: "start", Alignment.CENTER: "middle", Alignment.RIGHT: "end"}
    for i, block in enumerate(stack.text_blocks):
        x0, y0 = canvas.to_px(block.left, block.top)
        bw, bh = canvas.len_px(block.width, block.height)
        cx, cy = x0 + bw / 2.0, y0 + bh / 2.0
        deg = math.degrees(block.angle)
        r, g, b = (int(round(c)) for c in block.color)
        attrs = " ".join(
            [
                f'data-block-role="{block.role.value}"',
                f'data-block-index="{i}"',
                f'data-font-family="{block.font_family}"',
                f'data-font-size="{_fmt(block.font_size)}"',
                f'data-angle="{_fmt(block.angle)}"',
                f'data-color-r="{_fmt(block.color[0])}"',
                f'data-color-g="{_fmt(block.color[1])}"',
                f'data-color-b="{_fmt(block.color[2])}"',
                f'data-opacity="{_fmt(block.opacity)}"',
                f'data-left="{_fmt(block.left)}"',
                f'data-top="{_fmt(block.top)}"',
                f'data-width="{_fmt(block.width)}"',
                f'data-height="{_fmt(block.height)}"',
                f'data-letter-spacing="{_fmt(block.letter_spacing)}"',
                f'data-line-spacing="{_fmt(block.line_spacing)}"',
                f'data-alignment="{block.alignment.value}"',
            ]
        )
        out.append(f'    <g {attrs} transform="rotate({_fmt(deg)} {_fmt(cx)} {_fmt(cy)})">')
        layout = layout_text(block, canvas, metrics)
        anchor = anchors[block.alignment]
        for line in layout.lines:
            if block.alignment is Alignment.CENTER:
                ax = line.x + line.width / 2.0
            elif block.alignment is Alignment.RIGHT:
                ax = line.x + line.width
            else:
                ax = line.x
            out.append(
                f'      <text x="{_fmt(ax)}" y="{_fmt(line.baseline)}" '
                f'font-family="{block.font_family}" font-size="{_fmt(block.font_size)}" '
                f'fill="rgb({r},{g},{b})" fill-opacity="{_fmt(block.opacity / 255.0)}" '
                f'letter-spacing="{_fmt(block.letter_spacing * canvas.width)}" '
                f'text-anchor="{anchor}">{_escape(line.text)}</text>'
            )
        out.append("    </g>")
    out.append("  </g>")
    out.append("</svg>")
    return SvgDocument("\n".join(out) + "\n", layer_index)


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def reserialize(markup: str) -> str:
    """Parse and re-emit the document; a second pass is a fixed point."""
    root = ET.fromstring(markup)
    return ET.tostring(root, encoding="unicode")


# ---------------------------------------------------------------------------
# Preview rasterization


class MockRasterizer:
    """Desk-scale rasterizer: composes the embedded layers and paints each
    text block's pixel box as a solid rectangle of its text color. Blocks at
    opacity 0 leave the preview untouched."""

    def rasterize(self, doc: SvgDocument) -> Raster:
        root = ET.fromstring(doc.markup)
        width = int(root.get("width"))
        height = int(root.get("height"))
        canvas = Canvas(width, height)
        ns = "{http://www.w3.org/2000/svg}"

        background = None
        result = None
        for group in root.findall(f"{ns}g"):
            role = group.get("data-layer-role")
            if role == "background":
                background = _image_raster(group.find(f"{ns}image"))
                result = background.data.copy()
            elif role == "object":
                rgb = _image_raster(group.find(f"{ns}image[@mask]"))
                alpha = _image_raster(group.find(f"{ns}mask/{ns}image"))
                rgb, alpha = _apply_object_transform(group.get("transform"), rgb, alpha, canvas)
                result = blend(Raster.from_array(result), rgb, alpha).data.copy()
            elif role == "text":
                for block in group.findall(f"{ns}g"):
                    opacity = float(block.get("data-opacity"))
                    if opacity <= 0:
                        continue
                    left = float(block.get("data-left"))
                    top = float(block.get("data-top"))
                    bw = float(block.get("data-width"))
                    bh = float(block.get("data-height"))
                    x0, y0 = canvas.to_px(left, top)
                    pw, ph = canvas.len_px(bw, bh)
                    color = np.array(
                        [
                            round(float(block.get("data-color-r"))),
                            round(float(block.get("data-color-g"))),
                            round(float(block.get("data-color-b"))),
                        ],
                        dtype=np.uint8,
                    )
                    xa, ya = max(0, int(round(x0))), max(0, int(round(y0)))
                    xb, yb = min(width, int(round(x0 + pw))), min(height, int(round(y0 + ph)))
                    if xa < xb and ya < yb:
                        result[ya:yb, xa:xb] = color
        if result is None:
            raise RasterizerUnavailable("document has no background layer")
        return Raster.from_array(result)


def _image_raster(el) -> Raster:
    href = el.get("href")
    blob = base64.b64decode(href.split(",", 1)[1])
    return Raster.from_png_bytes(blob)


_TRANSFORM_RE = re.compile(r"translate\(([-\d.]+) ([-\d.]+)\) scale\(([-\d.]+)\)")


def _apply_object_transform(transform, rgb: Raster, alpha: Raster, canvas: Canvas):
    if not transform:
        return rgb, alpha
    match = _TRANSFORM_RE.match(transform)
    if not match:
        return rgb, alpha
    tx, ty, scale = (float(g) for g in match.groups())
    out_rgb = np.zeros_like(rgb.data)
    out_alpha = np.zeros_like(alpha.data)
    sw, sh = max(1, int(round(rgb.width * scale))), max(1, int(round(rgb.height * scale)))
    scaled_rgb = np.asarray(Image.fromarray(rgb.data).resize((sw, sh), Image.NEAREST))
    scaled_alpha = np.asarray(Image.fromarray(alpha.data).resize((sw, sh), Image.NEAREST))
    ox, oy = int(round(tx)), int(round(ty))
    xa, ya = max(0, ox), max(0, oy)
    xb, yb = min(canvas.width, ox + sw), min(canvas.height, oy + sh)
    if xa < xb and ya < yb:
        out_rgb[ya:yb, xa:xb] = scaled_rgb[ya - oy : yb - oy, xa - ox : xb - ox]
        out_alpha[ya:yb, xa:xb] = scaled_alpha[ya - oy : yb - oy, xa - ox : xb - ox]
    return Raster.from_array(out_rgb), Raster.from_array(out_alpha)


def rasterize_preview(doc: SvgDocument, rasterizer=None) -> Raster:
    """Deterministic preview raster via the pluggable rasterizer contract."""
    rasterizer = rasterizer or MockRasterizer()
    if not hasattr(rasterizer, "rasterize"):
        raise RasterizerUnavailable("rasterizer does not implement rasterize()")
    return rasterizer.rasterize(doc)
