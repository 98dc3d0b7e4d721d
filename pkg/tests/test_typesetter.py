import numpy as np
import pytest
import xml.etree.ElementTree as ET
from pathlib import Path

from coleforge.codec import Alignment, TextRole, TypographySpec
from coleforge.compositor import Raster, blend
from coleforge.errors import InvalidStack
from coleforge.typesetter import (
    Canvas,
    LayerStack,
    MockRasterizer,
    MonospaceMetrics,
    ObjectTransform,
    layout_text,
    rasterize_preview,
    render_svg,
    reserialize,
)

GOLDEN = Path(__file__).parent / "golden"


def _block(**overrides):
    base = dict(
        text="alpha beta gamma delta",
        font_family="Montserrat",
        font_size=20.0,
        angle=0.0,
        color=(10.0, 20.0, 30.0),
        opacity=255.0,
        left=-0.5,
        top=-0.5,
        width=1.0,
        height=0.5,
        letter_spacing=0.0,
        line_spacing=0.0,
        alignment=Alignment.LEFT,
        role=TextRole.BODY_TEXT,
    )
    base.update(overrides)
    return TypographySpec(**base)


def test_canvas_coordinate_round_trip():
    canvas = Canvas(1024, 512)
    assert canvas.to_px(-1.0, -1.0) == (0.0, 0.0)
    assert canvas.to_px(1.0, 1.0) == (1024.0, 512.0)
    assert canvas.len_px(2.0, 2.0) == (1024.0, 512.0)
    x, y = canvas.to_norm(*canvas.to_px(0.25, -0.75))
    assert (x, y) == pytest.approx((0.25, -0.75))


def test_layout_wraps_words_within_box():
    canvas = Canvas(100, 100)
    # box is 50 px wide; glyph advance 12 px -> at most 4 chars per line
    block = _block(font_size=20.0, width=1.0, height=2.0, text="ab cd ef")
    layout = layout_text(block, canvas)
    assert [line.text for line in layout.lines] == ["ab", "cd", "ef"]
    for line in layout.lines:
        assert line.width <= 50.0 + 1e-9


def test_layout_hard_breaks_overlong_word():
    canvas = Canvas(100, 100)
    block = _block(text="abcdefgh", width=1.0, height=2.0)
    layout = layout_text(block, canvas)
    assert "".join(line.text for line in layout.lines) == "abcdefgh"
    assert len(layout.lines) > 1


def test_layout_reports_overflow_as_findings():
    canvas = Canvas(100, 100)
    block = _block(text="ab cd ef gh ij kl", height=0.2)
    layout = layout_text(block, canvas)
    assert layout.overflow
    assert any("height exceeds" in f for f in layout.findings)


def test_letter_spacing_and_line_spacing_change_geometry():
    canvas = Canvas(200, 200)
    tight = layout_text(_block(text="abc", width=2.0, height=2.0), canvas)
    spaced = layout_text(
        _block(text="abc", width=2.0, height=2.0, letter_spacing=0.05), canvas
    )
    assert spaced.lines[0].width > tight.lines[0].width
    two = layout_text(_block(text="ab " * 30, width=0.5, height=2.0, line_spacing=0.5), canvas)
    step = two.lines[1].y - two.lines[0].y
    assert step == pytest.approx(20.0 * 1.5)


def test_alignment_positions():
    canvas = Canvas(100, 100)
    for alignment in Alignment:
        block = _block(text="ab", alignment=alignment, width=1.0)
        line = layout_text(block, canvas).lines[0]
        if alignment is Alignment.LEFT:
            assert line.x == pytest.approx(25.0)
        elif alignment is Alignment.CENTER:
            assert line.x == pytest.approx(25.0 + (50.0 - line.width) / 2.0)
        else:
            assert line.x == pytest.approx(75.0 - line.width)


def _stack(size=32, with_object=True, blocks=()):
    rng = np.random.default_rng(3)
    bg = Raster.from_array(rng.integers(0, 256, (size, size, 3), dtype=np.uint8))
    obj = None
    if with_object:
        obj = (
            Raster.from_array(rng.integers(0, 256, (size, size, 3), dtype=np.uint8)),
            Raster.from_array(rng.integers(0, 256, (size, size), dtype=np.uint8)),
        )
    return LayerStack(background=bg, object_layer=obj, text_blocks=tuple(blocks))


def test_render_svg_layer_structure():
    stack = _stack(blocks=[_block()])
    doc = render_svg(stack, Canvas(32, 32))
    root = ET.fromstring(doc.markup)
    roles = [g.get("data-layer-role") for g in root.findall("{http://www.w3.org/2000/svg}g")]
    assert roles == ["background", "object", "text"]
    assert doc.layer_index == {
        "layer-background": "background",
        "layer-object": "object",
        "layer-text": "text",
    }


def test_render_svg_exposes_all_typography_attributes():
    block = _block(angle=0.5, letter_spacing=0.01, alignment=Alignment.CENTER)
    doc = render_svg(_stack(blocks=[block]), Canvas(32, 32))
    ns = "{http://www.w3.org/2000/svg}"
    root = ET.fromstring(doc.markup)
    text_layer = [g for g in root.findall(f"{ns}g") if g.get("data-layer-role") == "text"][0]
    group = text_layer.find(f"{ns}g")
    for attr in (
        "data-block-role",
        "data-font-family",
        "data-font-size",
        "data-angle",
        "data-color-r",
        "data-opacity",
        "data-left",
        "data-top",
        "data-width",
        "data-height",
        "data-letter-spacing",
        "data-line-spacing",
        "data-alignment",
    ):
        assert group.get(attr) is not None
    assert "rotate(" in group.get("transform")


def test_render_svg_omits_object_layer_when_absent():
    doc = render_svg(_stack(with_object=False), Canvas(32, 32))
    assert "layer-object" not in doc.layer_index
    assert 'data-layer-role="object"' not in doc.markup


def test_render_svg_rejects_mismatched_dims():
    with pytest.raises(InvalidStack):
        render_svg(_stack(size=16), Canvas(32, 32))


def test_reserialize_fixed_point():
    doc = render_svg(_stack(blocks=[_block()]), Canvas(32, 32))
    once = reserialize(doc.markup)
    assert reserialize(once) == once


def test_render_matches_golden():
    doc = render_svg(_stack(blocks=[_block()]), Canvas(32, 32))
    golden = (GOLDEN / "design_fixture.svg").read_text(encoding="utf-8")
    assert doc.markup == golden


def test_mock_rasterizer_composes_and_paints_text():
    stack = _stack(blocks=[_block(color=(255.0, 0.0, 0.0), left=-1.0, top=-1.0, width=0.5, height=0.5)])
    preview = rasterize_preview(render_svg(stack, Canvas(32, 32)))
    composed = blend(stack.background, *stack.object_layer)
    assert np.array_equal(preview.data[0, 0], [255, 0, 0])  # inside the text box
    assert np.array_equal(preview.data[30, 30], composed.data[30, 30])  # outside


def test_rasterizer_ignores_invisible_text():
    stack = _stack(blocks=[_block(opacity=0.0)])
    preview = rasterize_preview(render_svg(stack, Canvas(32, 32)))
    composed = blend(stack.background, *stack.object_layer)
    assert np.array_equal(preview.data, composed.data)


def test_object_transform_moves_pixels():
    rng = np.random.default_rng(9)
    bg = Raster.filled(32, 32, (0, 0, 0))
    obj = Raster.filled(32, 32, (255, 255, 255))
    alpha = np.zeros((32, 32), dtype=np.uint8)
    alpha[:8, :8] = 255
    base = LayerStack(bg, (obj, Raster.from_array(alpha)))
    moved = LayerStack(
        bg, (obj, Raster.from_array(alpha)), object_transform=ObjectTransform(dx=1.0, dy=0.0)
    )
    p0 = rasterize_preview(render_svg(base, Canvas(32, 32)))
    p1 = rasterize_preview(render_svg(moved, Canvas(32, 32)))
    assert np.array_equal(p0.data[0, 0], [255, 255, 255])
    assert np.array_equal(p1.data[0, 0], [0, 0, 0])  # block shifted 16 px right
    assert np.array_equal(p1.data[0, 16], [255, 255, 255])


def test_monospace_metrics_constant_advance():
    m = MonospaceMetrics()
    assert m.advance("i", "Any", 10.0) == m.advance("W", "Other", 10.0) == 6.0
