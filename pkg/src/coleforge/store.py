"""Directory-backed design store with layer-wise edits and snapshot undo.

Layout per design id:

    <root>/<id>/bundle.json     current bundle (canonical serialization)
    <root>/<id>/meta.json       {"version": N} — monotonic edit counter
    <root>/<id>/journal/N.json  snapshot of bundle.json taken before edit N

The version counter lives outside bundle.json so an undo restores the
bundle byte-for-byte. Undo pops the newest journal snapshot; every other
edit re-validates the bundle, re-renders the SVG, and snapshots first, so
undo is an exact inverse for all edit operations. Mutations take a
per-design lock; edits carry the base version they were made against and
collide with Conflict.
"""

from __future__ import annotations

import json
import threading
from dataclasses import replace
from pathlib import Path

from .codec import TypographySpec, spec_with_updates
from .errors import Conflict, InvalidEdit, NotFound
from .pipeline import DesignBundle
from .typesetter import Canvas, ObjectTransform, rasterize_preview, render_svg

EDIT_OPS = (
    "move_block",
    "resize_block",
    "set_attribute",
    "set_text",
    "move_object",
    "scale_object",
    "undo",
)

_NUMERIC_ATTRS = frozenset(
    "font_size angle opacity left top width height letter_spacing line_spacing "
    "color_r color_g color_b".split()
)
_LITERAL_ATTRS = frozenset(("font_family", "alignment", "role"))


class DesignStore:
    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _lock(self, design_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(design_id, threading.Lock())

    def _dir(self, design_id: str) -> Path:
        path = self.root / design_id
        if not path.is_dir():
            raise NotFound(design_id)
        return path

    # -- reads ---------------------------------------------------------------

    def list_designs(self) -> list[dict]:
        summaries = []
        for path in sorted(self.root.iterdir()):
            if not (path / "bundle.json").is_file():
                continue
            data = json.loads((path / "bundle.json").read_text(encoding="utf-8"))
            summaries.append(
                {
                    "id": path.name,
                    "intent": data["intent"]["text"],
                    "category": data["intent"]["category"],
                    "version": self.version(path.name),
                }
            )
        return summaries

    def raw(self, design_id: str) -> str:
        return (self._dir(design_id) / "bundle.json").read_text(encoding="utf-8")

    def get(self, design_id: str) -> DesignBundle:
        return DesignBundle.from_dict(json.loads(self.raw(design_id)))

    def version(self, design_id: str) -> int:
        meta = self._dir(design_id) / "meta.json"
        return json.loads(meta.read_text(encoding="utf-8"))["version"]

    def export(self, design_id: str, fmt: str) -> bytes:
        bundle = self.get(design_id)
        if fmt == "svg":
            return bundle.svg.markup.encode("utf-8")
        if fmt == "png":
            return rasterize_preview(bundle.svg).to_png_bytes()
        raise InvalidEdit(f"unknown export format {fmt!r}")

    # -- writes --------------------------------------------------------------

    def create(self, bundle: DesignBundle) -> str:
        design_id = bundle.digest()[:12]
        path = self.root / design_id
        path.mkdir(parents=True, exist_ok=True)
        (path / "journal").mkdir(exist_ok=True)
        (path / "bundle.json").write_text(bundle.serialize(), encoding="utf-8")
        (path / "meta.json").write_text(json.dumps({"version": 0}) + "\n", encoding="utf-8")
        return design_id

    def apply_edit(self, design_id: str, edit: dict, base_version: int) -> dict:
        """Apply one edit made against ``base_version``; returns the summary
        {"id", "version"} of the new state."""
        with self._lock(design_id):
            path = self._dir(design_id)
            current = self.version(design_id)
            if base_version != current:
                raise Conflict(f"edit based on version {base_version}, store is at {current}")

            op = edit.get("op")
            if op not in EDIT_OPS:
                raise InvalidEdit(f"unknown edit op {op!r}")

            if op == "undo":
                snapshot = self._pop_snapshot(path)
                (path / "bundle.json").write_text(snapshot, encoding="utf-8")
            else:
                raw = self.raw(design_id)
                bundle = DesignBundle.from_dict(json.loads(raw))
                new_bundle = _apply(bundle, op, edit)
                problems = new_bundle.validate()
                if problems:
                    raise InvalidEdit("edit violates bundle invariants", problems)
                (path / "journal" / f"{current + 1}.json").write_text(raw, encoding="utf-8")
                (path / "bundle.json").write_text(new_bundle.serialize(), encoding="utf-8")

            (path / "meta.json").write_text(
                json.dumps({"version": current + 1}) + "\n", encoding="utf-8"
            )
            return {"id": design_id, "version": current + 1}

    def _pop_snapshot(self, path: Path) -> str:
        snapshots = sorted(
            (path / "journal").glob("*.json"), key=lambda p: int(p.stem)
        )
        if not snapshots:
            raise InvalidEdit("nothing to undo")
        newest = snapshots[-1]
        content = newest.read_text(encoding="utf-8")
        newest.unlink()
        return content


def _require_block(bundle: DesignBundle, edit: dict) -> tuple[int, TypographySpec]:
    index = edit.get("block_index")
    blocks = bundle.stack.text_blocks
    if not isinstance(index, int) or not 0 <= index < len(blocks):
        raise InvalidEdit(f"block_index {index!r} outside [0, {len(blocks)})")
    return index, blocks[index]


def _with_block(bundle: DesignBundle, index: int, block: TypographySpec) -> DesignBundle:
    blocks = list(bundle.stack.text_blocks)
    blocks[index] = block
    return _rerender(bundle, replace(bundle.stack, text_blocks=tuple(blocks)))


def _rerender(bundle: DesignBundle, stack) -> DesignBundle:
    canvas = Canvas(stack.background.width, stack.background.height)
    return replace(bundle, stack=stack, svg=render_svg(stack, canvas))


def _apply(bundle: DesignBundle, op: str, edit: dict) -> DesignBundle:
    if op == "move_block":
        index, block = _require_block(bundle, edit)
        return _with_block(
            bundle,
            index,
            spec_with_updates(
                block,
                left=block.left + float(edit.get("dx", 0.0)),
                top=block.top + float(edit.get("dy", 0.0)),
            ),
        )
    if op == "resize_block":
        index, block = _require_block(bundle, edit)
        return _with_block(
            bundle,
            index,
            spec_with_updates(
                block,
                width=float(edit.get("width", block.width)),
                height=float(edit.get("height", block.height)),
            ),
        )
    if op == "set_text":
        index, block = _require_block(bundle, edit)
        text = edit.get("text")
        if not isinstance(text, str):
            raise InvalidEdit("set_text requires a string 'text'")
        return _with_block(bundle, index, spec_with_updates(block, text=text))
    if op == "set_attribute":
        index, block = _require_block(bundle, edit)
        attr, value = edit.get("attr"), edit.get("value")
        if attr in _NUMERIC_ATTRS:
            value = float(value)
            if attr in ("color_r", "color_g", "color_b"):
                color = list(block.color)
                color["rgb".index(attr[-1])] = value
                return _with_block(bundle, index, spec_with_updates(block, color=tuple(color)))
            return _with_block(bundle, index, spec_with_updates(block, **{attr: value}))
        if attr in _LITERAL_ATTRS:
            try:
                return _with_block(bundle, index, spec_with_updates(block, **{attr: value}))
            except ValueError as exc:
                raise InvalidEdit(f"bad value for {attr}: {exc}") from exc
        raise InvalidEdit(f"unknown attribute {attr!r}")
    if op in ("move_object", "scale_object"):
        if bundle.stack.object_layer is None:
            raise InvalidEdit("design has no object layer")
        t = bundle.stack.object_transform
        if op == "move_object":
            t = ObjectTransform(
                t.dx + float(edit.get("dx", 0.0)), t.dy + float(edit.get("dy", 0.0)), t.scale
            )
        else:
            factor = float(edit.get("factor", 1.0))
            if factor <= 0:
                raise InvalidEdit("scale factor must be > 0")
            t = ObjectTransform(t.dx, t.dy, t.scale * factor)
        return _rerender(bundle, replace(bundle.stack, object_transform=t))
    raise InvalidEdit(f"unknown edit op {op!r}")
