"""Alpha-mask blending of background and object layers, and the 7-channel
frame layout used by the object-generator contract.

Rasters are 8-bit, row-major, unpremultiplied. Blending works in float64
and rounds half away from zero so results are exact and reproducible.
Frame plane order is fixed: (objR, objG, objB, alpha, compR, compG, compB).
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from PIL import Image

from .errors import DimensionMismatch

FRAME_PLANE_ORDER = ("objR", "objG", "objB", "alpha", "compR", "compG", "compB")


@dataclass(frozen=True)
class Raster:
    """8-bit raster; data shape is (height, width) for 1 channel or
    (height, width, 3) for RGB."""

    width: int
    height: int
    channels: int
    data: np.ndarray

    def __post_init__(self):
        if self.channels not in (1, 3):
            raise ValueError("channels must be 1 or 3")
        expected = (self.height, self.width) if self.channels == 1 else (self.height, self.width, 3)
        if self.data.shape != expected or self.data.dtype != np.uint8:
            raise ValueError(f"data must be uint8 with shape {expected}")

    @classmethod
    def from_array(cls, data: np.ndarray) -> "Raster":
        arr = np.ascontiguousarray(data, dtype=np.uint8)
        if arr.ndim == 2:
            return cls(arr.shape[1], arr.shape[0], 1, arr)
        if arr.ndim == 3 and arr.shape[2] == 3:
            return cls(arr.shape[1], arr.shape[0], 3, arr)
        raise ValueError("expected (H, W) or (H, W, 3) array")

    @classmethod
    def filled(cls, width: int, height: int, value) -> "Raster":
        value = np.asarray(value, dtype=np.uint8)
        if value.ndim == 0:
            return cls.from_array(np.full((height, width), int(value), dtype=np.uint8))
        return cls.from_array(np.broadcast_to(value, (height, width, 3)).copy())

    def same_dims(self, other: "Raster") -> bool:
        return self.width == other.width and self.height == other.height

    def to_png_bytes(self) -> bytes:
        mode = "L" if self.channels == 1 else "RGB"
        buf = io.BytesIO()
        Image.fromarray(self.data, mode=mode).save(buf, format="PNG")
        return buf.getvalue()

    @classmethod
    def from_png_bytes(cls, blob: bytes) -> "Raster":
        img = Image.open(io.BytesIO(blob))
        if img.mode == "L":
            return cls.from_array(np.asarray(img))
        return cls.from_array(np.asarray(img.convert("RGB")))


def _require_rgb(r: Raster, name: str):
    if r.channels != 3:
        raise DimensionMismatch(f"{name} must be 3-channel")


def _require_gray(r: Raster, name: str):
    if r.channels != 1:
        raise DimensionMismatch(f"{name} must be 1-channel")


def blend(background: Raster, obj: Raster, alpha: Raster) -> Raster:
    """Per-pixel out = round(bg*(1-a/255) + obj*(a/255)), half away from zero."""
    _require_rgb(background, "background")
    _require_rgb(obj, "object")
    _require_gray(alpha, "alpha")
    if not (background.same_dims(obj) and background.same_dims(alpha)):
        raise DimensionMismatch("blend inputs must share dimensions")
    a = alpha.data.astype(np.float64)[:, :, None]
    bg = background.data.astype(np.float64)
    ob = obj.data.astype(np.float64)
    out = np.floor((bg * (255.0 - a) + ob * a) / 255.0 + 0.5)
    return Raster.from_array(out.astype(np.uint8))


@dataclass(frozen=True)
class SevenChannelFrame:
    """Object RGB + alpha + composed RGB at shared dimensions."""

    object_rgb: Raster
    alpha: Raster
    composed_rgb: Raster

    def __post_init__(self):
        _require_rgb(self.object_rgb, "object_rgb")
        _require_gray(self.alpha, "alpha")
        _require_rgb(self.composed_rgb, "composed_rgb")
        if not (self.object_rgb.same_dims(self.alpha) and self.object_rgb.same_dims(self.composed_rgb)):
            raise DimensionMismatch("frame planes must share dimensions")

    @property
    def width(self) -> int:
        return self.object_rgb.width

    @property
    def height(self) -> int:
        return self.object_rgb.height


def assemble_frame(object_rgb: Raster, alpha: Raster, composed_rgb: Raster) -> SevenChannelFrame:
    return SevenChannelFrame(object_rgb, alpha, composed_rgb)


def split_frame(frame: SevenChannelFrame) -> tuple[Raster, Raster, Raster]:
    return frame.object_rgb, frame.alpha, frame.composed_rgb


def frame_planes(frame: SevenChannelFrame) -> np.ndarray:
    """(7, H, W) uint8 array in FRAME_PLANE_ORDER."""
    return np.stack(
        [
            frame.object_rgb.data[:, :, 0],
            frame.object_rgb.data[:, :, 1],
            frame.object_rgb.data[:, :, 2],
            frame.alpha.data,
            frame.composed_rgb.data[:, :, 0],
            frame.composed_rgb.data[:, :, 1],
            frame.composed_rgb.data[:, :, 2],
        ]
    )


def dump_frame(frame: SevenChannelFrame) -> bytes:
    """Raw plane dump: 8-byte header (width, height as uint32 BE) followed by
    the 7 planes row-major in FRAME_PLANE_ORDER."""
    header = frame.width.to_bytes(4, "big") + frame.height.to_bytes(4, "big")
    return header + frame_planes(frame).tobytes()


def load_frame(blob: bytes) -> SevenChannelFrame:
    width = int.from_bytes(blob[0:4], "big")
    height = int.from_bytes(blob[4:8], "big")
    planes = np.frombuffer(blob[8:], dtype=np.uint8).reshape(7, height, width)
    return SevenChannelFrame(
        Raster.from_array(np.stack(planes[0:3], axis=-1)),
        Raster.from_array(planes[3]),
        Raster.from_array(np.stack(planes[4:7], axis=-1)),
    )


def consistency_check(frame: SevenChannelFrame, background: Raster) -> int:
    """Max |composed - blend(background, object, alpha)| over pixels/channels."""
    recomposed = blend(background, frame.object_rgb, frame.alpha)
    diff = np.abs(frame.composed_rgb.data.astype(np.int16) - recomposed.data.astype(np.int16))
    return int(diff.max())
