"""Hierarchical text-to-design generation toolkit.

A design intent is expanded into a structured plan, raster layers, placed
typography, and a layered SVG by a pipeline of pluggable backends
(deterministic mocks or remote services), with a critique/adjust loop,
localization metrics, a benchmark harness, and an editable design store.
"""

from .backends import BackendSuite, PipelineConfig, RemoteEndpointConfig, mock_suite, remote_suite
from .codec import CODEC_TABLE, BinSpec, TypographySpec, dequantize, quantize
from .compositor import Raster, SevenChannelFrame, blend
from .errors import ColeforgeError
from .metrics import Box, QualityReport, ap_at, iou, miou, parse_judge
from .pipeline import DesignBundle, Provenance, run_pipeline, run_reflect
from .schema import Category, DesignIntent, DesignPlan, validate_plan
from .typesetter import Canvas, LayerStack, SvgDocument, layout_text, render_svg

__version__ = "0.1.0"

__all__ = [
    "BackendSuite",
    "PipelineConfig",
    "RemoteEndpointConfig",
    "mock_suite",
    "remote_suite",
    "CODEC_TABLE",
    "BinSpec",
    "TypographySpec",
    "quantize",
    "dequantize",
    "Raster",
    "SevenChannelFrame",
    "blend",
    "ColeforgeError",
    "Box",
    "QualityReport",
    "iou",
    "miou",
    "ap_at",
    "parse_judge",
    "DesignBundle",
    "Provenance",
    "run_pipeline",
    "run_reflect",
    "Category",
    "DesignIntent",
    "DesignPlan",
    "validate_plan",
    "Canvas",
    "LayerStack",
    "SvgDocument",
    "layout_text",
    "render_svg",
    "__version__",
]
