"""Command-line entry points.

Every subcommand exits 0 on success, 2 on usage errors, and 1 on runtime
failures (diagnostics on stderr). ``--json`` switches stdout to a single
machine-readable JSON document.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from .backends.base import PipelineConfig
from .backends.mock import mock_suite
from .backends.remote import RemoteEndpointConfig, remote_suite
from .bench import load_benchmark, load_bundle, run_eval, write_report
from .codec import CODEC_TABLE, dequantize, quantize
from .errors import ColeforgeError
from .metrics import Box, localization_report
from .noise import channel_mean_variance
from .pipeline import run_pipeline, run_reflect
from .reflect_data import dump_pairs, make_pairs
from .schema import CATEGORY_VALUES, DesignIntent
from .typesetter import rasterize_preview


def _fail(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _emit(payload: dict, as_json: bool, lines=None):
    if as_json:
        click.echo(json.dumps(payload, ensure_ascii=False, indent=2))
    else:
        for line in lines if lines is not None else [f"{k}: {v}" for k, v in payload.items()]:
            click.echo(line)


@click.group()
def main():
    """Hierarchical text-to-design generation toolkit."""


@main.command()
@click.option("--intent", required=True, help="Free-form design request.")
@click.option("--category", required=True, type=click.Choice(CATEGORY_VALUES))
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--backend", default="mock", show_default=True, type=click.Choice(["mock", "remote"]))
@click.option("--endpoint", default="http://127.0.0.1:8800", show_default=True, help="Remote backend base URL.")
@click.option("--out", required=True, type=click.Path(path_type=Path), help="Output directory.")
@click.option("--reflect-iters", default=0, show_default=True, type=int)
@click.option("--json", "as_json", is_flag=True)
def generate(intent, category, seed, backend, endpoint, out, reflect_iters, as_json):
    """Run the full pipeline on one intent and persist the bundle."""
    suite = mock_suite(seed) if backend == "mock" else remote_suite(RemoteEndpointConfig(endpoint))
    cfg = PipelineConfig()
    try:
        bundle = run_pipeline(DesignIntent(intent, category), suite, cfg, seed=seed)
        if reflect_iters > 0:
            bundle = run_reflect(bundle, suite, max_iters=reflect_iters, cfg=cfg)
    except ColeforgeError as exc:
        _fail(str(exc))
    out.mkdir(parents=True, exist_ok=True)
    (out / "bundle.json").write_text(bundle.serialize(), encoding="utf-8")
    (out / "design.svg").write_text(bundle.svg.markup, encoding="utf-8")
    (out / "preview.png").write_bytes(rasterize_preview(bundle.svg).to_png_bytes())
    _emit({"out": str(out), "digest": bundle.digest()}, as_json)


@main.command()
@click.option("--corpus", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--out", required=True, type=click.Path(path_type=Path))
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--workers", default=4, show_default=True, type=int)
@click.option("--json", "as_json", is_flag=True)
def bench(corpus, out, seed, workers, as_json):
    """Evaluate the corpus with the mock suite and write a score report."""
    try:
        intents = load_benchmark(corpus)
        report = run_eval(intents, mock_suite(seed), out_dir=out, seed=seed, workers=workers)
        paths = write_report(report, out)
    except ColeforgeError as exc:
        _fail(str(exc))
    payload = {
        "ok": report.ok_count,
        "failed": report.failed_count,
        "report_json": str(paths["json"]),
        "report_markdown": str(paths["markdown"]),
        "figure": str(paths["figure"]),
    }
    _emit(payload, as_json)


@main.command()
@click.option("--pred", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--gt", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--json", "as_json", is_flag=True)
def metrics(pred, gt, as_json):
    """Localization metrics between two box-list JSON files."""

    def boxes(path: Path):
        return [Box(b["left"], b["top"], b["width"], b["height"]) for b in json.loads(path.read_text())]

    try:
        report = localization_report(boxes(pred), boxes(gt))
    except (ColeforgeError, KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        _fail(str(exc))
    _emit(report, as_json)


@main.command(name="quantize")
@click.option("--attr", required=True, type=click.Choice(sorted(CODEC_TABLE)))
@click.option("--value", required=True, type=float)
@click.option("--clamp", is_flag=True, help="Clamp out-of-range values instead of failing.")
@click.option("--json", "as_json", is_flag=True)
def quantize_cmd(attr, value, clamp, as_json):
    """Quantize one attribute value to its bin index and center."""
    spec = CODEC_TABLE[attr]
    try:
        b = quantize(value, spec, clamp=clamp)
    except ColeforgeError as exc:
        _fail(str(exc))
    _emit({"bin": b, "center": dequantize(b, spec)}, as_json)


@main.command(name="noise-stats")
@click.option("--alpha", default=0.1, show_default=True, type=float)
@click.option("--shape", default="3x64x64", show_default=True, help="channels x H x W")
@click.option("--samples", default=10000, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--figure", type=click.Path(path_type=Path), help="Optional histogram figure path.")
@click.option("--json", "as_json", is_flag=True)
def noise_stats(alpha, shape, samples, seed, figure, as_json):
    """Empirical vs analytic variance of per-channel spatial means."""
    try:
        channels, height, width = (int(d) for d in shape.lower().split("x"))
    except ValueError:
        raise click.UsageError("--shape must look like 3x64x64")
    result = channel_mean_variance(
        alpha, spatial=(height, width), samples=samples, channels=channels, seed=seed
    )
    if figure:
        _render_noise_figure(alpha, (height, width), samples, channels, seed, figure)
        result["figure"] = str(figure)
    _emit(result, as_json)


def _render_noise_figure(alpha, spatial, samples, channels, seed, path: Path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    from .noise import NoiseConfig, offset_statistic, sample_offset_noise

    height, width = spatial
    n = min(samples, 2000)
    tensor = sample_offset_noise(NoiseConfig(alpha, (n, channels, height, width), seed))
    means = offset_statistic(tensor).ravel()
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(means, bins=60, density=True)
    ax.set_xlabel("per-channel spatial mean")
    ax.set_ylabel("density")
    ax.set_title(f"Channel-mean distribution (alpha={alpha}, {height}x{width})")
    fig.tight_layout()
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path)
    plt.close(fig)


@main.command(name="reflect-pairs")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, path_type=Path), help="bundle.json file or a directory of them.")
@click.option("--delta", default=0.2, show_default=True, type=float)
@click.option("--count", required=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", required=True, type=click.Path(path_type=Path))
@click.option("--json", "as_json", is_flag=True)
def reflect_pairs(in_path, delta, count, seed, out, as_json):
    """Generate (noisy, ground-truth) typography pairs as JSONL."""
    paths = sorted(in_path.rglob("bundle.json")) if in_path.is_dir() else [in_path]
    try:
        bundles = [load_bundle(p) for p in paths]
        records = make_pairs(bundles, delta, count, np.random.default_rng(seed))
        out.parent.mkdir(parents=True, exist_ok=True)
        dump_pairs(records, out)
    except (ColeforgeError, json.JSONDecodeError, KeyError) as exc:
        _fail(str(exc))
    _emit({"pairs": len(records), "out": str(out)}, as_json)


@main.command()
@click.option("--store", default=None, type=click.Path(path_type=Path), help="Store directory; defaults to $COLEFORGE_STORE.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8700, show_default=True, type=int)
def serve(store, host, port):
    """Run the editor HTTP service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(store_path=store), host=host, port=port)


if __name__ == "__main__":
    main()
