import json
import socket
import subprocess
import sys
import time
import urllib.request

import pytest
from click.testing import CliRunner

from coleforge.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def test_quantize_font_size_101(runner):
    result = runner.invoke(main, ["quantize", "--attr", "font_size", "--value", "101", "--json"])
    assert result.exit_code == 0
    assert json.loads(result.output)["bin"] == 50


def test_quantize_out_of_range_exits_1(runner):
    result = runner.invoke(main, ["quantize", "--attr", "font_size", "--value", "500"])
    assert result.exit_code == 1
    clamped = runner.invoke(
        main, ["quantize", "--attr", "font_size", "--value", "500", "--clamp", "--json"]
    )
    assert clamped.exit_code == 0
    assert json.loads(clamped.output)["bin"] == 99


def test_usage_error_exits_2(runner):
    assert runner.invoke(main, ["quantize", "--attr", "bogus", "--value", "1"]).exit_code == 2
    assert runner.invoke(main, ["generate"]).exit_code == 2


def test_metrics_identical_files(runner, tmp_path):
    boxes = json.dumps([{"left": 0, "top": 0, "width": 1, "height": 1}])
    pred = tmp_path / "pred.json"
    gt = tmp_path / "gt.json"
    pred.write_text(boxes)
    gt.write_text(boxes)
    result = runner.invoke(main, ["metrics", "--pred", str(pred), "--gt", str(gt), "--json"])
    assert result.exit_code == 0
    assert json.loads(result.output)["miou"] == 1.0


def test_metrics_length_mismatch_exits_1(runner, tmp_path):
    pred = tmp_path / "pred.json"
    gt = tmp_path / "gt.json"
    pred.write_text(json.dumps([{"left": 0, "top": 0, "width": 1, "height": 1}]))
    gt.write_text("[]")
    assert runner.invoke(main, ["metrics", "--pred", str(pred), "--gt", str(gt)]).exit_code == 1


def test_noise_stats_with_figure(runner, tmp_path):
    fig = tmp_path / "hist.png"
    result = runner.invoke(
        main,
        ["noise-stats", "--alpha", "0.1", "--shape", "3x16x16", "--samples", "500",
         "--figure", str(fig), "--json"],
    )
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["analytic_variance"] == pytest.approx(1 / 256 + 0.01)
    assert fig.stat().st_size > 0


def test_noise_stats_bad_shape_exits_2(runner):
    assert runner.invoke(main, ["noise-stats", "--shape", "weird"]).exit_code == 2


def test_generate_deterministic_and_reflect_pairs(runner, tmp_path):
    args = [
        "generate", "--intent", "Create a green eco workshop flyer",
        "--category", "marketing", "--seed", "2", "--json",
    ]
    r1 = runner.invoke(main, args + ["--out", str(tmp_path / "a")])
    r2 = runner.invoke(main, args + ["--out", str(tmp_path / "b")])
    assert r1.exit_code == 0 and r2.exit_code == 0
    assert json.loads(r1.output)["digest"] == json.loads(r2.output)["digest"]
    for name in ("bundle.json", "design.svg", "preview.png"):
        assert (tmp_path / "a" / name).exists()

    pairs = tmp_path / "pairs.jsonl"
    r3 = runner.invoke(
        main,
        ["reflect-pairs", "--in", str(tmp_path / "a" / "bundle.json"),
         "--delta", "0.1", "--count", "3", "--seed", "1", "--out", str(pairs), "--json"],
    )
    assert r3.exit_code == 0
    assert json.loads(r3.output)["pairs"] == 3
    from coleforge.reflect_data import load_pairs

    assert len(load_pairs(pairs)) == 3


def test_bench_subcommand(runner, tmp_path):
    corpus = tmp_path / "corpus.jsonl"
    corpus.write_text(
        '{"category": "events", "intention": "Design a gala dinner invitation"}\n'
        '{"category": "posts", "intention": "Design a motivational quote post"}\n',
        encoding="utf-8",
    )
    result = runner.invoke(
        main,
        ["bench", "--corpus", str(corpus), "--out", str(tmp_path / "out"),
         "--seed", "0", "--workers", "2", "--json"],
    )
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["ok"] == 2 and payload["failed"] == 0
    assert (tmp_path / "out" / "report.md").exists()
    assert (tmp_path / "out" / "scores_by_category.png").exists()


def _free_port():
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


def test_serve_subcommand_end_to_end(tmp_path):
    port = _free_port()
    proc = subprocess.Popen(
        [sys.executable, "-m", "coleforge.cli", "serve", "--store", str(tmp_path / "store"),
         "--port", str(port)],
        stdout=subprocess.PIPE,
        stderr=subprocess.STDOUT,
    )
    try:
        deadline = time.time() + 20
        while time.time() < deadline:
            try:
                with urllib.request.urlopen(f"http://127.0.0.1:{port}/health", timeout=1) as resp:
                    assert json.loads(resp.read()) == {"status": "ok"}
                    break
            except OSError:
                time.sleep(0.2)
        else:
            pytest.fail("service did not come up")
        with urllib.request.urlopen(f"http://127.0.0.1:{port}/designs", timeout=5) as resp:
            assert json.loads(resp.read()) == {"designs": []}
    finally:
        proc.terminate()
        proc.wait(timeout=10)
