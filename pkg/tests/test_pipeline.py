import json
from dataclasses import replace
from pathlib import Path

import pytest

from coleforge.backends.base import BackendSuite, PipelineConfig
from coleforge.backends.mock import mock_suite
from coleforge.codec import spec_with_updates
from coleforge.errors import ColeforgeError, StageFailure
from coleforge.pipeline import DesignBundle, run_pipeline, run_reflect
from coleforge.schema import DesignIntent
from coleforge.typesetter import Canvas, render_svg

GOLDEN = Path(__file__).parent / "golden"


def test_pipeline_produces_valid_bundle(fixture_bundle):
    assert fixture_bundle.validate() == []
    assert fixture_bundle.plan.global_caption
    assert set(fixture_bundle.provenance.stage_times_ms) >= {
        "planner",
        "background",
        "typography",
        "render",
    }


def test_pipeline_bit_reproducible(fixture_bundle, suite, small_cfg, fixture_intent):
    again = run_pipeline(fixture_intent, suite, small_cfg, seed=7)
    assert again.digest() == fixture_bundle.digest()
    assert again.serialize() != ""  # serialization is total


def test_fixture_digest_matches_golden(fixture_bundle):
    golden = (GOLDEN / "bundle_digest.txt").read_text(encoding="utf-8").strip()
    assert fixture_bundle.digest() == golden


def test_digest_excludes_wall_times(fixture_bundle):
    clone = DesignBundle.from_dict(fixture_bundle.to_dict())
    clone.provenance.stage_times_ms = {"planner": 12345.0}
    assert clone.digest() == fixture_bundle.digest()


def test_bundle_serialization_round_trip(fixture_bundle):
    clone = DesignBundle.from_dict(json.loads(fixture_bundle.serialize()))
    assert clone.digest() == fixture_bundle.digest()
    assert clone.plan == fixture_bundle.plan
    assert clone.stack.text_blocks == fixture_bundle.stack.text_blocks


def test_object_flag_false_skips_object_stage(small_cfg):
    suite = mock_suite(0, force_object_flag=False)
    bundle = run_pipeline(DesignIntent("A flat text-only post", "posts"), suite, small_cfg)
    assert bundle.stack.object_layer is None
    assert "object" not in bundle.provenance.stage_times_ms
    assert "layer-object" not in bundle.svg.layer_index


def test_object_flag_true_includes_object_layer(small_cfg):
    suite = mock_suite(0, force_object_flag=True)
    bundle = run_pipeline(DesignIntent("A post with an illustration", "posts"), suite, small_cfg)
    assert bundle.stack.object_layer is not None
    assert "layer-object" in bundle.svg.layer_index


class _FailingBackground:
    backend_id = "failing-background"
    kind = "mock"

    def health(self):
        return True

    def generate(self, caption, keywords, seed, canvas):
        raise RuntimeError("diffusion service down")


def test_stage_failure_carries_partial_prefix(suite, small_cfg, fixture_intent):
    broken = BackendSuite(
        planner=suite.planner,
        background_gen=_FailingBackground(),
        object_gen=suite.object_gen,
        typographer=suite.typographer,
        reflector=suite.reflector,
        quality_judge=suite.quality_judge,
    )
    with pytest.raises(StageFailure) as info:
        run_pipeline(fixture_intent, broken, small_cfg, seed=7)
    failure = info.value
    assert failure.stage == "background"
    # The partial bundle equals the prefix of a successful run.
    good = run_pipeline(fixture_intent, suite, small_cfg, seed=7)
    assert failure.partial["plan"] == good.plan
    assert failure.partial["intent"] == fixture_intent
    assert "background" not in failure.partial


class _Unhealthy:
    backend_id = "down"
    kind = "mock"

    def health(self):
        return False

    def plan(self, intent, seed):  # pragma: no cover - never reached
        raise AssertionError


def test_health_probe_blocks_pipeline(suite, small_cfg, fixture_intent):
    broken = replace_backend(suite, planner=_Unhealthy())
    with pytest.raises(StageFailure) as info:
        run_pipeline(fixture_intent, broken, small_cfg)
    assert info.value.stage == "health"


def replace_backend(suite, **overrides):
    fields = dict(suite.items())
    fields.update(overrides)
    return BackendSuite(
        planner=fields["planner"],
        background_gen=fields["background_gen"],
        object_gen=fields["object_gen"],
        typographer=fields["typographer"],
        reflector=fields["reflector"],
        quality_judge=fields["quality_judge"],
    )


# ---------------------------------------------------------------------------
# Reflect loop


def _off_center(bundle, small_cfg, shift=0.55):
    blocks = tuple(
        spec_with_updates(b, left=max(-1.0, min(b.left - shift, 1.0 - b.width)))
        for b in bundle.stack.text_blocks
    )
    stack = replace(bundle.stack, text_blocks=blocks)
    return replace(bundle, stack=stack, svg=render_svg(stack, small_cfg.canvas))


def test_reflect_zero_iters_returns_bundle_unchanged(fixture_bundle, suite, small_cfg):
    out = run_reflect(fixture_bundle, suite, max_iters=0, cfg=small_cfg)
    assert out is fixture_bundle


def test_reflect_scores_non_decreasing(fixture_bundle, suite, small_cfg):
    start = _off_center(fixture_bundle, small_cfg)
    out = run_reflect(start, suite, max_iters=3, cfg=small_cfg)
    history = out.provenance.reflect_history
    scored = [h["mean_score"] for h in history if "mean_score" in h and h["accepted"]]
    assert len(scored) >= 2
    assert scored == sorted(scored)
    assert out.scores.mean == scored[-1]


def test_reflect_returns_best_bundle(fixture_bundle, suite, small_cfg):
    start = _off_center(fixture_bundle, small_cfg)
    out = run_reflect(start, suite, max_iters=3, cfg=small_cfg)
    for block in out.stack.text_blocks:
        start_err = 0.55
        assert abs(block.left + block.width / 2.0) < start_err


class _FlakyJudge:
    backend_id = "flaky-judge"
    kind = "mock"

    def __init__(self, inner, fail_at_call):
        self.inner = inner
        self.calls = 0
        self.fail_at_call = fail_at_call

    def health(self):
        return True

    def score(self, preview, plan, blocks):
        self.calls += 1
        if self.calls >= self.fail_at_call:
            raise ColeforgeError("judge exploded")
        return self.inner.score(preview, plan, blocks)


def test_reflect_judge_failure_returns_best_so_far(fixture_bundle, suite, small_cfg):
    start = _off_center(fixture_bundle, small_cfg)
    flaky = replace_backend(suite, quality_judge=_FlakyJudge(suite.quality_judge, fail_at_call=3))
    out = run_reflect(start, flaky, max_iters=3, cfg=small_cfg)
    history = out.provenance.reflect_history
    assert any("error" in h for h in history)
    # The returned bundle is the best of the iterations that did score.
    assert out.scores is not None
    scored = [h["mean_score"] for h in history if "mean_score" in h]
    assert out.scores.mean == max(scored)
