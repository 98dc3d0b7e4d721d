import numpy as np
import pytest

from coleforge.backends.base import PipelineConfig
from coleforge.backends.mock import mock_suite
from coleforge.pipeline import run_pipeline
from coleforge.schema import DesignIntent
from coleforge.typesetter import Canvas

FIXTURE_INTENT = DesignIntent(
    "Create a pink and gold birthday party invitation with balloons and confetti",
    "events",
)


@pytest.fixture(scope="session")
def small_cfg():
    return PipelineConfig(canvas=Canvas(256, 256))


@pytest.fixture(scope="session")
def suite():
    # The object layer is forced on so fixtures exercise all three layers.
    return mock_suite(7, force_object_flag=True)


@pytest.fixture(scope="session")
def fixture_intent():
    return FIXTURE_INTENT


@pytest.fixture(scope="session")
def fixture_bundle(suite, small_cfg):
    return run_pipeline(FIXTURE_INTENT, suite, small_cfg, seed=7)


@pytest.fixture()
def rng():
    return np.random.default_rng(0)
