import random

import pytest
from fastapi.testclient import TestClient

from coleforge.backends.mock import mock_suite
from coleforge.errors import Conflict, InvalidEdit, NotFound
from coleforge.service import create_app
from coleforge.store import DesignStore


@pytest.fixture()
def store(tmp_path, fixture_bundle):
    store = DesignStore(tmp_path / "store")
    design_id = store.create(fixture_bundle)
    return store, design_id


def test_create_and_get(store, fixture_bundle):
    s, did = store
    assert s.version(did) == 0
    assert s.get(did).digest() == fixture_bundle.digest()
    assert s.list_designs()[0]["id"] == did


def test_unknown_id(store):
    s, _ = store
    with pytest.raises(NotFound):
        s.get("missing")


def test_move_and_undo_restores_bytes(store):
    s, did = store
    before = s.raw(did)
    s.apply_edit(did, {"op": "move_block", "block_index": 0, "dx": 0.1, "dy": 0.0}, 0)
    assert s.raw(did) != before
    s.apply_edit(did, {"op": "undo"}, 1)
    assert s.raw(did) == before
    assert s.version(did) == 2  # version keeps counting across undo


def test_stale_version_conflict(store):
    s, did = store
    s.apply_edit(did, {"op": "move_block", "block_index": 0, "dx": 0.05}, 0)
    with pytest.raises(Conflict):
        s.apply_edit(did, {"op": "move_block", "block_index": 0, "dx": 0.05}, 0)


def test_invalid_edits_rejected(store):
    s, did = store
    with pytest.raises(InvalidEdit):
        s.apply_edit(did, {"op": "resize_block", "block_index": 0, "width": 0.0}, 0)
    with pytest.raises(InvalidEdit):
        s.apply_edit(did, {"op": "move_block", "block_index": 99, "dx": 0.1}, 0)
    with pytest.raises(InvalidEdit):
        s.apply_edit(did, {"op": "teleport"}, 0)
    with pytest.raises(InvalidEdit):
        s.apply_edit(did, {"op": "set_attribute", "block_index": 0, "attr": "nope", "value": 1}, 0)
    assert s.version(did) == 0  # nothing committed


def test_set_attribute_reflected_in_svg(store):
    s, did = store
    s.apply_edit(
        did, {"op": "set_attribute", "block_index": 0, "attr": "font_size", "value": 50}, 0
    )
    svg = s.export(did, "svg").decode("utf-8")
    assert 'data-font-size="50"' in svg
    assert 'font-size="50"' in svg


def test_set_color_channel(store):
    s, did = store
    s.apply_edit(
        did, {"op": "set_attribute", "block_index": 0, "attr": "color_g", "value": 200}, 0
    )
    block = s.get(did).stack.text_blocks[0]
    assert block.color[1] == 200.0


def test_set_text(store):
    s, did = store
    s.apply_edit(did, {"op": "set_text", "block_index": 0, "text": "Hello"}, 0)
    assert s.get(did).stack.text_blocks[0].text == "Hello"
    assert ">Hello</text>" in s.export(did, "svg").decode("utf-8")


def test_object_transform_edits(store, fixture_bundle):
    s, did = store
    assert fixture_bundle.stack.object_layer is not None
    s.apply_edit(did, {"op": "move_object", "dx": 0.2, "dy": -0.1}, 0)
    s.apply_edit(did, {"op": "scale_object", "factor": 1.5}, 1)
    bundle = s.get(did)
    t = bundle.stack.object_transform
    assert (t.dx, t.dy, t.scale) == (0.2, -0.1, 1.5)
    assert "translate(" in bundle.svg.markup
    with pytest.raises(InvalidEdit):
        s.apply_edit(did, {"op": "scale_object", "factor": 0.0}, 2)


def _random_edit(rng, blocks):
    i = rng.randrange(blocks)
    return rng.choice(
        [
            {"op": "move_block", "block_index": i, "dx": rng.uniform(-0.02, 0.02), "dy": rng.uniform(-0.02, 0.02)},
            {"op": "set_attribute", "block_index": i, "attr": "font_size", "value": rng.uniform(10, 90)},
            {"op": "set_attribute", "block_index": i, "attr": "opacity", "value": rng.uniform(50, 255)},
            {"op": "set_text", "block_index": i, "text": f"text-{rng.randrange(1000)}"},
            {"op": "move_object", "dx": rng.uniform(-0.05, 0.05), "dy": 0.0},
            {"op": "scale_object", "factor": rng.uniform(0.9, 1.1)},
        ]
    )


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_random_edit_sequence_full_undo_restores_original(store, seed):
    s, did = store
    rng = random.Random(seed)
    original = s.raw(did)
    n_blocks = len(s.get(did).stack.text_blocks)
    applied = 0
    version = 0
    for _ in range(rng.randrange(5, 21)):
        try:
            result = s.apply_edit(did, _random_edit(rng, n_blocks), version)
        except InvalidEdit:
            continue
        version = result["version"]
        applied += 1
    for _ in range(applied):
        version = s.apply_edit(did, {"op": "undo"}, version)["version"]
    assert s.raw(did) == original


def test_undo_with_empty_journal(store):
    s, did = store
    with pytest.raises(InvalidEdit):
        s.apply_edit(did, {"op": "undo"}, 0)


def test_export_formats(store, fixture_bundle):
    s, did = store
    assert s.export(did, "svg").decode("utf-8") == fixture_bundle.svg.markup
    png = s.export(did, "png")
    from coleforge.typesetter import rasterize_preview

    assert png == rasterize_preview(fixture_bundle.svg).to_png_bytes()
    with pytest.raises(InvalidEdit):
        s.export(did, "pdf")


# ---------------------------------------------------------------------------
# HTTP service


@pytest.fixture()
def client(tmp_path, small_cfg):
    app = create_app(store_path=tmp_path / "svc", suite=mock_suite(0), cfg=small_cfg)
    return TestClient(app)


def _create(client):
    response = client.post(
        "/designs",
        json={"intent": "Create a blue tech conference poster", "category": "events", "seed": 3},
    )
    assert response.status_code == 200
    return response.json()["id"]


def test_service_health_and_codec(client):
    assert client.get("/health").json() == {"status": "ok"}
    codec = client.get("/codec").json()
    assert codec["attributes"]["font_size"] == {"lo": 2.0, "hi": 200.0, "n_bins": 100}
    assert "move_block" in codec["edit_ops"]


def test_service_empty_store_lists_nothing(client):
    assert client.get("/designs").json() == {"designs": []}


def test_service_create_get_edit_export(client):
    did = _create(client)
    data = client.get(f"/designs/{did}").json()
    assert data["version"] == 0
    assert data["bundle"]["plan"]["category"] == "events"

    r = client.post(
        f"/designs/{did}/edits",
        json={"edit": {"op": "move_block", "block_index": 0, "dx": 0.1}, "base_version": 0},
    )
    assert r.status_code == 200 and r.json()["version"] == 1

    stale = client.post(
        f"/designs/{did}/edits",
        json={"edit": {"op": "move_block", "block_index": 0, "dx": 0.1}, "base_version": 0},
    )
    assert stale.status_code == 409

    bad = client.post(
        f"/designs/{did}/edits",
        json={"edit": {"op": "resize_block", "block_index": 0, "width": 0}, "base_version": 1},
    )
    assert bad.status_code == 422
    assert bad.json()["findings"]

    svg = client.get(f"/designs/{did}/export", params={"format": "svg"})
    assert svg.headers["content-type"].startswith("image/svg+xml")
    png = client.get(f"/designs/{did}/export", params={"format": "png"})
    assert png.headers["content-type"] == "image/png"
    assert png.content[:8] == b"\x89PNG\r\n\x1a\n"


def test_service_unknown_design_404(client):
    assert client.get("/designs/nope").status_code == 404


def test_service_unknown_category_422(client):
    r = client.post("/designs", json={"intent": "x", "category": "bogus"})
    assert r.status_code == 422
