"""HTTP clients for hosted planner/diffusion/judge services.

Wire schema (JSON over HTTP, one route per stage):

    GET  /health                          -> 200 on ready
    POST /plan        {intent, category, seed}                    -> {plan}
    POST /background  {caption, keywords, seed, width, height}    -> {png_base64}
    POST /object      {caption, background_png_base64, seed}      -> {object_png_base64, alpha_png_base64}
    POST /typography  {plan, composed_png_base64, width, height, seed} -> {blocks}
    POST /reflect     {blocks, preview_png_base64, width, height} -> {blocks}
    POST /quality     {plan, blocks, preview_png_base64}          -> five-criterion judge JSON

Images travel as base64 PNG. Requests are retried with bounded exponential
backoff; every request/response is appended to the session wire log so the
pipeline can persist it as provenance.
"""

from __future__ import annotations

import base64
import time
from dataclasses import dataclass, field

import httpx

from ..codec import TypographySpec
from ..compositor import Raster
from ..errors import BackendUnreachable, BadResponse, PromptTooLong
from ..metrics import QualityReport, parse_judge
from ..schema import DesignIntent, DesignPlan, deserialize_plan
from .base import BackendSuite
from ..typesetter import Canvas
import json


def count_tokens(text: str) -> int:
    """Whitespace token count used for the prompt budget."""
    return len(text.split())


def enforce_budget(text: str, budget: int, on_oversize: str) -> str:
    if count_tokens(text) <= budget:
        return text
    if on_oversize == "truncate":
        return " ".join(text.split()[:budget])
    raise PromptTooLong(f"prompt has {count_tokens(text)} tokens, budget is {budget}")


@dataclass
class RemoteEndpointConfig:
    base_url: str
    timeout_s: float = 30.0
    max_attempts: int = 3
    backoff_s: float = 0.05
    token_budget: int = 512
    on_oversize: str = "reject"


class RemoteSession:
    """Shared HTTP client with retry policy and a provenance wire log."""

    def __init__(self, cfg: RemoteEndpointConfig, client: httpx.Client | None = None):
        self.cfg = cfg
        self.client = client or httpx.Client(base_url=cfg.base_url, timeout=cfg.timeout_s)
        self.wire_log: list[dict] = []

    def health(self) -> bool:
        try:
            return self.client.get("/health").status_code == 200
        except httpx.HTTPError:
            return False

    def post(self, stage: str, path: str, payload: dict) -> dict:
        last_error = None
        for attempt in range(self.cfg.max_attempts):
            if attempt:
                time.sleep(self.cfg.backoff_s * (2 ** (attempt - 1)))
            try:
                response = self.client.post(path, json=payload)
            except httpx.HTTPError as exc:
                last_error = str(exc)
                continue
            self.wire_log.append(
                {
                    "stage": stage,
                    "path": path,
                    "request": payload,
                    "status": response.status_code,
                }
            )
            if response.status_code >= 500:
                last_error = f"HTTP {response.status_code}"
                continue
            if response.status_code != 200:
                raise BadResponse(f"{stage}: HTTP {response.status_code}")
            try:
                return response.json()
            except json.JSONDecodeError as exc:
                raise BadResponse(f"{stage}: non-JSON response: {exc}") from exc
        raise BackendUnreachable(f"{stage}: retry budget exhausted ({last_error})")


def _b64(raster: Raster) -> str:
    return base64.b64encode(raster.to_png_bytes()).decode("ascii")


def _raster(data: dict, key: str) -> Raster:
    try:
        return Raster.from_png_bytes(base64.b64decode(data[key]))
    except (KeyError, ValueError, OSError) as exc:
        raise BadResponse(f"missing or invalid raster field {key!r}: {exc}") from exc


@dataclass
class _RemoteAdapter:
    session: RemoteSession
    backend_id: str
    kind: str = "remote"

    def health(self) -> bool:
        return self.session.health()

    def _budgeted(self, text: str) -> str:
        return enforce_budget(text, self.session.cfg.token_budget, self.session.cfg.on_oversize)


class RemotePlanner(_RemoteAdapter):
    def plan(self, intent: DesignIntent, seed: int) -> DesignPlan:
        text = self._budgeted(intent.text)
        data = self.session.post(
            "planner", "/plan", {"intent": text, "category": intent.category.value, "seed": seed}
        )
        if "plan" not in data:
            raise BadResponse("planner response lacks 'plan'")
        return deserialize_plan(json.dumps(data["plan"]))


class RemoteBackground(_RemoteAdapter):
    def generate(self, caption: str, keywords, seed: int, canvas: Canvas) -> Raster:
        data = self.session.post(
            "background",
            "/background",
            {
                "caption": self._budgeted(caption),
                "keywords": list(keywords),
                "seed": seed,
                "width": canvas.width,
                "height": canvas.height,
            },
        )
        return _raster(data, "png_base64")


class RemoteObject(_RemoteAdapter):
    def generate(self, caption: str, background: Raster, seed: int) -> tuple[Raster, Raster]:
        data = self.session.post(
            "object",
            "/object",
            {"caption": self._budgeted(caption), "background_png_base64": _b64(background), "seed": seed},
        )
        return _raster(data, "object_png_base64"), _raster(data, "alpha_png_base64")


class RemoteTypographer(_RemoteAdapter):
    def place(self, plan: DesignPlan, composed: Raster, canvas: Canvas, seed: int):
        data = self.session.post(
            "typography",
            "/typography",
            {
                "plan": plan.to_dict(),
                "composed_png_base64": _b64(composed),
                "width": canvas.width,
                "height": canvas.height,
                "seed": seed,
            },
        )
        try:
            return tuple(TypographySpec.from_dict(b) for b in data["blocks"])
        except (KeyError, TypeError, ValueError) as exc:
            raise BadResponse(f"typography response malformed: {exc}") from exc


class RemoteReflector(_RemoteAdapter):
    def propose(self, blocks, preview: Raster, canvas: Canvas):
        data = self.session.post(
            "reflect",
            "/reflect",
            {
                "blocks": [b.to_dict() for b in blocks],
                "preview_png_base64": _b64(preview),
                "width": canvas.width,
                "height": canvas.height,
            },
        )
        try:
            return tuple(TypographySpec.from_dict(b) for b in data["blocks"])
        except (KeyError, TypeError, ValueError) as exc:
            raise BadResponse(f"reflect response malformed: {exc}") from exc


class RemoteJudge(_RemoteAdapter):
    def score(self, preview: Raster, plan: DesignPlan, blocks) -> QualityReport:
        data = self.session.post(
            "quality",
            "/quality",
            {
                "plan": plan.to_dict(),
                "blocks": [b.to_dict() for b in blocks],
                "preview_png_base64": _b64(preview),
            },
        )
        return parse_judge(json.dumps(data))


def remote_suite(cfg: RemoteEndpointConfig) -> BackendSuite:
    """All six stages against one service endpoint."""
    session = RemoteSession(cfg)
    tag = cfg.base_url.rstrip("/")
    return BackendSuite(
        planner=RemotePlanner(session, f"remote-planner@{tag}"),
        background_gen=RemoteBackground(session, f"remote-background@{tag}"),
        object_gen=RemoteObject(session, f"remote-object@{tag}"),
        typographer=RemoteTypographer(session, f"remote-typographer@{tag}"),
        reflector=RemoteReflector(session, f"remote-reflector@{tag}"),
        quality_judge=RemoteJudge(session, f"remote-judge@{tag}"),
    )
