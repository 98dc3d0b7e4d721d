"""Construction of (noisy, ground-truth) typography pairs by position
perturbation — the training-data recipe for the critique/adjust model.

Only block positions (left, top) are perturbed: independent uniform noise in
[-delta, +delta], clamped so the box stays inside the canvas. Sizes and all
styling attributes are untouched. Pair files are JSONL with a schema-version
header record, so they are self-describing and re-loadable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .codec import TypographySpec, spec_with_updates
from .errors import EmptyDataset, ParseError

PAIRS_SCHEMA_VERSION = 1


def perturb_typography(
    blocks,
    magnitude: float,
    rng: np.random.Generator,
) -> list[TypographySpec]:
    """Shift each block's (left, top) by independent uniform noise in
    [-magnitude, +magnitude], clamped to keep the box inside [-1, 1]^2."""
    if magnitude < 0:
        raise ValueError("magnitude must be >= 0")
    out = []
    for block in blocks:
        dx, dy = rng.uniform(-magnitude, magnitude, size=2)
        left = min(max(block.left + dx, -1.0), 1.0 - block.width)
        top = min(max(block.top + dy, -1.0), 1.0 - block.height)
        out.append(spec_with_updates(block, left=float(left), top=float(top)))
    return out


@dataclass(frozen=True)
class PairRecord:
    """One training pair: the perturbed blocks, the originals, and a pointer
    to the preview raster they were rendered against."""

    noisy: tuple[TypographySpec, ...]
    ground_truth: tuple[TypographySpec, ...]
    preview_ref: str
    bundle_digest: str

    def to_dict(self) -> dict:
        return {
            "noisy": [b.to_dict() for b in self.noisy],
            "ground_truth": [b.to_dict() for b in self.ground_truth],
            "preview_ref": self.preview_ref,
            "bundle_digest": self.bundle_digest,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PairRecord":
        return cls(
            noisy=tuple(TypographySpec.from_dict(b) for b in data["noisy"]),
            ground_truth=tuple(TypographySpec.from_dict(b) for b in data["ground_truth"]),
            preview_ref=data["preview_ref"],
            bundle_digest=data["bundle_digest"],
        )


def make_pairs(bundles, delta: float, count: int, rng: np.random.Generator) -> list[PairRecord]:
    """Sample ``count`` perturbation pairs round-robin over the bundles."""
    bundles = list(bundles)
    if count < 1:
        raise ValueError("count must be >= 1")
    if not bundles:
        raise EmptyDataset("no bundles to draw pairs from")
    records = []
    for i in range(count):
        bundle = bundles[i % len(bundles)]
        gt = tuple(bundle.stack.text_blocks)
        noisy = tuple(perturb_typography(gt, delta, rng))
        records.append(
            PairRecord(
                noisy=noisy,
                ground_truth=gt,
                preview_ref=f"bundle:{bundle.digest()}/preview",
                bundle_digest=bundle.digest(),
            )
        )
    return records


def dump_pairs(records, path) -> None:
    """Write the JSONL pair file: header record first, one pair per line."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"schema": "typography-pairs", "version": PAIRS_SCHEMA_VERSION}) + "\n")
        for record in records:
            fh.write(json.dumps(record.to_dict(), ensure_ascii=False) + "\n")


def load_pairs(path) -> list[PairRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(line_no, f"invalid JSON: {exc}") from exc
            if line_no == 1:
                if data.get("schema") != "typography-pairs":
                    raise ParseError(1, "missing typography-pairs header record")
                if data.get("version") != PAIRS_SCHEMA_VERSION:
                    raise ParseError(1, f"unsupported pairs version {data.get('version')!r}")
                continue
            try:
                records.append(PairRecord.from_dict(data))
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(line_no, f"malformed pair record: {exc}") from exc
    return records
