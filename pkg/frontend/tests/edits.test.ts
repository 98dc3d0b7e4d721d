import { describe, expect, it } from "vitest";

import { dragToEdit, resizeToEdit } from "../src/canvas-view.js";
import { checkNumericEdit } from "../src/property-panel.js";
import type { CodecInfo } from "../src/types.js";

const codec: CodecInfo = {
  attributes: {
    font_size: { lo: 2, hi: 200, n_bins: 100 },
    angle: { lo: 0, hi: 2 * Math.PI, n_bins: 64 },
    color_channel: { lo: 0, hi: 255, n_bins: 32 },
    box_coord: { lo: -1, hi: 1, n_bins: 256 },
    opacity: { lo: 0, hi: 255, n_bins: 8 },
    letter_spacing: { lo: 0, hi: 1, n_bins: 40 },
    line_spacing: { lo: 0, hi: 1, n_bins: 40 },
  },
  edit_ops: [],
};

describe("dragToEdit", () => {
  it("emits move_block with normalized deltas", () => {
    const edit = dragToEdit({ blockIndex: 3, deltaXPx: 102, deltaYPx: -51 }, 1024, 1024);
    expect(edit).toEqual({
      op: "move_block",
      block_index: 3,
      dx: 0.19921875,
      dy: -0.099609375,
    });
  });

  it("normalizes each axis by its own dimension", () => {
    const edit = dragToEdit({ blockIndex: 0, deltaXPx: 64, deltaYPx: 64 }, 512, 256);
    if (edit.op !== "move_block") throw new Error("wrong op");
    expect(edit.dx).toBeCloseTo(0.25, 10);
    expect(edit.dy).toBeCloseTo(0.5, 10);
  });
});

describe("resizeToEdit", () => {
  it("emits resize_block with normalized extents", () => {
    const edit = resizeToEdit({ blockIndex: 1, widthPx: 256, heightPx: 128 }, 1024, 1024);
    expect(edit).toEqual({ op: "resize_block", block_index: 1, width: 0.5, height: 0.25 });
  });
});

describe("checkNumericEdit", () => {
  it("warns and clamps when font_size exceeds its range", () => {
    const result = checkNumericEdit("font_size", 250, codec);
    expect(result.value).toBe(200);
    expect(result.warning).toContain("font_size");
    expect(result.warning).toContain("250");
    expect(result.warning).toContain("200");
  });

  it("maps color channels onto the shared color range", () => {
    expect(checkNumericEdit("color_r", 300, codec)).toMatchObject({ value: 255 });
    expect(checkNumericEdit("color_b", -5, codec)).toMatchObject({ value: 0 });
  });

  it("keeps in-range values and stays silent", () => {
    expect(checkNumericEdit("font_size", 64, codec)).toEqual({ value: 64, warning: null });
    expect(checkNumericEdit("left", -0.9, codec)).toEqual({ value: -0.9, warning: null });
  });

  it("passes unknown attributes through", () => {
    expect(checkNumericEdit("mystery", 1e9, codec)).toEqual({ value: 1e9, warning: null });
  });
});
