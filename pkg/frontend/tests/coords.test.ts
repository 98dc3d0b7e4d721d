import { describe, expect, it } from "vitest";

import {
  clampToRange,
  extentToPixel,
  normToPixel,
  pixelDeltaToNorm,
  pixelToExtent,
  pixelToNorm,
} from "../src/coords.js";

describe("pixel <-> normalized conversions", () => {
  it("maps a 102 px drag on a 1024 px canvas to the documented delta", () => {
    const delta = pixelDeltaToNorm(102, 1024);
    expect(delta).toBeCloseTo(0.19921875, 10);
    // within one pixel-equivalent of the rounded value shown in the docs
    const onePx = pixelDeltaToNorm(1, 1024);
    expect(Math.abs(delta - 0.19922)).toBeLessThan(onePx);
  });

  it("round-trips positions within one pixel", () => {
    for (const dim of [256, 512, 1024, 1000]) {
      for (const px of [0, 1, dim / 4, dim / 2, dim - 1, dim]) {
        const back = normToPixel(pixelToNorm(px, dim), dim);
        expect(Math.abs(back - px)).toBeLessThan(1);
      }
      for (const v of [-1, -0.5, 0, 0.25, 0.99, 1]) {
        expect(pixelToNorm(normToPixel(v, dim), dim)).toBeCloseTo(v, 10);
      }
    }
  });

  it("anchors the corners and center", () => {
    expect(normToPixel(-1, 1024)).toBe(0);
    expect(normToPixel(0, 1024)).toBe(512);
    expect(normToPixel(1, 1024)).toBe(1024);
  });

  it("round-trips extents", () => {
    expect(extentToPixel(0.5, 1024)).toBe(256);
    for (const v of [0, 0.1, 0.5, 1.3, 2]) {
      expect(pixelToExtent(extentToPixel(v, 512), 512)).toBeCloseTo(v, 10);
    }
  });
});

describe("clampToRange", () => {
  const range = { lo: 2, hi: 200, n_bins: 100 };

  it("passes in-range values through untouched", () => {
    expect(clampToRange(50, range)).toEqual({ value: 50, clamped: false });
    expect(clampToRange(2, range)).toEqual({ value: 2, clamped: false });
    expect(clampToRange(200, range)).toEqual({ value: 200, clamped: false });
  });

  it("clamps out-of-range values and says so", () => {
    expect(clampToRange(250, range)).toEqual({ value: 200, clamped: true });
    expect(clampToRange(-3, range)).toEqual({ value: 2, clamped: true });
  });
});
