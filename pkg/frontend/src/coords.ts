/**
 * Conversions between the service's normalized geometry and canvas pixels.
 *
 * Positions live in [-1, 1] on both axes (so the full canvas spans 2 units),
 * extents (width/height) are fractions of half the canvas dimension. The
 * browser owns all pixel math; the service only ever sees normalized values.
 */

import type { AttrRange } from "./types.js";

/** A pixel delta on the rendered canvas, as a normalized delta. */
export function pixelDeltaToNorm(deltaPx: number, canvasPx: number): number {
  return (2 * deltaPx) / canvasPx;
}

/** Normalized position -> pixel offset from the canvas top/left edge. */
export function normToPixel(value: number, canvasPx: number): number {
  return ((value + 1) / 2) * canvasPx;
}

/** Pixel offset from the top/left edge -> normalized position. */
export function pixelToNorm(px: number, canvasPx: number): number {
  return (2 * px) / canvasPx - 1;
}

/** Normalized extent (width/height) -> pixels. */
export function extentToPixel(value: number, canvasPx: number): number {
  return (value / 2) * canvasPx;
}

/** Pixel extent -> normalized extent. */
export function pixelToExtent(px: number, canvasPx: number): number {
  return (2 * px) / canvasPx;
}

export interface ClampResult {
  value: number;
  clamped: boolean;
}

/** Clamp a numeric attribute into its codec range, flagging adjustments. */
export function clampToRange(value: number, range: AttrRange): ClampResult {
  if (value < range.lo) return { value: range.lo, clamped: true };
  if (value > range.hi) return { value: range.hi, clamped: true };
  return { value, clamped: false };
}

/** Human-readable warning for an out-of-range attribute edit. */
export function clampWarning(attr: string, raw: number, range: AttrRange): string {
  return `${attr} ${raw} is outside [${range.lo}, ${range.hi}]; sent as ${
    clampToRange(raw, range).value
  }`;
}
