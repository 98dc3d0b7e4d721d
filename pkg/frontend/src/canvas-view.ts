/**
 * Canvas view: renders a design bundle as stacked DOM layers (background
 * image, optional object image, absolutely positioned text blocks) and
 * turns pointer gestures into edit operations.
 *
 * The view never mutates its local copy of the bundle. A drag or resize is
 * tracked visually via a ghost outline, and on release a single edit op is
 * handed to the `onEdit` callback; the app re-renders from the server's
 * confirmed state afterwards.
 */

import { extentToPixel, normToPixel, pixelDeltaToNorm, pixelToExtent } from "./coords.js";
import type { Bundle, EditOp, TypographyBlock } from "./types.js";

export interface DragGesture {
  blockIndex: number;
  deltaXPx: number;
  deltaYPx: number;
}

export interface ResizeGesture {
  blockIndex: number;
  widthPx: number;
  heightPx: number;
}

/** Translate a completed drag into a move_block op in normalized units. */
export function dragToEdit(g: DragGesture, canvasW: number, canvasH: number): EditOp {
  return {
    op: "move_block",
    block_index: g.blockIndex,
    dx: pixelDeltaToNorm(g.deltaXPx, canvasW),
    dy: pixelDeltaToNorm(g.deltaYPx, canvasH),
  };
}

/** Translate a completed corner resize into a resize_block op. */
export function resizeToEdit(g: ResizeGesture, canvasW: number, canvasH: number): EditOp {
  return {
    op: "resize_block",
    block_index: g.blockIndex,
    width: pixelToExtent(g.widthPx, canvasW),
    height: pixelToExtent(g.heightPx, canvasH),
  };
}

interface PointerState {
  kind: "drag" | "resize";
  blockIndex: number;
  startX: number;
  startY: number;
  startRect: { left: number; top: number; width: number; height: number };
  ghost: HTMLDivElement;
}

export class CanvasView {
  private bundle: Bundle | null = null;
  private selected = -1;
  private pointer: PointerState | null = null;

  onEdit: (edit: EditOp) => void = () => {};
  onSelect: (blockIndex: number) => void = () => {};

  constructor(
    private readonly root: HTMLElement,
    private readonly widthPx: number,
    private readonly heightPx: number,
  ) {
    root.style.position = "relative";
    root.style.width = `${widthPx}px`;
    root.style.height = `${heightPx}px`;
    root.style.overflow = "hidden";
    root.style.background = "#ddd";
    root.addEventListener("pointermove", (e) => this.handleMove(e));
    root.addEventListener("pointerup", (e) => this.handleUp(e));
  }

  get selectedIndex(): number {
    return this.selected;
  }

  render(bundle: Bundle): void {
    this.bundle = bundle;
    this.pointer = null;
    if (this.selected >= bundle.typography.length) this.selected = -1;
    this.root.innerHTML = "";
    this.root.appendChild(this.imageLayer(bundle.background_png_base64, 0));
    if (bundle.object_png_base64) {
      this.root.appendChild(this.objectLayer(bundle));
    }
    bundle.typography.forEach((block, i) => {
      this.root.appendChild(this.textLayer(block, i));
    });
  }

  private imageLayer(pngBase64: string, zIndex: number): HTMLImageElement {
    const img = document.createElement("img");
    img.src = `data:image/png;base64,${pngBase64}`;
    img.draggable = false;
    img.style.cssText = `position:absolute;left:0;top:0;width:${this.widthPx}px;height:${this.heightPx}px;z-index:${zIndex};`;
    return img;
  }

  private objectLayer(bundle: Bundle): HTMLImageElement {
    const img = this.imageLayer(bundle.object_png_base64 as string, 1);
    const t = bundle.object_transform ?? { dx: 0, dy: 0, scale: 1 };
    const dxPx = extentToPixel(t.dx, this.widthPx);
    const dyPx = extentToPixel(t.dy, this.heightPx);
    img.style.transform = `translate(${dxPx}px, ${dyPx}px) scale(${t.scale})`;
    return img;
  }

  private textLayer(block: TypographyBlock, index: number): HTMLDivElement {
    const div = document.createElement("div");
    const left = normToPixel(block.left, this.widthPx);
    const top = normToPixel(block.top, this.heightPx);
    const width = extentToPixel(block.width, this.widthPx);
    const height = extentToPixel(block.height, this.heightPx);
    div.dataset.blockIndex = String(index);
    div.style.cssText = [
      "position:absolute",
      `left:${left}px`,
      `top:${top}px`,
      `width:${width}px`,
      `height:${height}px`,
      "z-index:2",
      "cursor:move",
      `transform:rotate(${block.angle}rad)`,
      `color:rgba(${block.color_r},${block.color_g},${block.color_b},${block.opacity / 255})`,
      `font-family:${block.font_family},monospace`,
      `text-align:${block.alignment}`,
      "overflow:hidden",
      "user-select:none",
      index === this.selected ? "outline:2px solid #4a90d9" : "outline:1px dashed rgba(0,0,0,0.25)",
    ].join(";");
    div.textContent = block.text;
    div.addEventListener("pointerdown", (e) => {
      e.preventDefault();
      this.select(index);
      this.beginGesture("drag", index, e, { left, top, width, height });
    });
    if (index === this.selected) {
      div.appendChild(this.resizeHandle(index, { left, top, width, height }));
    }
    return div;
  }

  private resizeHandle(
    index: number,
    rect: { left: number; top: number; width: number; height: number },
  ): HTMLDivElement {
    const handle = document.createElement("div");
    handle.dataset.handle = "se";
    handle.style.cssText =
      "position:absolute;right:-5px;bottom:-5px;width:10px;height:10px;" +
      "background:#4a90d9;cursor:nwse-resize;z-index:3;";
    handle.addEventListener("pointerdown", (e) => {
      e.preventDefault();
      e.stopPropagation();
      this.beginGesture("resize", index, e, rect);
    });
    return handle;
  }

  private select(index: number): void {
    if (this.selected !== index) {
      this.selected = index;
      if (this.bundle) this.render(this.bundle);
      this.onSelect(index);
    }
  }

  private beginGesture(
    kind: "drag" | "resize",
    blockIndex: number,
    e: PointerEvent,
    startRect: { left: number; top: number; width: number; height: number },
  ): void {
    const ghost = document.createElement("div");
    ghost.style.cssText =
      "position:absolute;z-index:4;pointer-events:none;border:1px solid #4a90d9;" +
      `left:${startRect.left}px;top:${startRect.top}px;width:${startRect.width}px;height:${startRect.height}px;`;
    this.root.appendChild(ghost);
    this.pointer = { kind, blockIndex, startX: e.clientX, startY: e.clientY, startRect, ghost };
  }

  private handleMove(e: PointerEvent): void {
    const p = this.pointer;
    if (!p) return;
    const dx = e.clientX - p.startX;
    const dy = e.clientY - p.startY;
    if (p.kind === "drag") {
      p.ghost.style.left = `${p.startRect.left + dx}px`;
      p.ghost.style.top = `${p.startRect.top + dy}px`;
    } else {
      p.ghost.style.width = `${Math.max(4, p.startRect.width + dx)}px`;
      p.ghost.style.height = `${Math.max(4, p.startRect.height + dy)}px`;
    }
  }

  private handleUp(e: PointerEvent): void {
    const p = this.pointer;
    if (!p) return;
    this.pointer = null;
    p.ghost.remove();
    const dx = e.clientX - p.startX;
    const dy = e.clientY - p.startY;
    if (dx === 0 && dy === 0) return;
    if (p.kind === "drag") {
      this.onEdit(
        dragToEdit(
          { blockIndex: p.blockIndex, deltaXPx: dx, deltaYPx: dy },
          this.widthPx,
          this.heightPx,
        ),
      );
    } else {
      this.onEdit(
        resizeToEdit(
          {
            blockIndex: p.blockIndex,
            widthPx: Math.max(4, p.startRect.width + dx),
            heightPx: Math.max(4, p.startRect.height + dy),
          },
          this.widthPx,
          this.heightPx,
        ),
      );
    }
  }
}
