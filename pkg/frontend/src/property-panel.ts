/**
 * Property panel: one labelled input per typography attribute for the
 * selected block. Numeric edits are debounced into set_attribute ops and
 * pre-clamped against the codec ranges fetched from the service, with an
 * inline warning whenever a value had to be clamped.
 */

import { clampToRange, clampWarning } from "./coords.js";
import type { CodecInfo, EditOp, TypographyBlock } from "./types.js";

/** Block attribute -> codec table entry that bounds it. */
export const ATTR_CODEC_KEY: Record<string, string> = {
  font_size: "font_size",
  angle: "angle",
  color_r: "color_channel",
  color_g: "color_channel",
  color_b: "color_channel",
  opacity: "opacity",
  left: "box_coord",
  top: "box_coord",
  width: "box_coord",
  height: "box_coord",
  letter_spacing: "letter_spacing",
  line_spacing: "line_spacing",
};

const LITERAL_ATTRS: Record<string, string[]> = {
  font_family: [
    "Arial",
    "Helvetica",
    "Georgia",
    "Times New Roman",
    "Courier New",
    "Verdana",
    "Futura",
    "Garamond",
    "Montserrat",
    "Roboto",
  ],
  alignment: ["left", "center", "right"],
  role: ["heading", "sub_heading", "body_text"],
};

const NUMERIC_ATTRS = Object.keys(ATTR_CODEC_KEY) as (keyof TypographyBlock)[];

/**
 * Validate a raw numeric input against the codec table. Returns the value
 * that should be sent plus an optional warning string for the UI.
 */
export function checkNumericEdit(
  attr: string,
  raw: number,
  codec: CodecInfo,
): { value: number; warning: string | null } {
  const key = ATTR_CODEC_KEY[attr];
  const range = key ? codec.attributes[key] : undefined;
  if (!range) return { value: raw, warning: null };
  const { value, clamped } = clampToRange(raw, range);
  return { value, warning: clamped ? clampWarning(attr, raw, range) : null };
}

export class PropertyPanel {
  private blockIndex = -1;
  private block: TypographyBlock | null = null;
  private debounceTimer: ReturnType<typeof setTimeout> | null = null;
  private warningEl: HTMLElement;

  onEdit: (edit: EditOp) => void = () => {};

  constructor(
    private readonly root: HTMLElement,
    private readonly codec: CodecInfo,
    private readonly debounceMs = 300,
  ) {
    root.innerHTML = "<p class='placeholder'>Select a text block to edit.</p>";
    this.warningEl = document.createElement("p");
    this.warningEl.className = "clamp-warning";
    this.warningEl.style.cssText = "color:#b05500;font-size:12px;min-height:1em;";
  }

  show(blockIndex: number, block: TypographyBlock): void {
    this.blockIndex = blockIndex;
    this.block = block;
    this.root.innerHTML = "";
    this.root.appendChild(this.warningEl);
    this.warningEl.textContent = "";

    this.root.appendChild(this.textRow(block));
    for (const attr of NUMERIC_ATTRS) {
      this.root.appendChild(this.numericRow(attr, block[attr] as number));
    }
    for (const [attr, choices] of Object.entries(LITERAL_ATTRS)) {
      this.root.appendChild(this.selectRow(attr, choices, String(block[attr as keyof TypographyBlock])));
    }
  }

  clear(): void {
    this.blockIndex = -1;
    this.block = null;
    this.root.innerHTML = "<p class='placeholder'>Select a text block to edit.</p>";
  }

  private row(label: string, input: HTMLElement): HTMLDivElement {
    const div = document.createElement("div");
    div.style.cssText = "display:flex;gap:6px;margin:2px 0;align-items:center;";
    const span = document.createElement("label");
    span.textContent = label;
    span.style.cssText = "width:110px;font-size:12px;";
    div.append(span, input);
    return div;
  }

  private textRow(block: TypographyBlock): HTMLDivElement {
    const input = document.createElement("input");
    input.type = "text";
    input.value = block.text;
    input.dataset.attr = "text";
    input.addEventListener("input", () => {
      this.debounced({ op: "set_text", block_index: this.blockIndex, text: input.value });
    });
    return this.row("text", input);
  }

  private numericRow(attr: string, value: number): HTMLDivElement {
    const input = document.createElement("input");
    input.type = "number";
    input.step = "any";
    input.value = String(value);
    input.dataset.attr = attr;
    input.addEventListener("input", () => {
      const raw = Number(input.value);
      if (!Number.isFinite(raw)) return;
      const checked = checkNumericEdit(attr, raw, this.codec);
      this.warningEl.textContent = checked.warning ?? "";
      this.debounced({
        op: "set_attribute",
        block_index: this.blockIndex,
        attr,
        value: checked.value,
      });
    });
    return this.row(attr, input);
  }

  private selectRow(attr: string, choices: string[], current: string): HTMLDivElement {
    const select = document.createElement("select");
    select.dataset.attr = attr;
    for (const choice of choices) {
      const opt = document.createElement("option");
      opt.value = choice;
      opt.textContent = choice;
      opt.selected = choice === current;
      select.appendChild(opt);
    }
    select.addEventListener("change", () => {
      this.debounced({
        op: "set_attribute",
        block_index: this.blockIndex,
        attr,
        value: select.value,
      });
    });
    return this.row(attr, select);
  }

  private debounced(edit: EditOp): void {
    if (this.debounceTimer !== null) clearTimeout(this.debounceTimer);
    this.debounceTimer = setTimeout(() => {
      this.debounceTimer = null;
      this.onEdit(edit);
    }, this.debounceMs);
  }
}
