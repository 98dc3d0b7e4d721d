/**
 * Intent bar: free-text intent + category + seed, submitted to the service
 * to generate a new design. Stage failures come back as 502 with the stage
 * name and are surfaced inline; the reflect history strip summarizes any
 * refinement iterations recorded in the bundle provenance.
 */

import { StageFailureError } from "./api-client.js";
import type { Bundle } from "./types.js";

export const CATEGORIES = [
  "advertising",
  "events",
  "marketing",
  "posts",
  "covers_and_headers",
  "creative",
];

export class IntentBar {
  private statusEl: HTMLElement;
  private historyEl: HTMLElement;
  private busy = false;

  onSubmit: (intent: string, category: string, seed: number) => Promise<void> = async () => {};

  constructor(private readonly root: HTMLElement) {
    root.innerHTML = `
      <form class="intent-form" style="display:flex;gap:6px;align-items:center;flex-wrap:wrap;">
        <input name="intent" type="text" placeholder="Describe the design you want..."
               style="flex:1;min-width:280px;" required>
        <select name="category">
          ${CATEGORIES.map((c) => `<option value="${c}">${c}</option>`).join("")}
        </select>
        <input name="seed" type="number" value="0" style="width:70px;" title="seed">
        <button type="submit">Generate</button>
      </form>
      <p class="intent-status" style="font-size:12px;min-height:1em;margin:4px 0;"></p>
      <div class="reflect-strip" style="display:flex;gap:4px;font-size:11px;"></div>
    `;
    this.statusEl = root.querySelector(".intent-status") as HTMLElement;
    this.historyEl = root.querySelector(".reflect-strip") as HTMLElement;
    const form = root.querySelector("form") as HTMLFormElement;
    form.addEventListener("submit", (e) => {
      e.preventDefault();
      void this.submit(form);
    });
  }

  private async submit(form: HTMLFormElement): Promise<void> {
    if (this.busy) return;
    const data = new FormData(form);
    const intent = String(data.get("intent") ?? "").trim();
    if (!intent) return;
    this.busy = true;
    this.setStatus("Generating...", "#555");
    try {
      await this.onSubmit(intent, String(data.get("category")), Number(data.get("seed")) || 0);
      this.setStatus("Done.", "#2a7a2a");
    } catch (err) {
      if (err instanceof StageFailureError) {
        this.setStatus(`Stage failed (${err.stage ?? "unknown"}): ${err.message}`, "#b02020");
      } else {
        this.setStatus(err instanceof Error ? err.message : String(err), "#b02020");
      }
    } finally {
      this.busy = false;
    }
  }

  private setStatus(text: string, color: string): void {
    this.statusEl.textContent = text;
    this.statusEl.style.color = color;
  }

  /** Render one chip per reflect iteration recorded in provenance. */
  showHistory(bundle: Bundle): void {
    this.historyEl.innerHTML = "";
    for (const step of bundle.provenance.reflect_history) {
      const chip = document.createElement("span");
      const ok = step.accepted === true;
      chip.style.cssText = `padding:1px 6px;border-radius:8px;background:${ok ? "#dff3df" : "#f3dfdf"};`;
      if (step.error) {
        chip.textContent = `#${step.iteration ?? "?"} error`;
        chip.title = step.error;
      } else {
        chip.textContent = `#${step.iteration ?? "?"} ${step.mean?.toFixed(2) ?? "-"}${ok ? "" : " (rejected)"}`;
      }
      this.historyEl.appendChild(chip);
    }
  }
}
