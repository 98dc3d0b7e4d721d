/**
 * Editor application: wires the intent bar, canvas view, property panel and
 * toolbar together around a single ApiClient. All state flows one way:
 * every edit goes to the service first, and the UI re-renders from the
 * service's confirmed bundle; nothing is mutated optimistically.
 */

import { ApiClient, ConflictError, InvalidEditError } from "./api-client.js";
import { CanvasView } from "./canvas-view.js";
import { IntentBar } from "./intent-bar.js";
import { PropertyPanel } from "./property-panel.js";
import type { DesignDetail, EditOp } from "./types.js";

const CANVAS_PX = 512; // on-screen size; the service owns the true raster size

export class EditorApp {
  private client: ApiClient;
  private canvas!: CanvasView;
  private panel!: PropertyPanel;
  private intentBar!: IntentBar;
  private listEl!: HTMLElement;
  private errorEl!: HTMLElement;
  private current: DesignDetail | null = null;

  constructor(private readonly root: HTMLElement, baseUrl: string) {
    this.client = new ApiClient(baseUrl);
  }

  async start(): Promise<void> {
    this.root.innerHTML = `
      <div class="intent-bar"></div>
      <div style="display:flex;gap:12px;align-items:flex-start;">
        <div class="design-list" style="width:180px;font-size:12px;"></div>
        <div>
          <div class="toolbar" style="margin-bottom:6px;display:flex;gap:6px;">
            <button data-action="undo">Undo</button>
            <button data-action="export-svg">Export SVG</button>
            <button data-action="export-png">Export PNG</button>
          </div>
          <div class="canvas"></div>
          <p class="error-line" style="color:#b02020;font-size:12px;min-height:1em;"></p>
        </div>
        <div class="props" style="width:260px;"></div>
      </div>
    `;
    this.listEl = this.root.querySelector(".design-list") as HTMLElement;
    this.errorEl = this.root.querySelector(".error-line") as HTMLElement;

    const codec = await this.client.codec();
    this.canvas = new CanvasView(
      this.root.querySelector(".canvas") as HTMLElement,
      CANVAS_PX,
      CANVAS_PX,
    );
    this.panel = new PropertyPanel(this.root.querySelector(".props") as HTMLElement, codec);
    this.intentBar = new IntentBar(this.root.querySelector(".intent-bar") as HTMLElement);

    this.canvas.onEdit = (edit) => void this.applyEdit(edit);
    this.canvas.onSelect = (i) => {
      if (this.current) this.panel.show(i, this.current.bundle.typography[i]!);
    };
    this.panel.onEdit = (edit) => void this.applyEdit(edit);
    this.intentBar.onSubmit = async (intent, category, seed) => {
      const ack = await this.client.createDesign(intent, category, seed);
      await this.open(ack.id);
      await this.refreshList();
    };
    (this.root.querySelector("[data-action=undo]") as HTMLElement).addEventListener("click", () =>
      void this.applyEdit({ op: "undo" }),
    );
    for (const format of ["svg", "png"] as const) {
      const btn = this.root.querySelector(`[data-action=export-${format}]`) as HTMLElement;
      btn.addEventListener("click", () => {
        if (this.current) window.open(this.client.exportUrl(this.current.id, format), "_blank");
      });
    }

    await this.refreshList();
  }

  private async refreshList(): Promise<void> {
    const designs = await this.client.listDesigns();
    this.listEl.innerHTML = "<h3 style='margin:0 0 4px;'>Designs</h3>";
    for (const d of designs) {
      const item = document.createElement("a");
      item.href = "#";
      item.textContent = `${d.intent.slice(0, 40)} (v${d.version})`;
      item.style.cssText = "display:block;margin:2px 0;";
      item.addEventListener("click", (e) => {
        e.preventDefault();
        void this.open(d.id);
      });
      this.listEl.appendChild(item);
    }
  }

  private async open(id: string): Promise<void> {
    this.current = await this.client.getDesign(id);
    this.errorEl.textContent = "";
    this.canvas.render(this.current.bundle);
    this.intentBar.showHistory(this.current.bundle);
    const sel = this.canvas.selectedIndex;
    if (sel >= 0 && sel < this.current.bundle.typography.length) {
      this.panel.show(sel, this.current.bundle.typography[sel]!);
    } else {
      this.panel.clear();
    }
  }

  private async applyEdit(edit: EditOp): Promise<void> {
    if (!this.current) return;
    try {
      await this.client.applyEdit(this.current.id, edit, this.current.version);
      await this.open(this.current.id);
      await this.refreshList();
    } catch (err) {
      if (err instanceof ConflictError) {
        // someone else (or another tab) edited first; offer to reload
        if (window.confirm("This design changed on the server. Reload the latest version?")) {
          await this.open(this.current.id);
        }
      } else if (err instanceof InvalidEditError) {
        this.errorEl.textContent =
          err.findings.length > 0 ? `Rejected: ${err.findings.join("; ")}` : err.message;
      } else {
        this.errorEl.textContent = err instanceof Error ? err.message : String(err);
      }
    }
  }
}

export function mount(root: HTMLElement, baseUrl = "http://127.0.0.1:8700"): EditorApp {
  const app = new EditorApp(root, baseUrl);
  void app.start();
  return app;
}
