import { ApiClient, ServiceError } from "./api.js";
import { renderGrid, PALETTE } from "./grid_view.js";
import {
  CLIPBOARD_BUTTONS,
  CRITICAL_BUTTONS,
  OBJECT_BUTTONS,
  OP,
  colorOps,
  type OpButton,
} from "./ops.js";
import { SelectionModel, resizeSelection } from "./selection.js";
import type { Observation, SelectionDoc, SessionOptions } from "./types.js";

interface LogEntry {
  step: number;
  operation: number | null;
  reward: number;
  note: string;
}

/**
 * The human-play client: demo pairs on the left, the test input in the
 * center, the editable result grid with palette and operation buttons on
 * the right. The UI never computes grid semantics locally; every render
 * comes from the service observation.
 */
export class App {
  api: ApiClient;
  root: HTMLElement;
  sessionId: string | null = null;
  observation: Observation | null = null;
  selection = new SelectionModel();
  color = 1;
  busy = false;
  done = false;
  allowedOps: Set<number> = new Set();
  log: LogEntry[] = [];
  private dragging = false;
  private idleResolvers: Array<() => void> = [];

  // panels
  private demoPanel!: HTMLElement;
  private inputPanel!: HTMLElement;
  private resultPanel!: HTMLElement;
  private palettePanel!: HTMLElement;
  private opsPanel!: HTMLElement;
  private logPanel!: HTMLElement;
  private banner!: HTMLElement;
  private widthInput!: HTMLInputElement;
  private heightInput!: HTMLInputElement;

  constructor(root: HTMLElement, baseUrl: string) {
    this.root = root;
    this.api = new ApiClient(baseUrl);
    this.buildSkeleton();
  }

  private el(tag: string, className?: string, text?: string): HTMLElement {
    const node = this.root.ownerDocument.createElement(tag);
    if (className) node.className = className;
    if (text) node.textContent = text;
    return node;
  }

  private buildSkeleton(): void {
    this.root.textContent = "";
    this.banner = this.el("div", "banner hidden");
    this.root.appendChild(this.banner);

    const columns = this.el("div", "columns");
    this.root.appendChild(columns);

    const left = this.el("section", "panel demo-panel");
    left.appendChild(this.el("h2", "", "Original pairs"));
    this.demoPanel = this.el("div", "demo-pairs");
    left.appendChild(this.demoPanel);

    const center = this.el("section", "panel input-panel");
    center.appendChild(this.el("h2", "", "Test input"));
    this.inputPanel = this.el("div", "input-grid");
    center.appendChild(this.inputPanel);

    const right = this.el("section", "panel result-panel");
    right.appendChild(this.el("h2", "", "What should be the result"));
    this.resultPanel = this.el("div", "result-grid");
    right.appendChild(this.resultPanel);
    this.opsPanel = this.el("div", "ops");
    right.appendChild(this.opsPanel);
    this.logPanel = this.el("ol", "step-log");
    right.appendChild(this.logPanel);

    const palette = this.el("aside", "panel palette-panel");
    palette.appendChild(this.el("h2", "", "Palette"));
    this.palettePanel = this.el("div", "palette");
    palette.appendChild(this.palettePanel);

    columns.append(left, center, right, palette);

    this.root.ownerDocument.addEventListener("mouseup", () => {
      this.dragging = false;
    });
  }

  /** Resolves when no request is in flight (used by tests). */
  idle(): Promise<void> {
    if (!this.busy) return Promise.resolve();
    return new Promise((resolve) => this.idleResolvers.push(resolve));
  }

  private setBusy(busy: boolean): void {
    this.busy = busy;
    this.root
      .querySelectorAll<HTMLButtonElement>("button")
      .forEach((b) => { b.disabled = busy || (this.done && b.dataset.keep !== "1"); });
    if (!busy) {
      const resolvers = this.idleResolvers;
      this.idleResolvers = [];
      resolvers.forEach((fn) => fn());
    }
  }

  async start(options: SessionOptions): Promise<void> {
    const presets = await this.api.listPresets();
    const presetName = options.preset ?? "o2arc";
    this.allowedOps = new Set(presets[presetName]?.allowed_ops ?? []);
    const doc = await this.api.createSession(options);
    this.sessionId = doc.session_id;
    this.done = false;
    this.log = [];
    this.observation = doc.observation;
    this.selection.setDims(...doc.observation.grid_dim);
    this.renderAll();
  }

  /** Re-attach to an existing session (e.g. after a page reload). */
  async resume(sessionId: string): Promise<void> {
    const observation = await this.api.state(sessionId);
    const presets = await this.api.listPresets();
    this.allowedOps = new Set(presets[observation.preset]?.allowed_ops ?? []);
    this.sessionId = sessionId;
    this.observation = observation;
    this.done = observation.terminated;
    this.log = [];
    this.selection.setDims(...observation.grid_dim);
    this.renderAll();
  }

  async restart(): Promise<void> {
    if (!this.sessionId) return;
    const doc = await this.api.resetSession(this.sessionId);
    this.done = false;
    this.log = [];
    this.observation = doc.observation;
    this.selection.setDims(...doc.observation.grid_dim);
    this.hideBanner();
    this.renderAll();
  }

  async applyOp(op: number): Promise<void> {
    if (!this.sessionId || this.busy || this.done) return;
    const selection = this.selection.toDocument();
    await this.sendStep(op, selection);
  }

  async applyResize(): Promise<void> {
    const h = Number(this.heightInput.value);
    const w = Number(this.widthInput.value);
    if (!Number.isInteger(h) || !Number.isInteger(w) || h < 1 || w < 1 || h > 30 || w > 30) {
      this.showBanner("height and width must be integers in 1..30", "error");
      return;
    }
    await this.sendStep(OP.RESIZE_GRID, resizeSelection(h, w));
  }

  private async sendStep(op: number, selection: SelectionDoc | null): Promise<void> {
    if (!this.sessionId || this.busy || this.done) return;
    this.setBusy(true);
    try {
      const res = await this.api.step(this.sessionId, op, selection);
      this.observation = res.observation;
      this.selection.setDims(...res.observation.grid_dim);
      this.log.push({
        step: res.observation.step_count,
        operation: op,
        reward: res.reward,
        note: res.terminated ? (res.reward >= 1 ? "solved" : "wrong") : "",
      });
      if (res.terminated || res.truncated) {
        this.done = true;
        if (res.terminated && res.reward >= 1) {
          this.showBanner(`Solved! reward ${res.reward}`, "success");
        } else if (res.terminated) {
          this.showBanner(`Submitted, but not correct (reward ${res.reward})`, "failure");
        } else {
          this.showBanner("Episode truncated", "failure");
        }
      }
    } catch (err) {
      if (err instanceof ServiceError) {
        this.showBanner(`${err.status}: ${err.message}`, "error");
      } else {
        this.showBanner(`request failed: ${String(err)}`, "error");
      }
    } finally {
      this.setBusy(false);
      this.renderAll();
    }
  }

  private showBanner(text: string, kind: string): void {
    this.banner.textContent = text;
    this.banner.className = `banner ${kind}`;
  }

  private hideBanner(): void {
    this.banner.className = "banner hidden";
    this.banner.textContent = "";
  }

  // -- rendering --------------------------------------------------------

  renderAll(): void {
    if (!this.observation) return;
    this.renderDemos();
    renderGrid(this.inputPanel, this.observation.input, { cellSize: 20 });
    this.renderResult();
    this.renderPalette();
    this.renderOps();
    this.renderLog();
    this.setBusy(this.busy);
  }

  private renderDemos(): void {
    const obs = this.observation!;
    this.demoPanel.textContent = "";
    obs.demo_pairs.forEach((pair, i) => {
      const row = this.el("div", "demo-pair");
      row.appendChild(this.el("div", "demo-index", `#${i + 1}`));
      const input = this.el("div", "demo-input");
      const output = this.el("div", "demo-output");
      renderGrid(input, pair.input, { cellSize: 14 });
      renderGrid(output, pair.output, { cellSize: 14 });
      row.append(input, this.el("span", "arrow", "→"), output);
      this.demoPanel.appendChild(row);
    });
  }

  private renderResult(): void {
    const obs = this.observation!;
    const highlight = new Set(this.selection.cells().map(([r, c]) => `${r},${c}`));
    renderGrid(this.resultPanel, obs.grid, {
      cellSize: 24,
      highlight,
      handlers: {
        onDown: (r, c) => {
          if (this.busy || this.done) return;
          this.dragging = true;
          this.selection.beginDrag(r, c);
          this.renderResult();
        },
        onEnter: (r, c) => {
          if (!this.dragging) return;
          this.selection.extendDrag(r, c);
          this.renderResult();
        },
        onUp: () => {
          this.dragging = false;
        },
      },
    });
  }

  private renderPalette(): void {
    this.palettePanel.textContent = "";
    PALETTE.forEach((hex, value) => {
      const b = this.root.ownerDocument.createElement("button");
      b.className = "swatch" + (value === this.color ? " current" : "");
      b.style.backgroundColor = hex;
      b.dataset.color = String(value);
      b.title = `color ${value}`;
      b.addEventListener("click", () => {
        this.color = value;
        this.renderPalette();
      });
      this.palettePanel.appendChild(b);
    });
  }

  private opButton(spec: OpButton): HTMLButtonElement {
    const b = this.root.ownerDocument.createElement("button");
    b.textContent = spec.label;
    b.title = spec.title;
    b.dataset.op = String(spec.op);
    b.addEventListener("click", () => void this.applyOp(spec.op));
    return b;
  }

  private renderOps(): void {
    const doc = this.root.ownerDocument;
    this.opsPanel.textContent = "";

    const colorRow = this.el("div", "op-row");
    if (this.allowedOps.has(OP.COLOR0)) {
      const paint = doc.createElement("button");
      paint.textContent = "Paint";
      paint.dataset.op = "paint";
      paint.title = "Color the selected cells";
      paint.addEventListener("click", () => void this.applyOp(colorOps.paint(this.color)));
      colorRow.appendChild(paint);
    }
    if (this.allowedOps.has(OP.FLOOD0)) {
      const fill = doc.createElement("button");
      fill.textContent = "Flood fill";
      fill.dataset.op = "fill";
      fill.title = "Recolor the connected regions under the selection";
      fill.addEventListener("click", () => void this.applyOp(colorOps.fill(this.color)));
      colorRow.appendChild(fill);
    }
    const mode = doc.createElement("button");
    mode.textContent = this.selection.mode === "rect" ? "Mode: rectangle" : "Mode: paint mask";
    mode.dataset.op = "mode";
    mode.dataset.keep = "1";
    mode.title = "Toggle between rectangle drag and painted mask selection";
    mode.addEventListener("click", () => {
      this.selection.mode = this.selection.mode === "rect" ? "paint" : "rect";
      this.selection.clear();
      this.renderAll();
    });
    colorRow.appendChild(mode);
    this.opsPanel.appendChild(colorRow);

    const objectRow = this.el("div", "op-row");
    OBJECT_BUTTONS.filter((s) => this.allowedOps.has(s.op))
      .forEach((s) => objectRow.appendChild(this.opButton(s)));
    if (objectRow.childElementCount) this.opsPanel.appendChild(objectRow);

    const clipRow = this.el("div", "op-row");
    CLIPBOARD_BUTTONS.filter((s) => this.allowedOps.has(s.op))
      .forEach((s) => clipRow.appendChild(this.opButton(s)));
    if (clipRow.childElementCount) this.opsPanel.appendChild(clipRow);

    const criticalRow = this.el("div", "op-row");
    CRITICAL_BUTTONS.filter((s) => this.allowedOps.has(s.op))
      .forEach((s) => criticalRow.appendChild(this.opButton(s)));
    this.opsPanel.appendChild(criticalRow);

    if (this.allowedOps.has(OP.RESIZE_GRID)) {
      const resizeRow = this.el("div", "op-row resize-row");
      this.heightInput = doc.createElement("input");
      this.heightInput.type = "number";
      this.heightInput.className = "dim-input height";
      this.heightInput.value = String(this.observation!.grid_dim[0]);
      this.widthInput = doc.createElement("input");
      this.widthInput.type = "number";
      this.widthInput.className = "dim-input width";
      this.widthInput.value = String(this.observation!.grid_dim[1]);
      const resize = doc.createElement("button");
      resize.textContent = "Resize";
      resize.dataset.op = String(OP.RESIZE_GRID);
      resize.title = "Resize the grid to height x width";
      resize.addEventListener("click", () => void this.applyResize());
      resizeRow.append("H", this.heightInput, "W", this.widthInput, resize);
      this.opsPanel.appendChild(resizeRow);
    }

    const submitRow = this.el("div", "op-row");
    if (this.allowedOps.has(OP.SUBMIT)) {
      const submit = doc.createElement("button");
      submit.textContent = "Submit";
      submit.className = "submit";
      submit.dataset.op = String(OP.SUBMIT);
      submit.title = "Submit the grid for comparison with the answer";
      submit.addEventListener("click", () => void this.applyOp(OP.SUBMIT));
      submitRow.appendChild(submit);
    }
    const again = doc.createElement("button");
    again.textContent = "New episode";
    again.dataset.op = "restart";
    again.dataset.keep = "1";
    again.addEventListener("click", () => void this.restart());
    submitRow.appendChild(again);
    this.opsPanel.appendChild(submitRow);
  }

  private renderLog(): void {
    this.logPanel.textContent = "";
    for (const entry of this.log.slice(-30)) {
      const line = this.el(
        "li",
        "log-entry",
        `step ${entry.step}: op ${entry.operation} reward ${entry.reward}` +
          (entry.note ? ` (${entry.note})` : ""),
      );
      this.logPanel.appendChild(line);
    }
  }
}

export function mountApp(root: HTMLElement, baseUrl: string): App {
  return new App(root, baseUrl);
}
