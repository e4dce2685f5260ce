import { mountApp } from "./app.js";
import type { SessionOptions } from "./types.js";

// Entry point for the browser page: a small launcher bar above the app.
// The service origin defaults to the page origin and can be overridden
// with ?service=http://host:port; task/dataset/preset come from the bar.

function launcherBar(root: HTMLElement, onStart: (opts: SessionOptions) => void): void {
  const doc = root.ownerDocument;
  const bar = doc.createElement("div");
  bar.className = "launcher";

  const dataset = doc.createElement("input");
  dataset.placeholder = "dataset (arc | generated)";
  dataset.value = "arc";
  const split = doc.createElement("input");
  split.placeholder = "split";
  split.value = "training";
  const task = doc.createElement("input");
  task.placeholder = "task id (blank = random)";
  const preset = doc.createElement("select");
  for (const name of ["o2arc", "arc", "raw", "full"]) {
    const opt = doc.createElement("option");
    opt.value = name;
    opt.textContent = name;
    preset.appendChild(opt);
  }
  const start = doc.createElement("button");
  start.textContent = "Start";
  start.addEventListener("click", () => {
    onStart({
      dataset: dataset.value.trim() || "arc",
      split: split.value.trim() || "training",
      task_id: task.value.trim() || undefined,
      preset: preset.value,
    });
  });

  bar.append("Dataset", dataset, "Split", split, "Task", task, "Preset", preset, start);
  root.before(bar);
}

const rootEl = document.getElementById("app");
if (rootEl) {
  const params = new URLSearchParams(window.location.search);
  const base = params.get("service") ?? window.location.origin;
  const app = mountApp(rootEl, base);
  launcherBar(rootEl, (opts) => {
    void app.start(opts).then(() => {
      const url = new URL(window.location.href);
      url.searchParams.set("session", app.sessionId!);
      window.history.replaceState(null, "", url);
    }).catch((err) => {
      rootEl.textContent = `failed to start session: ${String(err)}`;
    });
  });
  const existing = params.get("session");
  if (existing) {
    void app.resume(existing).catch(() => {
      // session expired or unknown: the launcher bar still works
    });
  }
}
