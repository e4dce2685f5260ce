import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, mkdirSync, writeFileSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";

export const IDENTITY_TASK = {
  train: [{ input: [[1, 2], [3, 4]], output: [[1, 2], [3, 4]] }],
  test: [{ input: [[5, 6], [7, 8]], output: [[5, 6], [7, 8]] }],
};

export function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const srv = createServer();
    srv.listen(0, "127.0.0.1", () => {
      const addr = srv.address();
      if (addr && typeof addr === "object") {
        const port = addr.port;
        srv.close(() => resolve(port));
      } else {
        reject(new Error("no port"));
      }
    });
  });
}

export interface ServiceHandle {
  baseUrl: string;
  proc: ChildProcess;
  stop(): void;
}

/** Start the real session service as a subprocess on a temp dataset. */
export async function startService(): Promise<ServiceHandle> {
  const root = mkdtempSync(join(tmpdir(), "arcgrid-ui-"));
  const training = join(root, "training");
  mkdirSync(training);
  mkdirSync(join(root, "evaluation"));
  writeFileSync(join(training, "identity.json"), JSON.stringify(IDENTITY_TASK));

  const port = await freePort();
  const proc = spawn("python3", [
    "-m", "arcgrid.cli", "serve",
    "--port", String(port),
    "--host", "127.0.0.1",
    "--data-root", root,
  ], { stdio: ["ignore", "pipe", "pipe"] });
  const baseUrl = `http://127.0.0.1:${port}`;

  const deadline = Date.now() + 20000;
  for (;;) {
    try {
      const resp = await fetch(`${baseUrl}/v1/datasets`);
      if (resp.ok) break;
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) {
      proc.kill();
      throw new Error("service did not come up in time");
    }
    await new Promise((r) => setTimeout(r, 100));
  }
  return { baseUrl, proc, stop: () => proc.kill() };
}

export function mouse(el: Element, type: string): void {
  el.dispatchEvent(new MouseEvent(type, { bubbles: true }));
}

export function button(root: HTMLElement, op: string): HTMLButtonElement {
  const el = root.querySelector<HTMLButtonElement>(`button[data-op="${op}"]`);
  if (!el) throw new Error(`no button with data-op=${op}`);
  return el;
}
