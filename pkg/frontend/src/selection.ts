import type { SelectionDoc } from "./types.js";

export type SelectionMode = "rect" | "paint";

/**
 * The current user selection over the editable grid.
 *
 * Rectangle drags become bbox actions; painted cells become run-length
 * mask actions, so non-contiguous shapes are expressible too.
 */
export class SelectionModel {
  mode: SelectionMode = "rect";
  private anchor: [number, number] | null = null;
  private corner: [number, number] | null = null;
  private painted = new Set<string>();
  private dims: [number, number] = [0, 0];

  setDims(h: number, w: number): void {
    this.dims = [h, w];
    this.clear();
  }

  clear(): void {
    this.anchor = null;
    this.corner = null;
    this.painted.clear();
  }

  get empty(): boolean {
    if (this.mode === "rect") return this.anchor === null;
    return this.painted.size === 0;
  }

  beginDrag(r: number, c: number): void {
    if (this.mode === "rect") {
      this.anchor = [r, c];
      this.corner = [r, c];
    } else {
      this.paintCell(r, c);
    }
  }

  extendDrag(r: number, c: number): void {
    if (this.mode === "rect") {
      if (this.anchor) this.corner = [r, c];
    } else {
      this.paintCell(r, c);
    }
  }

  private paintCell(r: number, c: number): void {
    this.painted.add(`${r},${c}`);
  }

  togglePainted(r: number, c: number): void {
    const key = `${r},${c}`;
    if (this.painted.has(key)) this.painted.delete(key);
    else this.painted.add(key);
  }

  /** Cells currently highlighted, for rendering. */
  cells(): Array<[number, number]> {
    if (this.mode === "rect") {
      if (!this.anchor || !this.corner) return [];
      const [r0, c0] = this.anchor;
      const [r1, c1] = this.corner;
      const out: Array<[number, number]> = [];
      for (let r = Math.min(r0, r1); r <= Math.max(r0, r1); r++) {
        for (let c = Math.min(c0, c1); c <= Math.max(c0, c1); c++) {
          out.push([r, c]);
        }
      }
      return out;
    }
    return [...this.painted].map((key) => {
      const [r, c] = key.split(",");
      return [Number(r), Number(c)];
    });
  }

  /** The wire form sent to the service, or null when nothing is selected. */
  toDocument(): SelectionDoc | null {
    if (this.mode === "rect") {
      if (!this.anchor || !this.corner) return null;
      return { bbox: [this.anchor[0], this.anchor[1], this.corner[0], this.corner[1]] };
    }
    if (this.painted.size === 0) return null;
    return { mask: encodeMaskRle(this.dims, this.cells()) };
  }
}

/** Run-length encoding over row-major cells: alternating 0/1 runs, zeros first. */
export function encodeMaskRle(
  dims: [number, number],
  cells: Iterable<[number, number]>,
): { dims: [number, number]; runs: number[] } {
  const [h, w] = dims;
  const flat = new Uint8Array(h * w);
  for (const [r, c] of cells) {
    if (r >= 0 && r < h && c >= 0 && c < w) flat[r * w + c] = 1;
  }
  const runs: number[] = [];
  let value = 0;
  let run = 0;
  for (const cell of flat) {
    if (cell === value) {
      run += 1;
    } else {
      runs.push(run);
      value = cell;
      run = 1;
    }
  }
  runs.push(run);
  return { dims, runs };
}

/** A resize request is a mask of the new dims with only the corner set. */
export function resizeSelection(height: number, width: number): SelectionDoc {
  const runs = height * width === 1 ? [0, 1] : [height * width - 1, 1];
  return { mask: { dims: [height, width], runs } };
}
