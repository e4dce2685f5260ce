import type { Grid } from "./types.js";

// The standard 10-color puzzle palette, indexed by color code.
export const PALETTE = [
  "#000000", "#0074d9", "#ff4136", "#2ecc40", "#ffdc00",
  "#aaaaaa", "#f012be", "#ff851b", "#7fdbff", "#870c25",
];

export interface CellHandlers {
  onDown?: (r: number, c: number) => void;
  onEnter?: (r: number, c: number) => void;
  onUp?: () => void;
}

/**
 * Render a grid into a container as a CSS grid of cell divs.
 *
 * Every cell carries data-r / data-c / data-value attributes; the value
 * attribute is what end-to-end tests compare against service
 * observations.
 */
export function renderGrid(
  container: HTMLElement,
  grid: Grid,
  opts: { cellSize?: number; handlers?: CellHandlers; highlight?: Set<string> } = {},
): void {
  const rows = grid.length;
  const cols = rows > 0 ? grid[0].length : 0;
  const size = opts.cellSize ?? 24;
  container.textContent = "";
  container.classList.add("grid-box");
  container.style.gridTemplateColumns = `repeat(${cols}, ${size}px)`;
  container.style.gridTemplateRows = `repeat(${rows}, ${size}px)`;
  container.dataset.rows = String(rows);
  container.dataset.cols = String(cols);
  for (let r = 0; r < rows; r++) {
    for (let c = 0; c < cols; c++) {
      const value = grid[r][c];
      const cell = container.ownerDocument.createElement("div");
      cell.className = "cell";
      cell.dataset.r = String(r);
      cell.dataset.c = String(c);
      cell.dataset.value = String(value);
      cell.style.backgroundColor = PALETTE[value] ?? "#ffffff";
      if (opts.highlight?.has(`${r},${c}`)) cell.classList.add("selected");
      const h = opts.handlers;
      if (h) {
        if (h.onDown) cell.addEventListener("mousedown", () => h.onDown!(r, c));
        if (h.onEnter) cell.addEventListener("mouseenter", () => h.onEnter!(r, c));
        if (h.onUp) cell.addEventListener("mouseup", () => h.onUp!());
      }
      container.appendChild(cell);
    }
  }
}

/** Read the rendered cell values back out of the DOM (for tests). */
export function readGrid(container: HTMLElement): Grid {
  const rows = Number(container.dataset.rows ?? 0);
  const cols = Number(container.dataset.cols ?? 0);
  const out: Grid = Array.from({ length: rows }, () => Array(cols).fill(-1));
  container.querySelectorAll<HTMLElement>(".cell").forEach((cell) => {
    const r = Number(cell.dataset.r);
    const c = Number(cell.dataset.c);
    out[r][c] = Number(cell.dataset.value);
  });
  return out;
}
