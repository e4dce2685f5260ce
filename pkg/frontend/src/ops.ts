// Operation ids mirror the service registry: 0-9 Color, 10-19 FloodFill,
// 20-23 Move U/D/R/L, 24/25 rotate ccw/cw, 26/27 flip H/V, 28-30 clipboard,
// 31-34 CopyInput/ResetGrid/ResizeGrid/Submit, 35-38 extended catalogue.

export const OP = {
  COLOR0: 0,
  FLOOD0: 10,
  MOVE_U: 20,
  MOVE_D: 21,
  MOVE_R: 22,
  MOVE_L: 23,
  ROTATE_CCW: 24,
  ROTATE_CW: 25,
  FLIP_H: 26,
  FLIP_V: 27,
  COPY_I: 28,
  COPY_O: 29,
  PASTE: 30,
  COPY_INPUT: 31,
  RESET_GRID: 32,
  RESIZE_GRID: 33,
  SUBMIT: 34,
  ROTATE_180: 35,
  FLIP_D0: 36,
  FLIP_D1: 37,
  CROP_GRID: 38,
} as const;

export interface OpButton {
  op: number;
  label: string;
  title: string;
  needsSelection: boolean;
}

/** Buttons that apply the palette color: op id depends on the color. */
export const colorOps = {
  paint: (color: number) => OP.COLOR0 + color,
  fill: (color: number) => OP.FLOOD0 + color,
};

export const OBJECT_BUTTONS: OpButton[] = [
  { op: OP.MOVE_U, label: "↑", title: "Move up", needsSelection: false },
  { op: OP.MOVE_D, label: "↓", title: "Move down", needsSelection: false },
  { op: OP.MOVE_L, label: "←", title: "Move left", needsSelection: false },
  { op: OP.MOVE_R, label: "→", title: "Move right", needsSelection: false },
  { op: OP.ROTATE_CCW, label: "⟲", title: "Rotate 90° ccw", needsSelection: false },
  { op: OP.ROTATE_CW, label: "⟳", title: "Rotate 90° cw", needsSelection: false },
  { op: OP.FLIP_H, label: "⬌", title: "Flip horizontal", needsSelection: false },
  { op: OP.FLIP_V, label: "⬍", title: "Flip vertical", needsSelection: false },
  { op: OP.ROTATE_180, label: "180°", title: "Rotate 180°", needsSelection: false },
  { op: OP.FLIP_D0, label: "D0", title: "Flip main diagonal", needsSelection: false },
  { op: OP.FLIP_D1, label: "D1", title: "Flip anti-diagonal", needsSelection: false },
];

export const CLIPBOARD_BUTTONS: OpButton[] = [
  { op: OP.COPY_I, label: "Copy input", title: "Copy selection from the task input", needsSelection: true },
  { op: OP.COPY_O, label: "Copy", title: "Copy selection from the grid", needsSelection: true },
  { op: OP.PASTE, label: "Paste", title: "Paste the clipboard at the selection corner", needsSelection: true },
];

export const CRITICAL_BUTTONS: OpButton[] = [
  { op: OP.COPY_INPUT, label: "Use input", title: "Replace the grid with the input", needsSelection: false },
  { op: OP.RESET_GRID, label: "Clear", title: "Set every cell to black", needsSelection: false },
  { op: OP.CROP_GRID, label: "Crop", title: "Crop the grid to the selection", needsSelection: true },
];
