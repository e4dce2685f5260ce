export type Grid = number[][];

export interface Pair {
  input: Grid;
  output: Grid;
}

export interface ObjectStatesDoc {
  selected: number[][];
  active: boolean;
  object: Grid;
  object_sel: number[][];
  object_dim: [number, number];
  object_pos: [number, number];
  rotation_parity: number;
  background: Grid;
}

export interface Observation {
  input: Grid;
  input_dim: [number, number];
  grid: Grid;
  grid_dim: [number, number];
  clip: Grid;
  clip_dim: [number, number];
  object_states: ObjectStatesDoc;
  terminated: boolean;
  step_count: number;
  task_id: string;
  preset: string;
  demo_pairs: Pair[];
  answer?: Grid;
  answer_dim?: [number, number];
}

export interface StepResponse {
  observation: Observation;
  reward: number;
  terminated: boolean;
  truncated: boolean;
  info: { exact_match?: boolean };
}

export interface SessionResponse {
  session_id: string;
  observation: Observation;
}

export interface TaskSummary {
  id: string;
  source: string;
  num_demo: number;
  num_test: number;
  max_dim: [number, number];
}

export type SelectionDoc =
  | { bbox: [number, number, number, number] }
  | { mask: { dims: [number, number]; runs: number[] } };

export interface SessionOptions {
  dataset: string;
  split?: string;
  task_id?: string;
  preset?: string;
  adaptation?: boolean;
  pair_index?: number;
  seed?: number;
  expose_answer?: boolean;
  reward_mode?: string;
  max_steps?: number;
}
