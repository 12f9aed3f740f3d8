// Wire types for the read-only dashboard API. Field names mirror the JSON
// payloads exactly; the client never derives numbers from them, it only
// selects and displays.

export type Task = "classification" | "regression";

export interface PatientSummary {
  pathway_id: string;
  prefix_len: number;
  n_events: number;
  prediction: number;
  urgency: string | null;
}

export interface PatientListResponse {
  model_hash: string;
  task: Task;
  patients: PatientSummary[];
}

export interface TimelineEvent {
  step: number;
  activity: string;
  timestamp: string;
}

export interface PatientDetailResponse {
  pathway_id: string;
  prefix_len: number;
  static_values: Record<string, number>;
  timeline: TimelineEvent[];
}

export interface PredictionResponse {
  model_hash: string;
  pathway_id: string;
  prefix_len: number;
  prediction: number;
  logit: number;
  urgency: string | null;
  label: number;
}

export interface ImportanceEntry {
  feature: string;
  kind: string;
  score: number;
}

export interface ImportanceResponse {
  model_hash: string;
  task: Task;
  importances: ImportanceEntry[];
}

export interface StaticContribution {
  feature: string;
  value: number;
  effect: number;
}

export interface SequentialContribution {
  feature: string;
  effect: number;
}

export interface StaticShape {
  feature: string;
  kind: string;
  grid: number[];
  effect: number[];
  observed: number;
}

export interface SequentialShape {
  feature: string;
  t: number;
  grid: number[];
  effect: number[];
  mean_effect?: number[];
  observed: number;
}

export interface TransitionGrid {
  feature: string;
  t: number;
  grid: number[];
  // delta[i][j]: effect change when the value moves from grid[i] at t-1
  // to grid[j] at t
  delta: number[][];
}

export interface Development {
  feature: string;
  steps: number[];
  effect: number[];
}

export interface InteractionSurface {
  features: string[];
  t: number;
  // effect[i][j]: joint effect with features[0] at grid[i], features[1]
  // at grid[j]
  grid: number[];
  effect: number[][];
}

export interface InterpretationBundle {
  format_version: number;
  model_hash: string;
  schema_hash: string;
  task: Task;
  pathway_id: string;
  prefix_len: number;
  prediction: number;
  logit: number;
  bias: number;
  urgency: string;
  importances: ImportanceEntry[];
  contributions: {
    static: StaticContribution[];
    sequential: SequentialContribution[];
  };
  static_shapes: StaticShape[];
  sequential_shapes: SequentialShape[];
  transitions: TransitionGrid[];
  developments: Development[];
  interaction_surfaces: InteractionSurface[];
  timeline: [string, string][];
}

export interface ApiErrorBody {
  error: string;
}
