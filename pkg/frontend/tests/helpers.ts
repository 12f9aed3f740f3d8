// Shared fixture loading: the golden files are byte captures of the HTTP
// API for one trained checkpoint, regenerated by
// scripts/make_dashboard_golden.py at the repository root.

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { ViewState } from "../src/state.js";
import type { AppData } from "../src/store.js";
import type {
  ImportanceResponse,
  InterpretationBundle,
  PatientDetailResponse,
  PatientListResponse,
  PredictionResponse,
} from "../src/types.js";

const GOLDEN_DIR = join(dirname(fileURLToPath(import.meta.url)), "golden");

export function goldenRaw(name: string): string {
  return readFileSync(join(GOLDEN_DIR, name), "utf-8");
}

export function golden<T>(name: string): T {
  return JSON.parse(goldenRaw(name)) as T;
}

export interface GoldenSet {
  patients: PatientListResponse;
  patient: PatientDetailResponse;
  prediction: PredictionResponse;
  bundle: InterpretationBundle;
  importance: ImportanceResponse;
}

export function goldenSet(): GoldenSet {
  return {
    patients: golden<PatientListResponse>("patients.json"),
    patient: golden<PatientDetailResponse>("patient.json"),
    prediction: golden<PredictionResponse>("prediction.json"),
    bundle: golden<InterpretationBundle>("interpretation.json"),
    importance: golden<ImportanceResponse>("importance.json"),
  };
}

export function goldenData(): AppData {
  const g = goldenSet();
  return {
    patients: { data: g.patients, stale: false },
    patient: { data: g.patient, stale: false },
    prediction: { data: g.prediction, stale: false },
    bundle: { data: g.bundle, stale: false },
    importance: { data: g.importance, stale: false },
    error: null,
  };
}

export function goldenState(overrides: Partial<ViewState> = {}): ViewState {
  const g = goldenSet();
  return {
    patientId: g.bundle.pathway_id,
    indicator: "Lactate",
    step: g.bundle.prefix_len,
    mode: "shape",
    ...overrides,
  };
}

export function clone<T>(value: T): T {
  return JSON.parse(JSON.stringify(value)) as T;
}
