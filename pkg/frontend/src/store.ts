// Client-side data store. Each panel keeps the last good payload; a failed
// refresh marks it stale instead of blanking it, so the clinician keeps
// context while the error banner explains what is out of date.

import type { FetchResult } from "./api.js";
import type {
  ImportanceResponse,
  InterpretationBundle,
  PatientDetailResponse,
  PatientListResponse,
  PredictionResponse,
} from "./types.js";

export interface Panel<T> {
  data: T | null;
  stale: boolean;
}

export interface AppData {
  patients: Panel<PatientListResponse>;
  patient: Panel<PatientDetailResponse>;
  prediction: Panel<PredictionResponse>;
  bundle: Panel<InterpretationBundle>;
  importance: Panel<ImportanceResponse>;
  error: string | null;
}

export type PanelKey = "patients" | "patient" | "prediction" | "bundle" | "importance";

function emptyPanel<T>(): Panel<T> {
  return { data: null, stale: false };
}

export function emptyData(): AppData {
  return {
    patients: emptyPanel(),
    patient: emptyPanel(),
    prediction: emptyPanel(),
    bundle: emptyPanel(),
    importance: emptyPanel(),
    error: null,
  };
}

export function applyResult(
  data: AppData,
  key: PanelKey,
  result: FetchResult<unknown>,
): AppData {
  if (result.kind === "superseded") {
    return data;
  }
  const next = { ...data };
  const panel = data[key] as Panel<unknown>;
  const updated: Panel<unknown> =
    result.kind === "ok"
      ? { data: result.data, stale: false }
      : { data: panel.data, stale: panel.data !== null };
  (next as unknown as Record<PanelKey, Panel<unknown>>)[key] = updated;
  next.error = result.kind === "ok" ? null : result.message;
  return next;
}
