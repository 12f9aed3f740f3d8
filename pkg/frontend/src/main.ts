// Browser bootstrap: the only module that touches the DOM or the network.
// All rendering logic lives in pure modules so the test suite can cover it
// without a browser.

import { ApiClient } from "./api.js";
import { DEFAULT_CONFIG, renderApp } from "./app.js";
import { initialState, normalizeState } from "./state.js";
import type { ViewState } from "./state.js";
import { applyResult, emptyData } from "./store.js";
import type { AppData, PanelKey } from "./store.js";
import type {
  ImportanceResponse,
  InterpretationBundle,
  PatientDetailResponse,
  PatientListResponse,
  PredictionResponse,
} from "./types.js";

const api = new ApiClient("");
let state: ViewState = initialState();
let data: AppData = emptyData();

const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app mount point");
}
const mount: HTMLElement = root;

function redraw(): void {
  state = normalizeState(state, data.patients.data, data.bundle.data);
  mount.innerHTML = renderApp(state, data, DEFAULT_CONFIG);
}

async function loadGlobal(): Promise<void> {
  const [listing, importance] = await Promise.all([
    api.get<PatientListResponse>("patients", "/api/patients"),
    api.get<ImportanceResponse>("importance", "/api/model/importance"),
  ]);
  data = applyResult(data, "patients", listing);
  data = applyResult(data, "importance", importance);
  redraw();
  if (state.patientId !== null) {
    await loadPatient(state.patientId);
  }
}

async function loadPatient(id: string): Promise<void> {
  state = { ...state, patientId: id };
  redraw();
  const jobs: [PanelKey, Promise<unknown>][] = [
    ["patient", api.get<PatientDetailResponse>("patient", `/api/patients/${id}`)],
    ["prediction", api.get<PredictionResponse>("prediction", `/api/patients/${id}/prediction`)],
    ["bundle", api.get<InterpretationBundle>("bundle", `/api/patients/${id}/interpretation`)],
  ];
  for (const [key, job] of jobs) {
    job.then((result) => {
      data = applyResult(data, key, result as never);
      redraw();
    });
  }
  await Promise.all(jobs.map(([, job]) => job));
}

mount.addEventListener("click", (ev) => {
  const target = (ev.target as HTMLElement).closest("[data-action]");
  if (!(target instanceof HTMLElement)) return;
  const action = target.dataset.action;
  if (action === "select-patient" && target.dataset.id) {
    void loadPatient(target.dataset.id);
  } else if (action === "select-indicator" && target.dataset.name) {
    state = { ...state, indicator: target.dataset.name };
    redraw();
  } else if (action === "select-mode" && target.dataset.mode) {
    state = { ...state, mode: target.dataset.mode as ViewState["mode"] };
    redraw();
  }
});

mount.addEventListener("input", (ev) => {
  const target = ev.target as HTMLInputElement;
  if (target.dataset.action === "select-step") {
    state = { ...state, step: Number(target.value) };
    redraw();
  }
});

redraw();
void loadGlobal();
