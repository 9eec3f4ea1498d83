/** Wire types for the loop-service JSON API (schema_version 1). */

export const SCHEMA_VERSION = 1;

export type Rating = 0 | 1 | 2 | 3 | 4 | 5;

export type SlotRole = "exploit" | "thompson_ei" | "explore";

export interface VariantPayload {
  /** Nine reduction parameters in [0, 1]. */
  params: number[];
  reduction_ratio: number;
  faulty: boolean;
  quality_mean: number;
  quality_per_view: number[];
  rating: number | null;
  role: SlotRole;
  /** OBJ text of the decimated variant. */
  mesh: string;
}

export interface IterationPayload {
  schema_version: number;
  session_id: string;
  index: number;
  timestamp: number;
  /** OBJ text of the uploaded original. */
  original_mesh: string;
  variants: VariantPayload[];
}

export interface SessionPayload {
  schema_version: number;
  session_id: string;
  state: string;
  iteration_count: number;
  max_iterations: number;
  seed: number;
  mesh_label: string;
  original_faces: number;
  created_at: number;
}

/** Response shape of the ratings and terminate endpoints. */
export interface StateResponse {
  schema_version: number;
  session_id: string;
  state: string;
}

export interface CreateOptions {
  seed?: number;
  maxIterations?: number;
  meshLabel?: string;
}

export type TerminateReason = "satisfied" | "reset";

export const TERMINAL_STATES = new Set([
  "terminated_satisfied",
  "terminated_reset",
  "terminated_max_iter",
]);

export class ApiError extends Error {
  readonly status: number;
  readonly detail: string;

  constructor(status: number, detail: string) {
    super(`HTTP ${status}: ${detail}`);
    this.name = "ApiError";
    this.status = status;
    this.detail = detail;
  }
}
