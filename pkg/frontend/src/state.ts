/** Client-side view state for one rating session.
 *
 * Invariants: exactly one variant occupies the central view; pending
 * ratings are integers in 0..5 (0 = skip); submission is possible only once
 * all four slots are set. The server remains the source of truth for
 * session state; everything here is reconstructible from it except pins.
 */

import { IterationPayload, Rating, VariantPayload } from "./types";

export const VARIANTS_PER_ITERATION = 4;

export interface Pin {
  iterationIndex: number;
  variantIndex: number;
  variant: VariantPayload;
}

export type StateListener = (state: ViewState) => void;

export function isRating(value: number): value is Rating {
  return Number.isInteger(value) && value >= 0 && value <= 5;
}

export class ViewState {
  readonly sessionId: string;
  iteration: IterationPayload | null = null;
  private selected = 0;
  private wireframeOn = false;
  private pending: (Rating | null)[] = Array(VARIANTS_PER_ITERATION).fill(null);
  private pinned: Pin[] = [];
  private listeners: StateListener[] = [];

  constructor(sessionId: string) {
    this.sessionId = sessionId;
  }

  subscribe(listener: StateListener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private notify(): void {
    for (const listener of this.listeners) listener(this);
  }

  /** Install a freshly fetched iteration; pending ratings reset, pins stay. */
  loadIteration(payload: IterationPayload): void {
    if (payload.variants.length !== VARIANTS_PER_ITERATION) {
      throw new Error(
        `expected ${VARIANTS_PER_ITERATION} variants, got ${payload.variants.length}`,
      );
    }
    this.iteration = payload;
    this.selected = 0;
    this.pending = payload.variants.map((v) =>
      v.rating !== null && isRating(v.rating) ? (v.rating as Rating) : null,
    );
    this.notify();
  }

  get iterationIndex(): number {
    if (!this.iteration) throw new Error("no iteration loaded");
    return this.iteration.index;
  }

  get selectedVariant(): number {
    return this.selected;
  }

  /** Move a variant into the enlarged central view. */
  selectVariant(index: number): void {
    if (!Number.isInteger(index) || index < 0 || index >= VARIANTS_PER_ITERATION) {
      throw new Error(`variant index out of range: ${index}`);
    }
    this.selected = index;
    this.notify();
  }

  get wireframe(): boolean {
    return this.wireframeOn;
  }

  toggleWireframe(): boolean {
    this.wireframeOn = !this.wireframeOn;
    this.notify();
    return this.wireframeOn;
  }

  setWireframe(on: boolean): void {
    this.wireframeOn = on;
    this.notify();
  }

  pendingRating(slot: number): Rating | null {
    return this.pending[slot] ?? null;
  }

  setRating(slot: number, value: number): void {
    if (slot < 0 || slot >= VARIANTS_PER_ITERATION) {
      throw new Error(`rating slot out of range: ${slot}`);
    }
    if (!isRating(value)) {
      throw new Error(`rating must be an integer in 0..5, got ${value}`);
    }
    this.pending[slot] = value;
    this.notify();
  }

  clearRating(slot: number): void {
    if (slot < 0 || slot >= VARIANTS_PER_ITERATION) {
      throw new Error(`rating slot out of range: ${slot}`);
    }
    this.pending[slot] = null;
    this.notify();
  }

  get submitEnabled(): boolean {
    return this.pending.every((r) => r !== null);
  }

  /** The four ratings, available only when all slots are set. */
  ratings(): Rating[] {
    if (!this.submitEnabled) {
      throw new Error("all four ratings must be set before submitting");
    }
    return this.pending.map((r) => r as Rating);
  }

  get pins(): readonly Pin[] {
    return this.pinned;
  }

  /** Pin a variant of the current iteration into the timeline. */
  pinVariant(variantIndex: number): Pin {
    if (!this.iteration) throw new Error("no iteration loaded");
    const variant = this.iteration.variants[variantIndex];
    if (!variant) throw new Error(`variant index out of range: ${variantIndex}`);
    return this.pinPayload(this.iteration.index, variantIndex, variant);
  }

  /** Pin any variant payload (used when pinning from earlier iterations). */
  pinPayload(
    iterationIndex: number,
    variantIndex: number,
    variant: VariantPayload,
  ): Pin {
    const existing = this.pinned.find(
      (p) => p.iterationIndex === iterationIndex && p.variantIndex === variantIndex,
    );
    if (existing) return existing;
    const pin: Pin = { iterationIndex, variantIndex, variant };
    this.pinned.push(pin);
    this.notify();
    return pin;
  }

  unpin(pin: Pin): void {
    this.pinned = this.pinned.filter((p) => p !== pin);
    this.notify();
  }
}
