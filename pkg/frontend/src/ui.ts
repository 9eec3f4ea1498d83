/** DOM components: variant gallery, timeline, side-by-side comparison.
 *
 * Layout follows the session flow: a large central view holds the selected
 * variant, thumbnails hold the original and the other variants, each
 * variant carries its triangle count, reduction ratio, batch-slot role and
 * rating buttons. Pinned variants accumulate in a timeline from which any
 * earlier result can be compared against a current one with synchronized
 * cameras and an optional displacement overlay.
 */

import * as THREE from "three";

import { differenceOverlay } from "./diff";
import { parseObj, ParsedMesh } from "./obj";
import {
  applyDifferenceOverlay,
  CameraRig,
  clearDifferenceOverlay,
  meshObject,
  setWireframe,
  Viewport,
} from "./scene";
import { Pin, ViewState, VARIANTS_PER_ITERATION } from "./state";
import { VariantPayload } from "./types";

export type WireframeMode = "toggle" | "on" | "off";

export interface GalleryOptions {
  /** "on"/"off" render the overlay permanently (lab-study mode). */
  wireframeMode?: WireframeMode;
  onSubmit?: (ratings: number[]) => void;
  onTerminate?: (reason: "satisfied" | "reset") => void;
  onPin?: (pin: Pin) => void;
}

interface VariantCell {
  element: HTMLElement;
  viewport: Viewport;
  group: THREE.Group;
  parsed: ParsedMesh;
  ratingButtons: HTMLButtonElement[];
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export class GalleryView {
  readonly root: HTMLElement;
  readonly rig = new CameraRig();
  private readonly state: ViewState;
  private readonly options: GalleryOptions;
  private readonly central: HTMLElement;
  private readonly strip: HTMLElement;
  private readonly controls: HTMLElement;
  private centralViewport: Viewport | null = null;
  private centralGroup: THREE.Group | null = null;
  private originalCell: { viewport: Viewport; group: THREE.Group } | null = null;
  private cells: VariantCell[] = [];
  private submitButton: HTMLButtonElement;
  private wireframeButton: HTMLButtonElement | null = null;
  private loadedIteration = -1;

  constructor(root: HTMLElement, state: ViewState, options: GalleryOptions = {}) {
    this.root = root;
    this.state = state;
    this.options = options;
    const mode = options.wireframeMode ?? "toggle";
    if (mode !== "toggle") state.setWireframe(mode === "on");

    this.central = el("div", "central-view");
    this.strip = el("div", "thumbnail-strip");
    this.controls = el("div", "gallery-controls");
    root.append(this.central, this.strip, this.controls);

    if (mode === "toggle") {
      this.wireframeButton = el("button", "wireframe-toggle", "wireframe");
      this.wireframeButton.addEventListener("click", () => {
        this.state.toggleWireframe();
      });
      this.controls.append(this.wireframeButton);
    }

    this.submitButton = el("button", "submit-ratings", "submit ratings");
    this.submitButton.disabled = true;
    this.submitButton.addEventListener("click", () => {
      if (!this.state.submitEnabled) return;
      this.options.onSubmit?.(this.state.ratings());
    });
    this.controls.append(this.submitButton);

    for (const reason of ["satisfied", "reset"] as const) {
      const button = el("button", `terminate-${reason}`, `stop: ${reason}`);
      button.addEventListener("click", () => this.options.onTerminate?.(reason));
      this.controls.append(button);
    }

    state.subscribe(() => this.sync());
    this.sync();
  }

  /** The mesh group currently in the enlarged central view. */
  centralContent(): THREE.Group | null {
    return this.centralGroup;
  }

  variantCell(index: number): VariantCell {
    const cell = this.cells[index];
    if (!cell) throw new Error(`no variant cell ${index}`);
    return cell;
  }

  parsedVariant(index: number): ParsedMesh {
    return this.variantCell(index).parsed;
  }

  parsedOriginal(): ParsedMesh | null {
    return this.originalParsed;
  }

  private originalParsed: ParsedMesh | null = null;

  private sync(): void {
    const iteration = this.state.iteration;
    if (!iteration) return;
    if (iteration.index !== this.loadedIteration) {
      this.rebuild();
      this.loadedIteration = iteration.index;
    }
    this.refreshSelection();
    this.refreshWireframe();
    this.refreshRatings();
    this.submitButton.disabled = !this.state.submitEnabled;
  }

  private rebuild(): void {
    const iteration = this.state.iteration!;
    for (const cell of this.cells) cell.viewport.dispose();
    this.originalCell?.viewport.dispose();
    this.centralViewport?.dispose();
    this.strip.replaceChildren();
    this.central.replaceChildren();
    this.cells = [];

    const header = el(
      "div",
      "iteration-header",
      `iteration ${iteration.index}`,
    );
    this.central.append(header);
    this.centralViewport = new Viewport(this.rig, 480, 480);
    this.centralViewport.element.classList.add("central-canvas");
    this.central.append(this.centralViewport.element);

    this.originalParsed = parseObj(iteration.original_mesh);
    const originalGroup = meshObject(this.originalParsed, {
      wireframe: this.state.wireframe,
      color: 0x8899aa,
    });
    const originalViewport = new Viewport(this.rig, 160, 160);
    originalViewport.setContent(originalGroup);
    this.originalCell = { viewport: originalViewport, group: originalGroup };
    const originalBox = el("div", "thumbnail original");
    originalBox.append(
      originalViewport.element,
      el("div", "variant-label", `original · ${this.originalParsed.triangleCount} tris`),
    );
    this.strip.append(originalBox);

    iteration.variants.forEach((variant, index) => {
      const cell = this.buildVariantCell(variant, index);
      this.cells.push(cell);
      this.strip.append(cell.element);
    });
  }

  private buildVariantCell(variant: VariantPayload, index: number): VariantCell {
    const parsed = parseObj(variant.mesh);
    const group = meshObject(parsed, { wireframe: this.state.wireframe });
    const viewport = new Viewport(this.rig, 160, 160);
    viewport.setContent(group);

    const box = el("div", "thumbnail variant");
    box.dataset.variant = String(index);
    box.addEventListener("click", () => this.state.selectVariant(index));
    box.append(viewport.element);

    const ratioPct = (variant.reduction_ratio * 100).toFixed(1);
    box.append(
      el(
        "div",
        "variant-label",
        `${variant.role} · ${parsed.triangleCount} tris · -${ratioPct}%`,
      ),
    );
    if (variant.faulty) {
      box.append(el("div", "faulty-badge", "faulty: suggest skip (0)"));
    }

    const ratingRow = el("div", "rating-row");
    const ratingButtons: HTMLButtonElement[] = [];
    for (let value = 0; value <= 5; value++) {
      const button = el("button", "rating-button", value === 0 ? "skip" : String(value));
      button.dataset.value = String(value);
      button.addEventListener("click", (event) => {
        event.stopPropagation();
        this.state.setRating(index, value);
      });
      ratingButtons.push(button);
      ratingRow.append(button);
    }
    box.append(ratingRow);

    const pinButton = el("button", "pin-button", "pin");
    pinButton.addEventListener("click", (event) => {
      event.stopPropagation();
      const pin = this.state.pinVariant(index);
      this.options.onPin?.(pin);
    });
    box.append(pinButton);

    return { element: box, viewport, group, parsed, ratingButtons };
  }

  private refreshSelection(): void {
    const selected = this.state.selectedVariant;
    this.cells.forEach((cell, index) => {
      cell.element.classList.toggle("selected", index === selected);
    });
    const cell = this.cells[selected];
    if (cell && this.centralViewport) {
      // the central view shows its own instance of the selected variant so
      // the thumbnail keeps rendering too
      if (this.centralGroup) clearDifferenceOverlay(this.centralGroup);
      this.centralGroup = meshObject(cell.parsed, {
        wireframe: this.state.wireframe,
      });
      this.centralViewport.setContent(this.centralGroup);
    }
  }

  private refreshWireframe(): void {
    const on = this.state.wireframe;
    if (this.originalCell) setWireframe(this.originalCell.group, on);
    for (const cell of this.cells) setWireframe(cell.group, on);
    if (this.centralGroup) setWireframe(this.centralGroup, on);
    this.wireframeButton?.classList.toggle("active", on);
  }

  private refreshRatings(): void {
    this.cells.forEach((cell, index) => {
      const pending = this.state.pendingRating(index);
      cell.ratingButtons.forEach((button) => {
        button.classList.toggle("chosen", Number(button.dataset.value) === pending);
      });
    });
  }
}

export interface ComparePair {
  label: string;
  parsed: ParsedMesh;
}

export class CompareView {
  readonly root: HTMLElement;
  readonly rig = new CameraRig();
  private left: Viewport | null = null;
  private right: Viewport | null = null;
  private leftParsed: ParsedMesh | null = null;
  private rightParsed: ParsedMesh | null = null;
  private rightGroup: THREE.Group | null = null;
  private overlayOn = false;
  private readonly overlayButton: HTMLButtonElement;
  private readonly panes: HTMLElement;

  constructor(root: HTMLElement) {
    this.root = root;
    this.panes = el("div", "compare-panes");
    const controls = el("div", "compare-controls");
    this.overlayButton = el("button", "difference-toggle", "difference overlay");
    this.overlayButton.addEventListener("click", () => {
      this.showDifference(!this.overlayOn);
    });
    controls.append(this.overlayButton);
    root.append(this.panes, controls);
  }

  /** Show `pinned` and `current` side by side with synchronized cameras. */
  setPair(pinned: ComparePair, current: ComparePair): void {
    this.left?.dispose();
    this.right?.dispose();
    this.panes.replaceChildren();
    this.overlayOn = false;

    this.leftParsed = pinned.parsed;
    this.rightParsed = current.parsed;

    const leftGroup = meshObject(pinned.parsed, { color: 0x90a4b8 });
    this.left = new Viewport(this.rig, 320, 320);
    this.left.setContent(leftGroup);

    this.rightGroup = meshObject(current.parsed, {});
    this.right = new Viewport(this.rig, 320, 320);
    this.right.setContent(this.rightGroup);

    for (const [pane, viewport] of [
      [pinned, this.left],
      [current, this.right],
    ] as const) {
      const box = el("div", "compare-pane");
      box.append(viewport.element, el("div", "compare-label", pane.label));
      this.panes.append(box);
    }
  }

  get differenceShown(): boolean {
    return this.overlayOn;
  }

  showDifference(on: boolean): void {
    if (!this.rightGroup || !this.rightParsed || !this.leftParsed) return;
    this.overlayOn = on;
    if (on) {
      const overlay = differenceOverlay(this.rightParsed, this.leftParsed);
      applyDifferenceOverlay(this.rightGroup, this.rightParsed, overlay);
    } else {
      clearDifferenceOverlay(this.rightGroup);
    }
    this.overlayButton.classList.toggle("active", on);
  }

  rightContent(): THREE.Group | null {
    return this.rightGroup;
  }
}

export class TimelineView {
  readonly root: HTMLElement;
  private readonly state: ViewState;
  private readonly onCompare: (pin: Pin) => void;
  private readonly list: HTMLElement;

  constructor(root: HTMLElement, state: ViewState, onCompare: (pin: Pin) => void) {
    this.root = root;
    this.state = state;
    this.onCompare = onCompare;
    root.append(el("div", "timeline-title", "timeline"));
    this.list = el("div", "timeline-list");
    root.append(this.list);
    state.subscribe(() => this.sync());
    this.sync();
  }

  private sync(): void {
    this.list.replaceChildren();
    for (const pin of this.state.pins) {
      const entry = el(
        "div",
        "timeline-entry",
        `iteration ${pin.iterationIndex} · variant ${pin.variantIndex + 1}`,
      );
      const compare = el("button", "compare-button", "compare");
      compare.addEventListener("click", () => this.onCompare(pin));
      const unpin = el("button", "unpin-button", "unpin");
      unpin.addEventListener("click", () => this.state.unpin(pin));
      entry.append(compare, unpin);
      this.list.append(entry);
    }
  }

  entryCount(): number {
    return this.list.children.length;
  }
}

export { VARIANTS_PER_ITERATION };
