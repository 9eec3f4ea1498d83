/** three.js scene construction for the variant gallery.
 *
 * Rendering is factored away from scene-graph construction: every object
 * here can be built and manipulated without a WebGL context, and a caller
 * (or test) may supply its own renderer. The wireframe overlay is a child
 * object toggled by visibility, so flipping it never re-fetches or rebuilds
 * geometry.
 */

import * as THREE from "three";

import { DifferenceOverlay } from "./diff";
import { ParsedMesh } from "./obj";

export const SURFACE_NAME = "surface";
export const WIREFRAME_NAME = "wireframe";
export const DIFFERENCE_NAME = "difference";

export interface MeshObjectOptions {
  wireframe?: boolean;
  color?: number;
}

/** Build a displayable group: shaded surface plus a wireframe overlay. */
export function meshObject(
  parsed: ParsedMesh,
  options: MeshObjectOptions = {},
): THREE.Group {
  const geometry = new THREE.BufferGeometry();
  geometry.setAttribute("position", new THREE.BufferAttribute(parsed.positions, 3));
  geometry.setIndex(new THREE.BufferAttribute(parsed.indices, 1));
  geometry.computeVertexNormals();

  const surface = new THREE.Mesh(
    geometry,
    new THREE.MeshLambertMaterial({ color: options.color ?? 0xb0b8c4 }),
  );
  surface.name = SURFACE_NAME;

  const wire = new THREE.LineSegments(
    new THREE.WireframeGeometry(geometry),
    new THREE.LineBasicMaterial({ color: 0x20242c }),
  );
  wire.name = WIREFRAME_NAME;
  wire.visible = options.wireframe ?? false;

  const group = new THREE.Group();
  group.add(surface);
  group.add(wire);
  return group;
}

export function setWireframe(group: THREE.Group, on: boolean): void {
  const wire = group.getObjectByName(WIREFRAME_NAME);
  if (wire) wire.visible = on;
}

export function wireframeVisible(group: THREE.Group): boolean {
  return group.getObjectByName(WIREFRAME_NAME)?.visible ?? false;
}

/** Mark displaced vertices with a point cloud; replaces any previous overlay. */
export function applyDifferenceOverlay(
  group: THREE.Group,
  parsed: ParsedMesh,
  overlay: DifferenceOverlay,
): THREE.Points {
  clearDifferenceOverlay(group);
  const positions = new Float32Array(overlay.displaced.length * 3);
  overlay.displaced.forEach((vertex, n) => {
    positions[3 * n] = parsed.positions[3 * vertex]!;
    positions[3 * n + 1] = parsed.positions[3 * vertex + 1]!;
    positions[3 * n + 2] = parsed.positions[3 * vertex + 2]!;
  });
  const geometry = new THREE.BufferGeometry();
  geometry.setAttribute("position", new THREE.BufferAttribute(positions, 3));
  const points = new THREE.Points(
    geometry,
    new THREE.PointsMaterial({ color: 0xe04840, size: 0.02 }),
  );
  points.name = DIFFERENCE_NAME;
  group.add(points);
  return points;
}

export function clearDifferenceOverlay(group: THREE.Group): void {
  const existing = group.getObjectByName(DIFFERENCE_NAME);
  if (existing) group.remove(existing);
}

export function differenceOverlaySize(group: THREE.Group): number {
  const points = group.getObjectByName(DIFFERENCE_NAME) as THREE.Points | undefined;
  if (!points) return 0;
  const attr = points.geometry.getAttribute("position");
  return attr ? attr.count : 0;
}

/** Shared orbit state; every attached camera tracks the same view. */
export class CameraRig {
  private theta = Math.PI / 4;
  private phi = Math.PI / 3;
  private radius: number;
  private readonly cameras: THREE.PerspectiveCamera[] = [];

  constructor(radius = 3) {
    this.radius = radius;
  }

  attach(camera: THREE.PerspectiveCamera): void {
    this.cameras.push(camera);
    this.apply();
  }

  detach(camera: THREE.PerspectiveCamera): void {
    const at = this.cameras.indexOf(camera);
    if (at >= 0) this.cameras.splice(at, 1);
  }

  orbit(dTheta: number, dPhi: number): void {
    this.theta += dTheta;
    const epsilon = 1e-3;
    this.phi = Math.min(Math.PI - epsilon, Math.max(epsilon, this.phi + dPhi));
    this.apply();
  }

  zoom(factor: number): void {
    this.radius = Math.min(50, Math.max(0.2, this.radius * factor));
    this.apply();
  }

  position(): THREE.Vector3 {
    return new THREE.Vector3(
      this.radius * Math.sin(this.phi) * Math.cos(this.theta),
      this.radius * Math.cos(this.phi),
      this.radius * Math.sin(this.phi) * Math.sin(this.theta),
    );
  }

  private apply(): void {
    const at = this.position();
    for (const camera of this.cameras) {
      camera.position.copy(at);
      camera.lookAt(0, 0, 0);
      camera.updateMatrixWorld();
    }
  }
}

export interface RendererLike {
  setSize(width: number, height: number): void;
  render(scene: THREE.Scene, camera: THREE.Camera): void;
  domElement: HTMLElement;
}

export type RendererFactory = () => RendererLike;

function webglRenderer(): RendererLike {
  const renderer = new THREE.WebGLRenderer({ antialias: true });
  renderer.setPixelRatio(window.devicePixelRatio ?? 1);
  return renderer;
}

let activeRendererFactory: RendererFactory = webglRenderer;

/** Tests (and embedders) may swap the renderer implementation. */
export function setRendererFactory(factory: RendererFactory): void {
  activeRendererFactory = factory;
}

/** One canvas showing one mesh group, on a shared camera rig. */
export class Viewport {
  readonly scene: THREE.Scene;
  readonly camera: THREE.PerspectiveCamera;
  readonly element: HTMLElement;
  private readonly renderer: RendererLike;
  private readonly rig: CameraRig;
  private content: THREE.Group | null = null;

  constructor(rig: CameraRig, width: number, height: number) {
    this.rig = rig;
    this.scene = new THREE.Scene();
    this.scene.background = new THREE.Color(0xf2f3f5);
    this.scene.add(new THREE.AmbientLight(0xffffff, 0.45));
    const headlight = new THREE.DirectionalLight(0xffffff, 1.6);
    headlight.position.set(2, 3, 4);
    this.scene.add(headlight);

    this.camera = new THREE.PerspectiveCamera(40, width / height, 0.01, 100);
    rig.attach(this.camera);

    this.renderer = activeRendererFactory();
    this.renderer.setSize(width, height);
    this.element = this.renderer.domElement;
    this.bindOrbitControls();
  }

  setContent(group: THREE.Group): void {
    if (this.content) this.scene.remove(this.content);
    this.content = group;
    this.scene.add(group);
  }

  getContent(): THREE.Group | null {
    return this.content;
  }

  render(): void {
    this.renderer.render(this.scene, this.camera);
  }

  dispose(): void {
    this.rig.detach(this.camera);
  }

  private bindOrbitControls(): void {
    let dragging = false;
    let lastX = 0;
    let lastY = 0;
    this.element.addEventListener("pointerdown", (event) => {
      dragging = true;
      lastX = (event as PointerEvent).clientX;
      lastY = (event as PointerEvent).clientY;
    });
    this.element.addEventListener("pointermove", (event) => {
      if (!dragging) return;
      const e = event as PointerEvent;
      this.rig.orbit((e.clientX - lastX) * 0.01, (e.clientY - lastY) * 0.01);
      lastX = e.clientX;
      lastY = e.clientY;
      this.render();
    });
    const stop = () => {
      dragging = false;
    };
    this.element.addEventListener("pointerup", stop);
    this.element.addEventListener("pointerleave", stop);
    this.element.addEventListener("wheel", (event) => {
      const e = event as WheelEvent;
      this.rig.zoom(e.deltaY > 0 ? 1.1 : 1 / 1.1);
      this.render();
      e.preventDefault();
    });
  }
}
