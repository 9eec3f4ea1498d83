/** Displacement field between two mesh variants.
 *
 * For each vertex of the compared mesh, the distance to the nearest point
 * on the reference mesh's surface. The difference overlay highlights
 * vertices displaced beyond a small fraction of the reference bounding-box
 * diagonal. Meshes in a session are a few thousand triangles at most, so a
 * brute-force nearest-triangle scan is fine.
 */

import { boundingBoxDiagonal, ParsedMesh } from "./obj";

export const DEFAULT_THRESHOLD_FRACTION = 0.005;

type Vec3 = [number, number, number];

function sub(a: Vec3, b: Vec3): Vec3 {
  return [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
}

function dot(a: Vec3, b: Vec3): number {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

function vertexAt(mesh: ParsedMesh, index: number): Vec3 {
  return [
    mesh.positions[3 * index]!,
    mesh.positions[3 * index + 1]!,
    mesh.positions[3 * index + 2]!,
  ];
}

/** Squared distance from point p to triangle (a, b, c). */
export function pointTriangleDistanceSq(p: Vec3, a: Vec3, b: Vec3, c: Vec3): number {
  // Ericson, Real-Time Collision Detection, closest-point-on-triangle
  const ab = sub(b, a);
  const ac = sub(c, a);
  const ap = sub(p, a);
  const d1 = dot(ab, ap);
  const d2 = dot(ac, ap);
  if (d1 <= 0 && d2 <= 0) return dot(ap, ap);

  const bp = sub(p, b);
  const d3 = dot(ab, bp);
  const d4 = dot(ac, bp);
  if (d3 >= 0 && d4 <= d3) return dot(bp, bp);

  const vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) {
    const t = d1 / (d1 - d3);
    const q = sub(p, [a[0] + t * ab[0], a[1] + t * ab[1], a[2] + t * ab[2]]);
    return dot(q, q);
  }

  const cp = sub(p, c);
  const d5 = dot(ab, cp);
  const d6 = dot(ac, cp);
  if (d6 >= 0 && d5 <= d6) return dot(cp, cp);

  const vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) {
    const t = d2 / (d2 - d6);
    const q = sub(p, [a[0] + t * ac[0], a[1] + t * ac[1], a[2] + t * ac[2]]);
    return dot(q, q);
  }

  const va = d3 * d6 - d5 * d4;
  if (va <= 0 && d4 - d3 >= 0 && d5 - d6 >= 0) {
    const t = (d4 - d3) / (d4 - d3 + (d5 - d6));
    const q = sub(p, [
      b[0] + t * (c[0] - b[0]),
      b[1] + t * (c[1] - b[1]),
      b[2] + t * (c[2] - b[2]),
    ]);
    return dot(q, q);
  }

  const denom = 1 / (va + vb + vc);
  const v = vb * denom;
  const w = vc * denom;
  const q = sub(p, [
    a[0] + ab[0] * v + ac[0] * w,
    a[1] + ab[1] * v + ac[1] * w,
    a[2] + ab[2] * v + ac[2] * w,
  ]);
  return dot(q, q);
}

/** Per-vertex distance from `compared` vertices to the `reference` surface. */
export function displacementField(
  compared: ParsedMesh,
  reference: ParsedMesh,
): Float64Array {
  const field = new Float64Array(compared.vertexCount);
  const triangles: [Vec3, Vec3, Vec3][] = [];
  for (let t = 0; t < reference.triangleCount; t++) {
    triangles.push([
      vertexAt(reference, reference.indices[3 * t]!),
      vertexAt(reference, reference.indices[3 * t + 1]!),
      vertexAt(reference, reference.indices[3 * t + 2]!),
    ]);
  }
  for (let v = 0; v < compared.vertexCount; v++) {
    const p = vertexAt(compared, v);
    let best = Infinity;
    for (const [a, b, c] of triangles) {
      const d = pointTriangleDistanceSq(p, a, b, c);
      if (d < best) best = d;
    }
    field[v] = Math.sqrt(best);
  }
  return field;
}

export interface DifferenceOverlay {
  /** Indices of compared-mesh vertices displaced beyond the threshold. */
  displaced: number[];
  threshold: number;
  maxDisplacement: number;
}

export function differenceOverlay(
  compared: ParsedMesh,
  reference: ParsedMesh,
  thresholdFraction: number = DEFAULT_THRESHOLD_FRACTION,
): DifferenceOverlay {
  const scale = Math.max(
    boundingBoxDiagonal(reference),
    boundingBoxDiagonal(compared),
  );
  const threshold = thresholdFraction * scale;
  const field = displacementField(compared, reference);
  const displaced: number[] = [];
  let max = 0;
  for (let v = 0; v < field.length; v++) {
    const d = field[v]!;
    if (d > max) max = d;
    if (d > threshold) displaced.push(v);
  }
  return { displaced, threshold, maxDisplacement: max };
}
