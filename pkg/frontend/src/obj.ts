/** Minimal OBJ parsing for display.
 *
 * The service emits plain triangle meshes (v/f lines only), but exported
 * models from other tools may carry texture/normal references and polygon
 * faces, so `f a/b/c ...` forms are accepted and polygons fan-triangulated.
 */

export interface ParsedMesh {
  positions: Float32Array;
  /** Flat triangle index list, three entries per face. */
  indices: Uint32Array;
  vertexCount: number;
  triangleCount: number;
}

export class ObjError extends Error {
  readonly line: number;

  constructor(message: string, line: number) {
    super(`line ${line}: ${message}`);
    this.name = "ObjError";
    this.line = line;
  }
}

function vertexIndex(token: string, vertexCount: number, line: number): number {
  const head = token.split("/", 1)[0] ?? "";
  const value = Number(head);
  if (!Number.isInteger(value) || value === 0) {
    throw new ObjError(`bad face index ${JSON.stringify(token)}`, line);
  }
  const index = value > 0 ? value - 1 : vertexCount + value;
  if (index < 0 || index >= vertexCount) {
    throw new ObjError(`face index ${value} out of range`, line);
  }
  return index;
}

export function parseObj(text: string): ParsedMesh {
  const positions: number[] = [];
  const indices: number[] = [];
  const lines = text.split(/\r?\n/);
  for (let n = 0; n < lines.length; n++) {
    const raw = lines[n] ?? "";
    const content = raw.split("#", 1)[0]?.trim() ?? "";
    if (!content) continue;
    const parts = content.split(/\s+/);
    const keyword = parts[0];
    if (keyword === "v") {
      if (parts.length < 4) throw new ObjError("vertex needs 3 coordinates", n + 1);
      for (let k = 1; k <= 3; k++) {
        const value = Number(parts[k]);
        if (!Number.isFinite(value)) {
          throw new ObjError(`bad coordinate ${JSON.stringify(parts[k])}`, n + 1);
        }
        positions.push(value);
      }
    } else if (keyword === "f") {
      if (parts.length < 4) throw new ObjError("face needs 3 vertices", n + 1);
      const count = positions.length / 3;
      const corners = parts.slice(1).map((t) => vertexIndex(t, count, n + 1));
      for (let k = 1; k + 1 < corners.length; k++) {
        const [a, b, c] = [corners[0]!, corners[k]!, corners[k + 1]!];
        if (a === b || b === c || a === c) {
          throw new ObjError("degenerate face (repeated vertex)", n + 1);
        }
        indices.push(a, b, c);
      }
    }
    // vn/vt/usemtl/o/g/s lines carry no displayable geometry; skip them
  }
  return {
    positions: new Float32Array(positions),
    indices: new Uint32Array(indices),
    vertexCount: positions.length / 3,
    triangleCount: indices.length / 3,
  };
}

export function boundingBoxDiagonal(mesh: ParsedMesh): number {
  if (mesh.vertexCount === 0) return 0;
  const lo = [Infinity, Infinity, Infinity];
  const hi = [-Infinity, -Infinity, -Infinity];
  for (let v = 0; v < mesh.vertexCount; v++) {
    for (let axis = 0; axis < 3; axis++) {
      const value = mesh.positions[3 * v + axis]!;
      if (value < lo[axis]!) lo[axis] = value;
      if (value > hi[axis]!) hi[axis] = value;
    }
  }
  let sum = 0;
  for (let axis = 0; axis < 3; axis++) {
    const extent = hi[axis]! - lo[axis]!;
    sum += extent * extent;
  }
  return Math.sqrt(sum);
}
