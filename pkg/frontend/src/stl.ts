// Binary STL parsing: the one export format serves both slicers and the
// viewer, so the mesh endpoint's bytes are decoded directly into typed
// arrays ready for a BufferGeometry.

export interface StlMesh {
  triangleCount: number;
  positions: Float32Array; // 9 floats per triangle
  normals: Float32Array; // facet normal replicated per corner
}

const HEADER_BYTES = 84;
const RECORD_BYTES = 50;

export function parseBinaryStl(buffer: ArrayBuffer): StlMesh {
  if (buffer.byteLength < HEADER_BYTES) {
    throw new Error(`binary STL needs at least ${HEADER_BYTES} bytes, got ${buffer.byteLength}`);
  }
  const view = new DataView(buffer);
  const triangleCount = view.getUint32(80, true);
  const expected = HEADER_BYTES + RECORD_BYTES * triangleCount;
  if (buffer.byteLength !== expected) {
    throw new Error(
      `length mismatch: ${triangleCount} triangles need ${expected} bytes, got ${buffer.byteLength}`,
    );
  }
  const positions = new Float32Array(triangleCount * 9);
  const normals = new Float32Array(triangleCount * 9);
  for (let t = 0; t < triangleCount; t++) {
    const base = HEADER_BYTES + t * RECORD_BYTES;
    const nx = view.getFloat32(base, true);
    const ny = view.getFloat32(base + 4, true);
    const nz = view.getFloat32(base + 8, true);
    for (let corner = 0; corner < 3; corner++) {
      const src = base + 12 + corner * 12;
      const dst = t * 9 + corner * 3;
      positions[dst] = view.getFloat32(src, true);
      positions[dst + 1] = view.getFloat32(src + 4, true);
      positions[dst + 2] = view.getFloat32(src + 8, true);
      normals[dst] = nx;
      normals[dst + 1] = ny;
      normals[dst + 2] = nz;
    }
  }
  return { triangleCount, positions, normals };
}

export function meshBounds(mesh: StlMesh): { min: number[]; max: number[] } {
  const min = [Infinity, Infinity, Infinity];
  const max = [-Infinity, -Infinity, -Infinity];
  for (let i = 0; i < mesh.positions.length; i += 3) {
    for (let axis = 0; axis < 3; axis++) {
      const v = mesh.positions[i + axis];
      if (v < min[axis]) min[axis] = v;
      if (v > max[axis]) max[axis] = v;
    }
  }
  return { min, max };
}
