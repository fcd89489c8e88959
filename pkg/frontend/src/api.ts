// Thin transport over the backend HTTP API. The fetch function is injected
// so tests can intercept every byte the viewer sees.

import type { BrickSpec } from "./spec";

export interface MeshReport {
  surface_area: number;
  enclosed_volume: number;
  relative_density: number | null;
  watertight: boolean;
  edge_manifold: boolean;
  consistent_winding: boolean;
  component_count: number;
  overhang_area_fraction: number;
  min_wall_mm: number | null;
  warnings: string[];
}

export interface SolveInfo {
  t: number;
  achieved: number;
  iterations: number;
  converged: boolean;
}

export interface JobRecord {
  id: string;
  spec: BrickSpec;
  status: "done" | "failed";
  report: MeshReport | null;
  solve: SolveInfo | null;
  error: string | null;
}

export interface SurfaceInfo {
  kind: string;
  formula: string;
  triply_periodic: boolean;
  symmetry: string;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    public detail: string,
  ) {
    // coded prefix shown verbatim in the status line
    super(`${code}: ${detail}`);
    this.name = "ApiError";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class Client {
  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async fail(response: Response): Promise<never> {
    let code = `HTTP_${response.status}`;
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (body && typeof body.error === "string") code = body.error;
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(response.status, code, detail);
  }

  async surfaces(): Promise<SurfaceInfo[]> {
    const response = await this.fetchFn(`${this.baseUrl}/api/surfaces`);
    if (!response.ok) await this.fail(response);
    return response.json();
  }

  async generate(spec: BrickSpec): Promise<JobRecord> {
    const response = await this.fetchFn(`${this.baseUrl}/api/generate`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(spec),
    });
    if (!response.ok) await this.fail(response);
    return response.json();
  }

  async report(jobId: string): Promise<MeshReport> {
    const response = await this.fetchFn(`${this.baseUrl}/api/report/${jobId}`);
    if (!response.ok) await this.fail(response);
    return response.json();
  }

  async meshStl(jobId: string): Promise<ArrayBuffer> {
    const response = await this.fetchFn(`${this.baseUrl}/api/mesh/${jobId}.stl`);
    if (!response.ok) await this.fail(response);
    return response.arrayBuffer();
  }
}
