// Spawns the real Python backend and runs the full generate loop against it:
// schwarz_p at density target 0.5 must display a density inside
// [0.495, 0.505], equal byte-for-byte to what came over the wire.

import { spawn, type ChildProcess } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { Client, type FetchLike } from "../src/api";
import { displayValue, renderMetrics, NUMERIC_FIELDS } from "../src/metrics";
import { defaultForm, formToSpec } from "../src/spec";
import { ViewerStore } from "../src/state";
import { parseBinaryStl } from "../src/stl";

const PORT = 8764;
const BASE = `http://127.0.0.1:${PORT}`;

let backend: ChildProcess | null = null;

async function waitForBackend(tries = 60): Promise<void> {
  for (let i = 0; i < tries; i++) {
    try {
      const response = await fetch(`${BASE}/api/surfaces`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 500));
  }
  throw new Error("backend did not come up; is tpms-forge installed?");
}

beforeAll(async () => {
  backend = spawn("tpms-forge", ["serve", "--port", String(PORT), "--bind", "127.0.0.1"], {
    stdio: "ignore",
  });
  await waitForBackend();
}, 60_000);

afterAll(() => {
  backend?.kill();
});

describe("live backend", () => {
  it("lists 16 surfaces", async () => {
    const client = new Client(BASE);
    const rows = await client.surfaces();
    expect(rows).toHaveLength(16);
  });

  it("schwarz_p density target 0.5 displays density in [0.495, 0.505] verbatim", async () => {
    // intercept the transport so we can compare the displayed numbers
    // against the exact wire payload
    const wireReports: unknown[] = [];
    const recordingFetch: FetchLike = async (input, init) => {
      const response = await fetch(input, init);
      if (String(input).endsWith("/api/generate")) {
        const clone = response.clone();
        const body = await clone.json();
        wireReports.push(body.report);
      }
      return response;
    };

    const store = new ViewerStore(new Client(BASE, recordingFetch));
    const form = defaultForm();
    form.kind = "schwarz_p";
    form.period = [25, 25, 25];
    form.style = "network";
    form.knob = "target_density";
    form.knobValue = 0.5;
    form.domain = [50, 50, 50];
    form.baseHeight = 0;
    form.autoResolution = false;
    form.resolution = [48, 48, 48];

    const ok = await store.generate(formToSpec(form));
    expect(ok).toBe(true);

    const result = store.current.result!;
    expect(result.report.watertight).toBe(true);
    expect(result.report.relative_density).not.toBeNull();
    expect(result.report.relative_density!).toBeGreaterThanOrEqual(0.495);
    expect(result.report.relative_density!).toBeLessThanOrEqual(0.505);

    // every displayed metric equals the intercepted backend report verbatim
    const wire = wireReports[0] as Record<string, unknown>;
    expect(result.report).toEqual(wire);
    const table = renderMetrics(document, result.report);
    for (const { key } of NUMERIC_FIELDS) {
      const cell = table.querySelector(`td[data-field="${key}"]`)!;
      expect(cell.textContent).toBe(displayValue(wire[key]));
    }

    // the mesh bytes parse as a well-formed binary STL
    const mesh = parseBinaryStl(result.meshBytes);
    expect(mesh.triangleCount).toBeGreaterThan(0);
  }, 120_000);

  it("repeat post returns the same job id (content addressed)", async () => {
    const client = new Client(BASE);
    const form = defaultForm();
    form.period = [25, 25, 25];
    form.domain = [50, 50, 50];
    form.autoResolution = false;
    form.resolution = [32, 32, 32];
    const spec = formToSpec(form);
    const a = await client.generate(spec);
    const b = await client.generate(spec);
    expect(a.id).toBe(b.id);
  }, 120_000);

  it("backend rejects what the client also blocks", async () => {
    const client = new Client(BASE);
    const spec = formToSpec(defaultForm());
    spec.domain_mm = [400, 150, 200];
    await expect(client.generate(spec)).rejects.toMatchObject({
      status: 422,
      code: "ENVELOPE_EXCEEDED",
    });
  });
});
