// Entry point: parameter form on the left, 3D view in the middle, metrics on
// the right. Generation is an explicit button (it costs seconds on the
// backend), and the scene renders whatever mesh matches the displayed report.

import * as THREE from "three";
import { OrbitControls } from "three/examples/jsm/controls/OrbitControls.js";

import { Client } from "./api";
import { displayValue, renderCompare, renderMetrics, renderWarnings } from "./metrics";
import type { BrickSpec, ModeKnob, SpecForm } from "./spec";
import { defaultForm, formToSpec, specToForm, SURFACE_KINDS } from "./spec";
import { ViewerStore } from "./state";
import { meshBounds, parseBinaryStl } from "./stl";

const client = new Client("");
const store = new ViewerStore(client);

// --- scene ----------------------------------------------------------------

const viewport = document.getElementById("viewport") as HTMLDivElement;
const renderer = new THREE.WebGLRenderer({ antialias: true });
renderer.setPixelRatio(window.devicePixelRatio);
viewport.appendChild(renderer.domElement);

const scene = new THREE.Scene();
scene.background = new THREE.Color(0x10141a);
const camera = new THREE.PerspectiveCamera(45, 1, 1, 5000);
camera.position.set(280, -260, 220);
camera.up.set(0, 0, 1);

const controls = new OrbitControls(camera, renderer.domElement);
controls.target.set(75, 75, 100);

scene.add(new THREE.AmbientLight(0xffffff, 0.45));
const keyLight = new THREE.DirectionalLight(0xffffff, 1.1);
keyLight.position.set(1, -2, 3);
scene.add(keyLight);
const rimLight = new THREE.DirectionalLight(0x88aaff, 0.5);
rimLight.position.set(-2, 1, -1);
scene.add(rimLight);

let brickObject: THREE.Mesh | null = null;

function resize(): void {
  const width = viewport.clientWidth;
  const height = viewport.clientHeight;
  renderer.setSize(width, height, false);
  camera.aspect = width / Math.max(1, height);
  camera.updateProjectionMatrix();
}
window.addEventListener("resize", resize);

function showMesh(bytes: ArrayBuffer): void {
  const stl = parseBinaryStl(bytes);
  const geometry = new THREE.BufferGeometry();
  geometry.setAttribute("position", new THREE.BufferAttribute(stl.positions, 3));
  geometry.setAttribute("normal", new THREE.BufferAttribute(stl.normals, 3));
  const material = new THREE.MeshStandardMaterial({
    color: 0xd8a05a,
    roughness: 0.65,
    metalness: 0.05,
    side: THREE.DoubleSide,
  });
  if (brickObject) {
    scene.remove(brickObject);
    brickObject.geometry.dispose();
    (brickObject.material as THREE.Material).dispose();
  }
  brickObject = new THREE.Mesh(geometry, material);
  scene.add(brickObject);
  const { min, max } = meshBounds(stl);
  controls.target.set((min[0] + max[0]) / 2, (min[1] + max[1]) / 2, (min[2] + max[2]) / 2);
}

function animate(): void {
  requestAnimationFrame(animate);
  controls.update();
  renderer.render(scene, camera);
}

// --- form -----------------------------------------------------------------

const form = document.getElementById("spec-form") as HTMLFormElement;
const statusLine = document.getElementById("status") as HTMLDivElement;
const metricsPanel = document.getElementById("metrics-panel") as HTMLDivElement;
const comparePanel = document.getElementById("compare-panel") as HTMLDivElement;
const generateButton = document.getElementById("generate") as HTMLButtonElement;
const saveA = document.getElementById("save-a") as HTMLButtonElement;
const saveB = document.getElementById("save-b") as HTMLButtonElement;

function input(name: string): HTMLInputElement {
  return form.elements.namedItem(name) as HTMLInputElement;
}

function select(name: string): HTMLSelectElement {
  return form.elements.namedItem(name) as HTMLSelectElement;
}

function populateKinds(): void {
  const kindSelect = select("kind");
  for (const kind of SURFACE_KINDS) {
    const option = document.createElement("option");
    option.value = kind;
    option.textContent = kind;
    kindSelect.appendChild(option);
  }
  client
    .surfaces()
    .then((rows) => {
      for (const row of rows) {
        const option = kindSelect.querySelector<HTMLOptionElement>(
          `option[value="${row.kind}"]`,
        );
        if (option) option.title = row.formula;
      }
    })
    .catch(() => {
      /* backend offline; the static list still works */
    });
}

function readTriple(prefix: string): [number, number, number] {
  return [
    Number(input(`${prefix}_x`).value),
    Number(input(`${prefix}_y`).value),
    Number(input(`${prefix}_z`).value),
  ];
}

function writeTriple(prefix: string, value: [number, number, number]): void {
  input(`${prefix}_x`).value = String(value[0]);
  input(`${prefix}_y`).value = String(value[1]);
  input(`${prefix}_z`).value = String(value[2]);
}

export function readForm(): SpecForm {
  return {
    kind: select("kind").value,
    period: readTriple("period"),
    phaseOffset: readTriple("offset"),
    strutRadius: Number(input("strut_radius").value),
    style: select("style").value as SpecForm["style"],
    knob: select("knob").value as ModeKnob,
    knobValue: Number(input("knob_value").value),
    domain: readTriple("domain"),
    baseHeight: Number(input("base_height").value),
    autoResolution: input("auto_resolution").checked,
    resolution: readTriple("resolution"),
    nozzle: Number(input("nozzle").value),
    allowOversize: input("allow_oversize").checked,
  };
}

export function writeForm(values: SpecForm): void {
  select("kind").value = values.kind;
  writeTriple("period", values.period);
  writeTriple("offset", values.phaseOffset);
  input("strut_radius").value = String(values.strutRadius);
  select("style").value = values.style;
  select("knob").value = values.knob;
  input("knob_value").value = String(values.knobValue);
  writeTriple("domain", values.domain);
  input("base_height").value = String(values.baseHeight);
  input("auto_resolution").checked = values.autoResolution;
  writeTriple("resolution", values.resolution);
  input("nozzle").value = String(values.nozzle);
  input("allow_oversize").checked = values.allowOversize;
}

function setStatus(text: string, kind: "idle" | "busy" | "error"): void {
  statusLine.textContent = text;
  statusLine.className = `status ${kind}`;
}

function refreshPanels(): void {
  const state = store.current;
  metricsPanel.replaceChildren();
  if (state.result) {
    const heading = document.createElement("div");
    heading.className = "job-id";
    heading.textContent = `job ${state.result.jobId}`;
    metricsPanel.appendChild(heading);
    metricsPanel.appendChild(renderWarnings(document, state.result.report));
    metricsPanel.appendChild(renderMetrics(document, state.result.report));
    if (state.result.report.relative_density !== null) {
      const density = document.createElement("div");
      density.className = "headline-density";
      density.textContent = `density ${displayValue(state.result.report.relative_density)}`;
      metricsPanel.appendChild(density);
    }
  }

  comparePanel.replaceChildren();
  const [a, b] = state.slots;
  const label = document.createElement("div");
  label.textContent = `A: ${a ? a.jobId : "empty"}  B: ${b ? b.jobId : "empty"}`;
  comparePanel.appendChild(label);
  if (a && b) {
    comparePanel.appendChild(renderCompare(document, a.report, b.report));
  }

  saveA.disabled = saveB.disabled = state.result === null;
  generateButton.disabled = store.generating;
  switch (state.status.phase) {
    case "idle":
      setStatus(state.result ? "done" : "ready", "idle");
      break;
    case "generating":
      setStatus("generating...", "busy");
      break;
    case "error":
      setStatus(state.status.message, "error");
      break;
  }
}

store.subscribe((state) => {
  refreshPanels();
  if (state.result && state.status.phase === "idle") {
    showMesh(state.result.meshBytes);
  }
});

form.addEventListener("submit", (event) => {
  event.preventDefault();
  const spec: BrickSpec = formToSpec(readForm());
  void store.generate(spec);
});

saveA.addEventListener("click", () => store.save(0));
saveB.addEventListener("click", () => store.save(1));

// round-trip the defaults through the spec JSON so the form always shows the
// canonical values
writeForm(specToForm(formToSpec(defaultForm())));
populateKinds();
refreshPanels();
resize();
animate();
