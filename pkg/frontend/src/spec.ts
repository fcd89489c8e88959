// BrickSpec mirrors the backend JSON schema exactly; the form model is the
// flat editable view of it. Client-side validation applies the same bounds
// the backend enforces so bad submissions are blocked before the POST.

export type SolidStyle = "network" | "sheet";
export type ModeKnob = "iso" | "target_density" | "target_wall";

export interface SurfaceSpec {
  kind: string;
  period_mm: [number, number, number];
  phase_offset: [number, number, number];
  strut_radius: number;
}

export interface ModeSpec {
  style: SolidStyle;
  iso: number | null;
  target_density: number | null;
  target_wall: number | null;
}

export interface BrickSpec {
  surface: SurfaceSpec;
  mode: ModeSpec;
  domain_mm: [number, number, number];
  base_height_mm: number;
  resolution: [number, number, number] | null;
  nozzle_mm: number;
  allow_oversize: boolean;
}

export interface SpecForm {
  kind: string;
  period: [number, number, number];
  phaseOffset: [number, number, number];
  strutRadius: number;
  style: SolidStyle;
  knob: ModeKnob;
  knobValue: number;
  domain: [number, number, number];
  baseHeight: number;
  autoResolution: boolean;
  resolution: [number, number, number];
  nozzle: number;
  allowOversize: boolean;
}

export const ENVELOPE_MM: [number, number, number] = [150, 150, 200];
export const VOXEL_CAP = 512 ** 3;
export const MAX_AXIS_RESOLUTION = 128;

export const SURFACE_KINDS = [
  "gyroid", "diamond", "schwarz_p", "neovius", "lidinoid", "split_p",
  "d_prime", "double_gyroid", "iwp", "pw_hybrid", "scherk_1", "scherk_2",
  "skeletal_1", "skeletal_2", "skeletal_3", "skeletal_4",
] as const;

export function defaultForm(): SpecForm {
  return {
    kind: "gyroid",
    period: [50, 50, 50],
    phaseOffset: [0, 0, 0],
    strutRadius: 0.2,
    style: "network",
    knob: "iso",
    knobValue: 0,
    domain: [...ENVELOPE_MM] as [number, number, number],
    baseHeight: 10,
    autoResolution: true,
    resolution: defaultResolution(ENVELOPE_MM),
    nozzle: 0.6,
    allowOversize: false,
  };
}

export function defaultResolution(domain: [number, number, number]): [number, number, number] {
  const longest = Math.max(...domain);
  return domain.map((s) => Math.max(2, Math.round((MAX_AXIS_RESOLUTION * s) / longest))) as [
    number, number, number,
  ];
}

export function formToSpec(form: SpecForm): BrickSpec {
  const mode: ModeSpec = {
    style: form.style,
    iso: null,
    target_density: null,
    target_wall: null,
  };
  mode[form.knob] = form.knobValue;
  return {
    surface: {
      kind: form.kind,
      period_mm: [...form.period] as [number, number, number],
      phase_offset: [...form.phaseOffset] as [number, number, number],
      strut_radius: form.strutRadius,
    },
    mode,
    domain_mm: [...form.domain] as [number, number, number],
    base_height_mm: form.baseHeight,
    resolution: form.autoResolution ? null : ([...form.resolution] as [number, number, number]),
    nozzle_mm: form.nozzle,
    allow_oversize: form.allowOversize,
  };
}

export function specToForm(spec: BrickSpec): SpecForm {
  const knob: ModeKnob =
    spec.mode.iso !== null
      ? "iso"
      : spec.mode.target_density !== null
        ? "target_density"
        : "target_wall";
  const knobValue = spec.mode[knob];
  return {
    kind: spec.surface.kind,
    period: [...spec.surface.period_mm] as [number, number, number],
    phaseOffset: [...spec.surface.phase_offset] as [number, number, number],
    strutRadius: spec.surface.strut_radius,
    style: spec.mode.style,
    knob,
    knobValue: knobValue ?? 0,
    domain: [...spec.domain_mm] as [number, number, number],
    baseHeight: spec.base_height_mm,
    autoResolution: spec.resolution === null,
    resolution:
      spec.resolution === null
        ? defaultResolution(spec.domain_mm)
        : ([...spec.resolution] as [number, number, number]),
    nozzle: spec.nozzle_mm,
    allowOversize: spec.allow_oversize,
  };
}

const finite = (v: number) => Number.isFinite(v);

export function validateSpec(spec: BrickSpec): string[] {
  const errors: string[] = [];
  const { surface, mode } = spec;

  if (!surface.kind) errors.push("SPEC_INVALID: surface kind is required");
  if (!surface.period_mm.every((p) => finite(p) && p > 0))
    errors.push("SPEC_INVALID: period must be positive");
  if (!surface.phase_offset.every(finite))
    errors.push("SPEC_INVALID: phase offset must be finite");
  if (!(surface.strut_radius > 0 && surface.strut_radius <= 0.5))
    errors.push("SPEC_INVALID: strut radius must be in (0, 0.5]");

  const knobs = [mode.iso, mode.target_density, mode.target_wall].filter(
    (v) => v !== null,
  );
  if (knobs.length !== 1)
    errors.push("SPEC_INVALID: exactly one of iso / density target / wall target");
  if (mode.iso !== null && !finite(mode.iso))
    errors.push("SPEC_INVALID: iso must be finite");
  if (mode.style === "sheet" && mode.iso !== null && mode.iso <= 0)
    errors.push("SPEC_INVALID: sheet thickness must be > 0");
  if (mode.target_density !== null && !(mode.target_density > 0 && mode.target_density < 1))
    errors.push("SPEC_INVALID: density target must be in (0, 1)");
  if (mode.target_wall !== null) {
    if (mode.style !== "sheet") errors.push("SPEC_INVALID: wall target requires sheet style");
    if (!(mode.target_wall! > 0)) errors.push("SPEC_INVALID: wall target must be > 0");
  }

  if (!spec.domain_mm.every((s) => finite(s) && s > 0))
    errors.push("SPEC_INVALID: domain must be positive");
  else if (!spec.allow_oversize && spec.domain_mm.some((s, i) => s > ENVELOPE_MM[i] + 1e-9))
    errors.push(
      `ENVELOPE_EXCEEDED: domain exceeds ${ENVELOPE_MM.join("x")} mm print envelope`,
    );

  if (!(finite(spec.base_height_mm) && spec.base_height_mm >= 0))
    errors.push("SPEC_INVALID: base height must be >= 0");
  if (!(finite(spec.nozzle_mm) && spec.nozzle_mm > 0))
    errors.push("SPEC_INVALID: nozzle must be > 0");

  if (spec.resolution !== null) {
    if (!spec.resolution.every((n) => Number.isInteger(n) && n >= 2))
      errors.push("SPEC_INVALID: resolution must be three integers >= 2");
    else if (spec.resolution[0] * spec.resolution[1] * spec.resolution[2] > VOXEL_CAP)
      errors.push(`CAP_EXCEEDED: resolution above the ${VOXEL_CAP} sample cap`);
  }
  return errors;
}
