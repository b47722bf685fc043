/**
 * Pipeline config text format, mirrored from the server: one step per line,
 * `kind key=value ...`, canonical key order, numbers in shortest form.
 * The server is the authority; schemas here carry the same ranges so the UI
 * can never build a config the server rejects.
 */

export type StepKind =
  | 'gray'
  | 'brightness_contrast'
  | 'replace_background'
  | 'wavelet'
  | 'frac_enhance'
  | 'sobel'
  | 'bump_map'
  | 'cartoon'
  | 'gaussian_blur';

export interface ParamSpec {
  key: string;
  /** undefined means the parameter is required */
  defaultValue?: number;
  integer?: boolean;
  min?: number;
  max?: number;
  minExclusive?: boolean;
  maxExclusive?: boolean;
}

export const STEP_SCHEMAS: Record<StepKind, ParamSpec[]> = {
  gray: [],
  brightness_contrast: [
    { key: 'brightness', defaultValue: 0, min: -1, max: 1 },
    { key: 'contrast', defaultValue: 0, min: -1, max: 1 },
  ],
  replace_background: [
    { key: 'tone_r', min: 0, max: 1 },
    { key: 'tone_g', min: 0, max: 1 },
    { key: 'tone_b', min: 0, max: 1 },
    { key: 'threshold', defaultValue: 0.08, min: 0, max: 1, minExclusive: true, maxExclusive: true },
  ],
  wavelet: [
    { key: 'finest', defaultValue: 1, min: 0 },
    { key: 'fine', defaultValue: 1, min: 0 },
    { key: 'medium', defaultValue: 1, min: 0 },
    { key: 'coarse', defaultValue: 1, min: 0 },
    { key: 'coarsest', defaultValue: 1, min: 0 },
    { key: 'remain', defaultValue: 1, min: 0 },
    { key: 'levels', defaultValue: 5, integer: true, min: 1, max: 5 },
  ],
  frac_enhance: [
    { key: 'nu', defaultValue: 0.7, min: 0, max: 2, maxExclusive: true },
    { key: 'alpha', defaultValue: 0.7, min: 0, max: 1 },
    { key: 'taps', defaultValue: 8, integer: true, min: 2 },
  ],
  sobel: [],
  bump_map: [
    { key: 'azimuth', defaultValue: 135, min: 0, max: 360, maxExclusive: true },
    { key: 'elevation', defaultValue: 45, min: 0, max: 90, minExclusive: true },
    { key: 'depth', defaultValue: 3, min: 0 },
  ],
  cartoon: [
    { key: 'mask_radius', defaultValue: 7, min: 0, minExclusive: true },
    { key: 'threshold', defaultValue: 0.2, min: 0, max: 1, minExclusive: true, maxExclusive: true },
    { key: 'pct_black', defaultValue: 0.2, min: 0, max: 1 },
  ],
  gaussian_blur: [{ key: 'sigma', min: 0, minExclusive: true }],
};

export const STEP_KINDS = Object.keys(STEP_SCHEMAS) as StepKind[];

export interface PipelineStep {
  kind: StepKind;
  params: Record<string, number>;
}

export class PipelineParseError extends Error {
  constructor(
    message: string,
    readonly line: number,
  ) {
    super(`line ${line}: ${message}`);
    this.name = 'PipelineParseError';
  }
}

export function checkRange(kind: StepKind, spec: ParamSpec, value: number): string | null {
  if (!Number.isFinite(value)) return `${spec.key} must be a finite number`;
  if (spec.integer && !Number.isInteger(value)) return `${spec.key} must be an integer`;
  if (spec.min !== undefined && (spec.minExclusive ? value <= spec.min : value < spec.min)) {
    return `${spec.key} is out of range for ${kind}`;
  }
  if (spec.max !== undefined && (spec.maxExclusive ? value >= spec.max : value > spec.max)) {
    return `${spec.key} is out of range for ${kind}`;
  }
  return null;
}

/** Integral floats print bare ("25"), everything else in shortest form ("10.1"). */
export function formatValue(value: number): string {
  return String(value);
}

export function serializeStep(step: PipelineStep): string {
  const parts: string[] = [step.kind];
  for (const spec of STEP_SCHEMAS[step.kind]) {
    parts.push(`${spec.key}=${formatValue(step.params[spec.key])}`);
  }
  return parts.join(' ');
}

export function serializePipeline(steps: PipelineStep[]): string {
  if (steps.length === 0) return '';
  return steps.map(serializeStep).join('\n') + '\n';
}

export function parsePipeline(text: string): PipelineStep[] {
  const steps: PipelineStep[] = [];
  const lines = text.split('\n');
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (!line) continue;
    const lineno = i + 1;
    const tokens = line.split(/\s+/);
    const kind = tokens[0] as StepKind;
    const schema = STEP_SCHEMAS[kind];
    if (schema === undefined) {
      throw new PipelineParseError(`unknown step kind '${tokens[0]}'`, lineno);
    }
    const params: Record<string, number> = {};
    for (const token of tokens.slice(1)) {
      const eq = token.indexOf('=');
      if (eq <= 0 || eq === token.length - 1) {
        throw new PipelineParseError(`expected key=value, got '${token}'`, lineno);
      }
      const key = token.slice(0, eq);
      const spec = schema.find((s) => s.key === key);
      if (!spec) {
        throw new PipelineParseError(`unknown parameter '${key}' for ${kind}`, lineno);
      }
      if (key in params) {
        throw new PipelineParseError(`duplicate parameter '${key}'`, lineno);
      }
      const value = Number(token.slice(eq + 1));
      if (Number.isNaN(value)) {
        throw new PipelineParseError(`parameter '${key}' needs a number`, lineno);
      }
      const problem = checkRange(kind, spec, value);
      if (problem) throw new PipelineParseError(problem, lineno);
      params[key] = value;
    }
    for (const spec of schema) {
      if (!(spec.key in params)) {
        if (spec.defaultValue === undefined) {
          throw new PipelineParseError(`${kind} is missing required parameter '${spec.key}'`, lineno);
        }
        params[spec.key] = spec.defaultValue;
      }
    }
    steps.push({ kind, params });
  }
  return steps;
}
