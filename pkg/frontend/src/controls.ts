/**
 * Slider/toggle state for the tuning panel and its mapping to pipeline text.
 *
 * Steps are emitted in one fixed order (the order the recipes use); free
 * ordering stays available through CLI config files. Control bounds equal
 * the server's parameter ranges, so any state serializes to a config the
 * server accepts.
 */

import {
  PipelineParseError,
  PipelineStep,
  STEP_SCHEMAS,
  parsePipeline,
  serializePipeline,
} from './pipeline.js';

/** Step kinds the panel exposes, in emission order. */
export const UI_STEP_ORDER = [
  'gray',
  'gaussian_blur',
  'wavelet',
  'frac_enhance',
  'sobel',
  'cartoon',
  'bump_map',
  'brightness_contrast',
] as const;

export type UiStepKind = (typeof UI_STEP_ORDER)[number];

export interface StepControl {
  enabled: boolean;
  params: Record<string, number>;
}

export interface ControlState {
  steps: Record<UiStepKind, StepControl>;
  activePreset: string | null;
  debounceMs: number;
}

export interface SliderRange {
  min: number;
  max: number;
  step: number;
}

/** Display ranges; every interval sits inside the server's legal range. */
export const SLIDER_RANGES: Record<UiStepKind, Record<string, SliderRange>> = {
  gray: {},
  gaussian_blur: { sigma: { min: 0.3, max: 10, step: 0.1 } },
  wavelet: {
    finest: { min: 0, max: 30, step: 0.1 },
    fine: { min: 0, max: 30, step: 0.1 },
    medium: { min: 0, max: 30, step: 0.1 },
    coarse: { min: 0, max: 30, step: 0.1 },
    coarsest: { min: 0, max: 30, step: 0.1 },
    remain: { min: 0, max: 10, step: 0.1 },
    levels: { min: 1, max: 5, step: 1 },
  },
  frac_enhance: {
    nu: { min: 0, max: 1.9, step: 0.05 },
    alpha: { min: 0, max: 1, step: 0.05 },
    taps: { min: 2, max: 16, step: 1 },
  },
  sobel: {},
  cartoon: {
    mask_radius: { min: 0.5, max: 20, step: 0.5 },
    threshold: { min: 0.01, max: 0.99, step: 0.01 },
    pct_black: { min: 0, max: 1, step: 0.05 },
  },
  bump_map: {
    azimuth: { min: 0, max: 359, step: 1 },
    elevation: { min: 1, max: 90, step: 1 },
    depth: { min: 0, max: 10, step: 0.1 },
  },
  brightness_contrast: {
    brightness: { min: -1, max: 1, step: 0.05 },
    contrast: { min: -1, max: 1, step: 0.05 },
  },
};

export const DEFAULT_DEBOUNCE_MS = 250;

const UI_PARAM_DEFAULTS: Partial<Record<UiStepKind, Record<string, number>>> = {
  gaussian_blur: { sigma: 2 }, // the server has no default; pick a visible one
};

function defaultParams(kind: UiStepKind): Record<string, number> {
  const params: Record<string, number> = {};
  for (const spec of STEP_SCHEMAS[kind]) {
    params[spec.key] = spec.defaultValue ?? UI_PARAM_DEFAULTS[kind]?.[spec.key] ?? spec.min ?? 0;
  }
  return params;
}

export function defaultControlState(debounceMs = DEFAULT_DEBOUNCE_MS): ControlState {
  const steps = {} as Record<UiStepKind, StepControl>;
  for (const kind of UI_STEP_ORDER) {
    steps[kind] = { enabled: false, params: defaultParams(kind) };
  }
  return { steps, activePreset: null, debounceMs };
}

export function stateToPipeline(state: ControlState): string {
  const steps: PipelineStep[] = [];
  for (const kind of UI_STEP_ORDER) {
    const control = state.steps[kind];
    if (control.enabled) {
      steps.push({ kind, params: { ...control.params } });
    }
  }
  return serializePipeline(steps);
}

export interface ApplyResult {
  state: ControlState;
  /** set when the input could not be applied; the state is then unchanged */
  notice?: string;
}

function fromSteps(
  steps: PipelineStep[],
  previous: ControlState,
  activePreset: string | null,
): ApplyResult {
  const next = defaultControlState(previous.debounceMs);
  let orderIndex = -1;
  for (const step of steps) {
    const position = UI_STEP_ORDER.indexOf(step.kind as UiStepKind);
    if (position < 0) {
      return { state: previous, notice: `the panel has no controls for '${step.kind}'` };
    }
    if (position <= orderIndex) {
      return {
        state: previous,
        notice: `step order is fixed in the panel ('${step.kind}' is out of place)`,
      };
    }
    orderIndex = position;
    next.steps[step.kind as UiStepKind] = { enabled: true, params: { ...step.params } };
  }
  next.activePreset = activePreset;
  return { state: next };
}

export function applyPreset(
  current: ControlState,
  name: string,
  table: Map<string, string>,
): ApplyResult {
  const text = table.get(name);
  if (text === undefined) {
    return { state: current, notice: `unknown preset '${name}'` };
  }
  return fromSteps(parsePipeline(text), current, name);
}

/** Restore a state from exported config text (unknown text leaves it unchanged). */
export function importPipelineText(current: ControlState, text: string): ApplyResult {
  let steps: PipelineStep[];
  try {
    steps = parsePipeline(text);
  } catch (err) {
    if (err instanceof PipelineParseError) {
      return { state: current, notice: err.message };
    }
    throw err;
  }
  return fromSteps(steps, current, null);
}
