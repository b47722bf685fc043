/** DOM wiring for the tuning panel: sliders, presets, side-by-side preview. */

import { ApiError, enhance, fetchPresets, uploadImage } from './api.js';
import {
  ControlState,
  SLIDER_RANGES,
  UI_STEP_ORDER,
  UiStepKind,
  applyPreset,
  defaultControlState,
  importPipelineText,
  stateToPipeline,
} from './controls.js';
import { STEP_SCHEMAS } from './pipeline.js';
import { PreviewScheduler } from './preview.js';

const STEP_LABELS: Record<UiStepKind, string> = {
  gray: 'Grayscale',
  gaussian_blur: 'Gaussian blur',
  wavelet: 'Wavelet level gains',
  frac_enhance: 'Fractional edge enhance',
  sobel: 'Sobel edges',
  cartoon: 'Cartoon darkening',
  bump_map: 'Bump-map relief',
  brightness_contrast: 'Brightness / contrast',
};

let state: ControlState = defaultControlState();
let imageId: string | null = null;
let presetTable = new Map<string, string>();

const $ = <T extends HTMLElement>(id: string): T => document.getElementById(id) as T;

function banner(message: string | null): void {
  const el = $('banner');
  el.textContent = message ?? '';
  el.classList.toggle('visible', message !== null);
}

const scheduler = new PreviewScheduler<Blob>(
  (pipeline) => {
    if (imageId === null) return Promise.reject(new Error('no image uploaded'));
    return enhance(imageId, pipeline);
  },
  {
    onResult: (blob) => {
      banner(null);
      const img = $<HTMLImageElement>('enhanced');
      const old = img.src;
      img.src = URL.createObjectURL(blob);
      if (old.startsWith('blob:')) URL.revokeObjectURL(old);
    },
    onError: (err) => {
      if (err instanceof ApiError && err.status === 404) {
        imageId = null;
        banner('The uploaded image expired on the server; please upload it again.');
      } else if (err instanceof ApiError) {
        banner(`Preview failed (${err.status}): ${err.detail}`);
      } else {
        banner(`Preview failed: ${String(err)}`);
      }
    },
  },
  state.debounceMs,
);

function refresh(schedule = true): void {
  const text = stateToPipeline(state);
  $<HTMLTextAreaElement>('config-text').value = text;
  const select = $<HTMLSelectElement>('preset-select');
  select.value = state.activePreset ?? '';
  if (schedule && imageId !== null) {
    scheduler.request(text);
  }
}

// ---------------------------------------------------------------------------
// control panel

function sliderRow(kind: UiStepKind, key: string): HTMLElement {
  const range = SLIDER_RANGES[kind][key];
  const row = document.createElement('label');
  row.className = 'param-row';

  const name = document.createElement('span');
  name.textContent = key.replace(/_/g, ' ');

  const slider = document.createElement('input');
  slider.type = 'range';
  slider.min = String(range.min);
  slider.max = String(range.max);
  slider.step = String(range.step);
  slider.value = String(state.steps[kind].params[key]);

  const value = document.createElement('output');
  value.textContent = slider.value;

  slider.addEventListener('input', () => {
    const parsed = Number(slider.value);
    state.steps[kind].params[key] = parsed;
    state.activePreset = null;
    value.textContent = String(parsed);
    refresh();
  });

  row.append(name, slider, value);
  row.dataset.kind = kind;
  row.dataset.key = key;
  return row;
}

function buildPanel(): void {
  const panel = $('panel');
  panel.textContent = '';
  for (const kind of UI_STEP_ORDER) {
    const box = document.createElement('fieldset');
    box.className = 'step';

    const legend = document.createElement('legend');
    const toggle = document.createElement('input');
    toggle.type = 'checkbox';
    toggle.checked = state.steps[kind].enabled;
    toggle.addEventListener('change', () => {
      state.steps[kind].enabled = toggle.checked;
      state.activePreset = null;
      box.classList.toggle('enabled', toggle.checked);
      refresh();
    });
    const caption = document.createElement('span');
    caption.textContent = STEP_LABELS[kind];
    legend.append(toggle, caption);
    box.append(legend);
    box.classList.toggle('enabled', state.steps[kind].enabled);

    for (const spec of STEP_SCHEMAS[kind]) {
      box.append(sliderRow(kind, spec.key));
    }
    panel.append(box);
  }
}

// ---------------------------------------------------------------------------
// zoom / pan shared by both panes

let zoom = 1;
let panX = 0;
let panY = 0;

function applyView(): void {
  const transform = `translate(${panX}px, ${panY}px) scale(${zoom})`;
  $<HTMLImageElement>('original').style.transform = transform;
  $<HTMLImageElement>('enhanced').style.transform = transform;
}

function wireViewport(): void {
  for (const id of ['original-pane', 'enhanced-pane']) {
    const pane = $(id);
    pane.addEventListener('wheel', (event) => {
      event.preventDefault();
      const factor = event.deltaY < 0 ? 1.15 : 1 / 1.15;
      zoom = Math.min(12, Math.max(0.2, zoom * factor));
      applyView();
    });
    let dragging = false;
    let lastX = 0;
    let lastY = 0;
    pane.addEventListener('pointerdown', (event) => {
      dragging = true;
      lastX = event.clientX;
      lastY = event.clientY;
      pane.setPointerCapture(event.pointerId);
    });
    pane.addEventListener('pointermove', (event) => {
      if (!dragging) return;
      panX += event.clientX - lastX;
      panY += event.clientY - lastY;
      lastX = event.clientX;
      lastY = event.clientY;
      applyView();
    });
    pane.addEventListener('pointerup', () => {
      dragging = false;
    });
  }
}

// ---------------------------------------------------------------------------
// top bar actions

async function onUpload(files: FileList | null): Promise<void> {
  if (!files || files.length === 0) return;
  const file = files[0];
  try {
    imageId = await uploadImage(file);
  } catch (err) {
    banner(err instanceof ApiError ? `Upload failed: ${err.detail}` : String(err));
    return;
  }
  banner(null);
  const img = $<HTMLImageElement>('original');
  if (img.src.startsWith('blob:')) URL.revokeObjectURL(img.src);
  // PPM/PGM do not render in <img>; ask the server for a PNG of the original
  try {
    img.src = URL.createObjectURL(await enhance(imageId, ''));
  } catch {
    img.removeAttribute('src');
  }
  zoom = 1;
  panX = 0;
  panY = 0;
  applyView();
  refresh();
}

function onPresetChosen(name: string): void {
  if (!name) return;
  const result = applyPreset(state, name, presetTable);
  if (result.notice) {
    banner(result.notice);
    return;
  }
  banner(null);
  state = result.state;
  buildPanel();
  refresh();
}

function onExport(): void {
  const text = stateToPipeline(state);
  const blob = new Blob([text], { type: 'text/plain' });
  const link = document.createElement('a');
  link.href = URL.createObjectURL(blob);
  link.download = `${state.activePreset ?? 'custom'}.pipeline`;
  link.click();
  URL.revokeObjectURL(link.href);
}

async function onImport(files: FileList | null): Promise<void> {
  if (!files || files.length === 0) return;
  const text = await files[0].text();
  const result = importPipelineText(state, text);
  if (result.notice) {
    banner(result.notice);
    return;
  }
  banner(null);
  state = result.state;
  buildPanel();
  refresh();
}

async function boot(): Promise<void> {
  try {
    const presets = await fetchPresets();
    presetTable = new Map(presets.map((p) => [p.name, p.pipeline]));
    const select = $<HTMLSelectElement>('preset-select');
    for (const { name } of presets) {
      const option = document.createElement('option');
      option.value = name;
      option.textContent = name;
      select.append(option);
    }
  } catch (err) {
    banner(`Could not load presets: ${String(err)}`);
  }

  $<HTMLInputElement>('file-input').addEventListener('change', (e) => {
    void onUpload((e.target as HTMLInputElement).files);
  });
  $<HTMLSelectElement>('preset-select').addEventListener('change', (e) => {
    onPresetChosen((e.target as HTMLSelectElement).value);
  });
  $('export-button').addEventListener('click', onExport);
  $<HTMLInputElement>('import-input').addEventListener('change', (e) => {
    void onImport((e.target as HTMLInputElement).files);
  });

  buildPanel();
  wireViewport();
  refresh(false);
}

void boot();
