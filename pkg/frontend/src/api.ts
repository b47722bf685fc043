/** Thin client for the tuning service HTTP API. */

export interface PresetEntry {
  name: string;
  pipeline: string;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
    this.name = 'ApiError';
  }
}

async function errorFrom(response: Response): Promise<ApiError> {
  let detail = response.statusText;
  try {
    const body = (await response.json()) as { error?: string; detail?: string };
    detail = body.detail ?? body.error ?? detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(response.status, detail);
}

export async function uploadImage(data: Blob): Promise<string> {
  const response = await fetch('/api/images', { method: 'POST', body: data });
  if (!response.ok) throw await errorFrom(response);
  const body = (await response.json()) as { id: string };
  return body.id;
}

export async function enhance(id: string, pipeline: string): Promise<Blob> {
  const response = await fetch('/api/enhance', {
    method: 'POST',
    headers: { 'content-type': 'application/json' },
    body: JSON.stringify({ id, pipeline }),
  });
  if (!response.ok) throw await errorFrom(response);
  return response.blob();
}

export async function fetchPresets(): Promise<PresetEntry[]> {
  const response = await fetch('/api/presets');
  if (!response.ok) throw await errorFrom(response);
  const body = (await response.json()) as { presets: PresetEntry[] };
  return body.presets;
}
