"""Embedded HTTP API driving interactive level tuning.

Uploads live in a bounded in-memory LRU store; enhancement is pure, so a
response depends only on the stored image and the submitted pipeline text,
and equals what the CLI writes for the same input. PNG is the only response
encoding.
"""

from __future__ import annotations

import os
import threading
import uuid
from collections import OrderedDict
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import HTMLResponse, JSONResponse, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .pipeline import (
    PipelineError,
    parse_pipeline_config,
    preset_table,
    run_pipeline,
)
from .raster import FormatError, RgbImage, decode_image_bytes, encode_png_bytes

MAX_UPLOAD_BYTES = 64 * 1024 * 1024
STORE_CAPACITY = 32
UI_DIR_ENV = "FUNDOSCOPE_UI_DIR"

FALLBACK_PAGE = """<!doctype html>
<html><head><title>fundoscope</title></head>
<body>
<h1>fundoscope tuning service</h1>
<p>The browser UI bundle is not installed. Point {env} at a built bundle,
or use the API directly:</p>
<ul>
<li>POST /api/images (raw PPM/PGM/PNG bytes)</li>
<li>POST /api/enhance {{"id": ..., "pipeline": ...}}</li>
<li>GET /api/presets</li>
</ul>
</body></html>
""".format(env=UI_DIR_ENV)


@dataclass
class SessionImage:
    id: str
    source: RgbImage
    uploaded_at: datetime = field(
        default_factory=lambda: datetime.now(timezone.utc)
    )


class SessionStore:
    """LRU-bounded id -> image map, safe under concurrent upload/enhance."""

    def __init__(self, capacity: int = STORE_CAPACITY):
        self._capacity = capacity
        self._lock = threading.Lock()
        self._items: OrderedDict[str, SessionImage] = OrderedDict()

    def put(self, image: RgbImage) -> str:
        token = uuid.uuid4().hex
        with self._lock:
            self._items[token] = SessionImage(id=token, source=image)
            while len(self._items) > self._capacity:
                self._items.popitem(last=False)
        return token

    def get(self, token: str) -> SessionImage | None:
        with self._lock:
            item = self._items.get(token)
            if item is not None:
                self._items.move_to_end(token)
            return item

    def __len__(self) -> int:
        with self._lock:
            return len(self._items)


class UploadResponse(BaseModel):
    id: str


class EnhanceRequest(BaseModel):
    id: str
    pipeline: str


class PresetEntry(BaseModel):
    name: str
    pipeline: str


class PresetsResponse(BaseModel):
    presets: list[PresetEntry]


class ErrorBody(BaseModel):
    error: str
    detail: str


def _error(status: int, error: str, detail: str) -> JSONResponse:
    return JSONResponse(
        status_code=status, content=ErrorBody(error=error, detail=detail).model_dump()
    )


def _find_ui_dir(explicit: str | Path | None) -> Path | None:
    candidates = [explicit, os.environ.get(UI_DIR_ENV), Path("frontend") / "dist"]
    for candidate in candidates:
        if candidate and Path(candidate).joinpath("index.html").is_file():
            return Path(candidate)
    return None


def create_app(ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="fundoscope tuning service")
    store = SessionStore()
    app.state.store = store

    @app.post("/api/images", response_model=UploadResponse)
    async def upload(request: Request):
        declared = request.headers.get("content-length")
        if declared and declared.isdigit() and int(declared) > MAX_UPLOAD_BYTES:
            return _error(413, "payload too large", f"limit is {MAX_UPLOAD_BYTES} bytes")
        body = await request.body()
        if len(body) > MAX_UPLOAD_BYTES:
            return _error(413, "payload too large", f"limit is {MAX_UPLOAD_BYTES} bytes")
        try:
            image = decode_image_bytes(body)
        except FormatError as exc:
            return _error(400, "undecodable image", str(exc))
        return UploadResponse(id=store.put(image))

    @app.post(
        "/api/enhance",
        response_class=Response,
        responses={200: {"content": {"image/png": {}}}},
    )
    def enhance(req: EnhanceRequest):
        item = store.get(req.id)
        if item is None:
            return _error(404, "unknown image id", f"no stored image with id {req.id!r}")
        try:
            config = parse_pipeline_config(req.pipeline)
            result = run_pipeline(item.source, config)
        except PipelineError as exc:
            return _error(400, "invalid pipeline", str(exc))
        return Response(content=encode_png_bytes(result), media_type="image/png")

    @app.get("/api/presets", response_model=PresetsResponse)
    def list_presets():
        return PresetsResponse(
            presets=[
                PresetEntry(name=name, pipeline=text)
                for name, text in preset_table().items()
            ]
        )

    bundle = _find_ui_dir(ui_dir)
    if bundle is not None:
        app.mount("/", StaticFiles(directory=bundle, html=True), name="ui")
    else:
        @app.get("/", response_class=HTMLResponse)
        def index():
            return HTMLResponse(FALLBACK_PAGE)

    return app


app = create_app()
