"""Ordered filter pipelines, figure presets, and the text config format.

A config is one line per step: the step kind followed by key=value pairs,
e.g. ``wavelet finest=25 fine=25 medium=25 coarse=1 coarsest=1 remain=2
levels=5``. The same text is exchanged by the CLI, the HTTP service, the
browser UI and the committed preset goldens.

Color policy: filters run channel-wise on r, g, b until a ``gray`` step
collapses the image to its luma; later steps see the single plane, and the
final output replicates it back to three channels.
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import fractional, relief, wavelet
from .fractional import FracDiffParams
from .raster import (
    LUMA_WEIGHTS,
    BrightnessContrast,
    GrayPlane,
    RgbImage,
    adjust_brightness_contrast,
    detect_fov_mask,
    to_gray,
)
from .relief import BumpMapParams, CartoonParams
from .wavelet import WaveletGains


class PipelineError(ValueError):
    """A config or a step application is invalid."""


class PipelineParseError(PipelineError):
    """Config text rejected; carries the 1-based line (and column when known)."""

    def __init__(self, message: str, line: int, column: int | None = None):
        self.line = line
        self.column = column
        where = f"line {line}" if column is None else f"line {line}, col {column}"
        super().__init__(f"{where}: {message}")


class UnknownPresetError(LookupError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(
            f"unknown preset {name!r}; available: {', '.join(preset_names())}"
        )


@dataclass(frozen=True)
class WaveletStepParams:
    finest: float = 1.0
    fine: float = 1.0
    medium: float = 1.0
    coarse: float = 1.0
    coarsest: float = 1.0
    remain: float = 1.0
    levels: int = 5

    def __post_init__(self):
        self.gains  # range checks live in WaveletGains
        if not 1 <= self.levels <= wavelet.MAX_NAMED_LEVELS:
            raise ValueError(
                f"levels must be in [1, {wavelet.MAX_NAMED_LEVELS}], got {self.levels}"
            )

    @property
    def gains(self) -> WaveletGains:
        return WaveletGains(
            finest=self.finest,
            fine=self.fine,
            medium=self.medium,
            coarse=self.coarse,
            coarsest=self.coarsest,
            remain=self.remain,
        )


@dataclass(frozen=True)
class ReplaceBackgroundParams:
    tone_r: float
    tone_g: float
    tone_b: float
    threshold: float = 0.08

    def __post_init__(self):
        for name in ("tone_r", "tone_g", "tone_b"):
            v = getattr(self, name)
            if not (math.isfinite(v) and 0.0 <= v <= 1.0):
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        if not 0.0 < self.threshold < 1.0:
            raise ValueError(f"threshold must be in (0, 1), got {self.threshold}")

    @property
    def tone(self) -> tuple[float, float, float]:
        return (self.tone_r, self.tone_g, self.tone_b)


@dataclass(frozen=True)
class GaussianBlurParams:
    sigma: float

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma > 0.0):
            raise ValueError(f"sigma must be > 0, got {self.sigma}")


@dataclass(frozen=True)
class FilterStep:
    kind: str
    params: object = None

    def __post_init__(self):
        spec = STEP_KINDS.get(self.kind)
        if spec is None:
            raise PipelineError(
                f"unknown step kind {self.kind!r}; known: {', '.join(STEP_KINDS)}"
            )
        if spec.params_cls is None:
            if self.params is not None:
                raise PipelineError(f"{self.kind} takes no parameters")
        elif not isinstance(self.params, spec.params_cls):
            raise PipelineError(
                f"{self.kind} expects {spec.params_cls.__name__} parameters, "
                f"got {type(self.params).__name__}"
            )


@dataclass(frozen=True)
class PipelineConfig:
    steps: tuple[FilterStep, ...] = ()
    name: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if sum(1 for s in self.steps if s.kind == "gray") > 1:
            raise PipelineError("a pipeline may contain at most one gray step")


# ---------------------------------------------------------------------------
# step registry

class _State:
    """Mutable plane list threaded through the steps of one run."""

    def __init__(self, image: RgbImage):
        self.planes: list[GrayPlane] = [image.r, image.g, image.b]
        self.is_gray = False

    def map_planes(self, fn) -> None:
        if len(self.planes) == 1:
            self.planes = [fn(self.planes[0])]
            return
        # channels are independent; numpy kernels release the GIL
        with ThreadPoolExecutor(max_workers=len(self.planes)) as pool:
            self.planes = list(pool.map(fn, self.planes))

    def luma(self) -> GrayPlane:
        if self.is_gray:
            return self.planes[0]
        return to_gray(RgbImage(*self.planes))

    def to_image(self) -> RgbImage:
        if self.is_gray:
            return RgbImage.from_gray(self.planes[0])
        return RgbImage(*self.planes)


def _apply_gray(state: _State, params) -> None:
    state.planes = [state.luma()]
    state.is_gray = True


def _apply_brightness_contrast(state: _State, params: BrightnessContrast) -> None:
    state.map_planes(lambda p: adjust_brightness_contrast(p, params))


def _apply_replace_background(state: _State, params: ReplaceBackgroundParams) -> None:
    bits = detect_fov_mask(state.luma(), params.threshold).bits
    if state.is_gray:
        wr, wg, wb = LUMA_WEIGHTS
        tones = [wr * params.tone_r + wg * params.tone_g + wb * params.tone_b]
    else:
        tones = [params.tone_r, params.tone_g, params.tone_b]
    state.planes = [
        GrayPlane(np.where(bits, plane.data, tone))
        for plane, tone in zip(state.planes, tones)
    ]


def _apply_wavelet(state: _State, params: WaveletStepParams) -> None:
    state.map_planes(lambda p: wavelet.wavelet_enhance(p, params.gains, params.levels))


def _apply_frac_enhance(state: _State, params: FracDiffParams) -> None:
    state.map_planes(lambda p: fractional.frac_enhance(p, params))


def _apply_sobel(state: _State, params) -> None:
    state.map_planes(relief.sobel)


def _apply_bump_map(state: _State, params: BumpMapParams) -> None:
    state.map_planes(lambda p: relief.bump_map(p, p, params))


def _apply_cartoon(state: _State, params: CartoonParams) -> None:
    state.map_planes(lambda p: relief.cartoon(p, params))


def _apply_gaussian_blur(state: _State, params: GaussianBlurParams) -> None:
    state.map_planes(lambda p: relief.gaussian_blur(p, params.sigma))


@dataclass(frozen=True)
class _KindSpec:
    params_cls: type | None
    apply: object


STEP_KINDS: dict[str, _KindSpec] = {
    "gray": _KindSpec(None, _apply_gray),
    "brightness_contrast": _KindSpec(BrightnessContrast, _apply_brightness_contrast),
    "replace_background": _KindSpec(ReplaceBackgroundParams, _apply_replace_background),
    "wavelet": _KindSpec(WaveletStepParams, _apply_wavelet),
    "frac_enhance": _KindSpec(FracDiffParams, _apply_frac_enhance),
    "sobel": _KindSpec(None, _apply_sobel),
    "bump_map": _KindSpec(BumpMapParams, _apply_bump_map),
    "cartoon": _KindSpec(CartoonParams, _apply_cartoon),
    "gaussian_blur": _KindSpec(GaussianBlurParams, _apply_gaussian_blur),
}


def step_keys(kind: str) -> tuple[str, ...]:
    """Parameter keys of a step kind, in canonical (serialization) order."""
    cls = STEP_KINDS[kind].params_cls
    if cls is None:
        return ()
    return tuple(f.name for f in dataclasses.fields(cls))


def _int_keys(cls) -> set[str]:
    return {f.name for f in dataclasses.fields(cls) if f.type in ("int", int)}


# ---------------------------------------------------------------------------
# running

def run_pipeline(image: RgbImage, config: PipelineConfig) -> RgbImage:
    """Apply the steps in order; failures name the offending step."""
    state = _State(image)
    for index, step in enumerate(config.steps, start=1):
        try:
            STEP_KINDS[step.kind].apply(state, step.params)
        except ValueError as exc:
            raise PipelineError(f"step {index} ({step.kind}): {exc}") from exc
    return state.to_image()


# ---------------------------------------------------------------------------
# serialization

def _format_value(value) -> str:
    if isinstance(value, bool):
        raise TypeError("no boolean parameters exist")
    if isinstance(value, int):
        return str(value)
    if float(value) == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(float(value))


def serialize_step(step: FilterStep) -> str:
    parts = [step.kind]
    for key in step_keys(step.kind):
        parts.append(f"{key}={_format_value(getattr(step.params, key))}")
    return " ".join(parts)


def serialize_pipeline_config(config: PipelineConfig) -> str:
    """One line per step; the empty pipeline serializes to the empty string."""
    if not config.steps:
        return ""
    return "\n".join(serialize_step(s) for s in config.steps) + "\n"


def _parse_step_line(line: str, lineno: int) -> FilterStep:
    tokens = line.split()
    kind = tokens[0]
    spec = STEP_KINDS.get(kind)
    if spec is None:
        raise PipelineParseError(
            f"unknown step kind {kind!r}; known: {', '.join(STEP_KINDS)}",
            lineno,
            column=line.index(kind) + 1,
        )
    keys = step_keys(kind)
    int_keys = _int_keys(spec.params_cls) if spec.params_cls else set()
    kwargs = {}
    for token in tokens[1:]:
        column = line.index(token) + 1
        key, sep, text = token.partition("=")
        if not sep or not key or not text:
            raise PipelineParseError(
                f"expected key=value, got {token!r}", lineno, column
            )
        if key not in keys:
            raise PipelineParseError(
                f"unknown parameter {key!r} for {kind} (accepts: {', '.join(keys)})",
                lineno,
                column,
            )
        if key in kwargs:
            raise PipelineParseError(f"duplicate parameter {key!r}", lineno, column)
        try:
            kwargs[key] = int(text) if key in int_keys else float(text)
        except ValueError:
            raise PipelineParseError(
                f"parameter {key!r} needs a number, got {text!r}", lineno, column
            ) from None
    if spec.params_cls is None:
        return FilterStep(kind)
    try:
        params = spec.params_cls(**kwargs)
    except TypeError:
        missing = [
            f.name
            for f in dataclasses.fields(spec.params_cls)
            if f.default is dataclasses.MISSING and f.name not in kwargs
        ]
        raise PipelineParseError(
            f"{kind} is missing required parameter(s): {', '.join(missing)}", lineno
        ) from None
    except ValueError as exc:
        raise PipelineParseError(str(exc), lineno) from None
    return FilterStep(kind, params)


def parse_pipeline_config(text: str, name: str | None = None) -> PipelineConfig:
    """Parse config text; blank lines are ignored, errors carry line positions."""
    steps = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        steps.append(_parse_step_line(raw, lineno))
    try:
        return PipelineConfig(steps=tuple(steps), name=name)
    except PipelineError as exc:
        raise PipelineParseError(str(exc), line=len(text.splitlines())) from None


# ---------------------------------------------------------------------------
# presets

# Brightness/contrast amounts inside figure recipes are qualitative defaults:
# the source workflows only say the images were "adjusted".
QUALITATIVE_BC = BrightnessContrast(brightness=0.1, contrast=0.3)

_FIG6_WAVELET = FilterStep(
    "wavelet",
    WaveletStepParams(finest=25, fine=25, medium=25, coarse=1, coarsest=1, remain=2),
)


def _build_presets() -> dict[str, PipelineConfig]:
    bump = FilterStep("bump_map", BumpMapParams())
    cart = FilterStep("cartoon", CartoonParams())
    bc = FilterStep("brightness_contrast", QUALITATIVE_BC)
    table = {
        "fig1e": [bump],
        "fig1f": [FilterStep("sobel")],
        "fig2a": [FilterStep("frac_enhance", FracDiffParams(nu=0.7, alpha=0.7))],
        "fig2c": [FilterStep("frac_enhance", FracDiffParams(nu=0.9, alpha=0.5))],
        "fig2e": [FilterStep("wavelet", WaveletStepParams(fine=10.1))],
        "fig2f": [
            FilterStep(
                "wavelet", WaveletStepParams(finest=10.1, fine=10.1, medium=10.1)
            )
        ],
        "fig4e": [
            FilterStep("frac_enhance", FracDiffParams(nu=0.7, alpha=0.7)),
            bc,
        ],
        "fig5": [cart, bc],
        "fig6": [_FIG6_WAVELET, bump],
        "fig7": [FilterStep("gray"), cart],
        "fig10": [_FIG6_WAVELET, bump],
    }
    return {
        name: PipelineConfig(steps=tuple(steps), name=name)
        for name, steps in table.items()
    }


_PRESETS = _build_presets()


def preset_names() -> tuple[str, ...]:
    return tuple(_PRESETS)


def preset(name: str) -> PipelineConfig:
    """Return the frozen pipeline for a figure recipe."""
    try:
        return _PRESETS[name]
    except KeyError:
        raise UnknownPresetError(name) from None


def preset_table() -> dict[str, str]:
    """Preset names mapped to their serialized configs."""
    return {name: serialize_pipeline_config(cfg) for name, cfg in _PRESETS.items()}
