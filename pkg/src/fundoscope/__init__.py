"""Fundus image enhancement toolkit.

Multiscale a trous wavelet gain filtering, fractional-differential edge
enhancement, GIMP-style relief filters, figure presets, a batch CLI and an
interactive tuning service.
"""

from .fractional import FracDiffParams, frac_derivative, frac_enhance, gl_coefficients
from .pipeline import (
    FilterStep,
    PipelineConfig,
    PipelineError,
    PipelineParseError,
    UnknownPresetError,
    parse_pipeline_config,
    preset,
    preset_names,
    preset_table,
    run_pipeline,
    serialize_pipeline_config,
)
from .raster import (
    BrightnessContrast,
    FormatError,
    FovMask,
    GrayPlane,
    RgbImage,
    adjust_brightness_contrast,
    decode_image_bytes,
    detect_fov_mask,
    encode_png_bytes,
    encode_ppm_bytes,
    load_image,
    replace_background,
    save_image,
    to_gray,
)
from .relief import BumpMapParams, CartoonParams, bump_map, cartoon, gaussian_blur, sobel
from .wavelet import WaveletGains, WaveletStack, decompose, recompose, wavelet_enhance

__version__ = "0.1.0"

__all__ = [
    "BrightnessContrast",
    "BumpMapParams",
    "CartoonParams",
    "FilterStep",
    "FormatError",
    "FovMask",
    "FracDiffParams",
    "GrayPlane",
    "PipelineConfig",
    "PipelineError",
    "PipelineParseError",
    "RgbImage",
    "UnknownPresetError",
    "WaveletGains",
    "WaveletStack",
    "adjust_brightness_contrast",
    "bump_map",
    "cartoon",
    "decode_image_bytes",
    "decompose",
    "detect_fov_mask",
    "encode_png_bytes",
    "encode_ppm_bytes",
    "frac_derivative",
    "frac_enhance",
    "gaussian_blur",
    "gl_coefficients",
    "load_image",
    "parse_pipeline_config",
    "preset",
    "preset_names",
    "preset_table",
    "recompose",
    "replace_background",
    "run_pipeline",
    "save_image",
    "serialize_pipeline_config",
    "sobel",
    "to_gray",
    "wavelet_enhance",
]
