"""Batch command-line front end.

Single-image and directory runs share one engine with the HTTP service, so
re-running an invocation (at any --jobs count) reproduces outputs byte for
byte. Per-file failures are reported and skipped; the exit code says whether
everything succeeded (0), some file failed (1), or the usage was wrong (2).
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import pipeline as pl
from .raster import FormatError, load_image, save_image

PRESET_DIR_ENV = "FUNDOSCOPE_PRESET_DIR"
USER_PRESET_SUFFIX = ".pipeline"

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def available_presets() -> dict[str, pl.PipelineConfig]:
    """Built-in presets plus *.pipeline files from $FUNDOSCOPE_PRESET_DIR.

    Built-in names are reserved; a user file with the same stem is ignored.
    """
    table: dict[str, pl.PipelineConfig] = {}
    preset_dir = os.environ.get(PRESET_DIR_ENV)
    if preset_dir:
        for path in sorted(Path(preset_dir).glob(f"*{USER_PRESET_SUFFIX}")):
            try:
                table[path.stem] = pl.parse_pipeline_config(
                    path.read_text(), name=path.stem
                )
            except (OSError, pl.PipelineError) as exc:
                print(f"warning: skipping preset file {path}: {exc}", file=sys.stderr)
    for name in pl.preset_names():
        table[name] = pl.preset(name)
    return table


def apply_override(config: pl.PipelineConfig, spec: str) -> pl.PipelineConfig:
    """Apply one --set STEP.KEY=VALUE override to every step of that kind."""
    head, sep, text = spec.partition("=")
    kind, dot, key = head.partition(".")
    if not sep or not dot or not kind or not key or not text:
        raise UsageError(f"--set expects STEP.KEY=VALUE, got {spec!r}")
    if kind not in pl.STEP_KINDS:
        raise UsageError(f"--set: unknown step kind {kind!r}")
    if key not in pl.step_keys(kind):
        accepted = ", ".join(pl.step_keys(kind)) or "(none)"
        raise UsageError(f"--set: {kind} has no parameter {key!r} (accepts: {accepted})")
    int_keys = pl._int_keys(pl.STEP_KINDS[kind].params_cls)
    try:
        value = int(text) if key in int_keys else float(text)
    except ValueError:
        raise UsageError(f"--set: {key} needs a number, got {text!r}") from None

    steps = []
    hits = 0
    for step in config.steps:
        if step.kind == kind:
            try:
                params = dataclasses.replace(step.params, **{key: value})
            except ValueError as exc:
                raise UsageError(f"--set {spec}: {exc}") from None
            steps.append(pl.FilterStep(kind, params))
            hits += 1
        else:
            steps.append(step)
    if hits == 0:
        raise UsageError(f"--set {spec}: the pipeline has no {kind} step")
    return pl.PipelineConfig(steps=tuple(steps), name=config.name)


def _effective_config(args) -> tuple[pl.PipelineConfig, str]:
    """Resolve --preset/--config plus --set overrides; returns (config, label)."""
    if bool(args.preset) == bool(args.config):
        raise UsageError("exactly one of --preset or --config must be given")
    if args.preset:
        table = available_presets()
        if args.preset not in table:
            raise UsageError(
                f"unknown preset {args.preset!r}; available: {', '.join(table)}"
            )
        config = table[args.preset]
        label = args.preset
    else:
        path = Path(args.config)
        try:
            text = path.read_text()
        except OSError as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from None
        try:
            config = pl.parse_pipeline_config(text, name=path.stem)
        except pl.PipelineParseError as exc:
            raise UsageError(f"{path}: {exc}") from None
        label = path.stem
    for spec in args.set or []:
        config = apply_override(config, spec)
    return config, label


def _resolve_outputs(inputs: list[Path], out: Path, label: str) -> list[Path]:
    file_mode = out.suffix.lower() in (".png", ".ppm") and not out.is_dir()
    if file_mode:
        if len(inputs) > 1:
            raise UsageError(f"-o names a file ({out}) but there are {len(inputs)} inputs")
        out.parent.mkdir(parents=True, exist_ok=True)
        return [out]
    out.mkdir(parents=True, exist_ok=True)
    return [out / f"{src.stem}.{label}.png" for src in inputs]


def _process_one(src: Path, dst: Path, config: pl.PipelineConfig) -> None:
    save_image(pl.run_pipeline(load_image(src), config), dst)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fundoscope",
        description="Enhance fundus photographs with wavelet, fractional and relief filters.",
    )
    parser.add_argument("inputs", nargs="*", type=Path, help="input PPM/PGM/PNG files")
    parser.add_argument("-o", "--out", type=Path, help="output directory (or file for a single input)")
    parser.add_argument("--preset", help="named pipeline preset (see --list-presets)")
    parser.add_argument("--config", help="pipeline config file")
    parser.add_argument(
        "--set",
        action="append",
        metavar="STEP.KEY=VALUE",
        help="override one parameter of the chosen pipeline (repeatable)",
    )
    parser.add_argument(
        "--dry-run",
        action="store_true",
        help="print the effective pipeline and write nothing",
    )
    parser.add_argument(
        "--jobs",
        type=int,
        default=os.cpu_count() or 1,
        metavar="N",
        help="process up to N files concurrently (default: CPU count)",
    )
    parser.add_argument(
        "--serve",
        nargs="?",
        const=8000,
        type=int,
        metavar="PORT",
        help="launch the tuning service on PORT (default 8000) and block",
    )
    parser.add_argument(
        "--list-presets", action="store_true", help="list available presets and exit"
    )
    return parser


def run_cli(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        if args.list_presets:
            for name, config in available_presets().items():
                print(name)
                for line in pl.serialize_pipeline_config(config).splitlines():
                    print(f"  {line}")
            return EXIT_OK

        if args.serve is not None:
            import uvicorn

            from .service import app

            uvicorn.run(app, host="127.0.0.1", port=args.serve, log_level="info")
            return EXIT_OK

        config, label = _effective_config(args)

        if args.dry_run:
            sys.stdout.write(pl.serialize_pipeline_config(config))
            return EXIT_OK

        if not args.inputs:
            raise UsageError("no input files given")
        if args.out is None:
            raise UsageError("-o/--out is required")
        if args.jobs < 1:
            raise UsageError(f"--jobs must be >= 1, got {args.jobs}")

        outputs = _resolve_outputs(args.inputs, args.out, label)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    failures = 0
    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        futures = {
            pool.submit(_process_one, src, dst, config): (src, dst)
            for src, dst in zip(args.inputs, outputs)
        }
        for future, (src, _) in futures.items():
            try:
                future.result()
            except (OSError, FormatError, pl.PipelineError, ValueError) as exc:
                failures += 1
                print(f"error: {src}: {exc}", file=sys.stderr)
    return EXIT_FAILURES if failures else EXIT_OK


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
