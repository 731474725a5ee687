"""Command-line front end: flags, config-file precedence, manifest, exit codes.

Configuration precedence is defaults < config file < flags. A run manifest
is the same key=value format the config file reads, so a finished render can
be replayed exactly with ``--config <output>.manifest``.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from .cld import cld_at, default_scan_limit
from .grid import RNG_ALGORITHM, FillMode
from .image import (
    CorruptImageError,
    RgbImage,
    UnsupportedFormatError,
    global_mean,
    load_image,
    save_image,
    to_gray,
)
from .render import (
    DefaultColor,
    RenderConfig,
    RenderMode,
    RenderResult,
    render_cldpb_trace,
    render_cpb_trace,
)

__all__ = ["CliInvocation", "parse_args", "run", "main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT_IO = 2
EXIT_DECODE = 3
EXIT_OUTPUT_IO = 4

log = logging.getLogger("cldbrush")


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; our contract reserves 2 for input I/O
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class CliInvocation:
    input_path: Path
    output_path: Path
    config: RenderConfig
    manifest: bool
    gray_dump: Path | None
    cld_dump: tuple[int, int] | None
    report: Path | None
    verbosity: int


def _parse_delta(text: str) -> int | None:
    if text == "auto":
        return None
    value = int(text)
    if value < 0:
        raise ValueError(f"delta must be >= 0 or 'auto', got {value}")
    return value


def _parse_rng(text: str) -> str:
    if text != RNG_ALGORITHM:
        raise ValueError(f"this build generates {RNG_ALGORITHM!r} streams, cannot replay {text!r}")
    return text


# Keys accepted in config files and written to manifests, with their parsers.
_CONFIG_PARSERS = {
    "mode": RenderMode,
    "tau": float,
    "size": float,
    "radius": float,
    "steps": int,
    "spacing_min": int,
    "spacing_max": int,
    "delta": _parse_delta,
    "fill": FillMode,
    "default_color": DefaultColor.parse,
    "d0": float,
    "seed": int,
    "threads": int,
    "rng": _parse_rng,
}


def _read_config_file(path: Path) -> dict:
    values = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, text = line.split("=", 1)
        key = key.strip()
        parser = _CONFIG_PARSERS.get(key)
        if parser is None:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = parser(text.strip())
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: bad value for {key!r}: {exc}") from exc
    values.pop("rng", None)  # validated above; not a RenderConfig field
    return values


def _xy(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected X,Y, got {text!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected integer X,Y, got {text!r}") from exc


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="cldbrush",
        description="Repaint a photograph with grid-seeded brushstrokes shaped by local texture coherence.",
        epilog=(
            "Exit codes: 0 success, 1 usage, 2 input I/O, 3 decode, 4 output I/O. "
            "Config precedence: defaults < --config file < flags."
        ),
    )
    parser.add_argument("input", type=Path, help="source image (.png or .ppm)")
    parser.add_argument("output", type=Path, help="rendered image (.png or .ppm)")
    parser.add_argument("--config", type=Path, metavar="FILE", help="key=value file applied before flags")
    parser.add_argument("--mode", choices=["cpb", "cldpb"], help="brush algorithm (default: cldpb)")
    parser.add_argument("--tau", type=float, help="coherence tolerance, cldpb only (default: 0.2)")
    parser.add_argument("--size", type=float, metavar="PX", help="mean stroke size, cldpb only (default: 2)")
    parser.add_argument("--radius", type=float, metavar="PX", help="disk radius, cpb only (default: 4)")
    parser.add_argument("--steps", type=int, help="grid passes per render (default: 3)")
    parser.add_argument("--spacing-min", type=int, dest="spacing_min", help="lattice spacing lower bound (default: from stroke size)")
    parser.add_argument("--spacing-max", type=int, dest="spacing_max", help="lattice spacing upper bound (default: from stroke size)")
    parser.add_argument("--delta", type=str, metavar="PX|auto", help="jitter bound (default: auto = ceil(spacing/2))")
    parser.add_argument("--fill", choices=["displaced", "nondisplaced"], help="color sampling mode (default: nondisplaced)")
    parser.add_argument("--default-color", dest="default_color", metavar="white|source|blend:W", help="uncovered-pixel policy (default: white)")
    parser.add_argument("--d0", type=float, metavar="PX", help="fan-fill near-center cutoff (default: 10)")
    parser.add_argument("--seed", type=int, help="64-bit RNG seed (default: 0)")
    parser.add_argument("--threads", type=int, help="stroke-computation worker cap; never changes output bytes (default: 1)")
    parser.add_argument("--manifest", action="store_true", help="write <output>.manifest with every effective parameter")
    parser.add_argument("--gray-dump", type=Path, dest="gray_dump", metavar="FILE", help="write the gray field and its global mean")
    parser.add_argument("--cld-dump", type=_xy, dest="cld_dump", metavar="X,Y", help="print the 32 coherence lengths at a pixel")
    parser.add_argument("--report", type=Path, metavar="DIR", help="write figures and a stroke table into DIR")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more logging (-v info, -vv debug)")
    return parser


def parse_args(argv: list[str]) -> CliInvocation:
    parser = _build_parser()
    ns = parser.parse_args(argv)

    overrides: dict = {}
    if ns.config is not None:
        try:
            overrides.update(_read_config_file(ns.config))
        except OSError as exc:
            parser.error(f"cannot read config file: {exc}")
        except ValueError as exc:
            parser.error(str(exc))

    flag_values = {
        "mode": RenderMode(ns.mode) if ns.mode is not None else None,
        "tau": ns.tau,
        "size": ns.size,
        "radius": ns.radius,
        "steps": ns.steps,
        "spacing_min": ns.spacing_min,
        "spacing_max": ns.spacing_max,
        "fill": FillMode(ns.fill) if ns.fill is not None else None,
        "d0": ns.d0,
        "seed": ns.seed,
        "threads": ns.threads,
    }
    for key, value in flag_values.items():
        if value is not None:
            overrides[key] = value
    if ns.default_color is not None:
        try:
            overrides["default_color"] = DefaultColor.parse(ns.default_color)
        except ValueError as exc:
            parser.error(str(exc))
    if ns.delta is not None:
        # "--delta auto" is an explicit override back to the per-step default
        try:
            overrides["delta"] = _parse_delta(ns.delta)
        except ValueError as exc:
            parser.error(str(exc))

    mode = overrides.get("mode", RenderMode.CLDPB)
    if mode is RenderMode.CLDPB and "radius" in overrides:
        parser.error("--radius applies to --mode cpb only")
    if mode is RenderMode.CPB:
        for key, flag in (("tau", "--tau"), ("size", "--size")):
            if key in overrides:
                parser.error(f"{flag} applies to --mode cldpb only")

    kwargs = dict(overrides)
    kwargs["mode"] = mode
    if "fill" in kwargs:
        kwargs["fill_mode"] = kwargs.pop("fill")
    try:
        config = RenderConfig(**kwargs)
    except ValueError as exc:
        parser.error(str(exc))

    if ns.input.resolve() == ns.output.resolve():
        parser.error("input and output paths must differ")

    return CliInvocation(
        input_path=ns.input,
        output_path=ns.output,
        config=config,
        manifest=ns.manifest,
        gray_dump=ns.gray_dump,
        cld_dump=ns.cld_dump,
        report=ns.report,
        verbosity=ns.verbose,
    )


def _manifest_text(cfg: RenderConfig) -> str:
    spec = cfg.grid_spec()
    entries = {
        "mode": cfg.mode.value,
        "steps": cfg.steps,
        "spacing_min": spec.spacing_min,
        "spacing_max": spec.spacing_max,
        "delta": "auto" if cfg.delta is None else cfg.delta,
        "fill": cfg.fill_mode.value,
        "default_color": str(cfg.default_color),
        "d0": repr(cfg.d0),
        "seed": cfg.seed,
        "threads": cfg.threads,
        "rng": RNG_ALGORITHM,
    }
    if cfg.mode is RenderMode.CLDPB:
        entries["tau"] = repr(cfg.tau)
        entries["size"] = repr(cfg.size)
    else:
        entries["radius"] = repr(cfg.radius)
    return "".join(f"{key}={entries[key]}\n" for key in sorted(entries))


def _write_gray_dump(path: Path, img: RgbImage) -> None:
    gray = to_gray(img)
    m0 = global_mean(gray)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"m0={m0!r}\n")
        for row in gray.values:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def run(inv: CliInvocation) -> int:
    """Load, render, save; returns the process exit code."""
    cfg = inv.config
    try:
        img = load_image(inv.input_path)
    except (UnsupportedFormatError, CorruptImageError) as exc:
        log.error("cannot decode %s: %s", inv.input_path, exc)
        return EXIT_DECODE
    except OSError as exc:
        log.error("cannot read %s: %s", inv.input_path, exc)
        return EXIT_INPUT_IO
    log.info("loaded %s (%dx%d)", inv.input_path, img.width, img.height)

    diagram = polygon = None
    if inv.cld_dump is not None:
        x, y = inv.cld_dump
        if not (0 <= x < img.width and 0 <= y < img.height):
            log.error("--cld-dump %d,%d outside %dx%d image", x, y, img.width, img.height)
            return EXIT_USAGE
        gray = to_gray(img)
        m0 = global_mean(gray)
        diagram = cld_at(gray, m0, x, y, cfg.tau, default_scan_limit(img.width, img.height))
        if diagram.total_length() > 0:
            from .brush import polygon_from_cld, scale_for_size

            polygon = polygon_from_cld(diagram, scale_for_size(diagram, cfg.size))
        print("lengths=" + ",".join(str(v) for v in diagram.lengths))
        print("defined=" + ",".join("1" if v else "0" for v in diagram.defined))

    result: RenderResult
    if cfg.mode is RenderMode.CPB:
        result = render_cpb_trace(img, cfg)
    else:
        result = render_cldpb_trace(img, cfg)
    log.info("applied %d strokes, %.1f%% coverage", len(result.strokes), 100.0 * result.coverage.mean())

    try:
        save_image(result.image, inv.output_path)
        if inv.gray_dump is not None:
            _write_gray_dump(inv.gray_dump, img)
        if inv.manifest:
            manifest_path = Path(str(inv.output_path) + ".manifest")
            manifest_path.write_text(_manifest_text(cfg), encoding="utf-8")
        if inv.report is not None:
            from . import report

            written = report.write_report(inv.report, img, result, diagram, polygon)
            log.info("report: %s", ", ".join(str(p) for p in written))
    except UnsupportedFormatError as exc:
        log.error("cannot encode %s: %s", inv.output_path, exc)
        return EXIT_OUTPUT_IO
    except OSError as exc:
        log.error("cannot write output: %s", exc)
        return EXIT_OUTPUT_IO
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    try:
        inv = parse_args(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    level = logging.WARNING if inv.verbosity == 0 else logging.INFO if inv.verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    return run(inv)


if __name__ == "__main__":
    sys.exit(main())
