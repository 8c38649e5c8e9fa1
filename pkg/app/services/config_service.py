from __future__ import annotations

import argparse
import io
import logging
import math
import re
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from dotenv.parser import Binding, parse_stream
from pydantic import ValidationError

from app.constants.constants import (
    AXIS_NAMES,
    CONFIG_KEYS,
    DEFAULT_PARAMS,
    PARAM_KEYS,
    PRESET_IDS,
    PRESET_RESOLUTION,
    SPECTRUM_RANGE,
    TWO_PI,
)
from app.core.errors import ConfigValidationError, ParseError
from app.model.physics import SystemParams
from app.model.run import RunConfig
from app.model.sweep import Axis

logger = logging.getLogger(__name__)

_ARGUMENT_PREFIX = re.compile(r"^argument ([^:]+): (.*)$", re.DOTALL)


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of printing usage and exiting."""

    def error(self, message: str):
        match = _ARGUMENT_PREFIX.match(message)
        if match:
            raise ParseError(match.group(2), flag=match.group(1))
        raise ParseError(message)


def parse_number(text: str) -> float:
    """Float, optionally written as a multiple of pi: `pi`, `0.5pi`, `2*pi`."""
    raw = text.strip().lower()
    if raw.endswith("pi"):
        coefficient = raw[:-2].rstrip("*").strip()
        if coefficient in ("", "+", "-"):
            coefficient += "1"
        scale = float(coefficient)
        return scale * math.pi
    return float(raw)


def _number_arg(text: str) -> float:
    try:
        return parse_number(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: '{text}'") from None


def _axis_arg(text: str) -> Dict[str, object]:
    parts = text.split(":")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(f"expected name:start:stop:count, got '{text}'")
    name, start, stop, count = parts
    if name not in AXIS_NAMES:
        raise argparse.ArgumentTypeError(
            f"unknown axis '{name}' (expected one of: {', '.join(AXIS_NAMES)})"
        )
    try:
        return {
            "name": name,
            "start": parse_number(start),
            "stop": parse_number(stop),
            "count": int(count),
        }
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed axis bounds in '{text}'") from None


def _common_flags() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    physics = common.add_argument_group("physics (units of Gamma)")
    for key in CONFIG_KEYS:
        physics.add_argument(f"--{key}", dest=key, type=_number_arg, default=None, metavar="X")
    common.add_argument(
        "--axis",
        dest="axes",
        action="append",
        type=_axis_arg,
        default=None,
        metavar="NAME:START:STOP:COUNT",
        help="sweep axis over delta_p, phi1 or phi2 (repeatable, at most 2)",
    )
    common.add_argument("--output", type=Path, default=None, help="write here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--workers", type=int, default=None, help="sweep worker threads")
    common.add_argument("--tolerance-scale", dest="tolerance_scale", type=float, default=1.0)
    common.add_argument("--config", type=Path, default=None, help="key = value parameter file")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = _Parser(
        prog="cavity-phase",
        description="Phase-controlled absorption and transmission of a closed-loop "
        "four-level medium in a two-sided cavity.",
    )
    modes = parser.add_subparsers(dest="mode", metavar="MODE", parser_class=_Parser)
    modes.required = True
    modes.add_parser("point", parents=[common], help="evaluate one (delta_p, phi1, phi2) point")
    modes.add_parser("spectrum", parents=[common], help="1D sweep (default: delta_p over [-5, 5])")
    modes.add_parser("contour", parents=[common], help="2D sweep (default: delta_p x phi2)")
    preset = modes.add_parser("preset", parents=[common], help="reproduce one figure grid")
    preset.add_argument("preset_id", metavar="ID", help=", ".join(PRESET_IDS))
    modes.add_parser("validate", parents=[common], help="run the identity and regime checks")
    return parser


def _binding_line(binding: Binding) -> int:
    # a binding's text starts with any blank lines that precede it
    text = binding.original.string
    leading = text[: len(text) - len(text.lstrip())]
    return binding.original.line + leading.count("\n")


def parse_config_text(text: str) -> Dict[str, float]:
    """Flat `key = value` lines with `#` comments; every key must be a config key."""
    values: Dict[str, float] = {}
    for binding in parse_stream(io.StringIO(text)):
        line = _binding_line(binding)
        if binding.error:
            raise ParseError(f"cannot parse '{binding.original.string.strip()}'", line=line)
        if binding.key is None:
            continue
        if binding.key not in CONFIG_KEYS:
            raise ParseError(f"unknown key '{binding.key}'", line=line)
        if binding.value is None or binding.value.strip() == "":
            raise ParseError(f"missing value for '{binding.key}'", line=line)
        try:
            values[binding.key] = parse_number(binding.value)
        except ValueError:
            raise ParseError(f"'{binding.key}' is not a number: '{binding.value}'", line=line) from None
    return values


def _read_config_file(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read config file {path}: {e}", flag="--config") from e


def _fields_of(error: ValidationError) -> List[str]:
    fields = []
    for item in error.errors():
        loc = [str(part) for part in item.get("loc", ()) if not isinstance(part, int)]
        fields.append(".".join(loc) or "config")
    return list(dict.fromkeys(fields))


def _default_axes(mode: str) -> List[Dict[str, object]]:
    lo, hi = SPECTRUM_RANGE
    detuning = {"name": "delta_p", "start": lo, "stop": hi, "count": PRESET_RESOLUTION}
    if mode == "spectrum":
        return [detuning]
    if mode == "contour":
        return [detuning, {"name": "phi2", "start": 0.0, "stop": TWO_PI, "count": PRESET_RESOLUTION}]
    return []


def parse_config(argv: Sequence[str], config_text: Optional[str] = None) -> RunConfig:
    """Command line plus optional config file to a validated RunConfig.

    Flags override file values, which override the threshold-regime defaults.
    `config_text` takes the place of the file named by --config.
    """
    args = build_parser().parse_args(list(argv))

    if config_text is None and args.config is not None:
        config_text = _read_config_file(args.config)
    merged: Dict[str, float] = parse_config_text(config_text) if config_text else {}
    for key in CONFIG_KEYS:
        flag_value = getattr(args, key)
        if flag_value is not None:
            merged[key] = flag_value

    axes = args.axes or []
    if len(axes) > 2:
        raise ParseError(f"at most 2 axes, got {len(axes)}", flag="--axis")
    if not axes and args.mode in ("spectrum", "contour"):
        axes = _default_axes(args.mode)

    overrides = {k: v for k, v in merged.items() if k in PARAM_KEYS}
    if args.mode == "preset" and (overrides or "delta_p" in merged):
        raise ConfigValidationError(
            sorted(k for k in merged),
            "preset runs take their parameters from the preset",
        )

    try:
        params = SystemParams(**{**DEFAULT_PARAMS, **overrides})
        config = RunConfig(
            mode=args.mode,
            params=params,
            delta_p=merged.get("delta_p", 0.0),
            axes=tuple(Axis(**spec) for spec in axes),
            preset_id=getattr(args, "preset_id", None),
            output=args.output,
            format=args.format,
            workers=args.workers,
            tolerance_scale=args.tolerance_scale,
        )
    except ValidationError as e:
        raise ConfigValidationError(_fields_of(e), str(e)) from e

    logger.debug(f"Parsed run config: mode={config.mode}, axes={[a.describe() for a in config.axes]}")
    return config
