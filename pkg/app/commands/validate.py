from __future__ import annotations

import sys
from typing import List, TextIO

from app.constants.constants import EXIT_OK, EXIT_VALIDATION_FAILED
from app.core.settings import Settings
from app.model.run import CheckResult, RunConfig, Tolerances, ValidationReport
from app.services.validation import validate_all


def _format_number(value) -> str:
    return "-" if value is None else f"{value:.3e}"


def format_check(check: CheckResult) -> str:
    return (
        f"{check.status.upper():<4}  {check.category:<8}  {check.name:<28}  "
        f"measured={_format_number(check.measured):<10}  bound={_format_number(check.bound):<10}  "
        f"{check.elapsed:6.2f}s  {check.detail}"
    ).rstrip()


def format_report(report: ValidationReport) -> List[str]:
    lines = [format_check(c) for c in report.checks]
    counts = {status: sum(1 for c in report.checks if c.status == status) for status in ("pass", "fail", "skip")}
    lines.append(
        f"{'PASSED' if report.passed else 'FAILED'}: "
        f"{counts['pass']} passed, {counts['fail']} failed, {counts['skip']} skipped"
    )
    return lines


def _emit(report: ValidationReport, config: RunConfig, sink: TextIO) -> None:
    if config.format == "json":
        sink.write(report.model_dump_json(indent=2))
        sink.write("\n")
    else:
        sink.write("\n".join(format_report(report)))
        sink.write("\n")


def validate(config: RunConfig, settings: Settings) -> int:
    tolerances = Tolerances().scaled(config.tolerance_scale)
    report = validate_all(
        config.params, tolerances, workers=config.workers or settings.sweep_max_workers
    )
    if config.output is None:
        _emit(report, config, sys.stdout)
    else:
        config.output.parent.mkdir(parents=True, exist_ok=True)
        with config.output.open("w", encoding="utf-8", newline="") as sink:
            _emit(report, config, sink)
    return EXIT_OK if report.passed else EXIT_VALIDATION_FAILED
