from __future__ import annotations

import csv
import logging
import math
import sys
from pathlib import Path
from typing import Iterable, List, Optional, TextIO

from app.constants.constants import CSV_HEADER, CSV_SIGNIFICANT_DIGITS
from app.core.errors import ParseError
from app.model.physics import IntensityRecord
from app.model.sweep import RecordRow, SweepDocument, SweepResult

logger = logging.getLogger(__name__)

_FLOAT_FIELDS = CSV_HEADER[:-1]


def format_float(value: float) -> str:
    return f"{value:.{CSV_SIGNIFICANT_DIGITS}g}"


def _rounded(value: float) -> Optional[float]:
    if math.isnan(value):
        return None
    return float(format_float(value))


def _require_rows(result: SweepResult) -> None:
    if not result.records:
        raise ValueError("refusing to serialize a table with no rows")


def emit_csv(result: SweepResult, sink: TextIO) -> None:
    """Header plus one row per record, sweep order, LF endings."""
    _require_rows(result)
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for record in result.records:
        writer.writerow(
            [format_float(getattr(record, name)) for name in _FLOAT_FIELDS]
            + [record.flag or ""]
        )


def to_document(result: SweepResult) -> SweepDocument:
    _require_rows(result)
    rows = [
        RecordRow(
            **{name: _rounded(getattr(record, name)) for name in _FLOAT_FIELDS},
            flag=record.flag,
        )
        for record in result.records
    ]
    return SweepDocument(params=result.params, delta_p=result.delta_p, axes=result.axes, records=rows)


def emit_json(result: SweepResult, sink: TextIO) -> None:
    sink.write(to_document(result).model_dump_json(indent=2))
    sink.write("\n")


def read_csv(source: Iterable[str]) -> List[IntensityRecord]:
    reader = csv.reader(source)
    header = next(reader, None)
    if header is None or tuple(header) != CSV_HEADER:
        raise ParseError(f"unexpected CSV header: {header}", line=1)
    records: List[IntensityRecord] = []
    for line_no, row in enumerate(reader, start=2):
        if len(row) != len(CSV_HEADER):
            raise ParseError(f"expected {len(CSV_HEADER)} columns, got {len(row)}", line=line_no)
        try:
            values = {name: float(cell) for name, cell in zip(_FLOAT_FIELDS, row)}
        except ValueError as e:
            raise ParseError(str(e), line=line_no) from None
        records.append(IntensityRecord(**values, flag=row[-1] or None))
    return records


def write_result(result: SweepResult, output: Optional[Path], fmt: str = "csv") -> None:
    emit = emit_json if fmt == "json" else emit_csv
    if output is None:
        emit(result, sys.stdout)
        return
    output.parent.mkdir(parents=True, exist_ok=True)
    with output.open("w", encoding="utf-8", newline="") as sink:
        emit(result, sink)
    logger.info(f"Wrote {len(result.records)} rows to {output}")
