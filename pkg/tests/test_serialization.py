from __future__ import annotations

import io
import json
import math

import pytest

from app.model.physics import IntensityRecord, SystemParams
from app.model.sweep import Axis, SweepResult
from app.services.serialization import (
    emit_csv,
    emit_json,
    format_float,
    read_csv,
    to_document,
    write_result,
)
from app.services.sweep_engine import point_result, sweep_1d

_HEADER = "delta_p,phi1,phi2,i_c,i_out_r,i_out_l,i_total,absorption,chi_re,chi_im,flag"


def _csv(result: SweepResult) -> str:
    sink = io.StringIO()
    emit_csv(result, sink)
    return sink.getvalue()


def _scan() -> SweepResult:
    return sweep_1d(
        SystemParams(phi1=math.pi / 2.0),
        Axis(name="phi2", start=0.0, stop=2.0 * math.pi, count=9),
        2.0,
    )


def test_twelve_significant_digits():
    assert format_float(1.0 / 3.0) == "0.333333333333"
    assert format_float(2.0) == "2"
    assert format_float(1.5e-17) == "1.5e-17"
    assert format_float(float("nan")) == "nan"


def test_anti_phase_point_row():
    text = _csv(point_result(SystemParams(phi2=math.pi), 0.0))
    header, row, trailing = text.split("\n")
    assert header == _HEADER
    assert trailing == ""
    values = dict(zip(_HEADER.split(","), row.split(",")))
    assert abs(float(values["i_c"])) <= 1e-12
    assert float(values["i_out_r"]) == pytest.approx(1.0, abs=1e-12)
    assert float(values["i_out_l"]) == pytest.approx(1.0, abs=1e-12)
    assert float(values["i_total"]) == pytest.approx(2.0, abs=1e-12)
    assert values["flag"] == ""


def test_lf_line_endings_and_row_count():
    text = _csv(_scan())
    assert "\r" not in text
    assert text.count("\n") == 10


def test_round_trip_to_twelve_digits():
    result = _scan()
    parsed = read_csv(io.StringIO(_csv(result)))
    assert len(parsed) == len(result.records)
    for source, back in zip(result.records, parsed):
        for field in ("delta_p", "phi1", "phi2", "i_c", "i_out_r", "i_out_l", "i_total", "chi_re", "chi_im"):
            assert getattr(back, field) == pytest.approx(getattr(source, field), rel=1e-11, abs=1e-300)


def test_flagged_rows_serialize_as_nan():
    record = IntensityRecord.near_singular(0.5, 0.0, 1.0)
    result = SweepResult(params=SystemParams(), records=[record])
    text = _csv(result)
    assert text.splitlines()[1] == "0.5,0,1,nan,nan,nan,nan,nan,nan,nan,near_singular"
    back = read_csv(io.StringIO(text))[0]
    assert back.is_flagged
    assert math.isnan(back.i_total)


def test_output_is_deterministic():
    assert _csv(_scan()) == _csv(_scan())


def test_zero_row_table_rejected():
    empty = SweepResult.model_construct(params=SystemParams(), delta_p=0.0, axes=(), records=[])
    with pytest.raises(ValueError):
        emit_csv(empty, io.StringIO())


def test_sink_errors_surface():
    sink = io.StringIO()
    sink.close()
    with pytest.raises(ValueError):
        emit_csv(_scan(), sink)


def test_json_matches_csv_values():
    result = _scan()
    sink = io.StringIO()
    emit_json(result, sink)
    document = json.loads(sink.getvalue())
    csv_rows = read_csv(io.StringIO(_csv(result)))
    assert len(document["records"]) == len(csv_rows)
    for row, parsed in zip(document["records"], csv_rows):
        for field in ("i_c", "i_out_r", "i_out_l", "i_total", "chi_re", "chi_im"):
            assert row[field] == getattr(parsed, field)
    assert document["axes"][0]["name"] == "phi2"
    assert document["params"]["phi1"] == pytest.approx(math.pi / 2.0)


def test_json_encodes_nan_as_null():
    result = SweepResult(params=SystemParams(), records=[IntensityRecord.near_singular(0.0, 0.0, 0.0)])
    row = to_document(result).records[0]
    assert row.i_total is None
    assert row.flag == "near_singular"


def test_read_csv_rejects_foreign_header():
    with pytest.raises(Exception) as e:
        read_csv(io.StringIO("a,b,c\n1,2,3\n"))
    assert "header" in str(e.value)


def test_write_result_to_file(tmp_path):
    target = tmp_path / "out" / "scan.csv"
    write_result(_scan(), target, "csv")
    raw = target.read_bytes()
    assert raw.startswith(_HEADER.encode() + b"\n")
    assert b"\r\n" not in raw
