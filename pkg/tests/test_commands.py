from __future__ import annotations

import json
import math

import pytest

from app.core.errors import NearSingular
from app.main import main
from app.services import sweep_engine, validation

_HEADER = "delta_p,phi1,phi2,i_c,i_out_r,i_out_l,i_total,absorption,chi_re,chi_im,flag"


def test_point_to_stdout(capsys):
    assert main(["point", "--phi1", "0.5pi"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == _HEADER
    values = dict(zip(_HEADER.split(","), lines[1].split(",")))
    assert float(values["i_total"]) == pytest.approx(2.0 / 9.0, abs=1e-11)
    assert float(values["i_c"]) == pytest.approx(16.0 / 9.0, abs=1e-11)


def test_spectrum_to_file(tmp_path):
    target = tmp_path / "spectrum.csv"
    assert main(["spectrum", "--axis", "delta_p:-5:5:11", "--phi2", "pi", "--output", str(target)]) == 0
    rows = target.read_text(encoding="utf-8").splitlines()[1:]
    assert len(rows) == 11
    totals = [float(r.split(",")[6]) for r in rows]
    assert max(abs(t - 2.0) for t in totals) <= 1e-11


def test_contour_json(tmp_path):
    target = tmp_path / "contour.json"
    argv = ["contour", "--axis", "phi1:0:2pi:5", "--axis", "phi2:0:2pi:4", "--format", "json", "--output", str(target)]
    assert main(argv) == 0
    document = json.loads(target.read_text(encoding="utf-8"))
    assert len(document["records"]) == 20
    assert [a["name"] for a in document["axes"]] == ["phi1", "phi2"]


def test_preset_bytes_independent_of_workers(tmp_path):
    outputs = []
    for workers in ("1", "4"):
        target = tmp_path / f"fig4c_{workers}.csv"
        assert main(["preset", "fig4c", "--workers", workers, "--output", str(target)]) == 0
        outputs.append(target.read_bytes())
    assert outputs[0] == outputs[1]
    assert outputs[0].count(b"\n") == 202


def test_unknown_preset_is_usage_error():
    assert main(["preset", "fig9z"]) == 2


def test_bad_flag_is_usage_error():
    assert main(["point", "--kappa", "nope"]) == 2


def test_out_of_domain_value_is_usage_error():
    assert main(["point", "--gamma12", "-1"]) == 2


def test_missing_mode_is_usage_error():
    assert main([]) == 2


def test_singular_point_is_simulation_error(monkeypatch):
    def singular(p, delta_p):
        raise NearSingular("cavity pole", 0.0, 1e-12)

    monkeypatch.setattr(sweep_engine, "intensity_ratios", singular)
    assert main(["point"]) == 3


def test_validate_exit_codes(monkeypatch, capsys):
    monkeypatch.setattr(
        validation, "IDENTITY_CHECKS", [("perfect_transmitter", validation.check_perfect_transmitter)]
    )
    monkeypatch.setattr(validation, "REGIME_CHECKS", [("insensitivity", validation.check_insensitivity)])

    assert main(["validate"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "perfect_transmitter" in out

    assert main(["validate", "--tolerance-scale", "0"]) == 1
    assert "FAILED" in capsys.readouterr().out


def test_validate_json_report(monkeypatch, tmp_path):
    monkeypatch.setattr(validation, "IDENTITY_CHECKS", [("phi2_periodicity", validation.check_periodicity)])
    monkeypatch.setattr(validation, "REGIME_CHECKS", [])
    target = tmp_path / "report.json"
    assert main(["validate", "--gamma3", "2", "--format", "json", "--output", str(target)]) == 0
    report = json.loads(target.read_text(encoding="utf-8"))
    assert report["checks"][0]["status"] == "pass"
    assert report["params"]["gamma3"] == 2.0
    assert math.isclose(report["tolerances"]["identity"], 1e-12)


@pytest.mark.parametrize(
    "argv",
    [
        ["point"],
        ["preset", "fig4a"],
        ["spectrum", "--axis", "delta_p:-1:1:3", "--format", "json"],
    ],
)
def test_unwritable_output_is_usage_error(tmp_path, argv):
    blocker = tmp_path / "blocker"
    blocker.write_text("not a directory\n", encoding="utf-8")
    assert main(argv + ["--output", str(blocker / "out.csv")]) == 2


def test_unwritable_validate_report_is_usage_error(monkeypatch, tmp_path):
    monkeypatch.setattr(validation, "IDENTITY_CHECKS", [("phi2_periodicity", validation.check_periodicity)])
    monkeypatch.setattr(validation, "REGIME_CHECKS", [])
    blocker = tmp_path / "blocker"
    blocker.write_text("", encoding="utf-8")
    assert main(["validate", "--output", str(blocker / "report.txt")]) == 2


def test_point_at_negative_pi_loop_phase(capsys):
    assert main(["point", "--phi1=-0.5pi"]) == 0
    row = capsys.readouterr().out.splitlines()[1].split(",")
    assert float(row[6]) == pytest.approx(2.0 / 9.0, abs=1e-11)
