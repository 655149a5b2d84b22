import csv
import io
import json

import pytest
from conftest import CONFIGS

import main

DESK = str(CONFIGS / "desk_default.yaml")
MO_SKIP = str(CONFIGS / "mo_skip_example.json")


def run(capsys, *argv):
    code = main.main(list(argv))
    return code, capsys.readouterr().out


def test_validate(capsys):
    code, out = run(capsys, "validate", "--config", DESK)
    assert code == 0
    assert out.strip().endswith("desk_default.yaml: OK")


def test_validate_reports_rules(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"lp_wus": {"M": 3}}))
    code, out = run(capsys, "validate", "--config", str(path))
    assert code == 1
    assert "M_domain:" in out


def test_config_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("LPWUS_CONFIG", DESK)
    assert run(capsys, "validate")[0] == 0


def test_missing_config(monkeypatch):
    monkeypatch.delenv("LPWUS_CONFIG", raising=False)
    with pytest.raises(SystemExit) as e:
        main.main(["validate"])
    assert e.value.code == 1


def test_unreadable_config(capsys, tmp_path):
    assert run(capsys, "validate", "--config", str(tmp_path / "none.yaml"))[0] == 1


def test_procedures(capsys):
    code, out = run(capsys, "procedures", "--config", MO_SKIP, "--ue-id", "5")
    assert code == 0
    assert "dropped" in out
    assert "monitored codepoints" in out


def test_procedures_csv(capsys):
    code, out = run(capsys, "procedures", "--config", DESK, "--ue-id", "100", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["section", "key", "value"]
    assert ["codepoints", "i_PO=0 all", "7"] in rows


def test_encode_hex(capsys):
    code, out = run(capsys, "encode", "--config", DESK, "--codepoint", "0", "--format", "hex")
    assert code == 0
    assert out.splitlines() == ["g=aaaaaaa0", "c=" + ",".join(["0"] * 14)]


def test_encode_bits(capsys):
    code, out = run(capsys, "encode", "--config", DESK, "--bits", "10111")
    assert code == 0
    assert out.splitlines()[0] == "ook_index,ofdm_symbol,g,seq_index"
    assert len(out.splitlines()) == 29


def test_encode_unconfigured_codepoint(capsys):
    assert run(capsys, "encode", "--config", DESK, "--codepoint", "99")[0] == 1


def test_generate_and_decode(capsys, tmp_path):
    iq = str(tmp_path / "wus.iq")
    assert run(capsys, "generate", "--config", DESK, "--out", iq, "--codepoint", "23", "--snr-db", "10")[0] == 0
    code, out = run(capsys, "decode", "--config", DESK, "--iq", iq, "--receiver", "both")
    assert code == 0
    lines = out.splitlines()
    assert lines.count("codepoint=23") == 2
    assert "receiver=CD" in lines
    assert "targets=2:ALL" in lines


def test_generate_and_measure_lpss(capsys, tmp_path):
    iq = str(tmp_path / "lpss.iq")
    assert run(capsys, "generate", "--config", DESK, "--out", iq, "--lpss", "--ook-offset", "2")[0] == 0
    code, out = run(capsys, "decode", "--config", DESK, "--iq", iq)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "sync_offset=2"
    assert [line.split("=")[0] for line in lines[2:]] == ["lp_rssi", "lp_rsrp", "lp_rsrq"]


def test_simulate(capsys, tmp_path):
    out_csv = tmp_path / "sweep.csv"
    code, _ = run(
        capsys,
        "simulate",
        "--config", DESK,
        "--values", "0:10:5",
        "--trials", "8",
        "--receiver", "both",
        "--out", str(out_csv),
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out_csv.read_text())))
    assert [(r["value"], r["receiver"]) for r in rows] == [
        ("0", "ED"), ("0", "CD"), ("5", "ED"), ("5", "CD"), ("10", "ED"), ("10", "CD"),
    ]
    assert all(r["complete"] == "1" for r in rows)


def test_simulate_bad_values(capsys):
    assert run(capsys, "simulate", "--config", DESK, "--values", "0:10:0")[0] == 1


def test_calibrate_writes_config(capsys, tmp_path):
    path = tmp_path / "calibrated.json"
    code, out = run(
        capsys, "calibrate", "--config", DESK, "--target-far", "0.5", "--trials", "20", "--write", str(path)
    )
    assert code == 0
    threshold = float(out.strip().split("=")[1])
    saved = json.loads(path.read_text())
    assert saved["lp_wus"]["detection_threshold"] == pytest.approx(threshold)
    assert saved["lp_wus"]["N_seq"] == 2


def test_vectors(capsys, tmp_path):
    code, out = run(capsys, "vectors", "--config", DESK, "--out-dir", str(tmp_path), "--codepoints", "0,1")
    assert code == 0
    assert out.strip() == f"Wrote 2 vector sets to {tmp_path}"
    assert (tmp_path / "cp01.iq.json").exists()


def test_no_command(capsys):
    assert main.main([]) == 1


@pytest.mark.parametrize("bits", ["1021", "111111"])
def test_encode_rejects_bad_bits(capsys, bits):
    assert run(capsys, "encode", "--config", DESK, "--bits", bits)[0] == 1


def test_decode_with_lpss_timing(capsys, tmp_path):
    wus, lpss = str(tmp_path / "wus.iq"), str(tmp_path / "lpss.iq")
    assert run(capsys, "generate", "--config", DESK, "--out", wus, "--codepoint", "7")[0] == 0
    assert run(capsys, "generate", "--config", DESK, "--out", lpss, "--lpss", "--ook-offset", "3")[0] == 0
    code, out = run(capsys, "decode", "--config", DESK, "--iq", wus, "--receiver", "both", "--lpss-iq", lpss)
    assert code == 0
    lines = out.splitlines()
    assert lines.count("codepoint=7") == 2
    assert lines.count("sync=3") == 2


@pytest.mark.parametrize("command", ["generate", "simulate"])
def test_snr_help_gives_subcarrier_conversion(capsys, command):
    with pytest.raises(SystemExit) as e:
        main.main([command, "--help"])
    assert e.value.code == 0
    out = " ".join(capsys.readouterr().out.split())
    assert "Es/N0" in out
    assert "10*log10(n_on/M)" in out
