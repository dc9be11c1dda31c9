import csv
import io
import json
import math

import numpy as np
import pytest

from ncqm.cli import main
from ncqm.errors import DatasetError, DomainError
from ncqm.report import (
    figure_data,
    ingest_experimental,
    rows_to_csv,
    rows_to_json,
    table1,
    table2,
    table_columns,
    table_values,
)

HEADER = "Z,quantity,value_eV,source\n"


def write(tmp_path, body, name="data.csv"):
    path = tmp_path / name
    path.write_text(body)
    return path


def test_bundled_dataset_counts():
    records = ingest_experimental()
    assert sum(r.quantity == "ground_energy" for r in records) == 8
    assert sum(r.quantity == "gap_1s_2s" for r in records) == 7
    assert {r.source for r in records} == {"RR4", "RR6"}


def test_empty_file(tmp_path):
    assert ingest_experimental(write(tmp_path, "")) == []
    assert ingest_experimental(write(tmp_path, HEADER, "h.csv")) == []


def test_duplicate_row_names_line(tmp_path):
    body = HEADER + "6,ground_energy,-489.9933,RR6\n12,ground_energy,-1962.665,RR6\n6,ground_energy,-489.9,RR6\n"
    with pytest.raises(DatasetError) as info:
        ingest_experimental(write(tmp_path, body))
    assert info.value.line == 4
    assert "line 4" in str(info.value)


@pytest.mark.parametrize(
    "row",
    ["6,ground_energy,489.9,RR6", "6,gap_1s_2s,-1.0,RR6", "6,binding,1.0,x", "six,gap_1s_2s,1.0,x", "6,gap_1s_2s,1.0"],
)
def test_invalid_rows(tmp_path, row):
    with pytest.raises(DatasetError) as info:
        ingest_experimental(write(tmp_path, HEADER + row + "\n"))
    assert info.value.line == 2


def test_bad_header(tmp_path):
    with pytest.raises(DatasetError):
        ingest_experimental(write(tmp_path, "Z,value\n6,1\n"))


def test_table1_values():
    rows = {r.Z: r for r in table1()}
    assert list(rows) == [6, 12, 18, 24, 30, 36, 42, 92]
    assert rows[30].E == pytest.approx(-12290.62, abs=0.005)
    assert rows[30].E_minus_exp == pytest.approx(98.31, abs=0.005)
    # 0.18835 with current constants; the printed 0.1884 reflects an older Rydberg value
    assert rows[6].E_S_minus_exp == pytest.approx(0.1884, abs=1e-4)


def test_table2_values():
    rows = {r.Z: r for r in table2()}
    assert list(rows) == [6, 12, 18, 24, 30, 36, 42]
    assert rows[18].gap == pytest.approx(3308.819, abs=5e-4)
    assert rows[6].exp_minus_gap_S == pytest.approx(0.1237, abs=5e-5)
    assert rows[6].exp_minus_gap == pytest.approx(0.1129, abs=5e-5)


def test_tables_with_custom_dataset(tmp_path):
    data = ingest_experimental(write(tmp_path, HEADER + "1,ground_energy,-13.6,x\n"))
    rows = table1(dataset=data)
    assert len(rows) == 1 and rows[0].Z == 1
    assert table2(dataset=data) == []


def test_csv_roundtrip_bit_identical():
    rows = table1()
    text = rows_to_csv(table_columns(rows), table_values(rows))
    parsed = list(csv.reader(io.StringIO(text)))
    assert parsed[0] == table_columns(rows)
    for original, back in zip(table_values(rows), parsed[1:]):
        assert int(back[0]) == original[0]
        assert [float(x) for x in back[1:]] == original[1:]


def test_reports_deterministic():
    a = rows_to_csv(table_columns(table2()), table_values(table2()))
    b = rows_to_csv(table_columns(table2()), table_values(table2()))
    assert a == b


def test_json_nan_becomes_null():
    payload = json.loads(rows_to_json(["x"], [[math.nan]]))
    assert payload["rows"] == [[None]]


def test_fig1_columns():
    fd = figure_data("fig1", 32)
    assert fd.columns[:2] == ["eta", "eta_over_1_plus_eta_4"]
    peak = np.argmax(fd.data[:, 1])
    assert fd.data[peak, 0] == pytest.approx(1 / 3, abs=2 / 31)
    assert fd.data[0, 3] == pytest.approx(27 / 256, rel=1e-12)


def test_fig2_small_coupling_limit():
    fd = figure_data("fig2", 400)
    first = fd.data[0]
    np.testing.assert_allclose(first[1:], -0.5 * first[0] ** 2, rtol=1e-4)
    assert fd.data[-1, 0] == 27 / 32


def test_fig3_hydrogen_point():
    fd = figure_data("fig3", 64)
    assert fd.data[0, 1] == pytest.approx(6.8e-8, rel=2e-2)
    assert fd.data[-1, 1] == pytest.approx(0.25, rel=1e-14)
    assert np.all(np.diff(fd.data[:, 1]) > 0)


def test_fig4_endpoints():
    fd = figure_data("fig4", 16)
    assert fd.data[0, 1] == pytest.approx(32 / 729, rel=1e-12)
    assert fd.data[-1, 1] == pytest.approx(0.0211547, rel=1e-5)


def test_figure_validation():
    with pytest.raises(DomainError):
        figure_data("fig9", 100)
    with pytest.raises(DomainError):
        figure_data("fig1", 15)


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_table1(capsys):
    code, out, _ = run(capsys, "table1", "--omega", "32/729")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 8
    z30 = next(r for r in rows if r["Z"] == "30")
    assert float(z30["E"]) == pytest.approx(-12290.62, abs=0.005)


def test_cli_table2_json(capsys, tmp_path):
    out_file = tmp_path / "t2.json"
    code, out, _ = run(capsys, "table2", "--format", "json", "--out", str(out_file))
    assert code == 0 and out == ""
    payload = json.loads(out_file.read_text())
    assert len(payload["rows"]) == 7
    assert payload["meta"]["omega"] == "32/729"


def test_cli_solve_beyond_critical(capsys):
    code, out, _ = run(capsys, "solve", "--potential", "coulomb", "--Z", "120")
    assert code == 2
    row = next(csv.DictReader(io.StringIO(out)))
    assert row["status"] == "no_bound_state"


def test_cli_solve_hydrogen(capsys):
    code, out, _ = run(capsys, "solve", "--Z", "1", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    row = dict(zip(payload["columns"], payload["rows"][0]))
    assert row["status"] == "ok"
    assert row["energy_eV"] == pytest.approx(-13.6057, abs=1e-4)


def test_cli_solve_screened_with_masses(capsys):
    code, out, _ = run(
        capsys, "solve", "--potential", "hulthen", "--coupling", "0.6", "--screening", "3",
        "--m1", "proton", "--m2", "proton",
    )
    assert code == 0
    row = next(csv.DictReader(io.StringIO(out)))
    assert float(row["mu_over_M"]) == 0.25
    assert float(row["mean_r"]) >= float(row["delta12"])


@pytest.mark.parametrize(
    "args",
    [
        ["solve", "--potential", "yukawa", "--coupling", "0.5"],
        ["solve", "--coupling", "0.1", "--Z", "3"],
        ["table1", "--omega", "abc"],
        ["fig", "fig7"],
        ["fig", "fig1", "--resolution", "4"],
        ["solve", "--m1", "pion", "--Z", "1"],
        ["nosuchcommand"],
    ],
)
def test_cli_usage_errors(capsys, args):
    code, _, err = run(capsys, *args)
    assert code == 1
    assert err


def test_cli_calibrate(capsys):
    code, out, _ = run(capsys, "calibrate", "--ratio", "0", "--ratio", "0.25")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert float(rows[0]["omega"]) == pytest.approx(32 / 729, rel=1e-12)
    assert float(rows[1]["omega"]) == pytest.approx(0.0211547, rel=1e-5)


def test_cli_calibrate_out_of_range(capsys):
    code, _, err = run(capsys, "calibrate", "--ratio", "0.4")
    assert code == 2
    assert "mu/M" in err


def test_cli_nbody_check(capsys):
    code, out, _ = run(capsys, "nbody-check", "--n", "3", "--seed", "7", "--draws", "200")
    assert code == 0
    row = next(csv.DictReader(io.StringIO(out)))
    assert row["status"] == "pass"


def test_cli_selftest(capsys):
    code, out, _ = run(capsys, "selftest", "--draws", "10")
    assert code == 0
    assert all(r["status"] == "pass" for r in csv.DictReader(io.StringIO(out)))


def test_cli_fig(capsys):
    code, out, _ = run(capsys, "fig", "fig4", "--resolution", "16")
    assert code == 0
    assert out.splitlines()[0] == "mu_over_M,omega,omega_linear_approx"


def test_cli_config_file(capsys, tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[constants]\nalpha = 0.0072973525664\n")
    code, out, _ = run(capsys, "--config", str(cfg), "table1")
    assert code == 0
    z6 = next(csv.DictReader(io.StringIO(out)))
    assert float(z6["E"]) != pytest.approx(-489.81939066706212, abs=1e-9)
    assert float(z6["E"]) == pytest.approx(-489.8193, abs=0.01)


def test_cli_help(capsys):
    code, out, _ = run(capsys, "--help")
    assert code == 0
    assert "table1" in out
