import csv
import io
import json
import subprocess
import sys

import pytest

from casimir_sso.cli import main, run

DIM = ["--units", "dimensionless"]


def _run(argv):
    out = io.StringIO()
    code = run(argv, stdout=out)
    return code, out.getvalue()


def test_plates_csv_columns_and_total():
    code, text = _run(["plates", "--distance", "1", "--eps1", "4", "--eps2", "4", "--temperature", "0.5",
                       "--format", "csv"] + DIM)
    assert code == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["n", "kappa_n", "term", "cumulative", "distance", "temperature", "order", "quantity"]
    assert rows[-1][0] == "total"
    assert rows[1][0] == "0"
    assert float(rows[-1][2]) == pytest.approx(float(rows[-2][3]))
    assert float(rows[-1][2]) < 0


def test_plates_json_fields():
    code, text = _run(["plates", "--distance", "1", "--order", "MSE_1,2", "--format", "json"] + DIM)
    data = json.loads(text)
    assert code == 0
    for key in ("command", "version", "units", "config", "converged", "columns", "rows"):
        assert key in data
    assert data["command"] == "plates" and data["units"] == "dimensionless"


def test_cylinder_tmatrix_decoupled_at_m0():
    code, text = _run(["cylinder-tmatrix", "--m", "0", "--kappaR", "1", "--kzR", "1", "--eps", "30"] + DIM)
    data = json.loads(text)
    assert code == 0
    assert data["T_EH"] == 0.0 and data["T_HE"] == 0.0
    code, text = _run(["cylinder-tmatrix", "--m", "1", "--kappaR", "1", "--kzR", "1", "--eps", "30"] + DIM)
    data = json.loads(text)
    assert data["T_EH"] == -data["T_HE"] != 0.0


def test_eigs_commands_run():
    for argv in (["sphere-eigs", "--l-max", "3", "--kappaR", "0.5,2", "--eps", "4"],
                 ["cylinder-eigs", "--m", "0,1", "--kappaR", "1", "--kzR", "0,1", "--eps", "4"],
                 ["static-eigs", "--l-max", "3", "--eps", "3", "--n-theta", "24"]):
        code, text = _run(argv + DIM + ["--format", "csv"])
        assert code == 0
        assert len(text.splitlines()) > 2


def test_cp_plate_runs():
    code, text = _run(["cp-plate", "--z0", "1,2", "--eps", "5", "--format", "csv"] + DIM)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) >= 2


def test_selfcheck_passes():
    code, text = _run(["selfcheck", "--format", "csv"])
    assert code == 0
    assert "False" not in text


def test_unknown_flag_is_input_error():
    assert main(["plates", "--distance", "1", "--bogus"]) == 1


def test_bad_length_is_input_error():
    assert main(["plates", "--distance", "1 parsec"]) == 1
    assert main(["plates", "--distance", "1nm"] + DIM) == 1


def test_output_is_deterministic():
    argv = ["plates", "--distance", "100nm", "--eps1", "3", "--eps2", "5", "--temperature", "300", "--format", "json"]
    assert _run(argv)[1] == _run(argv)[1]


def test_config_file_and_flag_override(tmp_path):
    ini = tmp_path / "run.ini"
    ini.write_text("[DEFAULT]\nunits = dimensionless\n[plates]\ndistance = 2\neps1 = 4\neps2 = 4\n")
    _, a = _run(["plates", "--config", str(ini), "--format", "json"])
    _, b = _run(["plates", "--distance", "2", "--eps1", "4", "--eps2", "4", "--format", "json"] + DIM)
    assert json.loads(a)["rows"] == json.loads(b)["rows"]
    _, c = _run(["plates", "--config", str(ini), "--distance", "1", "--format", "json"])
    assert json.loads(c)["config"]["distance"] == 1.0
    ini.write_text("[plates]\nnot_an_option = 1\n")
    assert main(["plates", "--config", str(ini)]) == 1


def test_output_file(tmp_path):
    out = tmp_path / "res.csv"
    assert main(["static-eigs", "--l-max", "2", "--n-theta", "16", "--output", str(out)] + DIM) == 0
    assert out.read_text().startswith("l,")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "casimir_sso", "--version"], capture_output=True, text=True)
    assert res.returncode == 0
    assert "0.1.0" in res.stdout
