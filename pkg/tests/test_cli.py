import csv
import io
import json

import pytest

from vbsneg.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_adjacent_negativity_json():
    code, out, _ = call("negativity", "--adjacent", "1", "2", "2")
    assert code == 0
    data = json.loads(out)
    assert data["method"] == "ClosedForm"
    assert data["value"] == pytest.approx(10 / 7, abs=1e-14)


def test_general_negativity():
    code, out, _ = call("negativity", "--general", "1", "1", "1", "1", "1", "0",
                        "--boundary", "edges")
    assert code == 0
    data = json.loads(out)
    assert data["method"] == "NumericPTDM" and data["vanishes"]


def test_inconsistent_flags_are_usage_errors():
    code, out, err = call("negativity", "--adjacent", "1", "2", "2", "--boundary", "edges")
    assert code == 1 and out == ""
    assert len(err.strip().splitlines()) == 1
    code, _, err = call("negativity", "--adjacent", "1", "2")
    assert code == 1 and "--adjacent" in err
    code, _, err = call("spectrum", "--transfer", "3/2")
    assert code == 1 and "--transfer" in err
    code, _, _ = call("nonsense")
    assert code == 1
    code, _, _ = call("negativity", "--general", "1", "0", "0", "0", "1", "0")
    assert code == 1


def test_symbols_output():
    code, out, _ = call("symbols", "--sixj", "1/2", "1/2", "1", "1/2", "1/2", "0")
    data = json.loads(out)
    assert code == 0
    assert (data["sign"], data["numerator"], data["denominator"]) == (1, 1, 4)
    code, out, _ = call("symbols", "--cg", "1", "0", "1", "0", "0", "0", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][:3] == ["symbol", "labels", "sign"] and rows[1][2] == "-1"


def test_spectrum_json_and_csv():
    code, out, _ = call("spectrum", "--rho", "1", "1", "2", "1", "2", "0", "--boundary", "edges")
    data = json.loads(out)
    assert code == 0
    assert abs(data["trace"] - 1) < 1e-10
    assert {"labels", "eigenvalues", "degeneracy"} <= set(data["sectors"][0])
    code, out, _ = call("spectrum", "--rho", "2", "0", "2", "1", "2", "0", "--boundary", "thermo",
                        "--csv")
    assert out.splitlines()[0] == "R,degeneracy,index,eigenvalue"
    code, out, _ = call("spectrum", "--transfer", "2")
    assert json.loads(out)["exact"][1]["lambda"] == "-1/2"


def test_figure_csv(tmp_path):
    code, out, _ = call("figure", "--lb", "2", "--smax", "4", "--lamax", "40")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "S,LA,negativity"
    assert len(lines) == 1 + 4 * 40
    target = tmp_path / "fig.csv"
    code, out, _ = call("figure", "--lb", "2", "--smax", "1", "--lamax", "3", "--csv", str(target))
    assert code == 0 and out == ""
    assert target.read_text().splitlines()[1] == "1,1,1"


def test_json_keeps_full_precision():
    _, out, _ = call("negativity", "--adjacent", "1", "3", "2")
    assert "1.4937253933193773" in out


def test_conjecture_report():
    code, out, _ = call("conjecture", "--smax", "3", "--budget", "8", "--summary")
    data = json.loads(out)
    assert code == 0
    assert data["all_vanish"] and data["locc_consistent"]
    assert [m["S"] for m in data["minimal"]] == [1, 2, 3]


def test_oracle_compare(tmp_path):
    target = tmp_path / "cmp.json"
    code, out, _ = call("oracle", "--compare", "1", "1", "2", "1", "2", "0", "--boundary", "edges",
                        "--out", str(target))
    data = json.loads(target.read_text())
    assert code == 0 and out == ""
    assert data["rho_max_deviation"] < 1e-10
    assert data["ptdm_max_deviation"] < 1e-10


def test_numerical_contract_exit_code(monkeypatch):
    from vbsneg import cli
    from vbsneg.linalg import NumericalContractError

    def boom(*_a, **_k):
        raise NumericalContractError("sector R=1 is not symmetric")

    monkeypatch.setattr(cli, "adjacent_negativity", boom)
    code, _, err = call("negativity", "--adjacent", "1", "2", "2")
    assert code == 2 and "R=1" in err


def test_deterministic_output():
    a = call("figure", "--lb", "2", "--smax", "2", "--lamax", "5")[1]
    b = call("figure", "--lb", "2", "--smax", "2", "--lamax", "5")[1]
    assert a == b


def test_negative_half_integer_arguments():
    code, out, _ = call("symbols", "--cg", "1/2", "1/2", "1/2", "-1/2", "1", "0")
    assert code == 0
    data = json.loads(out)
    assert (data["sign"], data["numerator"], data["denominator"]) == (1, 1, 2)
