import json
from fractions import Fraction

import pytest

from src.cli import main, monomial_name, parse_st_polynomial
from src.errors import SchemaError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if code == 0 and out.strip().startswith("{") else out)


def test_parse_st_polynomial():
    assert parse_st_polynomial("s") == {(1, 0): 1}
    assert parse_st_polynomial("2*s*t^2 - 1/3*t^3") == {(1, 2): 2, (0, 3): Fraction(-1, 3)}
    assert parse_st_polynomial("t + t") == {(0, 1): 2}
    with pytest.raises(SchemaError):
        parse_st_polynomial("s^")
    with pytest.raises(SchemaError):
        parse_st_polynomial("x")


def test_monomial_name():
    assert monomial_name(0, 0) == "1"
    assert monomial_name(1, 1) == "s t"
    assert monomial_name(0, 4) == "t^4"
    assert monomial_name(1, 2, "gamma", "beta") == "gamma beta^2"


def test_cpn_relations(capsys):
    code, report = run(capsys, "cpn", "--n", "2", "relations")
    assert code == 0
    f2 = report["relations"][0]
    assert f2["name"] == "F_2"
    assert f2["ts"] == {"s t": "1", "t^3": "-1/3"}
    assert f2["beta_gamma"] == {
        "gamma beta": {"coeff": "1", "pi_exp": "0"},
        "beta^3": {"coeff": "-1/3", "pi_exp": "-2"},
    }
    assert report["vanish"] == [True, True]
    assert report["meta"]["versions"]["numpy"]


def test_cpn_multiply(capsys):
    code, report = run(capsys, "cpn", "--n", "2", "multiply", "--a", "s", "--b", "s")
    assert code == 0
    assert report["product"] == {"t^4": "1/6"}


def test_cpn_selfint(capsys):
    code, report = run(capsys, "cpn", "--n", "3", "selfint", "--d", "3", "--delta", "0")
    assert code == 0
    assert report["value"] == "27"
    assert report["agree"] is True


def test_cpn_length_and_basis(capsys):
    code, report = run(capsys, "cpn", "--n", "2", "length", "--expr", "s*t^2")
    assert code == 0
    assert report["length"] == {"coeff": "4", "pi_exp": "-2/3"}
    code, report = run(capsys, "cpn", "--n", "2", "basis")
    assert code == 0
    assert report["dimensions"] == {"0": 1, "1": 1, "2": 2, "3": 1, "4": 1}
    assert report["primitive_dims"] == {"0": 1, "1": 0, "2": 1}


def test_cpn_omega_and_lefschetz(capsys):
    code, report = run(capsys, "cpn", "--n", "3", "omega")
    assert [r["norm_sq"] for r in report["rows"]] == [1, 3, 3, 1]
    code, report = run(capsys, "cpn", "--n", "3", "lefschetz")
    assert all(r["hard_lefschetz"] for r in report["rows"])


def test_cpn_tasaki(capsys):
    code, report = run(capsys, "cpn", "--n", "2", "tasaki", "--x", "1", "--y", "1", "--samples", "2000", "--z", "4")
    assert code == 0
    assert report["exact"] == "1"
    assert report["within_ci"] is True


def test_schubert_lr(capsys):
    code, report = run(capsys, "schubert", "--k", "2", "--m", "2", "lr", "--a", "1", "--b", "1")
    assert code == 0
    assert report["coefficients"] == {"(2)": 1, "(1,1)": 1}


def test_schubert_shape(capsys):
    code, report = run(capsys, "schubert", "--k", "2", "--m", "2", "shape", "--diagrams", "2|2",
                       "--samples", "20000", "--seed", "7")
    assert code == 0
    low, high = report["ci"]
    assert low <= 0.5 <= high


def test_seed_reproducible_across_workers(capsys):
    args = ["schubert", "shape", "--diagrams", "1|2,1", "--samples", "9000", "--seed", "3"]
    _, one = run(capsys, *args, "--workers", "1")
    _, three = run(capsys, *args, "--workers", "3")
    assert one["estimate"] == three["estimate"]


def test_global_flags_before_command(capsys):
    code, report = run(capsys, "--seed", "5", "--samples", "100", "schubert", "shape", "--diagrams", "1")
    assert code == 0
    assert report["meta"]["seed"] == 5
    assert report["estimate"]["samples"] == 100


def test_zonoid_commands(tmp_path, capsys):
    square = tmp_path / "square.json"
    square.write_text(json.dumps({"ambient": 2, "degree": 1, "atoms": [
        {"w": 1, "v": [[1, 0]]}, {"w": 1, "v": [[0, 1]]}]}), encoding="utf-8")
    seg = tmp_path / "segment.json"
    seg.write_text(json.dumps({"ambient": 2, "atoms": [{"w": 1, "v": [[1, 0]]}]}), encoding="utf-8")

    code, report = run(capsys, "zonoid", "mixed-volume", "-f", str(square))
    assert code == 0
    assert report["mixed_volume"] == "1"
    code, report = run(capsys, "zonoid", "length", "-f", str(square))
    assert report["length"] == "2"
    code, report = run(capsys, "zonoid", "crofton", "-f", str(seg), "--body", str(square), "--star-exp")
    assert code == 0
    assert report["crofton"] == "2"


def test_zonoid_schema_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"atoms": []}), encoding="utf-8")
    code, _ = run(capsys, "zonoid", "length", "-f", str(bad))
    assert code == 2


def test_sphere_commands(capsys):
    code, report = run(capsys, "sphere", "ball-table", "--N", "4")
    assert code == 0
    assert report["rows"][4]["kappa"] == {"coeff": "1/2", "pi_exp": "2"}
    code, report = run(capsys, "sphere", "expected-count", "--n", "2", "--codims", "1,1", "--ratios", "0.5,0.5")
    assert code == 0
    assert report["value"] == {"coeff": "2", "pi_exp": "0"}
    code, report = run(capsys, "sphere", "expected-count", "--n", "2", "--codims", "1,1",
                       "--ratios", "0.5,0.5", "--projective")
    assert report["value"] == {"coeff": "1", "pi_exp": "0"}


def test_csv_output(capsys):
    code, out = run(capsys, "sphere", "ball-table", "--N", "2", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0].startswith("i,kappa.coeff,kappa.pi_exp")


def test_output_file(tmp_path, capsys):
    target = tmp_path / "out" / "relations.json"
    code, _ = run(capsys, "cpn", "--n", "1", "relations", "--output", str(target))
    assert code == 0
    data = json.loads(target.read_text(encoding="utf-8"))
    assert data["relations"][0]["ts"] == {"s": "1", "t^2": "-1/2"}


def test_exit_codes(capsys):
    assert main(["cpn", "relations"]) == 2
    assert main(["cpn", "--n", "1", "selfint", "--d", "1", "--delta", "0"]) == 1
    assert main(["sphere", "expected-count", "--n", "3", "--codims", "1,1", "--ratios", "1,1"]) == 1
    assert main(["schubert", "shape", "--diagrams", "1", "--samples", "0"]) == 2
    assert main(["cpn", "--n", "0", "basis"]) == 2


def test_selfint_in_cp2(capsys):
    code, report = run(capsys, "cpn", "--n", "2", "selfint", "--d", "3", "--delta", "1")
    assert code == 0
    assert report["value"] == "11"
