import json

from torhyp.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_classify_hyperbolic_cell(capsys):
    code, data = run_json(
        capsys, "classify", "--case", "2.0.1", "--l", "2", "--coeffs", "3,4", "--bound", "4"
    )
    assert code == 0
    assert data["schema"] == "torhyp/1"
    assert data["derived"]["outcome"] == "Hyperbolic"
    assert data["table"]["outcome"] == "Hyperbolic"
    assert data["agree"] is True


def test_classify_degenerate_cell(capsys):
    code, data = run_json(
        capsys, "classify", "--case", "2.0.1", "--l", "0", "--coeffs", "0,5", "--bound", "4"
    )
    assert code == 0
    assert data["derived"]["outcome"] == "NotHyperbolic"


def test_faces_counts(capsys):
    code, data = run_json(
        capsys, "faces", "--case", "2.0.1", "--l", "2", "--coeffs", "2,4"
    )
    assert code == 0
    assert data["counts"] == [3, 21, 5, 5, 5]


def test_describe_and_determinism(capsys):
    code1, out1 = run(capsys, "describe", "--case", "3.1.5", "--b1", "2")
    code2, out2 = run(capsys, "describe", "--case", "3.1.5", "--b1", "2")
    assert code1 == code2 == 0
    assert out1 == out2
    data = json.loads(out1)
    assert data["canonical"]["matches_reference"] is True
    assert data["splitting"] is False


def test_nef_verb(capsys):
    code, data = run_json(
        capsys, "nef", "--case", "2.0.1", "--l", "1", "--D", '{"coeffs": {"D_2": 2, "D_3": 3}}'
    )
    assert code == 0
    assert data["nef"] and data["ample"] and data["big"]


def test_polytope_and_points(capsys):
    code, data = run_json(
        capsys, "points", "--case", "2.0.1", "--l", "1", "--D", '{"coeffs": {"D_2": 1, "D_3": 1}}'
    )
    assert code == 0
    assert data["count"] == 9
    code, data = run_json(
        capsys, "polytope", "--case", "2.0.1", "--l", "0", "--D", '{"coeffs": {"D_2": 1, "D_3": 1}}'
    )
    assert code == 0
    assert data["dimension"] == 3
    assert data["volume"] == "1/2"


def test_idp_verb(capsys):
    code, data = run_json(
        capsys,
        "idp", "--case", "2.0.1", "--l", "2",
        "--E", '{"coeffs": {"D_2": 1}}', "--Eprime", '{"coeffs": {"D_3": 1}}',
    )
    assert code == 0
    assert data["idp"] is True


def test_markov_verb(capsys):
    code, data = run_json(capsys, "markov", "--case", "2.0.1", "--l", "1", "--bound", "4")
    assert code == 0
    assert data["B"] == [[1, 1, 0, 0, 0], [-1, 0, 1, 1, 1]]
    assert data["certificate"]["connected"] is True


def test_connected_sections_verb(capsys):
    code, data = run_json(
        capsys,
        "connected-sections", "--case", "2.0.1", "--l", "1", "--bound", "4",
        "--E", '{"coeffs": {"D_2": 1, "D_3": 1}}', "--Eprime", '{"coeffs": {"D_2": 1}}',
    )
    assert code == 0
    assert data["passes"] is True


def test_intersect_verb(capsys):
    code, data = run_json(
        capsys,
        "intersect", "--case", "3.0.1", "--r", "0", "--a", "0", "--b", "0",
        "--d1", '{"coeffs": {"D_1": 1}}', "--d2", '{"coeffs": {"D_4": 1}}',
        "--d3", '{"coeffs": {"D_6": 1}}',
    )
    assert code == 0
    assert data["product"] == 1


def test_sweep_csv(capsys):
    code, out = run(capsys, "sweep", "--case", "2.0.1", "--l", "2", "--range", "0..2",
                    "--bound", "4")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "case,l,a,b,derived,table,agree"
    assert len(lines) == 10


def test_invalid_parameter_exit1(capsys):
    code, data = run_json(capsys, "classify", "--case", "2.0.2", "--l1", "3", "--l2", "1",
                          "--coeffs", "1,1")
    assert code == 1
    assert "error" in data


def test_unknown_case_exit1(capsys):
    code, data = run_json(capsys, "describe", "--case", "9.9.9")
    assert code == 1


def test_missing_param_exit1(capsys):
    code, data = run_json(capsys, "describe", "--case", "2.0.1")
    assert code == 1
    assert "error" in data


def test_env_bound_override(capsys, monkeypatch):
    monkeypatch.setenv("TORHYP_MARKOV_BOUND", "3")
    code, data = run_json(capsys, "markov", "--case", "2.0.1", "--l", "0")
    assert code == 0
    assert data["certificate"]["bound"] == 3


def test_internal_inconsistency_exit2(capsys, monkeypatch):
    # Corrupt the encoded presentation matrix: the recomputation must win
    # and the CLI must report the mismatch with exit status 2.
    import torhyp.toric_ideal as ti

    monkeypatch.setattr(
        ti, "encoded_gale_rows", lambda fan: [[9, 9, 9, 9, 9], [0, 0, 0, 0, 0]]
    )
    ti.gale_matrix.cache_clear()
    code, data = run_json(capsys, "markov", "--case", "2.0.1", "--l", "3", "--bound", "3")
    ti.gale_matrix.cache_clear()
    assert code == 2
    assert "internal_error" in data


def test_generic_fan_input(tmp_path, capsys):
    fan_file = tmp_path / "fan.json"
    fan_file.write_text(json.dumps({
        "rays": [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, 0, 1], [0, -1, -1]],
        "max_cones": [[0, 2, 3], [0, 2, 4], [0, 3, 4], [1, 2, 3], [1, 2, 4], [1, 3, 4]],
    }))
    code, data = run_json(
        capsys, "points", "--fan", str(fan_file), "--D", '{"coeffs": {"D_2": 1, "D_3": 1}}'
    )
    assert code == 0
    assert data["count"] == 6
