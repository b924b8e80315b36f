from __future__ import annotations

import json

from cechcover.cli import main
from cechcover.problem import load_problem, normalize, parse_problem


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, command, path, *extra):
    code, out, err = run(capsys, command, "--input", str(path), "--format", "json", *extra)
    report = json.loads(out) if out else None
    return code, report, err


def test_check_e1(capsys, problems_dir):
    code, report, _ = run_json(capsys, "check", problems_dir / "e1_split_three_points.json")
    assert code == 0
    cov = report["results"]["covering"]
    assert cov["complete"] is True
    assert cov["ker_tau_dim"] == 3
    assert report["results"]["tau_rank"] == 1
    assert report["results"]["patch_dims"] == [2, 2]


def test_check_incomplete_covering_still_exits_zero(capsys, problems_dir):
    code, report, _ = run_json(capsys, "check", problems_dir / "incomplete_three_lines.json")
    assert code == 0
    cov = report["results"]["covering"]
    assert cov["is_covering"] is True and cov["complete"] is False
    assert cov["ker_tau_dim"] == 4 and cov["im_pi_dim"] == 3


def test_check_duplicate_ideals(capsys, tmp_path):
    doc = {
        "field": "Q",
        "algebra": {"dim": 2, "mul": [[0, 0, 0, 1], [1, 1, 1, 1]], "unit": [1, 1]},
        "ideals": {"I": [[0, 1]]},
        "covering": ["I", "I"],
    }
    path = tmp_path / "dup.json"
    path.write_text(json.dumps(doc))
    code, report, _ = run_json(capsys, "check", path)
    assert code == 0
    assert report["results"]["covering"]["is_covering"] is False


def test_malformed_structure_constants_exit_2(capsys, tmp_path):
    doc = {
        "field": "Q",
        "algebra": {"dim": 2, "mul": [[0, 0, 1, 1]], "unit": [1, 0]},
        "ideals": {},
        "covering": [],
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, out, err = run(capsys, "check", "--input", str(path))
    assert code == 2
    assert "unit law" in err or "associativity" in err


def test_unknown_ideal_name_exit_2(capsys, tmp_path):
    doc = {
        "field": "Q",
        "algebra": {"dim": 1, "mul": [[0, 0, 0, 1]], "unit": [1]},
        "ideals": {},
        "covering": ["nope"],
    }
    path = tmp_path / "bad2.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "check", "--input", str(path))
    assert code == 2 and "nope" in err


def test_cech_e1(capsys, problems_dir):
    code, report, _ = run_json(capsys, "cech", problems_dir / "e1_split_three_points.json")
    assert code == 0
    assert report["results"]["cech_cohomology"] == [3, 0]
    assert report["checks"]["dprime_squared_zero"] is True


def test_cech_constant_functor(capsys, problems_dir):
    code, report, _ = run_json(capsys, "cech", problems_dir / "constant_three_patches.json")
    assert code == 0
    assert report["results"]["cech_cohomology"] == [1, 0, 0]


def test_amitsur_e1(capsys, problems_dir):
    code, report, _ = run_json(capsys, "amitsur", problems_dir / "e1_split_three_points.json")
    assert code == 0
    assert report["results"]["degree_dims"] == [4, 6, 10, 18]
    assert report["results"]["homology_augmented"] == [0, 0, 0]
    assert report["results"]["homology_unaugmented"] == [3, 0, 0]


def test_amitsur_cap_exit_3(capsys, problems_dir):
    code, out, err = run(capsys, "amitsur", "--input",
                         str(problems_dir / "e1_split_three_points.json"),
                         "--dim-cap", "5")
    assert code == 3
    assert "cap" in err


def test_verify_e1(capsys, problems_dir):
    code, report, _ = run_json(capsys, "verify", problems_dir / "e1_split_three_points.json",
                               "--n-max", "2")
    assert code == 0
    checks = report["checks"]
    assert checks["d_squared_zero"] and checks["dprime_squared_zero"]
    assert checks["functor_validation"] and checks["chain_map"]


def test_verify_e4(capsys, problems_dir):
    code, report, _ = run_json(capsys, "verify", problems_dir / "e4_matrix_plus_point.json",
                               "--n-max", "2")
    assert code == 0
    assert report["checks"]["chain_map"] is True


def test_verify_broken_explicit_functor_exit_1(capsys, tmp_path):
    # all rings are the split plane; one edge uses the swap automorphism,
    # so the square () -> (1,2) does not commute
    plane = {"dim": 2, "mul": [[0, 0, 0, 1], [1, 1, 1, 1]], "unit": [1, 1]}
    ident = [[1, 0], [0, 1]]
    swap = [[0, 1], [1, 0]]
    doc = {
        "field": "Q",
        "algebra": plane,
        "ideals": {"Z": []},
        "covering": ["Z"],
        "functor": {"explicit": {
            "n": 2,
            "rings": {"": plane, "1": plane, "2": plane, "1,2": plane},
            "restrictions": {
                "->1": ident, "->2": ident,
                "1->1,2": swap, "2->1,2": ident,
            },
        }},
    }
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(doc))
    code, report, _ = run_json(capsys, "verify", path)
    assert code == 1
    assert report["checks"]["functor_validation"] is False
    assert "square" in report["results"]["functor_witness"]

    code2, report2, _ = run_json(capsys, "cech", path)
    assert code2 == 1
    assert report2["checks"]["functor_validation"] is False


def test_oracle_circle(capsys, problems_dir):
    code, report, _ = run_json(capsys, "oracle", problems_dir / "circle_cover.json")
    assert code == 0
    assert report["results"]["nerve_cohomology"] == [1, 1]
    assert report["results"]["cech_cohomology"] == [1, 1]
    assert report["checks"]["oracle_match"] is True


def test_oracle_disjoint(capsys, problems_dir):
    code, report, _ = run_json(capsys, "oracle", problems_dir / "disjoint_pair.json")
    assert code == 0
    assert report["results"]["nerve_cohomology"] == [2]


def test_oracle_requires_cover_functor(capsys, problems_dir):
    code, _, err = run(capsys, "oracle", "--input",
                       str(problems_dir / "e1_split_three_points.json"))
    assert code == 2 and "cover" in err


def test_report_determinism(capsys, tmp_path, problems_dir):
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    for out in (out1, out2):
        code = main(["cech", "--input", str(problems_dir / "e1_split_three_points.json"),
                     "--format", "json", "--output", str(out)])
        assert code == 0
    r1 = json.loads(out1.read_text())
    r2 = json.loads(out2.read_text())
    r1.pop("timing")
    r2.pop("timing")
    assert json.dumps(r1, sort_keys=True) == json.dumps(r2, sort_keys=True)


def test_report_problem_round_trip(capsys, problems_dir):
    code, report, _ = run_json(capsys, "check", problems_dir / "e1_split_three_points.json")
    assert code == 0
    reparsed = parse_problem(report["problem"])
    original, _ = load_problem(str(problems_dir / "e1_split_three_points.json"))
    assert reparsed.field == original.field
    assert reparsed.algebra.mul_table == original.algebra.mul_table
    assert reparsed.algebra.unit == original.algebra.unit
    assert {k: v.space for k, v in reparsed.ideals.items()} == \
        {k: v.space for k, v in original.ideals.items()}
    assert normalize(reparsed) == report["problem"]


def test_field_override(capsys, problems_dir):
    code, report, _ = run_json(capsys, "check", problems_dir / "e1_split_three_points.json",
                               "--field-override", "Fp:5")
    assert code == 0
    assert report["field"] == {"Fp": 5}
    assert report["results"]["covering"]["complete"] is True


def test_bad_field_override(capsys, problems_dir):
    code, _, err = run(capsys, "check", "--input",
                       str(problems_dir / "e1_split_three_points.json"),
                       "--field-override", "F4")
    assert code == 2


def test_text_format_renders(capsys, problems_dir):
    code, out, _ = run(capsys, "check", "--input",
                       str(problems_dir / "e1_split_three_points.json"))
    assert code == 0
    assert "complete: true" in out
    assert "cechcover" in out


def test_missing_input_file(capsys, tmp_path):
    code, _, err = run(capsys, "check", "--input", str(tmp_path / "absent.json"))
    assert code == 2


def test_fractional_scalars_accepted(capsys, tmp_path):
    doc = {
        "field": "Q",
        "algebra": {"dim": 1, "mul": [[0, 0, 0, "2/2"]], "unit": [1]},
        "ideals": {"Z": []},
        "covering": ["Z"],
    }
    path = tmp_path / "frac.json"
    path.write_text(json.dumps(doc))
    code, report, _ = run_json(capsys, "check", path)
    assert code == 0
    assert report["results"]["covering"]["complete"] is True
