"""Front end: parsing, reports, exit codes, determinism, round-trips."""

import json
import os

import pytest

from defcalc.cli import CliError, emit_document, main, parse_document

SAMPLES = os.path.join(os.path.dirname(__file__), "..", "sample_inputs")


def sample(name):
    return os.path.join(SAMPLES, name)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None)


def write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def test_all_samples_parse_and_round_trip(tmp_path):
    names = sorted(os.listdir(SAMPLES))
    assert len(names) >= 6
    kinds = set()
    for name in names:
        doc = parse_document(sample(name))
        kinds.add(doc.kind)
        text = emit_document(doc)
        echo = tmp_path / name
        echo.write_text(text, encoding="utf-8")
        again = parse_document(str(echo))
        assert emit_document(again) == text
        assert again.kind == doc.kind
    assert kinds == {
        "artin", "cdga", "dgla", "hitchin-pair", "linfty", "mc-element"
    }


def test_check_dgla_command(capsys):
    code, report = run(capsys, "check-dgla", sample("dgla_obstructed.json"))
    assert code == 0
    assert report["status"] == "pass"
    assert report["checks"][0]["name"] == "dgla-axioms"


def test_check_dgla_failure_exit_code(capsys, tmp_path):
    path = write(
        tmp_path,
        "bad.json",
        {
            "kind": "dgla",
            "basis": [{"name": "a", "degree": 0}, {"name": "b", "degree": 0}],
            "differential": [],
            "bracket": [
                {"a": "a", "b": "b", "out": "a", "coeff": "1"},
                {"a": "b", "b": "a", "out": "a", "coeff": "1"},
            ],
        },
    )
    code, report = run(capsys, "check-dgla", path)
    assert code == 1
    assert report["status"] == "fail"
    assert report["checks"][0]["axiom"] == "antisymmetry"


def test_mc_solve_worked_example(capsys):
    code, report = run(
        capsys, "mc-solve", sample("dgla_obstructed.json"), "--order", "3"
    )
    assert code == 0
    solver = report["solver"]
    assert solver["tangent_dimension"] == 1
    (event,) = solver["events"]
    assert event["order"] == 2
    assert event["class"] == ["1/2"]
    assert event["cocycle"] == {"e2": "1/2"}
    assert solver["solutions"] == [None]


def test_gauge_equiv_command(capsys):
    code, report = run(
        capsys,
        "gauge-equiv",
        sample("dgla_contractible.json"),
        sample("mc_flow_x.json"),
        sample("mc_flow_y.json"),
    )
    assert code == 0
    assert report["equivalent"] is True


def test_gauge_equiv_failure(capsys, tmp_path):
    x = write(
        tmp_path,
        "x.json",
        {
            "kind": "mc-element",
            "algebra": {"variables": ["t"], "truncation": 2},
            "terms": [{"monomial": [1], "name": "e1", "coeff": "1"}],
        },
    )
    y = write(
        tmp_path,
        "y.json",
        {
            "kind": "mc-element",
            "algebra": {"variables": ["t"], "truncation": 2},
            "terms": [{"monomial": [1], "name": "e1", "coeff": "-1"}],
        },
    )
    code, report = run(
        capsys, "gauge-equiv", sample("dgla_obstructed.json"), x, y
    )
    assert code == 1
    assert report["equivalent"] is False
    assert report["failure"]["order"] == 1


def test_hitchin_verify_command(capsys):
    code, report = run(
        capsys,
        "hitchin-verify",
        sample("hitchin_r2_nilpotent.json"),
        "--weight",
        "4",
    )
    assert code == 0
    names = [c["name"] for c in report["checks"]]
    assert names == ["cdga-axioms", "dgla-axioms", "morphism-identity"]
    assert all(c["ok"] for c in report["checks"])


def test_cohomology_command(capsys):
    code, report = run(
        capsys, "cohomology", sample("hitchin_r2_zero.json"),
        sample("cdga_interval.json"),
    )
    assert code == 0
    dims = report["cohomology"]["dimensions"]
    # zero differential everywhere: cohomology is the whole space
    assert dims == {"0": 4, "1": 8, "2": 4}


def test_obstruction_command(capsys):
    code, report = run(
        capsys,
        "obstruction",
        sample("hitchin_r2_zero.json"),
        sample("cdga_interval.json"),
        "--order",
        "3",
    )
    assert code == 0
    assert report["all_in_kernel"] is True


def test_pushforward_and_hitchin_map_commands(capsys, tmp_path):
    mc = write(
        tmp_path,
        "mc.json",
        {
            "kind": "mc-element",
            "algebra": {"variables": ["t"], "truncation": 4},
            "terms": [
                {"monomial": [1], "name": "1*E12^l", "coeff": "1"},
                {"monomial": [1], "name": "1*E21^l", "coeff": "2"},
            ],
        },
    )
    code, push = run(
        capsys, "pushforward", sample("hitchin_r2_zero.json"), mc,
        sample("cdga_interval.json"),
    )
    assert code == 0
    code, trace = run(
        capsys, "hitchin-map", sample("hitchin_r2_zero.json"), mc,
        sample("cdga_interval.json"),
    )
    assert code == 0
    assert trace["sections"]["1"] == []
    assert trace["sections"]["2"] == push["image"]


def test_parse_errors_exit_two(capsys, tmp_path):
    missing = str(tmp_path / "missing.json")
    assert main(["check-dgla", missing]) == 2

    broken = tmp_path / "broken.json"
    broken.write_text('{"kind": "dgla",', encoding="utf-8")
    assert main(["check-dgla", str(broken)]) == 2
    err = capsys.readouterr().err
    assert "line" in err and "column" in err

    zero_div = write(
        tmp_path,
        "zdiv.json",
        {
            "kind": "dgla",
            "basis": [{"name": "a", "degree": 0}],
            "differential": [],
            "bracket": [{"a": "a", "b": "a", "out": "a", "coeff": "1/0"}],
        },
    )
    assert main(["check-dgla", zero_div]) == 2

    unknown = write(tmp_path, "unknown.json", {"kind": "spectra"})
    assert main(["check-dgla", unknown]) == 2

    bad_theta = write(
        tmp_path,
        "badtheta.json",
        {
            "kind": "hitchin-pair",
            "rank": 2,
            "l_basis": [
                {"name": "l1", "degree": 1},
                {"name": "l2", "degree": 1},
            ],
            "theta": [
                [["0", "0"], ["1", "0"]],
                [["0", "1"], ["0", "0"]],
            ],
        },
    )
    assert main(["hitchin-build", bad_theta]) == 2
    err = capsys.readouterr().err
    assert "Higgs" in err


def test_wrong_kind_rejected(capsys):
    assert main(["check-dgla", sample("cdga_interval.json")]) == 2


def test_float_coefficients_rejected(capsys, tmp_path):
    path = write(
        tmp_path,
        "float.json",
        {
            "kind": "dgla",
            "basis": [{"name": "a", "degree": 0}],
            "differential": [],
            "bracket": [{"a": "a", "b": "a", "out": "a", "coeff": 0.5}],
        },
    )
    assert main(["check-dgla", path]) == 2


def test_reports_deterministic(tmp_path, capsys):
    reports = []
    for i in range(3):
        out = tmp_path / f"r{i}.json"
        code = main(
            [
                "hitchin-verify",
                sample("hitchin_r2_nilpotent.json"),
                "--report",
                str(out),
            ]
        )
        capsys.readouterr()
        assert code == 0
        reports.append(out.read_bytes())
    assert reports[0] == reports[1] == reports[2]
    # stdout carries the same bytes as the report file
    code = main(["hitchin-verify", sample("hitchin_r2_nilpotent.json")])
    assert capsys.readouterr().out.encode() == reports[0]


def test_parse_document_raises_cli_error_directly():
    with pytest.raises(CliError):
        parse_document(os.path.join(SAMPLES, "no_such_file.json"))
