"""End-to-end command line tests: parsing, exit codes, report contents."""

import copy
import json
import pathlib

import pytest

from siltcheck.cli import main
from siltcheck.instances import (InstanceError, instance_text, load_instance,
                                 parse_instance)

INSTANCE_DIR = pathlib.Path(__file__).resolve().parent.parent / "instances"
FIXTURE_FILES = sorted(INSTANCE_DIR.glob("*.json"))
FIX_K = str(INSTANCE_DIR / "fix_k.json")
FIX_A2 = str(INSTANCE_DIR / "fix_a2.json")
FIX_DUAL = str(INSTANCE_DIR / "fix_dual.json")


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    return code, json.loads(out), err


def a2_data():
    with open(FIX_A2, "r", encoding="utf-8") as fh:
        return json.load(fh)


# -- parser -----------------------------------------------------------------


@pytest.mark.parametrize("path", FIXTURE_FILES, ids=lambda p: p.stem)
def test_parse_serialize_round_trip_is_identity(path):
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    assert instance_text(load_instance(path)) == text


def test_parsed_objects_have_expected_shapes():
    inst = load_instance(FIX_A2)
    assert inst.algebra.dim == 3
    assert inst.complexes["U-tilt"].h_table() == {0: 3}
    assert inst.complexes["U-silt2"].lo == -1
    assert inst.modules["S1"].dim == 1
    assert inst.modules["A"].dim == 3
    assert inst.options["window"] == [-4, 4]


def test_relations_are_applied():
    inst = load_instance(FIX_DUAL)
    # one loop squared to zero: basis e, x
    assert inst.algebra.dim == 2


@pytest.mark.parametrize("mutate,fragment", [
    (lambda d: d.update(schema=2), "$.schema"),
    (lambda d: d.pop("name"), "$.name"),
    (lambda d: d.update(field={"prime": 6}), "$.field"),
    (lambda d: d.update(surprise=1), "$"),
    (lambda d: d["quiver"]["arrows"].append(["b", "1", "3"]), "$.quiver"),
    (lambda d: d["complexes"]["U-tilt"][0]["types"].update({"0": ["7"]}),
     "$.complexes.U-tilt[0].types.0"),
    (lambda d: d["complexes"]["U-tilt"][0]["types"].update({"x": ["1"]}),
     "$.complexes.U-tilt[0].types.x"),
    (lambda d: d["complexes"]["U-tilt"][1]["diffs"].update({"-1": [[0]]}),
     "$.complexes.U-tilt[1].diffs.-1"),
    (lambda d: d["complexes"]["U-tilt"][1]["diffs"].update({"-1": [["?"]]}),
     "$.complexes.U-tilt[1].diffs.-1[0]"),
    (lambda d: d["modules"].update({"U-tilt": {"free": True}}),
     "$.modules.U-tilt"),
    (lambda d: d["modules"].update({"M": {"nonsense": 1}}), "$.modules.M"),
    (lambda d: d["options"].update(window=[3, -3]), "$.options.window"),
    (lambda d: d["options"].update(cap=0), "$.options.cap"),
])
def test_parse_errors_name_the_json_path(mutate, fragment):
    data = copy.deepcopy(a2_data())
    mutate(data)
    with pytest.raises(InstanceError) as exc:
        parse_instance(data)
    assert exc.value.path.startswith(fragment)


def test_bad_relation_arrow_names_the_path():
    data = copy.deepcopy(a2_data())
    data["quiver"]["relations"] = [[[1, ["a", "zz"]]]]
    with pytest.raises(InstanceError) as exc:
        parse_instance(data)
    assert "$.quiver.relations[0][0][1]" == exc.value.path


def test_nonsquaring_differential_is_rejected():
    data = copy.deepcopy(a2_data())
    data["complexes"]["bad"] = [{
        "types": {"-2": ["2"], "-1": ["1"], "0": ["1"]},
        "diffs": {"-2": [[0, 1]],
                  "-1": [[1, 0], [0, 1]]},
    }]
    with pytest.raises(InstanceError) as exc:
        parse_instance(data)
    assert exc.value.path.startswith("$.complexes.bad[0]")


def test_missing_file_and_invalid_json(tmp_path):
    with pytest.raises(InstanceError) as exc:
        load_instance(tmp_path / "nope.json")
    assert "cannot read" in str(exc.value)
    broken = tmp_path / "broken.json"
    broken.write_text(open(FIX_A2).read()[:200])
    with pytest.raises(InstanceError) as exc:
        load_instance(broken)
    assert "invalid JSON" in str(exc.value)


# -- check ------------------------------------------------------------------


def test_check_one_point_instance_passes(capsys):
    code, payload, _ = run_json(capsys, "check", FIX_K, "A")
    assert code == 0
    assert payload["schema"] == 1
    assert payload["verdict"] == "pass"
    assert payload["coresolution_steps"] == 0
    assert payload["tilting"] is True


def test_check_two_term_silting_passes(capsys):
    code, payload, _ = run_json(capsys, "check", FIX_A2, "U-silt2")
    assert code == 0
    assert payload["coresolution_steps"] == 1
    assert payload["good"] is True
    assert payload["tilting"] is False


def test_check_wrong_orientation_fails_with_witness(capsys):
    code, payload, _ = run_json(capsys, "check", FIX_A2,
                                "silt2-wrong-orientation")
    assert code == 1
    assert payload["verdict"] == "fail"
    assert payload["witness"][0] == 1
    assert payload["witness"][1] >= 1


def test_check_fused_free_complex_is_inconclusive(capsys):
    # one undecomposed block hides the summand multiplicities
    code, payload, _ = run_json(capsys, "check", FIX_A2, "regular-fused")
    assert code == 2
    assert payload["verdict"] == "inconclusive"
    assert payload["presilting"] is True


def test_check_truncated_file_is_an_input_error(tmp_path, capsys):
    broken = tmp_path / "broken.json"
    broken.write_text(open(FIX_A2).read()[:200])
    code, out, err = run_cli(capsys, "check", str(broken), "A")
    assert code == 3
    assert out == ""
    assert "invalid JSON" in err


def test_check_unknown_object_is_an_input_error(capsys):
    code, _, err = run_cli(capsys, "check", FIX_A2, "nonexistent")
    assert code == 3
    assert "U-tilt" in err


def test_bad_flags_are_input_errors(capsys):
    assert run_cli(capsys, "verify", FIX_K, "A", "--window=oops")[0] == 3
    assert run_cli(capsys, "verify", FIX_K, "A", "--probes=bogus")[0] == 3
    assert run_cli(capsys, "check", FIX_K, "A", "--cap=-1")[0] == 3
    assert run_cli(capsys, "nonsense")[0] == 3


# -- goodify ----------------------------------------------------------------


def test_goodify_free_complex_returns_the_input(tmp_path, capsys):
    out_file = tmp_path / "reg.json"
    code, payload, _ = run_json(capsys, "goodify", FIX_A2, "regular",
                                "--output", str(out_file))
    assert code == 0
    blocks = payload["goodified"]["complexes"]["regular-good"]
    assert blocks == a2_data()["complexes"]["regular"]
    assert payload["checks"] == {"output_presilting": True,
                                 "silting_equivalent_to_input": True}
    # the written file parses and passes check
    assert instance_text(load_instance(out_file)) == out_file.read_text()
    code, payload, _ = run_json(capsys, "check", str(out_file), "regular-good")
    assert code == 0
    assert payload["good"] is True


@pytest.mark.parametrize("name", ["U-tilt", "U-silt2"])
def test_goodify_output_passes_check_as_good(tmp_path, capsys, name):
    out_file = tmp_path / "good.json"
    code, payload, _ = run_json(capsys, "goodify", FIX_A2, name,
                                "--output", str(out_file))
    assert code == 0
    assert payload["verdict"] == "pass"
    assert payload["checks"]["output_presilting"] is True
    assert payload["checks"]["silting_equivalent_to_input"] is True
    code, payload, _ = run_json(capsys, "check", str(out_file), f"{name}-good")
    assert code == 0
    assert payload["good"] is True


def test_goodify_records_the_failing_step(capsys):
    code, payload, _ = run_json(capsys, "goodify", FIX_A2,
                                "silt2-wrong-orientation")
    assert code == 2
    assert payload["failed_step"] == "presilting"
    assert payload["witness"][0] == 1
    code, payload, _ = run_json(capsys, "goodify", FIX_A2, "regular-fused")
    assert code == 2
    assert payload["failed_step"] == "coresolution"


# -- verify -----------------------------------------------------------------


def test_verify_two_term_silting_reports_negative_cohomology(capsys):
    code, payload, _ = run_json(capsys, "verify", FIX_A2, "U-silt2",
                                "--window=-3:3")
    assert code == 0
    assert payload["verdict"] == "pass"
    assert payload["effective"]["window"] == [-3, 3]
    wk = [r for r in payload["reports"] if r["kind"] == "weak-nonpositivity"]
    table = wk[0]["checks"][1]["details"]["h_table"]
    assert table == {"-1": 1, "0": 2}


def test_verify_module_form_adds_the_tilting_theorem(capsys):
    code, payload, _ = run_json(capsys, "verify", FIX_A2, "U-tilt")
    assert code == 0
    kinds = {r["kind"] for r in payload["reports"]}
    assert "tilting-theorem" in kinds
    tt = [r for r in payload["reports"] if r["kind"] == "tilting-theorem"][0]
    assert tt["notes"]["verdict"] == "tilting"


def test_verify_failure_and_report_aggregation(capsys):
    code, payload, _ = run_json(capsys, "verify", FIX_A2,
                                "silt2-wrong-orientation")
    assert code == 1
    assert payload["verdict"] == "fail"
    code, payload, _ = run_json(capsys, "report", FIX_A2,
                                "silt2-wrong-orientation")
    assert code == 1
    assert payload["check"]["verdict"] == "fail"
    assert payload["verification"] is None


def test_report_aggregates_check_and_verification(capsys):
    code, payload, _ = run_json(capsys, "report", FIX_K, "A")
    assert code == 0
    assert payload["check"]["verdict"] == "pass"
    kinds = {r["kind"] for r in payload["verification"]}
    assert "counit" in kinds and "silting" in kinds
    assert payload["verdict"] == "pass"


def test_verify_output_is_byte_identical_across_runs(tmp_path, capsys):
    f1, f2 = tmp_path / "r1.json", tmp_path / "r2.json"
    code1, out1, _ = run_cli(capsys, "verify", FIX_K, "A",
                             "--output", str(f1))
    code2, out2, _ = run_cli(capsys, "verify", FIX_K, "A",
                             "--output", str(f2))
    assert code1 == code2 == 0
    assert out1 == out2
    assert f1.read_bytes() == f2.read_bytes()
    # canonical form: sorted keys, two-space indent, trailing newline
    assert out1 == json.dumps(json.loads(out1), indent=2, sort_keys=True) + "\n"


def test_probe_filter_limits_the_battery(capsys):
    code, payload, _ = run_json(capsys, "verify", FIX_K, "A",
                                "--probes=free,simple0")
    assert code == 0
    assert payload["effective"]["probes"] == ["free", "simple0"]
    subjects = [r["subject"] for r in payload["reports"]
                if r["kind"] == "counit"]
    assert subjects == ["free", "simple0"]


def test_flags_override_instance_options(capsys):
    code, payload, _ = run_json(capsys, "check", FIX_K, "A",
                                "--max-steps", "3", "--cap", "5")
    assert code == 0
    assert payload["effective"]["max_steps"] == 3
    assert payload["effective"]["cap"] == 5
    # defaults come from the instance file otherwise
    code, payload, _ = run_json(capsys, "check", FIX_K, "A")
    assert payload["effective"]["max_steps"] == 8
    assert payload["effective"]["cap"] == 16


def test_exit_codes_stay_in_contract(tmp_path, capsys):
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    seen = {
        run_cli(capsys, "check", FIX_K, "A")[0],
        run_cli(capsys, "check", FIX_A2, "silt2-wrong-orientation")[0],
        run_cli(capsys, "check", FIX_A2, "regular-fused")[0],
        run_cli(capsys, "check", str(broken), "A")[0],
    }
    assert seen == {0, 1, 2, 3}
