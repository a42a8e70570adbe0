import json

import pytest

from braided_yangian.cli import config_from_args, build_parser, main


def test_catalog_text(capsys):
    assert main(["catalog"]) == 0
    out = capsys.readouterr().out
    assert "dj_hecke" in out
    assert "Suites:" in out


def test_catalog_lists_both_default_dimensions(capsys):
    assert main(["catalog"]) == 0
    out = capsys.readouterr().out
    assert "  flip N=2 involutive m=2" in out
    assert "  flip N=3 involutive m=3" in out
    assert "dj_hecke N=3 hecke m=3" in out
    assert out.index("dj_hecke N=2") < out.index("dj_hecke N=3") < out.index("  flip N=2")


def test_catalog_json(capsys):
    assert main(["catalog", "--N", "2", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert {entry["name"] for entry in data["braidings"]} == {"conjugated_flip", "dj_hecke", "flip"}
    assert {entry["kind"] for entry in data["braidings"]} == {"hecke", "involutive"}
    assert "gaudin" in {suite["name"] for suite in data["suites"]}


def test_invalid_truncation_is_an_input_error(tmp_path, capsys):
    code = main(["verify", "bethe", "--T", "0", "--report", str(tmp_path / "r.json")])
    assert code == 2
    assert "truncation" in capsys.readouterr().err
    assert not (tmp_path / "r.json").exists()


def test_suite_kind_mismatch(tmp_path, capsys):
    code = main(["verify", "gaudin", "--braiding", "dj_hecke", "--report", str(tmp_path / "r.json")])
    assert code == 2
    assert "involutive" in capsys.readouterr().err


def test_missing_braiding_file(tmp_path):
    code = main(["verify", "braid", "--braiding", str(tmp_path / "missing.json"),
                 "--report", str(tmp_path / "r.json")])
    assert code == 2


def test_unknown_suite_exits():
    with pytest.raises(SystemExit):
        main(["verify", "nope"])


def test_flags_override_config_file(tmp_path):
    config_file = tmp_path / "run.json"
    config_file.write_text(json.dumps({"suite": "bethe", "T": 3, "seed": 5}), encoding="utf-8")
    args = build_parser().parse_args(["verify", "newton", "--config", str(config_file), "--T", "1"])
    config = config_from_args(args)
    assert config.suite == "newton"
    assert config.T == 1
    assert config.seed == 5


def test_config_file_must_be_an_object(tmp_path):
    config_file = tmp_path / "run.json"
    config_file.write_text("[1, 2]", encoding="utf-8")
    assert main(["verify", "braid", "--config", str(config_file)]) == 2


@pytest.mark.slow
def test_verify_writes_report(tmp_path, capsys):
    path = tmp_path / "braid.json"
    code = main(["verify", "braid", "--braiding", "flip", "--report", str(path)])
    assert code == 0
    report = json.loads(path.read_text(encoding="utf-8"))
    assert report["suite"] == "braid"
    assert report["summary"]["failed"] == 0
    assert report["records"][0]["check_id"] == "braid_relation"
    assert f"report: {path}" in capsys.readouterr().out


def test_gaudin_suite_reports_realization(tmp_path):
    path = tmp_path / "gaudin.json"
    code = main(["verify", "gaudin", "--flavor", "braided", "--braiding", "conjugated_flip",
                 "--points", "3", "--report", str(path)])
    assert code == 0
    report = json.loads(path.read_text(encoding="utf-8"))
    assert report["records"][0]["check_id"] == "realization"
    assert report["records"][0]["detail"] == "transported"


def test_catalog_json_sorted_by_name_then_dimension(capsys):
    assert main(["catalog", "--N", "3", "2", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["N"] == [2, 3]
    keys = [(entry["name"], entry["N"]) for entry in data["braidings"]]
    assert keys == sorted(keys)
    assert ("dj_hecke", 3) in keys
    assert all("m" in entry for entry in data["braidings"])


def test_gaudin_suite_from_system_descriptor(tmp_path):
    descriptor = tmp_path / "system.json"
    descriptor.write_text(json.dumps({"flavor": "classical", "m": 2, "sites": 2, "points": ["2", "5"]}),
                          encoding="utf-8")
    path = tmp_path / "gaudin.json"
    code = main(["verify", "gaudin", "--system", str(descriptor), "--report", str(path)])
    assert code == 0
    report = json.loads(path.read_text(encoding="utf-8"))
    assert report["config"]["system"] == str(descriptor)
    assert "points=2,5" in report["records"][0]["parameters"]["system"]
    assert report["summary"]["failed"] == 0


def test_invalid_system_descriptor_is_an_input_error(tmp_path, capsys):
    descriptor = tmp_path / "system.json"
    descriptor.write_text(json.dumps({"m": 2, "sites": 3, "points": ["0", "1"]}), encoding="utf-8")
    code = main(["verify", "gaudin", "--system", str(descriptor), "--report", str(tmp_path / "r.json")])
    assert code == 2
    assert "points given for 3 sites" in capsys.readouterr().err


def test_system_descriptor_only_applies_to_gaudin_suites(tmp_path, capsys):
    descriptor = tmp_path / "system.json"
    descriptor.write_text(json.dumps({"m": 2, "sites": 2}), encoding="utf-8")
    code = main(["verify", "bethe", "--system", str(descriptor), "--report", str(tmp_path / "r.json")])
    assert code == 2
    assert "system descriptor" in capsys.readouterr().err
