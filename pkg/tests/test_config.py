import pytest

from braided_yangian.core.errors import ConfigError
from braided_yangian.models.config import RunConfig
from braided_yangian.models.report import CheckRecord, CheckStatus, Report


def test_defaults_are_valid():
    assert RunConfig().problems() == []


def test_problems_are_collected():
    config = RunConfig(T=0, D=1, N=1)
    problems = config.problems()
    assert len(problems) == 3
    with pytest.raises(ConfigError) as info:
        config.validated()
    assert info.value.problems == problems


def test_site_points_must_match_sites():
    config = RunConfig(suite="gaudin", sites=3, site_points=["0", "1"])
    assert any("site points" in problem for problem in config.problems())


def test_kind_restrictions():
    assert RunConfig(suite="alchain").problems("involutive")
    assert RunConfig(suite="tau").problems("hecke")
    assert not RunConfig(suite="tau").problems("involutive")


def test_unknown_suite():
    with pytest.raises(ConfigError):
        RunConfig.build({"suite": "nope"})


def test_exit_codes():
    report = Report(suite="bethe", braiding="flip(N=2)")
    report.add([CheckRecord.build("a", {}, True),
                CheckRecord.build("b", {}, status=CheckStatus.INCONCLUSIVE, detail="not derivable")])
    assert report.summary.passed == 1
    assert report.exit_code() == 0
    assert report.exit_code(strict=True) == 1
    report.add([CheckRecord.build("c", {}, False)])
    assert report.exit_code() == 1
    assert report.records[-1].witness == "identity does not hold"


def test_canonical_json_drops_timings():
    report = Report(suite="braid", braiding="flip(N=2)").add([CheckRecord.build("a", {"k": 2}, True)])
    text = report.canonical_json()
    assert "created_at" not in text
    assert "elapsed_ms" not in text
    assert '"k": "2"' in text
