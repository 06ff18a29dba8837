"""Command-line interface: dispatch, output and exit codes."""

import json
from pathlib import Path

import pytest

from quartic_chow.cli import main
from quartic_chow.pipelines import full_pipeline_order


@pytest.fixture()
def cache(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Path:
    monkeypatch.setenv("QUARTIC_CHOW_CACHE", str(tmp_path))
    return tmp_path


def test_help_lists_every_target(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["--help"]) == 0
    out = " ".join(capsys.readouterr().out.split())
    for name in full_pipeline_order():
        assert name in out


def test_unknown_target_exits_2(cache: Path, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["verify", "no-such-target"]) == 2
    err = capsys.readouterr().err
    assert "known targets" in err and "chow-git" in err


def test_usage_errors_exit_2(cache: Path) -> None:
    assert main([]) == 2
    assert main(["verify"]) == 2
    assert main(["verify", "--all", "ambient"]) == 2
    assert main(["verify", "ambient", "--jobs", "0"]) == 2
    assert main(["series", "--space", "mars"]) == 2
    assert main(["strata", "--degree", "0"]) == 2


def test_verify_passing_target_exits_0(cache: Path, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["verify", "ic-all", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["summary"]["pass"] == doc["summary"]["total"] > 0


def test_verify_failing_target_exits_1(cache: Path, capsys: pytest.CaptureFixture[str]) -> None:
    # the stated closed form of the unstable contribution does not match
    assert main(["verify", "strata-series"]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_cache_dir_flag(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["--cache-dir", str(tmp_path), "verify", "ambient"]) == 0
    assert (tmp_path / "artifacts" / "ambient").exists()
    assert main(["--cache-dir", str(tmp_path), "cache", "list"]) == 0
    assert "ambient" in capsys.readouterr().out
    assert main(["--cache-dir", str(tmp_path), "cache", "clear"]) == 0
    assert not (tmp_path / "artifacts").exists()


def test_strata_table(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["strata", "--degree", "4", "--forms", "ternary"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("11 unstable strata")
    assert len(out) == 2 + 11


def test_strata_json_with_expansion(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["strata", "--degree", "8", "--forms", "binary", "--format", "json", "--order", "4"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["strata"]) == 4
    assert all(len(s["expansion"]) == 5 for s in doc["strata"])


def test_series_hacking(cache: Path, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["series", "--space", "hacking", "--order", "12"]) == 0
    out = capsys.readouterr().out
    assert "1 + 2*t^2 + 4*t^4 + 5*t^6 + 4*t^8 + 2*t^10 + t^12" in out
    assert "expansion: 1, 0, 2, 0, 4, 0, 5, 0, 4, 0, 2, 0, 1" in out


def test_series_json(cache: Path, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["series", "--space", "ic-git", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["series"] == "1 + t^2 + 2*t^4 + 3*t^6 + 2*t^8 + t^10 + t^12"
