"""Target ordering, execution, coverage ledger and reports."""

import json
from pathlib import Path

import pytest

from quartic_chow.errors import ConfigurationError
from quartic_chow.pipelines import (
    SCENE_DIR,
    LedgerEntry,
    Workspace,
    coverage_certificates,
    dependency_closure,
    discover_scenes,
    emit_report,
    full_pipeline_order,
    load_ledger,
    run_target,
)
from quartic_chow.scene import Certificate, parse_scene

EXPECTED_ORDER = [
    "ambient",
    "strata-series",
    "chow-git",
    "stable-loci",
    "chow-k",
    "chow-phat",
    "chow-hacking",
    "poincare-all",
    "ic-all",
    "dimension-bookkeeping",
]


def test_full_pipeline_order() -> None:
    assert full_pipeline_order() == EXPECTED_ORDER


def test_cycle_is_a_configuration_error() -> None:
    scenes = {
        "a": parse_scene("target a\ndepends b"),
        "b": parse_scene("target b\ndepends a"),
    }
    with pytest.raises(ConfigurationError, match="cyclic"):
        full_pipeline_order(scenes)


def test_unknown_dependency_is_a_configuration_error() -> None:
    with pytest.raises(ConfigurationError, match="unknown target"):
        full_pipeline_order({"a": parse_scene("target a\ndepends zzz")})


def test_dependency_closure() -> None:
    scenes = discover_scenes()
    assert dependency_closure(["ic-all"], scenes)[:2] == ["ambient", "strata-series"]
    assert dependency_closure(["strata-series"], scenes) == ["strata-series"]
    with pytest.raises(ConfigurationError, match="known targets"):
        dependency_closure(["nope"], scenes)


def test_run_target_refreshes_dependencies(tmp_path: Path) -> None:
    ws = Workspace.at(tmp_path)
    certs = run_target("chow-git", workspace=ws)
    assert certs and all(c.target == "chow-git" for c in certs)
    assert all(c.status == "pass" for c in certs)
    assert ws.stamp_path("ambient").exists()


def test_all_targets_ran(pipeline) -> None:
    targets = {c.target for c in pipeline.certificates}
    assert targets == set(EXPECTED_ORDER) | {"coverage"}


def test_coverage_ledger_is_complete(pipeline) -> None:
    failing = [c.label for c in pipeline.of("coverage") if c.status != "pass"]
    assert failing == []


def test_coverage_flags_uncited_label() -> None:
    ledger = [LedgerEntry("thm:a", "verified"), LedgerEntry("thm:b", "out-of-scope")]
    certs = [Certificate("x", "equal", "l", "pass", "thm:c", "", "")]
    out = {c.label: c.status for c in coverage_certificates(ledger, certs)}
    assert out == {"thm:a": "fail", "thm:b": "pass", "thm:c": "fail"}


def test_ledger_parses() -> None:
    entries = load_ledger(SCENE_DIR / "coverage.ledger")
    assert {e.status for e in entries} == {"verified", "derived-input", "out-of-scope"}


def test_malformed_ledger(tmp_path: Path) -> None:
    p = tmp_path / "bad.ledger"
    p.write_text("thm:a | maybe\n", encoding="utf-8")
    with pytest.raises(ConfigurationError):
        load_ledger(p)


def test_json_report_schema(pipeline) -> None:
    doc = json.loads(emit_report(pipeline.certificates, "json", timing=True))
    assert doc["summary"]["total"] == len(pipeline.certificates)
    for rec in doc["certificates"]:
        assert {"target", "kind", "status", "citation", "expected", "computed", "ms"} <= set(rec)


def test_report_is_deterministic(pipeline, tmp_path: Path) -> None:
    again = run_target("ic-all", workspace=pipeline.workspace)
    first = [c for c in pipeline.certificates if c.target == "ic-all"]
    assert emit_report(again, "json") == emit_report(first, "json")
    assert "ms" not in emit_report(first, "json")


def test_failing_certificate_carries_diff(pipeline) -> None:
    text = emit_report([c for c in pipeline.certificates if c.status == "fail"], "text")
    if text.strip().startswith("total=0"):
        pytest.skip("no failing certificates")
    assert "expected:" in text or "note:" in text


def test_parallel_run_matches_serial(tmp_path: Path) -> None:
    serial = run_target("poincare-all", workspace=Workspace.at(tmp_path / "a"), jobs=1)
    parallel = run_target("poincare-all", workspace=Workspace.at(tmp_path / "b"), jobs=3)
    assert emit_report(serial, "json") == emit_report(parallel, "json")
