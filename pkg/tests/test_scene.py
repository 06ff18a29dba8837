"""Scene-file loading, evaluation and artifact serialization."""

from pathlib import Path

import pytest

from quartic_chow.errors import SceneError
from quartic_chow.scene import (
    ArtifactStore,
    deserialize_value,
    normalize_row,
    parse_scene,
    run_scene,
    serialize_value,
)
from quartic_chow.series import RatSeries

GOOD = """
target demo
describe a small scene
ring x:1 y:1
let I = ideal(x^2, x*y,
              y^3)
check hilbert("quotient", I, "1+2*t+t^2", rank_check=4, cite="demo:1")
check equal("product", (x + y)^2, "x^2 + 2*x*y + y^2", cite="demo:2")
check member("in ideal", x^2*y, I, cite="demo:3")
check equal("wrong on purpose", x*y, y^2, cite="demo:4")
export I
"""


def test_parse_collects_statements_and_citations() -> None:
    scene = parse_scene(GOOD)
    assert scene.name == "demo"
    assert scene.description == "a small scene"
    assert scene.citations() == ["demo:1", "demo:2", "demo:3", "demo:4"]


def test_run_collects_failures_without_aborting(tmp_path: Path) -> None:
    certs = run_scene(parse_scene(GOOD), ArtifactStore(tmp_path))
    assert [c.status for c in certs] == ["pass", "pass", "pass", "fail"]
    failing = certs[-1]
    assert failing.expected and failing.computed
    assert (tmp_path / "demo" / "I.txt").exists()


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("ring x:1\ncheck equal(\"a\", x, x)", 2, "cite"),
        ("target t\nfrobnicate x", 2, "unknown statement"),
        ("target t\nlet = x", 2, "let NAME"),
        ("target t\ncheck frob(\"a\", 1, cite=\"c\")", 2, "check must call"),
        ("target t\nimport a from elsewhere", 2, "not a dependency"),
        ("ring x:1", 1, "missing target"),
        ("target t\nlet a = (1 + ", 2, ""),
    ],
)
def test_malformed_scenes_report_their_line(text: str, line: int, fragment: str) -> None:
    with pytest.raises(SceneError) as info:
        parse_scene(text, source="bad.scene")
    assert info.value.line == line
    assert info.value.source == "bad.scene"
    assert fragment in info.value.message


def test_runtime_errors_carry_the_line(tmp_path: Path) -> None:
    scene = parse_scene("target t\nring x:1\ncheck equal(\"a\", nosuch, x, cite=\"c\")")
    (cert,) = run_scene(scene, ArtifactStore(tmp_path))
    assert cert.status == "fail"
    assert "line 3" in cert.note and "nosuch" in cert.note


def test_missing_artifact_is_reported(tmp_path: Path) -> None:
    scene = parse_scene("target t\ndepends up\nimport X from up")
    (cert,) = run_scene(scene, ArtifactStore(tmp_path))
    assert cert.status == "fail"
    assert "missing" in cert.note


def test_serialization_roundtrip(tmp_path: Path) -> None:
    store = ArtifactStore(tmp_path)
    run_scene(parse_scene(GOOD), store)
    text = store.path("demo", "I").read_text(encoding="utf-8")
    assert serialize_value(deserialize_value(text)) == text
    series = RatSeries.parse("1/(1-t^2)")
    assert deserialize_value(serialize_value(series)) == series


def test_table_rows_are_normalized() -> None:
    assert normalize_row("(1,0) (0,2) | T | 1/(1-t^2) | 3 | 8") == normalize_row("(0,2) (1,0) | T | (1)/(1 - t^2) | 3 | 8")


def test_shipped_scenes_parse() -> None:
    from quartic_chow.pipelines import discover_scenes

    scenes = discover_scenes()
    assert len(scenes) >= 10
    for scene in scenes.values():
        assert all(scene.citations())
