"""Shared fixtures: one full pipeline run per test session."""

from __future__ import annotations

import time
from pathlib import Path

import pytest

from quartic_chow.pipelines import SCENE_DIR, LEDGER_FILE, Workspace, coverage_certificates, discover_scenes, full_pipeline_order, load_ledger, run_targets
from quartic_chow.scene import Certificate


class PipelineRun:
    """Certificates of a full run, with the wall time of every target."""

    def __init__(self, root: Path) -> None:
        self.workspace = Workspace.at(root)
        scenes = discover_scenes()
        self.certificates: list[Certificate] = []
        self.target_seconds: dict[str, float] = {}
        start = time.perf_counter()
        for name in full_pipeline_order(scenes):
            t0 = time.perf_counter()
            self.certificates += run_targets([name], workspace=self.workspace, scenes=scenes)
            self.target_seconds[name] = time.perf_counter() - t0
        self.certificates += coverage_certificates(load_ledger(SCENE_DIR / LEDGER_FILE), self.certificates)
        self.seconds = time.perf_counter() - start

    def seconds_of(self, *targets: str) -> float:
        return sum(self.target_seconds[t] for t in targets)

    def of(self, target: str) -> list[Certificate]:
        return [c for c in self.certificates if c.target == target]

    def cited(self, *labels: str, target: str | None = None) -> list[Certificate]:
        return [c for c in self.certificates if c.citation in labels and (target is None or c.target == target)]

    def by_label(self, target: str, label: str) -> Certificate:
        for c in self.of(target):
            if c.label == label:
                return c
        raise KeyError(f"{target}: {label}")


@pytest.fixture(scope="session")
def pipeline(tmp_path_factory: pytest.TempPathFactory) -> PipelineRun:
    return PipelineRun(tmp_path_factory.mktemp("workspace"))


ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(scope="session")
def acceptance_log() -> dict[int, str]:
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter, exitstatus, config) -> None:  # type: ignore[no-untyped-def]
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
