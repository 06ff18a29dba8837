"""Scene discovery, dependency ordering, execution and reporting.

Targets are the scene files shipped in the ``scenes`` directory.  Each target
runs in its own context and communicates with later targets only through the
serialized artifacts it exports.  A stamp file per target records a hash of
the scene text together with the stamps of its dependencies, so a target is
re-run whenever it or anything upstream changed.
"""

from __future__ import annotations

import hashlib
import json
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ConfigurationError
from .groebner import CACHE_ENV, BasisCache
from .scene import FAIL, PASS, ArtifactStore, Certificate, SceneFile, load_scene, run_scene

SCENE_DIR = Path(__file__).parent / "scenes"
LEDGER_FILE = "coverage.ledger"
LEDGER_STATUSES = ("verified", "derived-input", "out-of-scope")
COVERAGE_TARGET = "coverage"

# Preferred order among targets whose dependencies are all satisfied.
CANONICAL_ORDER = (
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
)


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------
def default_cache_dir() -> Path:
    """``$QUARTIC_CHOW_CACHE`` or ``~/.cache/quartic-chow``."""
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "quartic-chow"


@dataclass(frozen=True)
class Workspace:
    """Where artifacts and cached Gröbner bases live."""

    root: Path

    @classmethod
    def at(cls, root: str | os.PathLike[str] | None = None) -> "Workspace":
        return cls(Path(root) if root else default_cache_dir())

    @property
    def store(self) -> ArtifactStore:
        return ArtifactStore(self.root / "artifacts")

    @property
    def cache(self) -> BasisCache:
        return BasisCache(self.root / "bases")

    def stamp_path(self, target: str) -> Path:
        return self.root / "artifacts" / target / ".stamp"


# ---------------------------------------------------------------------------
# discovery and ordering
# ---------------------------------------------------------------------------
def discover_scenes(directory: str | os.PathLike[str] | None = None) -> dict[str, SceneFile]:
    """All ``*.scene`` files of a directory, keyed by target name."""
    directory = Path(directory) if directory else SCENE_DIR
    scenes: dict[str, SceneFile] = {}
    for path in sorted(directory.glob("*.scene")):
        scene = load_scene(path)
        if scene.name in scenes:
            raise ConfigurationError(f"target {scene.name!r} is defined twice ({scenes[scene.name].source}, {path})")
        scenes[scene.name] = scene
    return scenes


def _rank(name: str) -> tuple[int, str]:
    return (CANONICAL_ORDER.index(name) if name in CANONICAL_ORDER else len(CANONICAL_ORDER), name)


def full_pipeline_order(scenes: dict[str, SceneFile] | None = None) -> list[str]:
    """Topological order of the targets, ties broken by the canonical order."""
    scenes = discover_scenes() if scenes is None else scenes
    for scene in scenes.values():
        for dep in scene.depends:
            if dep not in scenes:
                raise ConfigurationError(f"target {scene.name!r} depends on unknown target {dep!r}")
    remaining = {name: set(scene.depends) for name, scene in scenes.items()}
    order: list[str] = []
    while remaining:
        ready = sorted((n for n, deps in remaining.items() if not deps), key=_rank)
        if not ready:
            raise ConfigurationError(f"cyclic dependencies among targets: {', '.join(sorted(remaining))}")
        name = ready[0]
        order.append(name)
        del remaining[name]
        for deps in remaining.values():
            deps.discard(name)
    return order


def dependency_closure(names: Iterable[str], scenes: dict[str, SceneFile]) -> list[str]:
    """The targets together with everything they depend on, in pipeline order."""
    wanted: set[str] = set()
    stack = list(names)
    while stack:
        name = stack.pop()
        if name not in scenes:
            raise ConfigurationError(unknown_target_message(name, scenes))
        if name not in wanted:
            wanted.add(name)
            stack.extend(scenes[name].depends)
    return [n for n in full_pipeline_order(scenes) if n in wanted]


def unknown_target_message(name: str, scenes: dict[str, SceneFile]) -> str:
    return f"unknown target {name!r}; known targets: {', '.join(full_pipeline_order(scenes))}"


# ---------------------------------------------------------------------------
# execution
# ---------------------------------------------------------------------------
def scene_stamp(name: str, scenes: dict[str, SceneFile]) -> str:
    """Hash of the scene text and, recursively, of its dependencies."""
    scene = scenes[name]
    h = hashlib.sha256(Path(scene.source).read_bytes())
    for dep in sorted(scene.depends):
        h.update(scene_stamp(dep, scenes).encode())
    return h.hexdigest()


def is_fresh(name: str, scenes: dict[str, SceneFile], ws: Workspace) -> bool:
    path = ws.stamp_path(name)
    return path.exists() and path.read_text(encoding="utf-8").strip() == scene_stamp(name, scenes)


def _execute(name: str, source: str, root: str, stamp: str) -> list[Certificate]:
    ws = Workspace.at(root)
    certs = run_scene(load_scene(source), ws.store, ws.cache)
    path = ws.stamp_path(name)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(stamp + "\n", encoding="utf-8")
    return certs


def run_targets(
    names: Sequence[str],
    *,
    workspace: Workspace | None = None,
    scenes: dict[str, SceneFile] | None = None,
    jobs: int = 1,
    reuse: bool = True,
) -> list[Certificate]:
    """Run the named targets, first refreshing any stale dependency.

    Only the certificates of the named targets are returned, in pipeline
    order.  With ``jobs > 1`` targets whose dependencies are complete run
    concurrently in separate processes.
    """
    scenes = discover_scenes() if scenes is None else scenes
    ws = workspace or Workspace.at()
    requested = set(names)
    closure = dependency_closure(names, scenes)
    todo = [n for n in closure if n in requested or not (reuse and is_fresh(n, scenes, ws))]
    results: dict[str, list[Certificate]] = {}
    done = set(closure) - set(todo)
    pending = list(todo)

    def args(n: str) -> tuple[str, str, str, str]:
        return (n, scenes[n].source, str(ws.root), scene_stamp(n, scenes))

    if jobs <= 1:
        for n in pending:
            results[n] = _execute(*args(n))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            while pending:
                wave = [n for n in pending if all(d in done for d in scenes[n].depends)]
                if not wave:
                    raise ConfigurationError("dependency order could not be satisfied")
                futures = {n: pool.submit(_execute, *args(n)) for n in wave}
                for n, fut in futures.items():
                    results[n] = fut.result()
                done.update(wave)
                pending = [n for n in pending if n not in done]
    return [c for n in closure if n in requested for c in results.get(n, [])]


def run_target(name: str, **kwargs: object) -> list[Certificate]:
    """Certificates of one target (dependencies are refreshed as needed)."""
    return run_targets([name], **kwargs)  # type: ignore[arg-type]


def run_all(*, workspace: Workspace | None = None, jobs: int = 1, scenes: dict[str, SceneFile] | None = None) -> list[Certificate]:
    """Every target in pipeline order, followed by the coverage certificates."""
    scenes = discover_scenes() if scenes is None else scenes
    certs = run_targets(full_pipeline_order(scenes), workspace=workspace, scenes=scenes, jobs=jobs, reuse=False)
    ledger_path = SCENE_DIR / LEDGER_FILE
    if ledger_path.exists():
        certs.extend(coverage_certificates(load_ledger(ledger_path), certs))
    return certs


# ---------------------------------------------------------------------------
# coverage ledger
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class LedgerEntry:
    label: str
    status: str
    note: str = ""


def load_ledger(path: str | os.PathLike[str]) -> list[LedgerEntry]:
    """Parse ``label | status | note`` lines; ``#`` starts a comment."""
    entries: list[LedgerEntry] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split("|")]
        if len(parts) < 2 or parts[1] not in LEDGER_STATUSES:
            raise ConfigurationError(f"{path}:{lineno}: expected 'label | {'/'.join(LEDGER_STATUSES)} | note'")
        if parts[0] in seen:
            raise ConfigurationError(f"{path}:{lineno}: label {parts[0]!r} listed twice")
        seen.add(parts[0])
        entries.append(LedgerEntry(parts[0], parts[1], parts[2] if len(parts) > 2 else ""))
    return entries


def coverage_certificates(ledger: Sequence[LedgerEntry], certs: Sequence[Certificate]) -> list[Certificate]:
    """One certificate per ledger entry, plus one per citation missing from the ledger."""
    cited = Counter(c.citation for c in certs if c.citation)
    out: list[Certificate] = []
    for entry in ledger:
        n = cited.get(entry.label, 0)
        if entry.status == "verified":
            status = PASS if n else FAIL
            note = f"{n} certificate(s)" if n else "no certificate cites this label"
        else:
            status, note = PASS, entry.note or entry.status
        out.append(Certificate(COVERAGE_TARGET, "coverage", entry.label, status, entry.label, entry.status, f"{n} certificate(s)", 0.0, note))
    known = {e.label for e in ledger}
    for label in sorted(set(cited) - known):
        out.append(Certificate(COVERAGE_TARGET, "coverage", label, FAIL, label, "listed in the ledger", "missing", 0.0, "cited label is not in the coverage ledger"))
    return out


# ---------------------------------------------------------------------------
# reporting
# ---------------------------------------------------------------------------
def summary_counts(certs: Sequence[Certificate]) -> dict[str, int]:
    counts = Counter(c.status for c in certs)
    return {"total": len(certs), **{k: counts[k] for k in sorted(counts)}}


def all_passed(certs: Sequence[Certificate]) -> bool:
    return all(c.status == PASS for c in certs)


def emit_report(certs: Sequence[Certificate], fmt: str = "text", *, timing: bool = False) -> str:
    """JSON records or a plain-text table.  Without ``timing`` the output is deterministic."""
    if fmt == "json":
        doc = {"summary": summary_counts(certs), "certificates": [c.record(timing=timing) for c in certs]}
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    if fmt != "text":
        raise ConfigurationError(f"unknown report format {fmt!r}")
    lines: list[str] = []
    current = None
    for c in certs:
        if c.target != current:
            current = c.target
            lines.append(f"== {current}")
        extra = f"  ({c.ms:.0f} ms)" if timing else ""
        lines.append(f"  {c.status.upper():5} {c.label} [{c.citation}]{extra}")
        if c.status != PASS:
            if c.note:
                lines.append(f"        note:     {c.note}")
            if c.expected:
                lines.append(f"        expected: {c.expected}")
            if c.computed:
                lines.append(f"        computed: {c.computed}")
    counts = summary_counts(certs)
    lines.append(" ".join(f"{k}={v}" for k, v in counts.items()))
    return "\n".join(lines) + "\n"


__all__ = [
    "CANONICAL_ORDER",
    "FAIL",
    "PASS",
    "Workspace",
    "all_passed",
    "coverage_certificates",
    "dependency_closure",
    "discover_scenes",
    "emit_report",
    "full_pipeline_order",
    "load_ledger",
    "run_all",
    "run_target",
    "run_targets",
    "summary_counts",
]
