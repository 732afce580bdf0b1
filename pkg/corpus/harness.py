"""
Corpus Harness - Runs the bundled library as a regression suite.

The manifest lists files in dependency order. PASS files are checked in a
chain, each on top of the environment left by the ones before it. FAIL
fixtures are checked on a snapshot of the chain at their position and never
feed their declarations back into it.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from config import settings
from elaboration import EntryKind, GlobalEnv
from kernel.errors import MissingExport, UsageError
from models.schemas import (
    CorpusEntry,
    CorpusFileResult,
    CorpusReport,
    ErrorCode,
    InventoryItem,
    RunReport,
    Tier,
)
from pipeline import TypecheckOrchestrator
from syntax import pretty_print

logger = logging.getLogger(__name__)

EXPECT_PASS = "PASS"
EXPECT_FAIL_PREFIX = "FAIL:"


# === Manifest ===

def _parse_manifest_line(line: str, lineno: int, path: str) -> CorpusEntry:
    fields = line.split("\t")
    if len(fields) != 3:
        raise UsageError(f"{path}:{lineno}: expected `path<TAB>PASS|FAIL:code<TAB>REQUIRED|STRETCH`")
    file, expectation, tier = (f.strip() for f in fields)
    try:
        tier = Tier(tier)
    except ValueError:
        raise UsageError(f"{path}:{lineno}: unknown tier {tier!r}")
    if expectation == EXPECT_PASS:
        return CorpusEntry(path=file, tier=tier)
    if expectation.startswith(EXPECT_FAIL_PREFIX):
        code = expectation[len(EXPECT_FAIL_PREFIX):]
        try:
            return CorpusEntry(path=file, expect_pass=False, expected_code=ErrorCode(code), tier=tier)
        except ValueError:
            raise UsageError(f"{path}:{lineno}: unknown error code {code!r}")
    raise UsageError(f"{path}:{lineno}: expected PASS or FAIL:<code>, got {expectation!r}")


def load_manifest(path: Optional[str] = None) -> List[CorpusEntry]:
    """
    Read a manifest file. Entry paths are resolved against its directory.

    Raises:
        UsageError: the manifest is unreadable or has a malformed line
    """
    path = path or settings.manifest_path
    try:
        with open(path, encoding="utf-8") as f:
            lines = f.read().splitlines()
    except OSError as e:
        raise UsageError(f"cannot read manifest {os.path.basename(path)}: {e.strerror or type(e).__name__}")
    base = os.path.dirname(os.path.abspath(path))
    entries = []
    for lineno, line in enumerate(lines, 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        entry = _parse_manifest_line(line, lineno, path)
        entries.append(entry.model_copy(update={"path": os.path.join(base, entry.path)}))
    logger.debug(f"Manifest {path}: {len(entries)} entries")
    return entries


def required_paths(entries: Iterable[CorpusEntry]) -> List[str]:
    """The Required PASS files, in manifest order."""
    return [e.path for e in entries if e.expect_pass and e.tier == Tier.REQUIRED]


def _relative(path: str, manifest: str) -> str:
    return os.path.relpath(path, os.path.dirname(os.path.abspath(manifest)))


# === Running ===

def _error_codes(report: RunReport) -> List[str]:
    return sorted({d.code.value for d in report.diagnostics if d.is_error})


def _result(entry: CorpusEntry, report: RunReport) -> CorpusFileResult:
    codes = _error_codes(report)
    if entry.expect_pass:
        met = report.ok
    else:
        met = codes == [entry.expected_code.value]
    return CorpusFileResult(
        entry=entry,
        expectation_met=met,
        codes=codes,
        declarations=[d for f in report.files for d in f.declarations],
        diagnostics=report.diagnostics,
    )


def run_corpus(
    manifest: Optional[str] = None,
    tiers: Sequence[Tier] = (Tier.REQUIRED,),
    orchestrator: Optional[TypecheckOrchestrator] = None,
) -> CorpusReport:
    """
    Check every manifest entry of the selected tiers against its expectation.

    Results come back in manifest order. The chain of PASS files runs
    sequentially; the FAIL fixtures run in parallel on their snapshots.
    """
    orchestrator = orchestrator or TypecheckOrchestrator()
    entries = [e for e in load_manifest(manifest) if e.tier in tiers]
    env = GlobalEnv()
    results: Dict[int, CorpusFileResult] = {}
    fixtures: List[Tuple[int, CorpusEntry, GlobalEnv]] = []

    for index, entry in enumerate(entries):
        if not entry.expect_pass:
            fixtures.append((index, entry, env))
            continue
        report, next_env = orchestrator.typecheck_paths([entry.path], env)
        results[index] = _result(entry, report)
        if not report.ok:
            # Later files still see whatever did check.
            logger.warning(f"{os.path.basename(entry.path)}: {report.errors} errors")
        env = next_env

    def run_fixture(job: Tuple[int, CorpusEntry, GlobalEnv]) -> Tuple[int, CorpusFileResult]:
        index, entry, snapshot = job
        report, _ = orchestrator.typecheck_paths([entry.path], snapshot)
        return index, _result(entry, report)

    if fixtures:
        with ThreadPoolExecutor(max_workers=orchestrator.max_workers) as pool:
            results.update(pool.map(run_fixture, fixtures))

    report = CorpusReport(results=[results[i] for i in range(len(entries))])
    failed = [os.path.basename(r.entry.path) for r in report.results if not r.expectation_met]
    if failed:
        logger.warning(f"Corpus expectations violated: {', '.join(failed)}")
    else:
        logger.info(f"Corpus: {len(report.results)} entries met their expectations")
    return report


# === Inventory ===

def load_inventory(path: Optional[str] = None) -> List[Tuple[str, str]]:
    """Read `name<TAB>file` lines; file paths are relative to the manifest directory."""
    path = path or settings.inventory_path
    try:
        with open(path, encoding="utf-8") as f:
            lines = f.read().splitlines()
    except OSError as e:
        raise UsageError(f"cannot read inventory {os.path.basename(path)}: {e.strerror or type(e).__name__}")
    rows = []
    for lineno, line in enumerate(lines, 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = [f.strip() for f in line.split("\t")]
        if len(fields) != 2:
            raise UsageError(f"{path}:{lineno}: expected `name<TAB>file`")
        rows.append((fields[0], fields[1]))
    return rows


def export_inventory(manifest: Optional[str] = None, inventory: Optional[str] = None) -> List[InventoryItem]:
    """
    Index the named objects of the Required PASS files with their types.

    Only inventory rows whose file is part of the manifest are exported, so
    an empty manifest gives an empty inventory.

    Raises:
        MissingExport: an inventory name is not defined by its file
    """
    manifest = manifest or settings.manifest_path
    orchestrator = TypecheckOrchestrator()
    env = GlobalEnv()
    origin: Dict[str, str] = {}
    files = set()
    for path in required_paths(load_manifest(manifest)):
        before = set(env.names())
        _, env = orchestrator.typecheck_paths([path], env)
        file = _relative(path, manifest)
        files.add(file)
        for name in set(env.names()) - before:
            origin[name] = file

    items = []
    for name, file in load_inventory(inventory):
        if file not in files:
            continue
        entry = env.lookup(name)
        if entry is None or origin.get(name) != file:
            raise MissingExport(f"{name} is not exported by {file}")
        items.append(InventoryItem(name=name, file=file, type=pretty_print(entry.type_expr)))
    logger.info(f"Exported {len(items)} inventory items")
    return items


def postulated_names(env: GlobalEnv) -> List[str]:
    """Names introduced by #postulate, in definition order."""
    return [entry.name for entry in env if entry.kind == EntryKind.POSTULATED]
