"""
Typecheck Orchestrator - Coordinates a run from source paths to a report.

Pipeline stages:
1. Load sources (IO errors stop the run)
2. Parse all files concurrently
3. Elaborate the parsed modules sequentially, in argument order
4. Build the run report
"""

import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from config import settings
from elaboration import Elaborator, GlobalEnv
from kernel.checker import normalize_typed
from kernel.context import Context
from kernel.errors import KernelError, SourceUnavailable, UsageError
from models.schemas import DeclarationStatus, Diagnostic, FileReport, RunReport, SourceFile
from syntax import parse_expr, parse_module, pretty_print
from syntax.ast import SourceModule
from syntax.literate import SOURCE_SUFFIXES
from topes import log_cache_statistics

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ParsedSource:
    source: SourceFile
    module: Optional[SourceModule] = None
    diagnostic: Optional[Diagnostic] = None


class TypecheckOrchestrator:
    """
    Runs the typechecking pipeline over a list of files.

    Files are concatenated in the order given: each one sees every
    declaration of the files before it.
    """

    def __init__(self, max_workers: Optional[int] = None):
        self.max_workers = max_workers or settings.parse_workers

    # === Stage 1: Loading ===

    def load_sources(self, paths: Sequence[str]) -> List[SourceFile]:
        """
        Read source files from disk.

        Raises:
            UsageError: a path without a `.rzk` or `.rzk.md` suffix
            SourceUnavailable: a file that cannot be read
        """
        sources = []
        for path in paths:
            if not path.endswith(SOURCE_SUFFIXES):
                raise UsageError(f"{path}: expected a .rzk or .rzk.md file")
            try:
                with open(path, encoding="utf-8") as f:
                    text = f.read()
            except (OSError, UnicodeDecodeError) as e:
                reason = e.strerror if isinstance(e, OSError) and e.strerror else type(e).__name__
                raise SourceUnavailable(f"cannot read {os.path.basename(path)}: {reason}")
            sources.append(SourceFile(path=path, text=text))
        logger.info(f"Loaded {len(sources)} source files")
        return sources

    # === Stage 2: Parsing ===

    @staticmethod
    def parse_source(source: SourceFile) -> ParsedSource:
        try:
            return ParsedSource(source, module=parse_module(source.text, source.path))
        except KernelError as e:
            return ParsedSource(source, diagnostic=e.to_diagnostic())

    def parse_sources(self, sources: Sequence[SourceFile]) -> List[ParsedSource]:
        """Parse every source; results keep the input order."""
        if len(sources) <= 1:
            return [self.parse_source(s) for s in sources]
        with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
            return list(pool.map(self.parse_source, sources))

    # === Stage 3 and 4: Elaboration and report ===

    def typecheck(self, sources: Sequence[SourceFile], env: Optional[GlobalEnv] = None) -> Tuple[RunReport, GlobalEnv]:
        """Typecheck `sources` on top of `env`, returning the report and the final environment."""
        started = time.perf_counter()
        elaborator = Elaborator(env)
        report = RunReport()
        for parsed in self.parse_sources(sources):
            if parsed.module is None:
                logger.warning(f"Skipping {parsed.source.path}: it does not parse")
                elaborator.diagnostics.append(parsed.diagnostic)
                report.files.append(FileReport(path=parsed.source.path))
                continue
            report.files.append(elaborator.run(parsed.module))
        report.diagnostics = elaborator.diagnostics
        for file in report.files:
            for decl in file.declarations:
                if decl.status == DeclarationStatus.CHECKED:
                    report.checked += 1
                else:
                    report.failed += 1
        report.wall_time_seconds = time.perf_counter() - started
        logger.info(f"Typecheck finished: {report.checked} checked, {report.failed} failed, "
                    f"{report.errors} errors in {report.wall_time_seconds:.2f}s")
        log_cache_statistics()
        return report, elaborator.env

    def typecheck_paths(self, paths: Sequence[str], env: Optional[GlobalEnv] = None) -> Tuple[RunReport, GlobalEnv]:
        return self.typecheck(self.load_sources(paths), env)

    # === Normalization ===

    @staticmethod
    def normalize(expression: str, env: GlobalEnv) -> Tuple[str, str]:
        """
        Normal form of `expression` and of its type, both pretty-printed.

        Raises:
            KernelError: the expression does not parse or does not typecheck
        """
        term, type_ = normalize_typed(Context(env), parse_expr(expression, "<expression>"))
        return pretty_print(term), pretty_print(type_)


# Global orchestrator instance
orchestrator = TypecheckOrchestrator()
