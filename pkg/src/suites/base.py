"""Base class and shared run context for verification suites."""

from __future__ import annotations

import logging
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable

from ..models import CheckReport
from ..quiver import Edge, Quiver
from ..relations import AlgebraKind, Presentation, UnsupportedError, full_presentation
from ..verify import DEFAULT_MAX_GENERATORS, DEFAULT_MAX_WORDS, GuardExceeded, IdealEngine

logger = logging.getLogger(__name__)


@dataclass
class SuiteContext:
    """Quiver, configuration and cached engines shared by the suites of one run."""

    quiver: Quiver
    config: dict = field(default_factory=dict)
    max_degree: int | None = None
    _presentations: dict = field(default_factory=dict, repr=False)
    _engines: dict = field(default_factory=dict, repr=False)

    def setting(self, section: str, key: str, default):
        return self.config.get(section, {}).get(key, default)

    def bound(self, key: str, default: int) -> int:
        """Degree bound for ``degree_bounds.<key>``; --max-degree wins."""
        if self.max_degree is not None:
            return self.max_degree
        return int(self.setting("degree_bounds", key, default))

    @property
    def max_words(self) -> int:
        return int(self.setting("guards", "max_words", DEFAULT_MAX_WORDS))

    @property
    def max_generators(self) -> int:
        return int(self.setting("guards", "max_generators", DEFAULT_MAX_GENERATORS))

    @property
    def distinct_dims(self) -> list[int]:
        return sorted({v.dim for v in self.quiver.vertices})

    @property
    def nonloop_edges(self) -> list[Edge]:
        return [e for e in self.quiver.edges if not e.is_loop]

    @property
    def loop_edges(self) -> list[Edge]:
        return [e for e in self.quiver.edges if e.is_loop]

    def presentation(self, kind: AlgebraKind, edge: Edge | None = None) -> Presentation:
        """Full presentation of the quiver, or of the single-edge subquiver."""
        key = (kind, edge.id if edge else None)
        p = self._presentations.get(key)
        if p is None:
            q = self.quiver.restrict([edge.id]) if edge else self.quiver
            p = self._presentations[key] = full_presentation(q, kind)
        return p

    def engine(self, kind: AlgebraKind, edge: Edge | None = None) -> IdealEngine:
        key = (kind, edge.id if edge else None)
        engine = self._engines.get(key)
        if engine is None:
            engine = self._engines[key] = IdealEngine(
                self.presentation(kind, edge), self.max_words, self.max_generators
            )
        return engine


class BaseSuite(ABC):
    """Abstract base class for verification suites.

    To add a suite:
    1. Create a module in src/suites/
    2. Subclass BaseSuite and implement run() and suite_name()
    3. Decorate the class with @register_suite
    """

    order: int = 100
    description: str = ""

    @abstractmethod
    def run(self, ctx: SuiteContext) -> list[CheckReport]:
        """Run every check of the suite for the context's quiver."""

    @classmethod
    @abstractmethod
    def suite_name(cls) -> str:
        """Name used by ``verify --suite``."""

    @staticmethod
    def guarded(name: str, params: dict, bound: int | None, check: Callable[[], CheckReport]) -> CheckReport:
        """Run one check, turning documented refusals into inconclusive reports."""
        start = time.perf_counter()
        try:
            report = check()
        except UnsupportedError as exc:
            report = CheckReport.inconclusive(name, params, f"unsupported: {exc}", bound=bound)
        except GuardExceeded as exc:
            report = CheckReport.inconclusive(name, params, str(exc), bound=exc.bound if exc.bound is not None else bound)
        report.elapsed_ms = round((time.perf_counter() - start) * 1000, 3)
        logger.debug("%s: %s in %.1f ms", report.check_name, report.status.value, report.elapsed_ms)
        return report
