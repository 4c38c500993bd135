"""
IsQP Diagnostics
-----------------
Solve zamanı yaranan xəbərdarlıqların toplanması (rank-deficient C,
perturbed factorization, rejected base steps, numerical failures).
"""

from enum import Enum
from typing import List
from dataclasses import dataclass, field
from datetime import datetime

from src.utils.logger import get_logger

logger = get_logger()


class DiagnosticLevel(Enum):
    """Diaqnostika səviyyələri."""
    INFO = "info"
    WARNING = "warning"
    ERROR = "error"


@dataclass
class Diagnostic:
    """Diaqnostika hadisəsi data class-ı."""
    level: DiagnosticLevel
    title: str
    message: str
    source: str = "solver"  # "problem", "kkt", "base_mpc", "driver", "gen"
    timestamp: datetime = field(default_factory=datetime.now)

    def to_dict(self) -> dict:
        return {
            "level": self.level.value,
            "title": self.title,
            "message": self.message,
            "source": self.source,
            "timestamp": self.timestamp.isoformat(timespec="seconds"),
        }


class DiagnosticLog:
    """
    Per-solve diagnostic collector.

    Every report is mirrored to the IsQP logger at the matching level and
    kept in a bounded history that ends up in the SolveReport.
    Instances are single-owner: one log per solve, so parallel bench
    workers never share one.

    Usage:
        log = DiagnosticLog()
        log.report(DiagnosticLevel.WARNING, "Rank-deficient C",
                   "rank 1 < p = 2", source="problem")
    """

    MAX_HISTORY = 500

    def __init__(self):
        self._history: List[Diagnostic] = []

    def report(
        self,
        level: DiagnosticLevel,
        title: str,
        message: str,
        source: str = "solver",
    ) -> Diagnostic:
        """
        Diaqnostika qeyd et.

        Args:
            level: Səviyyə (INFO, WARNING, ERROR)
            title: Qısa başlıq
            message: Ətraflı mesaj
            source: Mənbə modul

        Returns:
            Yaradılan Diagnostic
        """
        event = Diagnostic(level=level, title=title, message=message, source=source)

        self._history.append(event)
        if len(self._history) > self.MAX_HISTORY:
            self._history = self._history[-self.MAX_HISTORY:]

        log_message = f"[{source}] {title}: {message}"
        if level == DiagnosticLevel.ERROR:
            logger.error(log_message)
        elif level == DiagnosticLevel.WARNING:
            logger.warning(log_message)
        else:
            logger.info(log_message)

        return event

    def warn(self, title: str, message: str, source: str = "solver") -> Diagnostic:
        return self.report(DiagnosticLevel.WARNING, title, message, source)

    def __len__(self) -> int:
        return len(self._history)

    def to_list(self) -> List[dict]:
        return [e.to_dict() for e in self._history]
