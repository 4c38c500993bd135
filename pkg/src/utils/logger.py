"""
IsQP Logger Module
Solver üçün mərkəzləşdirilmiş logging sistemi.

Console lines go to stderr (stdout is reserved for the JSON report and CSV
tables); a daily file under data/logs keeps the DEBUG stream with the
per-iteration lines.  ISQP_LOG_DIR moves the file, an empty value disables
it; ISQP_LOG_LEVEL sets the console threshold.
"""

import logging
import os
from datetime import datetime
from typing import Optional

LOG_LEVELS = ("debug", "info", "warning", "error")
DEFAULT_CONSOLE_LEVEL = "info"


def parse_level(name: str) -> int:
    """'debug' | 'info' | 'warning' | 'error' -> logging level."""
    key = name.strip().lower()
    if key not in LOG_LEVELS:
        raise ValueError(f"log level must be one of {', '.join(LOG_LEVELS)}, got {name!r}")
    return getattr(logging, key.upper())


class IsQpLogger:
    """IsQP üçün xüsusi logger sinfi (singleton)."""

    _instance: Optional['IsQpLogger'] = None
    _initialized: bool = False

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if IsQpLogger._initialized:
            return

        self.logger = logging.getLogger('IsQP')
        self.logger.setLevel(logging.DEBUG)

        self.formatter = logging.Formatter(
            '[%(asctime)s] [%(levelname)s] [%(module)s] %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )

        self.console_handler = logging.StreamHandler()
        self.console_handler.setFormatter(self.formatter)
        self.set_console_level(os.environ.get('ISQP_LOG_LEVEL') or DEFAULT_CONSOLE_LEVEL)
        self.logger.addHandler(self.console_handler)

        self.log_file = self._setup_file_handler()

        IsQpLogger._initialized = True
        self.logger.debug(f"IsQP Logger initialized (file={self.log_file or 'off'})")

    def _setup_file_handler(self) -> Optional[str]:
        """Gündəlik DEBUG faylı; yaradıla bilməsə None."""
        log_dir = os.environ.get('ISQP_LOG_DIR')
        if log_dir == "":
            return None
        if log_dir is None:
            log_dir = os.path.join(
                os.path.dirname(os.path.dirname(os.path.dirname(__file__))),
                'data', 'logs'
            )
        try:
            os.makedirs(log_dir, exist_ok=True)
        except OSError:
            return None

        log_file = os.path.join(log_dir, f"isqp_{datetime.now().strftime('%Y%m%d')}.log")
        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(self.formatter)
        self.logger.addHandler(file_handler)
        return log_file

    def set_console_level(self, name: str) -> None:
        """
        stderr threshold (CLI --log-level).

        Raises:
            ValueError: unknown level name
        """
        self.console_handler.setLevel(parse_level(name))

    @property
    def console_level(self) -> int:
        return self.console_handler.level

    def debug(self, message: str):
        self.logger.debug(message)

    def info(self, message: str):
        self.logger.info(message)

    def warning(self, message: str):
        self.logger.warning(message)

    def error(self, message: str):
        self.logger.error(message)

    def is_debug_enabled(self) -> bool:
        """Some handler accepts DEBUG (per-iteration lines are worth formatting)."""
        return any(h.level <= logging.DEBUG for h in self.logger.handlers)


_logger: Optional[IsQpLogger] = None


def get_logger() -> IsQpLogger:
    """Global logger instance-ı qaytarır."""
    global _logger
    if _logger is None:
        _logger = IsQpLogger()
    return _logger
