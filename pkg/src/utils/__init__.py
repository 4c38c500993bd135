# IsQP Utils Module
# Logging, konfiqurasiya, diaqnostika və yardımçı funksiyaları saxlayır

from .logger import LOG_LEVELS, get_logger, parse_level

from .helpers import (
    # Config
    get_app_root,
    load_config,
    load_validated_config,
    # JSON / CSV
    to_jsonable,
    read_json,
    dumps_json,
    write_json,
    load_numeric_csv,
    format_csv,
    write_csv,
    # Time & storage
    format_seconds,
    ensure_dir,
    parse_int_list,
)

from .diagnostics import Diagnostic, DiagnosticLevel, DiagnosticLog

__all__ = [
    # Logger
    'LOG_LEVELS', 'get_logger', 'parse_level',
    # Helpers
    'get_app_root', 'load_config', 'load_validated_config',
    'to_jsonable', 'read_json', 'dumps_json', 'write_json', 'load_numeric_csv',
    'format_csv', 'write_csv',
    'format_seconds', 'ensure_dir', 'parse_int_list',
    # Diagnostics
    'Diagnostic', 'DiagnosticLevel', 'DiagnosticLog',
]
