"""Colorful diagnostics logger for the QES toolkit.

Everything goes to stderr so that stdout carries only data.
"""

import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Optional

from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table
from rich.theme import Theme

custom_theme = Theme({
    "info": "cyan",
    "warning": "yellow bold",
    "error": "red bold",
    "success": "green bold",
    "highlight": "magenta bold",
    "stat": "blue",
})

console = Console(theme=custom_theme, stderr=True)


class QESLogger:
    """Logger with rich stderr output and optional file logging."""

    def __init__(self, name: str = "spiked_qes", log_dir: Optional[Path] = None,
                 level: str = "WARNING", quiet: bool = False):
        """Initialize the logger.

        Args:
            name: Logger name (the package logger, so library modules inherit it)
            log_dir: Directory to save log files
            level: Console logging level
            quiet: Suppress the decorated console helpers (success, stat, ...)
        """
        self.quiet = quiet
        self.logger = logging.getLogger(name)
        self.logger.setLevel(logging.DEBUG)
        self.logger.handlers.clear()

        console_handler = RichHandler(
            console=console,
            rich_tracebacks=True,
            show_time=False,
            show_path=False,
        )
        console_handler.setLevel(getattr(logging, level.upper(), logging.WARNING))
        self.logger.addHandler(console_handler)

        if log_dir:
            log_dir.mkdir(parents=True, exist_ok=True)
            timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
            log_file = log_dir / f"qes_{timestamp}.log"

            file_handler = logging.FileHandler(log_file, encoding='utf-8')
            file_handler.setLevel(logging.DEBUG)
            formatter = logging.Formatter(
                '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
                datefmt='%Y-%m-%d %H:%M:%S'
            )
            file_handler.setFormatter(formatter)
            self.logger.addHandler(file_handler)

            self.log_file = log_file
        else:
            self.log_file = None

    def info(self, message: str):
        """Log info message."""
        self.logger.info(message)

    def debug(self, message: str):
        """Log debug message."""
        self.logger.debug(message)

    def success(self, message: str):
        """Log success message in green."""
        if not self.quiet:
            console.print(f"✓ {message}", style="success")
        self.logger.debug(f"SUCCESS: {message}")

    def warning(self, message: str):
        """Log warning message."""
        self.logger.warning(message)

    def error(self, message: str):
        """Log error message in red."""
        console.print(f"✗ {message}", style="error")
        self.logger.debug(f"ERROR: {message}")

    def stat(self, label: str, value: Any):
        """Log a statistic in a formatted way."""
        if not self.quiet:
            console.print(f"  {label}: [stat]{value}[/stat]")
        self.logger.debug(f"{label}: {value}")

    def section(self, title: str):
        """Print a section header."""
        if not self.quiet:
            console.rule(f"[bold cyan]{title}[/bold cyan]")
        self.logger.debug(f"== {title} ==")

    def print_table(self, title: str, data: dict):
        """Print key/value data as a table."""
        table = Table(title=title, show_header=True, header_style="bold magenta")
        table.add_column("Field", style="cyan", no_wrap=True)
        table.add_column("Value", style="green")

        for key, value in data.items():
            table.add_row(str(key), str(value))

        if not self.quiet:
            console.print(table)

        self.logger.debug(title)
        for key, value in data.items():
            self.logger.debug(f"  {key}: {value}")
