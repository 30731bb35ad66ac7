"""Serialization of reports and grids to JSON and CSV."""

import json
import sys
from pathlib import Path
from typing import Any, Optional

import pandas as pd


class FileHandler:
    """Render payloads deterministically and route them to a file or stdout."""

    @staticmethod
    def detect_file_format(file_path: Path) -> str:
        """Detect output format from extension.

        Args:
            file_path: Path to file

        Returns:
            File format ('json' or 'csv')
        """
        suffix = file_path.suffix.lower()
        if suffix == '.json':
            return 'json'
        elif suffix == '.csv':
            return 'csv'
        else:
            raise ValueError(f"Unsupported file format: {suffix}")

    @staticmethod
    def to_json(payload: Any) -> str:
        """Serialize with sorted keys so identical inputs give identical bytes."""
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    @staticmethod
    def to_csv(df: pd.DataFrame, float_format: Optional[str] = None) -> str:
        """Locale-independent CSV: '.' decimals, '\\n' line endings, no index."""
        return df.to_csv(index=False, lineterminator="\n", float_format=float_format)

    @staticmethod
    def write_text(text: str, file_path: Optional[Path] = None):
        """Write text to a file, or to stdout when no path is given.

        Args:
            text: Rendered payload
            file_path: Destination; None means stdout
        """
        if file_path is None:
            sys.stdout.write(text)
            sys.stdout.flush()
            return

        file_path.parent.mkdir(parents=True, exist_ok=True)
        with open(file_path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(text)
