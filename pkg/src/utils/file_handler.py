"""
Output file handling for qwalk-forge.
Writes the CSV tables, JSON summaries and SVG figures of every command.
"""

import csv
import json
import logging
from pathlib import Path
from typing import Any, Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from src.config.paths import output_dir
from src.config.settings import CSV_SIGNIFICANT_DIGITS

logger = logging.getLogger(__name__)

FORMATS = ('csv', 'json', 'svg')


def format_number(value: Any) -> str:
    """Render one CSV cell; floats keep CSV_SIGNIFICANT_DIGITS significant digits."""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f'{float(value):.{CSV_SIGNIFICANT_DIGITS}g}'
    return str(value)


def _to_json(value: Any) -> Any:
    if isinstance(value, (complex, np.complexfloating)):
        return {'re': float(value.real), 'im': float(value.imag)}
    if isinstance(value, np.ndarray):
        if np.iscomplexobj(value):
            return np.vectorize(_to_json, otypes=[object])(value).tolist()
        return value.tolist()
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, (tuple, set)):
        return [_to_json(v) for v in value]
    raise TypeError(f'Cannot serialize {type(value).__name__} to JSON')


class OutputWriter:
    """Writes command results into one output directory."""

    def __init__(
        self,
        out_dir: Union[None, str, Path] = None,
        formats: Sequence[str] = ('csv', 'json'),
    ):
        """
        Initialize the writer.

        Args:
            out_dir: Optional custom output directory. If None, uses the default output root.
            formats: Subset of 'csv', 'json', 'svg' to emit

        Raises:
            ValueError: If an unknown format is requested
            NotADirectoryError: If out_dir exists but is not a directory
        """
        unknown = [f for f in formats if f not in FORMATS]
        if unknown:
            raise ValueError(f'Unknown output formats: {unknown}; choose from {FORMATS}')
        self.formats = tuple(formats)
        self.out_dir = self._validate_out_dir(out_dir)

        if out_dir:
            logger.warning(f'Using NON-default output directory: {self.out_dir}')

        self.out_dir.mkdir(parents=True, exist_ok=True)

    def _validate_out_dir(self, out_dir: Union[None, str, Path]) -> Path:
        """
        Validate and return the output directory path.

        Raises:
            NotADirectoryError: If the path exists and is a regular file
        """
        path = Path(out_dir) if out_dir else output_dir()
        if path.exists() and not path.is_dir():
            raise NotADirectoryError(f'Output path is not a directory: {path}')
        return path

    def wants(self, fmt: str) -> bool:
        return fmt in self.formats

    def path(self, name: str) -> Path:
        return self.out_dir / name

    def write_csv(
        self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any]]
    ) -> Optional[Path]:
        """
        Write a comma-separated table with a header row.

        Args:
            name: File name inside the output directory
            header: Column names
            rows: Row values; floats are written with 17 significant digits

        Returns:
            Path of the written file, or None when CSV output is disabled

        Raises:
            IOError: If the file cannot be written
        """
        if not self.wants('csv'):
            return None
        csv_path = self.path(name)
        try:
            with open(csv_path, 'w', encoding='utf-8', newline='') as f:
                writer = csv.writer(f, lineterminator='\n')
                writer.writerow(header)
                for row in rows:
                    writer.writerow([format_number(value) for value in row])
        except IOError as e:
            logger.error(f'Failed to write {csv_path}: {e}')
            raise
        logger.info(f'Wrote {csv_path}')
        return csv_path

    def write_json(self, name: str, document: Mapping[str, Any]) -> Optional[Path]:
        """
        Write a JSON document with sorted keys, so equal inputs give equal bytes.

        Raises:
            IOError: If the file cannot be written
        """
        if not self.wants('json'):
            return None
        json_path = self.path(name)
        try:
            with open(json_path, 'w', encoding='utf-8') as f:
                json.dump(document, f, indent=2, sort_keys=True, default=_to_json)
                f.write('\n')
        except IOError as e:
            logger.error(f'Failed to write {json_path}: {e}')
            raise
        logger.info(f'Wrote {json_path}')
        return json_path

    def svg_path(self, name: str) -> Optional[Path]:
        """Target path for a figure, or None when SVG output is disabled."""
        if not self.wants('svg'):
            return None
        return self.path(name)
