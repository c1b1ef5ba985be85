"""
Repository for analysis exports (CSV, JSON, plain text)
"""

import csv
import logging
from typing import Any, Iterable, List, Sequence

import numpy as np

from .base import BaseRepository
from .files import PathLike

logger = logging.getLogger(__name__)

EMISSION_FORMAT = "%.9e"


def format_value(value: Any) -> str:
    """Locale-independent text for one CSV cell"""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


class ExportRepository(BaseRepository):
    """Writes and reads the tabular and text artifacts of a run"""

    def __init__(self):
        super().__init__("export")

    def write_csv(self, path: PathLike, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> int:
        count = 0
        with self.open_artifact(path, "w") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([format_value(v) for v in row])
                count += 1
        logger.debug(f"Wrote {count} rows to {path}")
        return count

    def read_csv(self, path: PathLike) -> List[dict]:
        with self.open_artifact(path, "r") as f:
            return list(csv.DictReader(f))

    def write_matrix(self, path: PathLike, matrix: np.ndarray, prefix: str = "c") -> int:
        """2-D array with generated column names"""
        matrix = np.atleast_2d(matrix)
        header = [f"{prefix}{j}" for j in range(matrix.shape[1])]
        return self.write_csv(path, header, matrix.tolist())

    def write_emission_times(self, path: PathLike, times: np.ndarray) -> None:
        """One value per line, seconds in scientific notation"""
        with self.open_artifact(path, "w") as f:
            for t in np.asarray(times, dtype=np.float64):
                f.write(EMISSION_FORMAT % t + "\n")
        logger.debug(f"Wrote {len(times)} emission times to {path}")

    def read_emission_times(self, path: PathLike) -> np.ndarray:
        with self.open_artifact(path, "r") as f:
            return np.array([float(line) for line in f if line.strip()])
