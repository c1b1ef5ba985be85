"""
File access shared by the repositories
"""

import json
import logging
from contextlib import contextmanager
from pathlib import Path
from typing import IO, Any, Generator, Union

from ...core.exceptions import ArtifactIOError, CorruptFileError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class FileOperations:
    """Base class for artifact file operations"""

    @staticmethod
    @contextmanager
    def open_artifact(path: PathLike, mode: str = "rb") -> Generator[IO[Any], None, None]:
        """Open a file, translating OS failures into ArtifactIOError"""
        path = Path(path)
        try:
            if "w" in mode or "a" in mode:
                path.parent.mkdir(parents=True, exist_ok=True)
            handle = open(path, mode, **({} if "b" in mode else {"encoding": "utf-8", "newline": ""}))
        except OSError as e:
            raise ArtifactIOError(f"cannot open {path}: {e}") from e
        try:
            yield handle
        except OSError as e:
            raise ArtifactIOError(f"I/O failure on {path}: {e}") from e
        finally:
            handle.close()

    @classmethod
    def write_json(cls, path: PathLike, data: Any) -> None:
        """Write JSON with sorted keys so reruns are byte-identical"""
        with cls.open_artifact(path, "w") as f:
            json.dump(data, f, indent=2, sort_keys=True)
            f.write("\n")
        logger.debug(f"Wrote {path}")

    @classmethod
    def read_json(cls, path: PathLike) -> Any:
        if not Path(path).exists():
            raise ArtifactIOError(f"missing file: {path}")
        with cls.open_artifact(path, "r") as f:
            try:
                return json.load(f)
            except json.JSONDecodeError as e:
                raise CorruptFileError(f"{path} is not valid JSON: {e}") from e

    @classmethod
    def write_bytes(cls, path: PathLike, payload: bytes) -> None:
        with cls.open_artifact(path, "wb") as f:
            f.write(payload)
        logger.debug(f"Wrote {len(payload)} bytes to {path}")

    @classmethod
    def read_bytes(cls, path: PathLike) -> bytes:
        if not Path(path).exists():
            raise ArtifactIOError(f"missing file: {path}")
        with cls.open_artifact(path, "rb") as f:
            return f.read()
