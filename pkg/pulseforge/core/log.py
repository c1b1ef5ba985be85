"""
Logging setup shared by the library and the CLI
"""

import json
import logging
from pathlib import Path
from typing import Optional, Union

TEXT_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
SIDECAR_NAME = "pulseforge.log"


class JsonFormatter(logging.Formatter):
    """One JSON object per record"""

    def format(self, record: logging.LogRecord) -> str:
        payload = {
            "time": self.formatTime(record),
            "logger": record.name,
            "level": record.levelname,
            "message": record.getMessage(),
        }
        if record.exc_info:
            payload["exception"] = self.formatException(record.exc_info)
        return json.dumps(payload)


def _formatter(fmt: str) -> logging.Formatter:
    if fmt == "json":
        return JsonFormatter()
    return logging.Formatter(TEXT_FORMAT)


def configure_logging(
    level: str = "INFO",
    fmt: str = "text",
    sidecar: Optional[Union[str, Path]] = None,
) -> logging.Logger:
    """Configure the package logger; optionally mirror it into a sidecar file"""
    root = logging.getLogger("pulseforge")
    root.setLevel(level.upper())
    for handler in list(root.handlers):
        root.removeHandler(handler)
        handler.close()

    console = logging.StreamHandler()
    console.setFormatter(_formatter(fmt))
    root.addHandler(console)

    if sidecar is not None:
        path = Path(sidecar)
        if path.is_dir():
            path = path / SIDECAR_NAME
        path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(path, encoding="utf-8")
        file_handler.setFormatter(_formatter(fmt))
        root.addHandler(file_handler)

    root.propagate = False
    return root
