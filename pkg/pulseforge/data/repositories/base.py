"""
Base repository classes
"""

import json
from typing import Any, Generic, Optional, TypeVar

from pydantic import BaseModel, ValidationError

from ...core.exceptions import CorruptFileError
from .files import FileOperations

T = TypeVar('T', bound=BaseModel)


class BaseRepository(Generic[T], FileOperations):
    """Base repository providing JSON (de)serialization of models"""

    def __init__(self, artifact_name: str):
        self.artifact_name = artifact_name

    def _serialize_json(self, data: Any) -> Optional[str]:
        """Serialize data to compact JSON with sorted keys"""
        return json.dumps(data, sort_keys=True, separators=(",", ":")) if data is not None else None

    def _deserialize_json(self, data: Any) -> Any:
        """Deserialize JSON data or return if already deserialized"""
        if data is None:
            return None
        if isinstance(data, (str, bytes)):
            try:
                return json.loads(data)
            except json.JSONDecodeError as e:
                raise CorruptFileError(f"{self.artifact_name}: malformed JSON: {e}") from e
        return data

    def _parse_model(self, model: type, data: Any) -> Any:
        """Validate a decoded document against a pydantic model"""
        try:
            return model.model_validate(self._deserialize_json(data))
        except ValidationError as e:
            raise CorruptFileError(f"{self.artifact_name}: {e}") from e
