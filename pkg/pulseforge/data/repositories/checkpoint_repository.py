"""
Repository for PFWM model checkpoints
"""

import logging
import struct
from typing import Any, Dict, List, Tuple

import numpy as np

from ...core.exceptions import CorruptFileError, VersionMismatchError
from .base import BaseRepository
from .files import PathLike

logger = logging.getLogger(__name__)

MAGIC = b"PFWM"
CHECKPOINT_VERSION = 1
PREFIX = struct.Struct("<4sII")
BLOB_DTYPE = np.dtype("<f4")


class CheckpointRepository(BaseRepository):
    """Binary checkpoint: magic, u32 version, u32 header length, JSON header, f32 blob"""

    def __init__(self):
        super().__init__("checkpoint")

    def encode(self, header: Dict[str, Any], tensors: List[Tuple[str, np.ndarray]]) -> bytes:
        header = dict(header)
        header["tensors"] = [
            {"name": name, "shape": list(array.shape)} for name, array in tensors
        ]
        header_bytes = (self._serialize_json(header) or "{}").encode("utf-8")
        blob = b"".join(
            np.ascontiguousarray(array, dtype=BLOB_DTYPE).tobytes() for _, array in tensors
        )
        return PREFIX.pack(MAGIC, CHECKPOINT_VERSION, len(header_bytes)) + header_bytes + blob

    def decode(self, payload: bytes) -> Tuple[Dict[str, Any], Dict[str, np.ndarray]]:
        if len(payload) < PREFIX.size:
            raise CorruptFileError("checkpoint is truncated before its header")
        magic, version, header_len = PREFIX.unpack_from(payload)
        if magic != MAGIC:
            raise CorruptFileError(f"not a checkpoint file (magic {magic!r})")
        if version != CHECKPOINT_VERSION:
            raise VersionMismatchError(
                f"checkpoint version {version} is not supported (expected {CHECKPOINT_VERSION})"
            )
        start = PREFIX.size
        if len(payload) < start + header_len:
            raise CorruptFileError("checkpoint is truncated inside its header")
        header = self._deserialize_json(payload[start:start + header_len].decode("utf-8", errors="replace"))
        if not isinstance(header, dict) or not isinstance(header.get("tensors"), list):
            raise CorruptFileError("checkpoint header lacks a tensor table")

        offset = start + header_len
        tensors: Dict[str, np.ndarray] = {}
        for entry in header["tensors"]:
            shape = tuple(int(s) for s in entry["shape"])
            nbytes = int(np.prod(shape, dtype=np.int64)) * BLOB_DTYPE.itemsize
            if offset + nbytes > len(payload):
                raise CorruptFileError(f"checkpoint is truncated inside tensor {entry['name']}")
            tensors[entry["name"]] = (
                np.frombuffer(payload, dtype=BLOB_DTYPE, count=nbytes // BLOB_DTYPE.itemsize, offset=offset)
                .astype(np.float32)
                .reshape(shape)
            )
            offset += nbytes
        if offset != len(payload):
            raise CorruptFileError(f"checkpoint has {len(payload) - offset} trailing bytes")
        return header, tensors

    def save(self, path: PathLike, header: Dict[str, Any], tensors: List[Tuple[str, np.ndarray]]) -> None:
        self.write_bytes(path, self.encode(header, tensors))
        logger.info(f"Saved checkpoint with {len(tensors)} tensors to {path}")

    def load(self, path: PathLike) -> Tuple[Dict[str, Any], Dict[str, np.ndarray]]:
        return self.decode(self.read_bytes(path))
