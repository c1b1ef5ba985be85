"""
Differentiable arrays and the tape that records operations on them
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.exceptions import ShapeMismatchError

ArrayLike = Union["DiffArray", np.ndarray, float, int]
VJP = Callable[[np.ndarray], Tuple[Optional[np.ndarray], ...]]


@dataclass(frozen=True, eq=False)
class DiffArray:
    """Array value with an optional handle on a tape"""
    values: np.ndarray
    node_id: Optional[int] = None
    tape: Optional["Tape"] = field(default=None, repr=False, compare=False)

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.values.shape

    @property
    def ndim(self) -> int:
        return self.values.ndim

    @property
    def size(self) -> int:
        return int(self.values.size)

    @property
    def tracked(self) -> bool:
        return self.node_id is not None

    def item(self) -> float:
        return float(self.values.reshape(-1)[0]) if self.values.size == 1 else float("nan")

    def numpy(self) -> np.ndarray:
        return np.array(self.values, copy=True)

    def __len__(self) -> int:
        return self.values.shape[0]

    # Operator sugar; the kinds themselves live in ops

    def __add__(self, other: ArrayLike) -> "DiffArray":
        from . import ops
        return ops.add(self, other)

    def __radd__(self, other: ArrayLike) -> "DiffArray":
        from . import ops
        return ops.add(other, self)

    def __sub__(self, other: ArrayLike) -> "DiffArray":
        from . import ops
        return ops.sub(self, other)

    def __rsub__(self, other: ArrayLike) -> "DiffArray":
        from . import ops
        return ops.sub(other, self)

    def __mul__(self, other: ArrayLike) -> "DiffArray":
        from . import ops
        return ops.mul(self, other)

    def __rmul__(self, other: ArrayLike) -> "DiffArray":
        from . import ops
        return ops.mul(other, self)

    def __truediv__(self, other: ArrayLike) -> "DiffArray":
        from . import ops
        return ops.div(self, other)

    def __rtruediv__(self, other: ArrayLike) -> "DiffArray":
        from . import ops
        return ops.div(other, self)

    def __neg__(self) -> "DiffArray":
        from . import ops
        return ops.mul(self, -1.0)

    def __pow__(self, exponent: float) -> "DiffArray":
        from . import ops
        return ops.power(self, exponent)

    def __matmul__(self, other: ArrayLike) -> "DiffArray":
        from . import ops
        return ops.matmul(self, other)

    def __getitem__(self, key) -> "DiffArray":
        from . import ops
        return ops.index(self, key)


@dataclass(frozen=True)
class TapeRecord:
    """One recorded operation"""
    kind: str
    inputs: Tuple[Optional[int], ...]
    output: int
    vjp: VJP = field(repr=False)


class Tape:
    """Single-writer record of operations in execution order"""

    def __init__(self) -> None:
        self.records: List[TapeRecord] = []
        self._next_id = 0

    def __len__(self) -> int:
        return len(self.records)

    def _new_id(self) -> int:
        node_id = self._next_id
        self._next_id += 1
        return node_id

    def watch(self, values: Union[np.ndarray, float]) -> DiffArray:
        """Register a leaf whose gradient is wanted"""
        array = np.array(values, dtype=np.float64, copy=True)
        if not np.all(np.isfinite(array)):
            raise ValueError("leaf values must be finite")
        return DiffArray(array, self._new_id(), self)

    def record(
        self,
        kind: str,
        inputs: Sequence[DiffArray],
        output: np.ndarray,
        vjp: VJP,
    ) -> DiffArray:
        node_id = self._new_id()
        self.records.append(
            TapeRecord(kind, tuple(x.node_id for x in inputs), node_id, vjp)
        )
        return DiffArray(output, node_id, self)


def constant(values: Union[np.ndarray, float, int]) -> DiffArray:
    """Untracked array"""
    return DiffArray(np.asarray(values, dtype=np.float64))


def as_diff(value: ArrayLike) -> DiffArray:
    if isinstance(value, DiffArray):
        return value
    return constant(value)


def backward(tape: Tape, loss: DiffArray) -> Dict[int, np.ndarray]:
    """Reverse accumulation from a scalar loss; returns gradients by node id"""
    if loss.size != 1:
        raise ShapeMismatchError(f"loss must be scalar, got shape {loss.shape}")
    if loss.tape is not tape or loss.node_id is None:
        raise ValueError("loss was not recorded on this tape")

    grads: Dict[int, np.ndarray] = {loss.node_id: np.ones_like(loss.values)}
    for record in reversed(tape.records):
        upstream = grads.pop(record.output, None)
        if upstream is None:
            continue
        for node_id, grad in zip(record.inputs, record.vjp(upstream)):
            if node_id is None or grad is None:
                continue
            if node_id in grads:
                grads[node_id] = grads[node_id] + grad
            else:
                grads[node_id] = np.array(grad, dtype=np.float64, copy=True)
    return grads


def gradients(tape: Tape, loss: DiffArray, wrt: Sequence[DiffArray]) -> List[np.ndarray]:
    """Gradients of loss with respect to the given leaves (zeros if unreached)"""
    grads = backward(tape, loss)
    result = []
    for leaf in wrt:
        if leaf.node_id is None or leaf.tape is not tape:
            raise ValueError("gradient requested for an array not watched on this tape")
        result.append(grads.get(leaf.node_id, np.zeros_like(leaf.values)))
    return result
