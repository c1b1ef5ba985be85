"""
Latent paths whose decoded densities move along short Wasserstein curves
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Protocol, Sequence, Tuple

import numpy as np

from ..core.exceptions import (
    DegenerateDensityError, DivergenceError, PathEvaluationError, ShapeMismatchError, UndefinedRatioError
)
from ..data.models import GeodesicSettings, TimeGrid
from ..diffcore import AdamState, DiffArray, Tape, adam_step, as_diff, constant, gradients, ops
from ..models.architecture import ModelParams, as_constants, decoder_graph
from .density import PICOSECONDS, density_graph
from .wasserstein import N_QUAD, w2_graph

logger = logging.getLogger(__name__)

RATIO_FLOOR = 1e-12


class ProfileDecoder(Protocol):
    """Maps codes [n, d_z] to profiles [n, L] on ``grid``"""
    grid: TimeGrid
    time_scale: float

    def graph(self, codes: DiffArray) -> DiffArray:
        ...


class ModelDecoder:
    """Eval-mode decoder of a trained model; weights enter the graph as constants"""

    def __init__(self, params: ModelParams, grid: Optional[TimeGrid] = None, time_scale: float = PICOSECONDS):
        self.params = params
        self.grid = grid or TimeGrid.output(params.arch.input_len)
        self.time_scale = time_scale
        self._weights = as_constants(params)

    def graph(self, codes: DiffArray) -> DiffArray:
        return decoder_graph(self.params, self._weights, codes, training=False)

    def __call__(self, codes: np.ndarray) -> np.ndarray:
        return self.graph(constant(np.atleast_2d(codes))).numpy()


@dataclass(frozen=True)
class GeodesicPath:
    """Waypoints [N, d_z]; the first and last rows are the endpoints"""
    waypoints: np.ndarray
    length: Optional[float] = None
    ratio: Optional[float] = None

    @property
    def n_waypoints(self) -> int:
        return int(self.waypoints.shape[0])


def linear_interpolate(z_a: np.ndarray, z_b: np.ndarray, n_waypoints: int) -> GeodesicPath:
    """Evenly spaced waypoints on the straight segment from ``z_a`` to ``z_b``"""
    z_a = np.asarray(z_a, dtype=np.float64).reshape(-1)
    z_b = np.asarray(z_b, dtype=np.float64).reshape(-1)
    if z_a.shape != z_b.shape:
        raise ShapeMismatchError(f"endpoints have shapes {z_a.shape} and {z_b.shape}")
    if n_waypoints < 2:
        raise ShapeMismatchError(f"a path needs at least two waypoints, got {n_waypoints}")
    s = np.linspace(0.0, 1.0, n_waypoints)[:, None]
    waypoints = z_a + s * (z_b - z_a)
    waypoints[0], waypoints[-1] = z_a, z_b
    return GeodesicPath(waypoints=waypoints)


def _path_graph(
    waypoints: DiffArray, decoder: ProfileDecoder, n_quad: int
) -> Tuple[DiffArray, List[DiffArray]]:
    decoded = decoder.graph(waypoints)
    step = decoder.grid.delta_t * decoder.time_scale
    times = decoder.grid.times() * decoder.time_scale
    cdfs = []
    for i in range(decoded.shape[0]):
        try:
            cdfs.append(density_graph(decoded[i], step))
        except DegenerateDensityError as e:
            raise PathEvaluationError(str(e), waypoint=i) from e
    total = w2_graph(cdfs[0], cdfs[1], times, n_quad)
    for i in range(1, len(cdfs) - 1):
        total = ops.add(total, w2_graph(cdfs[i], cdfs[i + 1], times, n_quad))
    return total, cdfs


def _waypoints(path) -> np.ndarray:
    waypoints = path.waypoints if isinstance(path, GeodesicPath) else np.asarray(path, dtype=np.float64)
    if waypoints.ndim != 2 or waypoints.shape[0] < 2:
        raise ShapeMismatchError(f"waypoints must be [N >= 2, d_z], got {waypoints.shape}")
    return waypoints


def path_length(path, decoder: ProfileDecoder, n_quad: int = N_QUAD) -> float:
    """Sum of W2 distances between the decoded densities of consecutive waypoints"""
    length, _ = _path_graph(constant(_waypoints(path)), decoder, n_quad)
    return length.item()


def path_length_graph(waypoints: DiffArray, decoder: ProfileDecoder, n_quad: int = N_QUAD) -> DiffArray:
    return _path_graph(as_diff(waypoints), decoder, n_quad)[0]


def optimality_ratio(path, decoder: ProfileDecoder, n_quad: int = N_QUAD) -> float:
    """Path length over the direct W2 distance of the endpoint densities (>= 1)"""
    waypoints = _waypoints(path)
    length, cdfs = _path_graph(constant(waypoints), decoder, n_quad)
    times = decoder.grid.times() * decoder.time_scale
    direct = w2_graph(cdfs[0], cdfs[-1], times, n_quad).item()
    if direct <= RATIO_FLOOR:
        raise UndefinedRatioError("endpoint densities coincide; optimality ratio undefined")
    return length.item() / direct


def _with_ratio(path: GeodesicPath, decoder: ProfileDecoder, n_quad: int) -> GeodesicPath:
    try:
        return replace(path, ratio=optimality_ratio(path, decoder, n_quad))
    except UndefinedRatioError:
        return path


def optimize_geodesic(
    z_a: np.ndarray,
    z_b: np.ndarray,
    decoder: ProfileDecoder,
    settings: GeodesicSettings = GeodesicSettings(),
) -> GeodesicPath:
    """
    Adam on the interior waypoints of a linearly initialized path.

    The endpoints never move; the shortest path seen is returned, so its length
    never exceeds the linear one.
    """
    start = linear_interpolate(z_a, z_b, settings.waypoints)
    z_a, z_b = start.waypoints[0].copy(), start.waypoints[-1].copy()
    best = start.waypoints
    best_length = path_length(start, decoder, settings.n_quad)
    initial_length = best_length
    interior = start.waypoints[1:-1].copy()
    if interior.size == 0 or settings.steps == 0:
        return _with_ratio(replace(start, length=best_length), decoder, settings.n_quad)

    state = AdamState.for_params([interior], lr=settings.lr)
    for step in range(settings.steps + 1):
        tape = Tape()
        leaf = tape.watch(interior)
        waypoints = ops.concat([constant(z_a[None]), leaf, constant(z_b[None])], axis=0)
        length = path_length_graph(waypoints, decoder, settings.n_quad)
        value = length.item()
        if not math.isfinite(value):
            raise DivergenceError("geodesic path length is not finite", step=step)
        if value < best_length:
            best_length = value
            best = waypoints.numpy()
        if step == settings.steps:
            break
        grad = gradients(tape, length, [leaf])[0]
        interior = adam_step(state, [interior], [grad])[0]

    best[0], best[-1] = z_a, z_b
    logger.info(f"Geodesic length {initial_length:.6f} -> {best_length:.6f} after {settings.steps} steps")
    return _with_ratio(GeodesicPath(waypoints=best, length=best_length), decoder, settings.n_quad)


def path_statistics(
    endpoints: Sequence[Tuple[np.ndarray, np.ndarray]],
    decoder: ProfileDecoder,
    settings: GeodesicSettings = GeodesicSettings(),
) -> Dict[str, object]:
    """Mean and spread of the optimality ratio for linear and optimized paths"""
    records: List[Dict[str, float]] = []
    for index, (z_a, z_b) in enumerate(endpoints):
        linear = linear_interpolate(z_a, z_b, settings.waypoints)
        try:
            linear_ratio = optimality_ratio(linear, decoder, settings.n_quad)
        except UndefinedRatioError:
            logger.warning(f"Skipping endpoint pair {index}: coincident endpoint densities")
            continue
        optimized = optimize_geodesic(z_a, z_b, decoder, settings)
        records.append({
            "pair": index,
            "linear_length": path_length(linear, decoder, settings.n_quad),
            "linear_ratio": linear_ratio,
            "optimized_length": float(optimized.length),
            "optimized_ratio": float(optimized.ratio) if optimized.ratio is not None else linear_ratio,
        })

    def spread(key: str) -> Tuple[float, float]:
        values = np.array([r[key] for r in records], dtype=np.float64)
        return (float(values.mean()), float(values.std())) if len(values) else (float("nan"), float("nan"))

    linear_mean, linear_std = spread("linear_ratio")
    optimized_mean, optimized_std = spread("optimized_ratio")
    return {
        "pairs": records,
        "linear_ratio_mean": linear_mean,
        "linear_ratio_std": linear_std,
        "optimized_ratio_mean": optimized_mean,
        "optimized_ratio_std": optimized_std,
    }
