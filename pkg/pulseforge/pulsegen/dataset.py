"""
Dataset generation: sampled specs through synthesis, propagation and preprocessing
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np

from ..core.exceptions import DegeneratePulseError, UsageError
from ..data.models import (
    DatasetManifest, DatasetRecord, DispersionUnit,
    EnvelopeFamily, FiberProxyParams, FrequencyGrid, ProfileTag, PulseSpec, TimeGrid
)
from ..data.repositories import DatasetRepository
from .preprocessing import SUPPORT_SPAN, SUPPORT_THRESHOLD, preprocess, pulse_energy
from .profiles import IntensityProfile
from .propagation import propagate_splitstep
from .sampling import sample_pulse_spec
from .spectral import synthesize_field, to_intensity

logger = logging.getLogger(__name__)

MAX_ATTEMPTS = 8


@dataclass(frozen=True)
class PulsePair:
    """Input and propagated profile produced from one spec"""
    index: int
    spec: PulseSpec
    attempts: int
    input: IntensityProfile
    propagated: IntensityProfile


@dataclass(frozen=True)
class GenerationOptions:
    frequency_grid: FrequencyGrid = FrequencyGrid()
    output_grid: TimeGrid = TimeGrid.output()
    dispersion_unit: DispersionUnit = DispersionUnit.PICOSECONDS
    support_span: float = SUPPORT_SPAN
    support_threshold: float = SUPPORT_THRESHOLD
    max_attempts: int = MAX_ATTEMPTS


def simulate_pair(
    spec: PulseSpec,
    fiber: FiberProxyParams,
    options: GenerationOptions,
    index: int = 0,
    attempts: int = 1,
) -> PulsePair:
    """Synthesize, propagate and preprocess one spec"""
    field = synthesize_field(spec, options.frequency_grid)
    synthesis_grid = options.frequency_grid.synthesis_grid()
    profiles = []
    for tag, current in (
        (ProfileTag.INPUT, field),
        (ProfileTag.PROPAGATED, propagate_splitstep(field, fiber)),
    ):
        profiles.append(
            preprocess(
                to_intensity(current),
                synthesis_grid,
                options.output_grid,
                support_span=options.support_span,
                threshold=options.support_threshold,
                tag=tag,
            )
        )
    return PulsePair(index, spec, attempts, profiles[0], profiles[1])


def generate_pair(
    master_seed: int,
    index: int,
    fiber: FiberProxyParams,
    options: GenerationOptions = GenerationOptions(),
) -> PulsePair:
    """Draw specs for ``index`` until one yields usable profiles"""
    for attempt in range(options.max_attempts):
        spec = sample_pulse_spec(master_seed, index, attempt, unit=options.dispersion_unit)
        try:
            return simulate_pair(spec, fiber, options, index, attempt + 1)
        except DegeneratePulseError as e:
            logger.info(f"Resampling pulse {index} ({spec.label}, sigma_t={spec.sigma_t:.3f} ps): {e}")
    raise DegeneratePulseError(
        f"pulse {index}: no usable spec after {options.max_attempts} attempts"
    )


def canonical_profiles(
    sigma_t: float = 20.0,
    options: GenerationOptions = GenerationOptions(),
) -> Dict[str, IntensityProfile]:
    """Transform-limited, preprocessed reference shape for every family and order"""
    shapes: Dict[str, IntensityProfile] = {}
    synthesis_grid = options.frequency_grid.synthesis_grid()
    for family in EnvelopeFamily:
        for order in family.orders:
            spec = PulseSpec(envelope=family, order=order, sigma_t=sigma_t)
            raw = to_intensity(synthesize_field(spec, options.frequency_grid))
            shapes[spec.label] = preprocess(
                raw,
                synthesis_grid,
                options.output_grid,
                support_span=options.support_span,
                threshold=options.support_threshold,
            )
    return shapes


def generate_dataset(
    count_pairs: int,
    master_seed: int,
    fiber: FiberProxyParams,
    out_path: Union[str, Path],
    options: GenerationOptions = GenerationOptions(),
    threads: int = 1,
    repository: Optional[DatasetRepository] = None,
) -> DatasetManifest:
    """Generate ``count_pairs`` input/propagated pairs and write them to ``out_path``"""
    if count_pairs < 1:
        raise UsageError(f"count_pairs must be at least 1, got {count_pairs}")
    repository = repository or DatasetRepository()

    logger.info(f"Generating {count_pairs} pulse pairs with seed {master_seed} on {threads} thread(s)")
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        pairs: List[PulsePair] = list(
            pool.map(lambda i: generate_pair(master_seed, i, fiber, options), range(count_pairs))
        )

    profiles = []
    entries = []
    for pair in pairs:
        for profile in (pair.input, pair.propagated):
            profiles.append(profile.values)
            entries.append((pair, profile))

    energies = np.array([pulse_energy(profile) for _, profile in entries])
    energy_max = float(energies.max())
    row_bytes = options.output_grid.n_points * 4
    records = [
        DatasetRecord(
            index=i,
            pair=pair.index,
            tag=profile.tag,
            family=pair.spec.label,
            spec=pair.spec,
            energy=float(energies[i]),
            energy_normalized=float(energies[i] / energy_max),
            offset=i * row_bytes,
            attempts=pair.attempts,
        )
        for i, (pair, profile) in enumerate(entries)
    ]
    manifest = DatasetManifest(
        count=len(records),
        pairs=count_pairs,
        master_seed=master_seed,
        frequency_grid=options.frequency_grid,
        synthesis_grid=options.frequency_grid.synthesis_grid(),
        output_grid=options.output_grid,
        fiber=fiber,
        dispersion_unit=options.dispersion_unit,
        energy_max=energy_max,
        records=records,
    )
    repository.save(out_path, manifest, np.stack(profiles))
    resampled = sum(1 for pair in pairs if pair.attempts > 1)
    logger.info(f"Wrote {manifest.count} profiles to {out_path} ({resampled} pair(s) resampled)")
    return manifest
