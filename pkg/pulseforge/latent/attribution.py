"""
Naming GMM components after the canonical envelope they decode closest to
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List

import numpy as np

from ..core.exceptions import DegenerateDensityError
from ..data.models import TimeGrid
from ..pulsegen.profiles import IntensityProfile
from ..transport.density import normalize_to_density
from ..transport.wasserstein import N_QUAD, w2_1d
from .gmm import GmmModel

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ComponentAttribution:
    component: int
    label: str
    distance: float
    distances: Dict[str, float]


def attribute_components(
    gmm: GmmModel,
    decoder: Callable[[np.ndarray], np.ndarray],
    canonical: Dict[str, IntensityProfile],
    grid: TimeGrid,
    n_quad: int = N_QUAD,
) -> List[ComponentAttribution]:
    """Decode every component mean and pick the canonical profile at the smallest W2"""
    references = {
        label: normalize_to_density(profile.values, profile.grid) for label, profile in canonical.items()
    }
    decoded = np.atleast_2d(decoder(gmm.means))
    result = []
    for k, values in enumerate(decoded):
        try:
            density = normalize_to_density(values, grid)
        except DegenerateDensityError:
            logger.warning(f"Component {k} decodes to a profile without mass; left unattributed")
            result.append(ComponentAttribution(k, "", float("nan"), {}))
            continue
        distances = {label: w2_1d(density, ref, n_quad) for label, ref in references.items()}
        label = min(distances, key=distances.__getitem__)
        result.append(ComponentAttribution(k, label, distances[label], distances))
    return result
