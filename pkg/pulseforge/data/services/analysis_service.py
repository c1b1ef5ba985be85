"""
Business logic service for latent analysis, sampling and path exports
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from ...core.exceptions import CorruptFileError, ShapeMismatchError, UndefinedRatioError
from ...latent.attribution import attribute_components
from ...latent.gmm import GmmModel, gmm_fit_em, gmm_predict, normalized_pairwise_w2, sample_gmm
from ...latent.pca import pca_fit, pca_project
from ...models.architecture import ModelParams, decode, encode_mean
from ...models.evaluation import encode_all, evaluate_model, reconstruct_all
from ...pulsegen.dataset import GenerationOptions, canonical_profiles
from ...pulsegen.sampling import derive_seed
from ...transport.density import normalize_to_density
from ...transport.geodesic import (
    GeodesicPath, ModelDecoder, linear_interpolate, optimality_ratio, optimize_geodesic, path_length,
    path_statistics
)
from ...transport.sampling import emission_histogram, histogram_l1, sample_emission_times
from ..models import AnalysisSettings, DatasetManifest, EvalReport, GeodesicSettings, SamplingSettings
from ..repositories import ExportRepository, RunRepository
from ..repositories.run_repository import GMM_FILE
from ..validation import DataValidator

logger = logging.getLogger(__name__)

OVERLAY_COUNT = 8
FILMSTRIP_WAYPOINTS = 10


@dataclass(frozen=True)
class PlotBundle:
    """Arrays behind the exported plot data"""
    times: np.ndarray
    coords: np.ndarray
    energies: np.ndarray
    families: List[str]
    originals: np.ndarray
    reconstructions: np.ndarray
    filmstrip: np.ndarray


def _order_key(label: str) -> tuple:
    return (label[0] != "G", label[0], int(label[1:]) if label[1:].isdigit() else 0)


class AnalysisService:
    """Service for evaluation reports, GMM fits, emission sampling and latent paths"""

    def __init__(self):
        self.exports = ExportRepository()
        self.runs = RunRepository()

    def evaluate(
        self,
        params: ModelParams,
        profiles: np.ndarray,
        test_indices: np.ndarray,
        out: Union[str, Path],
        energies: Optional[np.ndarray] = None,
        settings: AnalysisSettings = AnalysisSettings(),
    ) -> EvalReport:
        """Held-out metrics written as JSON plus a per-sample CSV beside it"""
        report = evaluate_model(
            params,
            profiles[test_indices],
            settings,
            energies=energies[test_indices] if energies is not None else None,
        )
        report.details["test_size"] = int(len(test_indices))
        out = Path(out)
        self.runs.save_document(out, report.model_dump(mode="json"))
        rows = zip(test_indices.tolist(), report.per_sample_mse, report.details["per_sample_snr_db"])
        self.exports.write_csv(out.with_suffix(".csv"), ["index", "mse", "snr_db"], rows)
        return report

    def fit_gmm(
        self,
        params: ModelParams,
        profiles: np.ndarray,
        components: int,
        out: Union[str, Path],
        seed: int = 0,
        settings: AnalysisSettings = AnalysisSettings(),
        options: GenerationOptions = GenerationOptions(),
    ) -> Dict[str, Any]:
        """Mixture over the latent codes of every profile, with distances and decoded means"""
        out = Path(out)
        codes = encode_all(params, profiles)
        gmm = gmm_fit_em(codes, components, seed, settings.gmm_max_iter, settings.gmm_tol, settings.reg_covar)
        decoded = decode(params, gmm.means)
        grid = ModelDecoder(params).grid
        attributions = attribute_components(
            gmm, lambda z: decode(params, z), canonical_profiles(options=options), grid
        )

        document = gmm.to_dict()
        document["labels"] = [a.label for a in attributions]
        document["attribution_w2"] = [a.distance for a in attributions]
        self.runs.save_document(out / GMM_FILE, document)
        self.exports.write_matrix(out / "decoded_means.csv", decoded, prefix="s")
        assignments = gmm_predict(gmm, codes)
        self.exports.write_csv(out / "assignments.csv", ["index", "component"], enumerate(assignments.tolist()))
        summary: Dict[str, Any] = {
            "components": components,
            "weights": gmm.weights.tolist(),
            "labels": document["labels"],
            "converged": gmm.converged,
            "log_likelihood": gmm.log_likelihoods[-1],
        }
        if components >= 2:
            matrix = normalized_pairwise_w2(gmm)
            self.exports.write_matrix(out / "w2_matrix.csv", matrix, prefix="k")
            summary["row_mean_w2"] = matrix.mean(axis=1).tolist()
        return summary

    def load_gmm(self, path: Union[str, Path]) -> GmmModel:
        data = self.runs.read_json(path)
        errors = DataValidator.validate_gmm_document(data)
        if errors:
            raise CorruptFileError(f"Validation errors: {', '.join(errors)}")
        try:
            return GmmModel.from_dict(data)
        except (ShapeMismatchError, ValueError, TypeError) as e:
            raise CorruptFileError(f"{path}: {e}") from e

    def sample(
        self,
        params: ModelParams,
        out: Union[str, Path],
        gmm: Optional[GmmModel] = None,
        seed: int = 0,
        settings: SamplingSettings = SamplingSettings(),
    ) -> Dict[str, Any]:
        """Decode latent draws and export emission-time samples and histograms per pulse"""
        out = Path(out)
        if gmm is not None:
            if gmm.dim != params.arch.latent_dim:
                raise CorruptFileError(
                    f"GMM has dimension {gmm.dim}, model latent dimension is {params.arch.latent_dim}"
                )
            codes = sample_gmm(gmm, settings.count, seed)
        else:
            codes = np.random.default_rng(seed).standard_normal((settings.count, params.arch.latent_dim))
        decoder = ModelDecoder(params)
        profiles = decoder(codes)
        self.exports.write_matrix(out / "codes.csv", codes, prefix="z")
        self.exports.write_matrix(out / "decoded.csv", profiles, prefix="s")

        l1 = []
        for i, profile in enumerate(profiles):
            density = normalize_to_density(profile, decoder.grid, decoder.time_scale)
            times = sample_emission_times(density, settings.particles, seed=derive_seed(seed, i))
            histogram = emission_histogram(
                times, settings.bins, (float(density.times[0]), float(density.times[-1]))
            )
            self.exports.write_emission_times(out / f"emission_{i:03d}.txt", density.to_seconds(times))
            edges = density.to_seconds(histogram.edges)
            rows = zip(edges[:-1], edges[1:], histogram.counts.astype(int), histogram.density * density.time_scale)
            self.exports.write_csv(
                out / f"histogram_{i:03d}.csv", ["t_left_s", "t_right_s", "count", "density_per_s"], rows
            )
            l1.append(histogram_l1(density, times, settings.bins))
        summary = {"count": settings.count, "particles": settings.particles, "histogram_l1": l1}
        self.runs.save_document(out / "sample_summary.json", summary)
        return summary

    def _export_path(self, out: Path, name: str, path: GeodesicPath, decoder: ModelDecoder) -> None:
        self.exports.write_matrix(out / f"{name}_waypoints.csv", path.waypoints, prefix="z")
        self.exports.write_matrix(out / f"{name}_profiles.csv", decoder(path.waypoints), prefix="s")

    def interpolate(
        self,
        params: ModelParams,
        z_a: np.ndarray,
        z_b: np.ndarray,
        out: Union[str, Path],
        optimize: bool = True,
        settings: GeodesicSettings = GeodesicSettings(),
    ) -> Dict[str, Any]:
        """Linear and optionally optimized paths with their lengths and optimality ratios"""
        out = Path(out)
        decoder = ModelDecoder(params)
        linear = linear_interpolate(z_a, z_b, settings.waypoints)
        summary: Dict[str, Any] = {"waypoints": settings.waypoints, "linear": self._describe(linear, decoder, settings)}
        self._export_path(out, "linear", linear, decoder)
        if optimize:
            optimized = optimize_geodesic(z_a, z_b, decoder, settings)
            summary["optimized"] = self._describe(optimized, decoder, settings)
            self._export_path(out, "optimized", optimized, decoder)
        self.runs.save_document(out / "summary.json", summary)
        return summary

    def _describe(self, path: GeodesicPath, decoder: ModelDecoder, settings: GeodesicSettings) -> Dict[str, Any]:
        length = path.length if path.length is not None else path_length(path, decoder, settings.n_quad)
        try:
            ratio: Optional[float] = optimality_ratio(path, decoder, settings.n_quad)
        except UndefinedRatioError:
            ratio = None
        return {"length": length, "ratio": ratio}

    def path_statistics(
        self,
        params: ModelParams,
        codes: np.ndarray,
        pairs: int,
        out: Union[str, Path],
        seed: int = 0,
        settings: GeodesicSettings = GeodesicSettings(),
    ) -> Dict[str, Any]:
        """Optimality ratios over random pairs of dataset codes"""
        rng = np.random.default_rng(seed)
        chosen = [rng.choice(len(codes), size=2, replace=False) for _ in range(pairs)]
        endpoints = [(codes[a], codes[b]) for a, b in chosen]
        stats = path_statistics(endpoints, ModelDecoder(params), settings)
        self.runs.save_document(Path(out) / "statistics.json", stats)
        return stats

    def export_plot_data(
        self,
        params: ModelParams,
        manifest: DatasetManifest,
        profiles: np.ndarray,
        test_indices: Sequence[int],
        out: Union[str, Path],
        options: GenerationOptions = GenerationOptions(),
        settings: AnalysisSettings = AnalysisSettings(),
    ) -> PlotBundle:
        """PCA scatter, family trajectories, reconstruction overlays and an interpolation filmstrip"""
        out = Path(out)
        codes = encode_all(params, profiles)
        pca = pca_fit(codes)
        k = min(settings.pca_components, pca.dim)
        coords = pca_project(pca, codes, k)
        energies = np.array([r.energy_normalized for r in manifest.records])
        families = [r.family for r in manifest.records]
        header = [f"pc{j + 1}" for j in range(k)] + ["energy", "family", "tag"]
        rows = (
            list(c) + [e, f, r.tag.value]
            for c, e, f, r in zip(coords.tolist(), energies.tolist(), families, manifest.records)
        )
        self.exports.write_csv(out / "pca_scatter.csv", header, rows)

        canonical = canonical_profiles(options=options)
        labels = sorted(canonical, key=_order_key)
        shapes = np.stack([canonical[label].values for label in labels])
        if shapes.shape[1] == params.arch.input_len:
            trajectory = pca_project(pca, encode_mean(params, shapes), min(2, pca.dim))
            rows = (
                [label, label[0], int(label[1:]) if label[1:] else 1] + list(point)
                for label, point in zip(labels, trajectory.tolist())
            )
            self.exports.write_csv(
                out / "trajectories.csv",
                ["label", "family", "order"] + [f"pc{j + 1}" for j in range(trajectory.shape[1])],
                rows,
            )
        else:
            logger.warning("Canonical profiles do not match the model input length; trajectories skipped")

        test = np.asarray(test_indices, dtype=np.int64)[:OVERLAY_COUNT]
        times = manifest.output_grid.times()
        originals = profiles[test]
        reconstructions = reconstruct_all(params, originals)
        self.exports.write_csv(
            out / "reconstructions.csv",
            ["record", "t_s", "original", "reconstruction"],
            (
                [int(record), t, o, r]
                for record, original, recon in zip(test.tolist(), originals, reconstructions)
                for t, o, r in zip(times.tolist(), original.tolist(), recon.tolist())
            ),
        )

        ends = codes[test[:2]] if len(test) >= 2 else codes[:2]
        strip = linear_interpolate(ends[0], ends[-1], FILMSTRIP_WAYPOINTS)
        filmstrip = decode(params, strip.waypoints)
        self.exports.write_csv(
            out / "filmstrip.csv",
            ["waypoint", "t_s", "intensity"],
            ([i, t, v] for i, row in enumerate(filmstrip) for t, v in zip(times.tolist(), row.tolist())),
        )
        return PlotBundle(times, coords, energies, families, originals, reconstructions, filmstrip)
