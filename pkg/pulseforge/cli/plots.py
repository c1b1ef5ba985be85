"""
Minimal SVG renderings of the exported plot data
"""

import logging
from pathlib import Path
from typing import List

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from ..data.models import TrainHistory  # noqa: E402
from ..data.repositories import FileOperations  # noqa: E402
from ..data.services import PlotBundle  # noqa: E402

logger = logging.getLogger(__name__)

plt.rcParams["svg.hashsalt"] = "pulseforge"


def _save(fig, path: Path) -> Path:
    with FileOperations.open_artifact(path, "wb") as f:
        fig.savefig(f, format="svg", metadata={"Date": None})
    plt.close(fig)
    logger.debug(f"Rendered {path}")
    return path


def scatter_svg(path: Path, x: np.ndarray, y: np.ndarray, color: np.ndarray, title: str = "") -> Path:
    fig, ax = plt.subplots(figsize=(5, 4))
    points = ax.scatter(x, y, c=color, s=4, cmap="viridis")
    fig.colorbar(points, ax=ax, label="normalized energy")
    ax.set_xlabel("PC 1")
    ax.set_ylabel("PC 2")
    ax.set_title(title)
    return _save(fig, path)


def overlay_svg(path: Path, times: np.ndarray, originals: np.ndarray, reconstructions: np.ndarray) -> Path:
    fig, ax = plt.subplots(figsize=(6, 4))
    t_ps = times * 1e12
    for i, (original, recon) in enumerate(zip(originals, reconstructions)):
        ax.plot(t_ps, original + i, color="black", linewidth=0.8)
        ax.plot(t_ps, recon + i, color="tab:red", linewidth=0.8, linestyle="--")
    ax.set_xlabel("t (ps)")
    ax.set_ylabel("intensity (offset per profile)")
    return _save(fig, path)


def filmstrip_svg(path: Path, times: np.ndarray, profiles: np.ndarray) -> Path:
    fig, axes = plt.subplots(1, len(profiles), figsize=(1.6 * len(profiles), 2), sharey=True)
    for ax, profile in zip(np.atleast_1d(axes), profiles):
        ax.plot(times * 1e12, profile, linewidth=0.8)
        ax.set_xticks([])
    return _save(fig, path)


def loss_curve_svg(path: Path, history: TrainHistory) -> Path:
    fig, ax = plt.subplots(figsize=(5, 4))
    epochs = np.arange(1, history.epochs + 1)
    ax.plot(epochs, history.train_loss, label="train")
    ax.plot(epochs, history.val_loss, label="validation")
    ax.plot(epochs, history.reconstruction, label="reconstruction", linestyle="--")
    ax.set_xlabel("epoch")
    ax.set_ylabel("loss")
    ax.legend()
    return _save(fig, path)


def render_plots(out: Path, bundle: PlotBundle) -> List[Path]:
    """SVG companions of the CSV exports"""
    out = Path(out)
    paths = [
        overlay_svg(out / "reconstructions.svg", bundle.times, bundle.originals, bundle.reconstructions),
        filmstrip_svg(out / "filmstrip.svg", bundle.times, bundle.filmstrip),
    ]
    if bundle.coords.shape[1] >= 2:
        paths.insert(0, scatter_svg(
            out / "pca_scatter.svg", bundle.coords[:, 0], bundle.coords[:, 1], bundle.energies, "latent PCA"
        ))
    return paths
