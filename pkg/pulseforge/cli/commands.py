"""
Subcommand implementations; each returns the process exit code
"""

import argparse
import json
import logging
from pathlib import Path
from typing import Any, Dict, Type, TypeVar

import numpy as np
from pydantic import BaseModel, ValidationError

from ..core.exceptions import EXIT_OK, InconsistentArtifactError, UsageError
from ..data.models import (
    AnalysisSettings, ArchConfig, DispersionUnit, FiberProxyParams, FrequencyGrid, GeodesicSettings,
    SamplingSettings, TimeGrid, TrainConfig
)
from ..data.repositories import ExportRepository
from ..data.repositories.run_repository import CHECKPOINT_FILE, HISTORY_FILE, RUN_CONFIG_FILE, SPLIT_FILE
from ..data.services import AnalysisService, DatasetService, RunService
from ..data.validation import DataValidator
from ..models.compare import compare_models
from ..models.evaluation import encode_all
from ..models.trainer import train
from ..pulsegen.dataset import GenerationOptions
from .plots import loss_curve_svg, render_plots

logger = logging.getLogger(__name__)

M = TypeVar("M", bound=BaseModel)


def _build(model: Type[M], data: Dict[str, Any]) -> M:
    """Pydantic model from merged defaults and flags; validation failures are usage errors"""
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise UsageError(f"invalid {model.__name__}: {e}") from e


def _overrides(args: argparse.Namespace, mapping: Dict[str, str]) -> Dict[str, Any]:
    return {field: getattr(args, flag) for flag, field in mapping.items() if getattr(args, flag, None) is not None}


def _emit(summary: Dict[str, Any]) -> None:
    print(json.dumps(summary, indent=2, sort_keys=True, default=str))


def _generation_options(config: Dict[str, Any], args: argparse.Namespace) -> GenerationOptions:
    section = config["pulsegen"]
    unit = args.dispersion_unit or section["dispersion_unit"]
    return GenerationOptions(
        frequency_grid=_build(FrequencyGrid, section["frequency_grid"]),
        output_grid=TimeGrid.output(int(section["output_points"]), float(section["output_span"])),
        dispersion_unit=DispersionUnit(unit),
        support_span=float(section["support_span"]),
        support_threshold=float(section["support_threshold"]),
        max_attempts=int(section["max_attempts"]),
    )


def _arch(config: Dict[str, Any], args: argparse.Namespace) -> ArchConfig:
    data = dict(config["architecture"])
    data.update(_overrides(args, {"latent_dim": "latent_dim", "channels": "channels"}))
    return _build(ArchConfig, data)


def _train_config(config: Dict[str, Any], args: argparse.Namespace) -> TrainConfig:
    data = dict(config["training"])
    data.update(_overrides(args, {
        "model": "model_kind",
        "beta": "beta",
        "epochs": "epochs",
        "lr": "lr",
        "lambda_mmd": "lambda_mmd",
        "batch_size": "batch_size",
        "seed": "seed",
    }))
    return _build(TrainConfig, data)


def _analysis(config: Dict[str, Any]) -> AnalysisSettings:
    return _build(AnalysisSettings, config["analysis"])


def _load_checked(args: argparse.Namespace):
    """Dataset and model whose profile length agree"""
    manifest, profiles = DatasetService().load(args.data)
    params = RunService().load_model(args.model)
    if profiles.shape[1] != params.arch.input_len:
        raise InconsistentArtifactError(
            f"dataset profiles have {profiles.shape[1]} samples, model expects {params.arch.input_len}"
        )
    return manifest, profiles, params


def cmd_generate(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    fiber_data = dict(config["fiber"])
    fiber_data.update(_overrides(args, {"beta2": "beta2", "gamma_nl": "gamma_nl", "length": "length", "n_steps": "n_steps"}))
    fiber = _build(FiberProxyParams, fiber_data)
    options = _generation_options(config, args)
    threads = args.threads or config["runtime"]["threads"]

    service = DatasetService()
    manifest = service.generate(args.pairs, args.seed, args.out, fiber, options, threads)
    RunService().record(args.out, "generate", args.seed, params={
        "pairs": args.pairs,
        "fiber": fiber.model_dump(mode="json"),
        "dispersion_unit": options.dispersion_unit.value,
    })
    _emit(service.summary(manifest))
    return EXIT_OK


def cmd_train(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    arch = _arch(config, args)
    train_config = _train_config(config, args)
    _, profiles = DatasetService().load(args.data)
    errors = DataValidator.validate_profiles(profiles, arch.input_len)
    if errors:
        raise UsageError(f"Validation errors: {', '.join(errors)}")

    result = train(profiles, arch, train_config)
    runs = RunService()
    runs.save_training(args.out, result, train_config)
    runs.record(args.out, "train", train_config.seed, inputs={"data": args.data}, params={
        "arch": arch.model_dump(mode="json"),
        "training": train_config.model_dump(mode="json"),
    })
    history = result.history
    _emit({
        "epochs": history.epochs,
        "final_train_loss": history.train_loss[-1] if history.epochs else None,
        "final_val_loss": history.val_loss[-1] if history.epochs else None,
        "train_size": len(result.split.train),
        "test_size": len(result.split.test),
    })
    return EXIT_OK


def cmd_eval(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    manifest, profiles, params = _load_checked(args)
    test = RunService().held_out(params, len(profiles))
    energies = DatasetService().energies(manifest)
    report = AnalysisService().evaluate(params, profiles, test, args.out, energies, _analysis(config))
    out = Path(args.out)
    RunService().record(out.parent, "eval", inputs={"data": args.data, "model": args.model},
                        name=f"{out.stem}.{RUN_CONFIG_FILE}")
    _emit({"mse": report.mse, "snr_db": report.snr_db, "cor": report.cor, "test_size": len(test)})
    return EXIT_OK


def _endpoint(args: argparse.Namespace, index_flag: str, file_flag: str, codes_fn, latent_dim: int) -> np.ndarray:
    path = getattr(args, file_flag)
    if path:
        vector = np.asarray(ExportRepository.read_json(path), dtype=np.float64).reshape(-1)
        if vector.shape != (latent_dim,):
            raise UsageError(f"{path} holds {vector.size} values, latent dimension is {latent_dim}")
        return vector
    index = getattr(args, index_flag)
    if index is None:
        raise UsageError(f"either --{index_flag.replace('_', '-')} or --{file_flag.replace('_', '-')} is required")
    return codes_fn(index)


def cmd_interpolate(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    settings_data = dict(config["geodesic"])
    settings_data.update(_overrides(args, {"waypoints": "waypoints", "steps": "steps", "lr": "lr"}))
    settings = _build(GeodesicSettings, settings_data)
    params = RunService().load_model(args.model)
    analysis = AnalysisService()

    profiles = None
    if args.data:
        _, profiles = DatasetService().load(args.data)

    def code_of(index: int) -> np.ndarray:
        if profiles is None:
            raise UsageError("--data is required to address profiles by index")
        errors = DataValidator.validate_indices({"profile": index}, len(profiles))
        if errors:
            raise UsageError(f"Validation errors: {', '.join(errors)}")
        return encode_all(params, profiles[index:index + 1])[0]

    if args.pairs:
        if profiles is None:
            raise UsageError("--pairs needs --data")
        stats = analysis.path_statistics(params, encode_all(params, profiles), args.pairs, args.out, args.seed, settings)
        _emit({k: v for k, v in stats.items() if k != "pairs"})
    else:
        z_a = _endpoint(args, "from_index", "z_from", code_of, params.arch.latent_dim)
        z_b = _endpoint(args, "to_index", "z_to", code_of, params.arch.latent_dim)
        _emit(analysis.interpolate(params, z_a, z_b, args.out, args.optimize, settings))

    RunService().record(args.out, "interpolate", args.seed, inputs={"model": args.model, "data": args.data or ""},
                        params={"geodesic": settings.model_dump(), "optimize": args.optimize})
    return EXIT_OK


def cmd_gmm(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    _, profiles, params = _load_checked(args)
    components = args.components or config["analysis"]["components"]
    summary = AnalysisService().fit_gmm(
        params, profiles, components, args.out, args.seed, _analysis(config), _generation_options(config, args)
    )
    RunService().record(args.out, "gmm", args.seed, inputs={"model": args.model, "data": args.data},
                        params={"components": components})
    _emit(summary)
    return EXIT_OK


def cmd_sample(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    settings_data = dict(config["sampling"])
    settings_data.update(_overrides(args, {"count": "count", "particles": "particles", "bins": "bins"}))
    settings = _build(SamplingSettings, settings_data)
    params = RunService().load_model(args.model)
    analysis = AnalysisService()
    gmm = analysis.load_gmm(args.gmm) if args.gmm else None
    summary = analysis.sample(params, args.out, gmm, args.seed, settings)
    RunService().record(args.out, "sample", args.seed, inputs={"model": args.model, "gmm": args.gmm or ""},
                        params={"sampling": settings.model_dump()})
    _emit(summary)
    return EXIT_OK


def cmd_export_plots(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    run = Path(args.run)
    required = (RUN_CONFIG_FILE, SPLIT_FILE, HISTORY_FILE, CHECKPOINT_FILE)
    missing = [name for name in required if not (run / name).exists()]
    if missing:
        raise InconsistentArtifactError(f"run directory {run} lacks {', '.join(missing)}")
    runs = RunService()
    run_config = runs.load_config(run)
    data = run_config.inputs.get("data")
    if not data:
        raise InconsistentArtifactError(f"{RUN_CONFIG_FILE} in {run} does not name a dataset")
    manifest, profiles = DatasetService().load(data)
    params = runs.load_model(run)
    split = runs.repository.load_split(run)
    bundle = AnalysisService().export_plot_data(
        params, manifest, profiles, split["test"], args.out, _generation_options(config, args), _analysis(config)
    )
    paths = render_plots(Path(args.out), bundle)
    paths.append(loss_curve_svg(Path(args.out) / "loss_curve.svg", runs.repository.load_history(run)))
    runs.record(args.out, "export-plots", inputs={"run": args.run})
    _emit({"svg": [str(p) for p in paths]})
    return EXIT_OK


def cmd_compare(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    arch = _arch(config, args)
    train_config = _train_config(config, args)
    _, profiles = DatasetService().load(args.data)
    reports = compare_models(profiles, arch, train_config, settings=_analysis(config))
    out = Path(args.out)
    exports = ExportRepository()
    exports.write_csv(
        out / "comparison.csv",
        ["model", "mse", "snr_db", "cor"],
        ([name, r.mse, r.snr_db, r.cor] for name, r in reports.items()),
    )
    table = {name: {"mse": r.mse, "snr_db": r.snr_db, "cor": r.cor} for name, r in reports.items()}
    exports.write_json(out / "comparison.json", table)
    RunService().record(out, "compare", train_config.seed, inputs={"data": args.data}, params={
        "arch": arch.model_dump(mode="json"),
        "training": train_config.model_dump(mode="json"),
    })
    _emit(table)
    return EXIT_OK
