#!/usr/bin/env python3
"""
pulseforge command-line entry point
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from .. import __version__
from ..core.config import get_config, get_settings
from ..core.exceptions import EXIT_IO, PulseForgeError
from ..core.log import configure_logging
from . import commands

logger = logging.getLogger(__name__)

# Commands whose --out names a file; the others write into a directory
FILE_OUTPUTS = {"eval"}


def _parse_bool(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ("true", "1", "yes", "on"):
        return True
    if lowered in ("false", "0", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected true or false, got {value!r}")


def _add_training_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--data", required=True, help="Dataset directory")
    parser.add_argument("--model", choices=["wae", "bvae"], help="Objective (default wae)")
    parser.add_argument("--beta", type=float, help="KL weight of the beta-VAE")
    parser.add_argument("--epochs", type=int)
    parser.add_argument("--lr", type=float)
    parser.add_argument("--lambda", dest="lambda_mmd", type=float, help="MMD weight")
    parser.add_argument("--latent-dim", type=int)
    parser.add_argument("--batch-size", type=int)
    parser.add_argument("--channels", type=int, nargs="+", help="Encoder block widths")
    parser.add_argument("--seed", type=int, help="Split, initialization and shuffling seed")
    parser.add_argument("--out", required=True, help="Run directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pulseforge", description="Pulse shaping latent-space toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", help="Override PULSEFORGE_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="Simulate input/propagated pulse pairs")
    p.add_argument("--pairs", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="Dataset directory")
    p.add_argument("--beta2", type=float, help="Fiber GVD in s^2/m")
    p.add_argument("--gamma-nl", type=float, help="Fiber nonlinearity in 1/(W m)")
    p.add_argument("--length", type=float, help="Fiber length in m")
    p.add_argument("--n-steps", type=int, help="Split steps")
    p.add_argument("--dispersion-unit", choices=["ps", "s"])
    p.add_argument("--threads", type=int, help="Worker threads (default PULSEFORGE_THREADS)")
    p.set_defaults(handler=commands.cmd_generate)

    p = sub.add_parser("train", help="Train a WAE or beta-VAE")
    _add_training_flags(p)
    p.set_defaults(handler=commands.cmd_train)

    p = sub.add_parser("eval", help="Held-out reconstruction and geometry metrics")
    p.add_argument("--data", required=True)
    p.add_argument("--model", required=True, help="Checkpoint file or run directory")
    p.add_argument("--out", required=True, help="Report JSON path")
    p.set_defaults(handler=commands.cmd_eval)

    p = sub.add_parser("interpolate", help="Linear and geodesic latent paths")
    p.add_argument("--model", required=True)
    p.add_argument("--data")
    p.add_argument("--from", dest="from_index", type=int)
    p.add_argument("--to", dest="to_index", type=int)
    p.add_argument("--z-from", help="JSON file with a latent code")
    p.add_argument("--z-to", help="JSON file with a latent code")
    p.add_argument("--waypoints", type=int)
    p.add_argument("--optimize", type=_parse_bool, default=True)
    p.add_argument("--steps", type=int)
    p.add_argument("--lr", type=float)
    p.add_argument("--pairs", type=int, default=0, help="Ratio statistics over random dataset pairs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=commands.cmd_interpolate)

    p = sub.add_parser("gmm", help="Gaussian mixture over the latent codes")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--components", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dispersion-unit", choices=["ps", "s"])
    p.add_argument("--out", required=True)
    p.set_defaults(handler=commands.cmd_gmm)

    p = sub.add_parser("sample", help="Decode latent draws into emission-time samples")
    p.add_argument("--model", required=True)
    p.add_argument("--gmm", help="GMM JSON; standard normal prior when absent")
    p.add_argument("--count", type=int)
    p.add_argument("--particles", type=int)
    p.add_argument("--bins", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=commands.cmd_sample)

    p = sub.add_parser("export-plots", help="CSV and SVG plot data of a training run")
    p.add_argument("--run", required=True)
    p.add_argument("--dispersion-unit", choices=["ps", "s"])
    p.add_argument("--out", required=True)
    p.set_defaults(handler=commands.cmd_export_plots)

    p = sub.add_parser("compare", help="WAE against beta-VAEs and a PCA baseline")
    _add_training_flags(p)
    p.set_defaults(handler=commands.cmd_compare)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    settings = get_settings()

    out = Path(args.out)
    sidecar = out.parent if args.command in FILE_OUTPUTS else out
    try:
        sidecar.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        print(f"pulseforge: cannot create {sidecar}: {e}", file=sys.stderr)
        return EXIT_IO
    configure_logging(args.log_level or settings.log_level, settings.log_format, sidecar=sidecar)

    try:
        return args.handler(args, get_config())
    except PulseForgeError as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"pulseforge {args.command}: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
