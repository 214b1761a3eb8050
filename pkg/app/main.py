"""
Command-line driver: run a flow, evaluate sample sets, project privacy costs
and export the toy target's level sets.

    python -m app.main run --toy --preset paper-toy --out runs/toy
    python -m app.main eval runs/toy/final.csv runs/toy/target.csv
    python -m app.main privacy --preset paper-latent-8d --epsilon 10
    python -m app.main toy-export --out runs/levels
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np
import structlog
from pydantic import ValidationError

from app.config import settings
from app.presets import PRESETS, get_preset
from datagen import (
    Dataset,
    level_set_grid,
    level_set_threshold,
    load_dataset,
    normalize_rows,
    sample_mixture,
    save_dataset,
    toy_ring_mixture,
)
from flows import run_flow
from metrics import sliced_w2
from models import FlowConfig, MetricConfig, RunManifest
from privacy import project_ledger, sigma_for_epsilon
from utils.exceptions import ConfigError, DatasetParseError, InvalidArgumentError, NumericError, PreconditionError
from utils.rng import StreamRole, derive_seed

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PRECONDITION = 3
EXIT_NUMERIC = 4

LEVEL_SET_MASS = 0.99


def configure_logging(level: str = "INFO", fmt: str = "console"):
    """
    Route structlog output to stderr; stdout is reserved for command results
    """
    renderer = structlog.processors.JSONRenderer() if fmt == "json" else structlog.dev.ConsoleRenderer(colors=False)
    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.format_exc_info,
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(getattr(logging, level.upper(), logging.INFO)),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )


def emit(payload: dict):
    print(json.dumps(payload, indent=2))


def parse_snapshots(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"--snapshots expects a comma-separated list of iterations, got {text!r}")


def read_config_file(path: str) -> dict:
    config_path = Path(path)
    if not config_path.is_file():
        raise ConfigError(f"config file not found: {config_path}")
    try:
        with open(config_path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"config file {config_path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"config file {config_path} must hold a JSON object")
    return data


def build_config(args) -> FlowConfig:
    """
    Preset values, then config file keys, then command-line overrides
    """
    if not args.preset and not args.config:
        raise ConfigError("either --config or --preset is required")

    values = get_preset(args.preset)["config"] if args.preset else {}
    if args.config:
        values.update(read_config_file(args.config))
    if args.seed is not None:
        values["seed"] = args.seed
    if getattr(args, "sigma", None) is not None:
        values["sigma"] = args.sigma
    if getattr(args, "snapshots", None):
        values["snapshots"] = parse_snapshots(args.snapshots)
    values.setdefault("seed", settings.default_seed)
    values.setdefault("delta", settings.default_delta)
    return FlowConfig.model_validate(values)


def wants_toy(args) -> bool:
    return bool(args.toy or (args.preset and not args.dataset and get_preset(args.preset)["toy"]))


def toy_target(seed: int) -> Dataset:
    mixture = toy_ring_mixture(settings.toy_components, settings.toy_radius, settings.toy_spread)
    rows = sample_mixture(mixture, settings.toy_samples, derive_seed(seed, StreamRole.TARGET_SAMPLES))
    return Dataset(rows, source="toy")


def cmd_run(args) -> int:
    config = build_config(args)
    if args.dataset:
        dataset = load_dataset(args.dataset, expect_dim=config.dim)
        if args.normalize:
            dataset = normalize_rows(dataset)
    elif wants_toy(args):
        dataset = toy_target(config.seed)
    else:
        raise ConfigError("run needs --dataset PATH or --toy")

    out_dir = Path(args.out or settings.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    manifest = RunManifest(
        config=config.echo(),
        preset=args.preset,
        dataset_source=dataset.source or "memory",
        dataset_fingerprint=dataset.fingerprint(),
        dataset_shape=[dataset.n, dataset.dim],
    )
    manifest_path = out_dir / "manifest.json"
    if dataset.source == "toy":
        manifest.outputs["target"] = str(save_dataset(dataset, out_dir / "target.csv"))
    manifest.write(manifest_path)

    try:
        trajectory, ledger = run_flow(dataset, config)

        for k, cloud in trajectory.snapshots:
            manifest.outputs[f"snapshot_{k}"] = str(save_dataset(cloud, out_dir / f"snapshot_{k:04d}.csv"))
        manifest.outputs["final"] = str(save_dataset(trajectory.final, out_dir / "final.csv"))

        report_path = out_dir / "privacy_report.json"
        ledger.save(report_path, config.echo())
        manifest.outputs["privacy_report"] = str(report_path)
    except Exception as e:
        manifest.finalize("failed", error=str(e)).write(manifest_path)
        raise

    manifest.finalize("completed").write(manifest_path)
    summary = ledger.summary()
    emit(
        {
            "out_dir": str(out_dir),
            "iterations": trajectory.final.iteration,
            "snapshots": trajectory.iterations,
            "events": summary["events"],
            "epsilon_total": summary["epsilon"] if np.isfinite(summary["epsilon"]) else None,
            "over_budget": summary["over_budget"],
        }
    )
    return EXIT_OK


def cmd_eval(args) -> int:
    a = load_dataset(args.a)
    b = load_dataset(args.b)
    if a.dim != b.dim:
        raise InvalidArgumentError(f"dimension mismatch: {args.a} has {a.dim}, {args.b} has {b.dim}")

    n_theta_eval = args.n_theta_eval or settings.eval_n_theta
    seed = args.seed if args.seed is not None else settings.default_seed
    result = {"swd": sliced_w2(a, b, MetricConfig(n_theta_eval=n_theta_eval, sigma_eval=0.0, seed=seed))}
    if args.sigma_eval > 0:
        metric = MetricConfig(n_theta_eval=n_theta_eval, sigma_eval=args.sigma_eval, seed=seed)
        result["smoothed_swd"] = sliced_w2(a, b, metric)
    emit(result)
    return EXIT_OK


def cmd_privacy(args) -> int:
    config = build_config(args)
    if args.dataset:
        d = load_dataset(args.dataset).dim
    elif config.dim is not None:
        d = config.dim
    else:
        raise ConfigError("privacy needs the data dimension: set dim in the config or pass --dataset")

    extra = {}
    if args.epsilon is not None:
        sigma = sigma_for_epsilon(
            args.epsilon, config.delta, config.n_theta, d, config.norm_factor, config.sensitivity_mode
        )
        config = FlowConfig.model_validate({**config.echo(), "sigma": sigma})
        extra = {"sigma": sigma, "epsilon_requested": args.epsilon}

    ledger = project_ledger(config, d)
    emit(ledger.to_report(config.echo(), **extra))
    return EXIT_OK


def cmd_toy_export(args) -> int:
    mixture = toy_ring_mixture(settings.toy_components, settings.toy_radius, settings.toy_spread)
    extent = args.extent or settings.toy_radius + 4.0 * np.sqrt(settings.toy_spread)
    size = args.grid_size or settings.level_set_grid
    seed = args.seed if args.seed is not None else settings.default_seed

    grid = level_set_grid(mixture, extent, size)
    threshold = level_set_threshold(mixture, LEVEL_SET_MASS, seed=derive_seed(seed, StreamRole.TARGET_SAMPLES))
    logger.info("level_set_threshold", mass=LEVEL_SET_MASS, threshold=threshold)

    out_dir = Path(args.out or settings.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "level_sets.json"
    with open(path, "w", encoding="utf-8") as f:
        json.dump(grid.tolist(), f)

    emit({"path": str(path), "points": int(grid.shape[0]), "threshold_99": threshold})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dpswflow",
        description="Differentially private sliced Wasserstein flows",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    def add_config_flags(sub):
        sub.add_argument("--config", help="JSON file with FlowConfig keys")
        sub.add_argument("--preset", choices=sorted(PRESETS), help="built-in configuration")
        sub.add_argument("--seed", type=int, help="override the run seed")
        sub.add_argument("--sigma", type=float, help="override the smoothing noise level")
        sub.add_argument("--dataset", help="CSV of target samples, one per row")

    run = commands.add_parser("run", help="run a flow and write snapshots and a privacy report")
    add_config_flags(run)
    run.add_argument("--toy", action="store_true", help="use the built-in five-Gaussian ring target")
    run.add_argument("--normalize", action="store_true", help="scale dataset rows to unit norm")
    run.add_argument("--out", help="output directory")
    run.add_argument("--snapshots", help="comma-separated snapshot iterations")
    run.set_defaults(handler=cmd_run)

    evaluate = commands.add_parser("eval", help="sliced Wasserstein distance between two sample files")
    evaluate.add_argument("a")
    evaluate.add_argument("b")
    evaluate.add_argument("--n-theta-eval", type=int, help="number of projections")
    evaluate.add_argument("--sigma-eval", type=float, default=0.0, help="smoothing noise level")
    evaluate.add_argument("--seed", type=int, help="seed of the evaluation directions and noise")
    evaluate.set_defaults(handler=cmd_eval)

    privacy = commands.add_parser("privacy", help="project the privacy ledger of a configuration")
    add_config_flags(privacy)
    privacy.add_argument("--epsilon", type=float, help="calibrate sigma for this per-release epsilon")
    privacy.set_defaults(handler=cmd_privacy)

    export = commands.add_parser("toy-export", help="export density level sets of the toy target")
    export.add_argument("--out", help="output directory")
    export.add_argument("--grid-size", type=int, help="grid points per axis")
    export.add_argument("--extent", type=float, help="half-width of the square grid")
    export.add_argument("--seed", type=int, help="seed of the level threshold estimate")
    export.set_defaults(handler=cmd_toy_export)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    if not structlog.is_configured():
        configure_logging(settings.log_level, settings.log_format)

    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (ConfigError, ValidationError) as e:
        code, message = EXIT_CONFIG, str(e)
    except (InvalidArgumentError, PreconditionError, DatasetParseError) as e:
        code, message = EXIT_PRECONDITION, str(e)
    except (NumericError, FloatingPointError) as e:
        code, message = EXIT_NUMERIC, str(e)

    logger.error("command_failed", command=args.command, exit_code=code, error=message)
    print(f"error: {message}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
