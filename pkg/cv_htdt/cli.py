"""Command line front end: single-shot simulation, theorem checks and figure sweeps as CSV."""

import argparse
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np
import pandas as pd

from .config import default_config_path, load_config_dotenv, load_toml_config, log_level, merge_options
from .distribution import GeometryConfig, sweep_fig5
from .errors import ValidationError
from .fidelity import CodebookSpec, avg_fidelity, fig3_table
from .gaussian import ChannelSpec, ResourceTriplet, vacuum_state
from .montecarlo import monte_carlo_oracle
from .protocol import (
    DEFAULT_D_MAX,
    ProtocolParams,
    htdt_beats_teleportation,
    noise_discarded,
    noise_ef,
    noise_qt,
    optimal_teleport_triplet,
    optimize_d,
    simulate_channel,
)
from .tables import validate_rows, write_csv

__all__ = [
    "RunConfig",
    "build_parser",
    "resolve_config",
    "cmd_simulate",
    "cmd_fig3",
    "cmd_fig5",
    "cmd_check_theorem",
    "main",
]

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_VALIDATION = 2

_DEFAULTS: Dict[str, Dict[str, Any]] = {
    "simulate": {
        "a": 1.0,
        "b": 1.0,
        "c": 0.0,
        "x": 1.0,
        "y": 0.0,
        "g": 1.0,
        "d": 1.0,
        "oracle": False,
        "shards": 1,
        "lam": 0.0,
    },
    "fig3": {
        "r": math.log(2) / 2,
        "x_min": 1 / 30,
        "x_max": 29 / 30,
        "x_steps": 29,
        "d_max": DEFAULT_D_MAX,
    },
    "fig5": {
        "gamma": 1e-3,
        "dab": None,
        "xab": None,
        "hc_min": 0.0,
        "hc_max": 1000.0,
        "hc_steps": 11,
        "rc": [1.05],
        "d_max": DEFAULT_D_MAX,
        "workers": 1,
    },
    "check-theorem": {
        "r": math.log(2) / 2,
        "x": 0.5,
        "y": 0.5,
        "g": None,
        "d_max": DEFAULT_D_MAX,
    },
}

# keys every subcommand understands
_COMMON = {"out": None, "seed": 0, "samples": 1_000_000}


@dataclass(frozen=True)
class RunConfig:
    """A validated subcommand invocation: numeric options merged from defaults, config file and flags."""

    command: str
    options: Dict[str, Any] = field(default_factory=dict)
    out: Optional[str] = None
    seed: int = 0
    samples: int = 1_000_000


def build_parser() -> argparse.ArgumentParser:
    """Return the argument parser; every option defaults to None so config files can fill it."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML file with a table per subcommand (default: $HTDT_CONFIG)")
    common.add_argument("--out", help="output CSV path, '-' for stdout (default)")
    common.add_argument("--verbose", action="store_true", default=None, help="log debug output to stderr")
    common.add_argument("--seed", type=int, help="Monte-Carlo seed")
    common.add_argument("--samples", type=int, help="Monte-Carlo sample count")

    parser = argparse.ArgumentParser(prog="cv-htdt", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="noise of one protocol configuration")
    for name in ("a", "b", "c", "x", "y", "g", "d"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--oracle", action="store_true", default=None, help="add a Monte-Carlo estimate of G")
    p.add_argument("--shards", type=int, help="Monte-Carlo substreams")
    p.add_argument("--lambda", dest="lam", type=float, help="codebook inverse width, 0 for uniform")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("fig3", parents=[common], help="fidelities versus attenuator transmissivity")
    p.add_argument("--r", type=float, help="half log-negativity of the resource")
    p.add_argument("--x-min", type=float)
    p.add_argument("--x-max", type=float)
    p.add_argument("--x-steps", type=int)
    p.add_argument("--d-max", type=float)
    p.set_defaults(handler=cmd_fig3)

    p = sub.add_parser("fig5", parents=[common], help="fidelities versus Charlie's position")
    p.add_argument("--gamma", type=float, help="loss rate, dB/m")
    link = p.add_mutually_exclusive_group()
    link.add_argument("--dab", type=float, help="Alice-Bob distance, m")
    link.add_argument("--xab", type=float, help="Alice-Bob transmissivity")
    p.add_argument("--hc-min", type=float)
    p.add_argument("--hc-max", type=float)
    p.add_argument("--hc-steps", type=int)
    p.add_argument("--rc", type=float, nargs="+", help="half log-negativities at Charlie")
    p.add_argument("--d-max", type=float)
    p.add_argument("--workers", type=int, help="processes evaluating sweep points")
    p.set_defaults(handler=cmd_fig5)

    p = sub.add_parser("check-theorem", parents=[common], help="when does a finite encoder gain win")
    p.add_argument("--r", type=float, help="half log-negativity of the resource")
    p.add_argument("--x", type=float)
    p.add_argument("--y", type=float)
    p.add_argument("--g", type=float, help="target gain, in [tanh r, coth r] (default 1)")
    p.add_argument("--d-max", type=float)
    p.set_defaults(handler=cmd_check_theorem)
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge defaults, the config file section and the given flags into a RunConfig."""
    defaults = dict(_DEFAULTS[args.command], **_COMMON)
    path = args.config or default_config_path()
    file_options = load_toml_config(path, args.command, allowed=[*defaults, "lambda"]) if path else {}
    if "lambda" in file_options:
        file_options["lam"] = file_options.pop("lambda")
    flags = {k: v for k, v in vars(args).items() if k in defaults}
    options = merge_options(defaults, file_options, flags)
    out, seed, samples = options.pop("out"), options.pop("seed"), options.pop("samples")
    return RunConfig(command=args.command, options=options, out=out, seed=int(seed), samples=int(samples))


def cmd_simulate(config: RunConfig) -> int:
    """Report gain, closed-form noise and the baselines for one configuration; optionally sample it."""
    o = config.options
    resource = ResourceTriplet(float(o["a"]), float(o["b"]), float(o["c"])).validate()
    channel = ChannelSpec(float(o["x"]), float(o["y"])).validate()
    g, d = float(o["g"]), float(o["d"])
    params = ProtocolParams.from_gain(g, d, channel)
    row = {
        "g": g,
        "d": d,
        "tau": params.tau,
        "G": simulate_channel(resource, channel, params).noise,
        "G_qt": noise_qt(resource, g),
        "G_dis": noise_discarded(resource, g, d) if d > 1 else math.nan,
        "G_ef": noise_ef(channel, g, d),
    }
    row["F"] = avg_fidelity(g, row["G"], CodebookSpec(float(o["lam"])))
    if o["oracle"]:
        # vacuum input: the output covariance is (g + G) I
        est = monte_carlo_oracle(
            vacuum_state(), resource, channel, params, config.samples, config.seed, shards=int(o["shards"])
        )
        row["oracle_G"] = (est.covariance[0, 0] + est.covariance[1, 1]) / 2 - g
        row["oracle_G_stderr"] = math.hypot(est.covariance_stderr[0, 0], est.covariance_stderr[1, 1]) / 2
    write_csv(validate_rows(pd.DataFrame([row])), config.out)
    return EXIT_OK


def cmd_fig3(config: RunConfig) -> int:
    """Write the fidelity, infidelity-ratio, optimal-d and no-cloning table against transmissivity."""
    o = config.options
    steps = int(o["x_steps"])
    if steps < 1:
        raise ValidationError(f"grid needs at least one point, got {steps}", "x_steps >= 1")
    xs = np.linspace(float(o["x_min"]), float(o["x_max"]), steps)
    write_csv(validate_rows(fig3_table(float(o["r"]), xs, d_max=float(o["d_max"]))), config.out)
    return EXIT_OK


def _geometry(o: Dict[str, Any]) -> GeometryConfig:
    gamma = float(o["gamma"])
    if o["dab"] is not None and o["xab"] is not None:
        raise ValidationError("give either the Alice-Bob distance or their transmissivity, not both")
    if o["dab"] is not None:
        return GeometryConfig(D_AB=float(o["dab"]), h_C=0.0, gamma=gamma)
    xab = 0.7 if o["xab"] is None else float(o["xab"])
    return GeometryConfig.from_transmissivity(xab, h_C=0.0, gamma=gamma)


def cmd_fig5(config: RunConfig) -> int:
    """Write fidelities against Charlie's height for each source squeezing."""
    o = config.options
    base = _geometry(o)
    steps = int(o["hc_steps"])
    if steps < 1:
        raise ValidationError(f"grid needs at least one point, got {steps}", "hc_steps >= 1")
    heights = np.linspace(float(o["hc_min"]), float(o["hc_max"]), steps)
    rcs = o["rc"] if isinstance(o["rc"], list) else [o["rc"]]
    workers = int(o["workers"])
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            df = sweep_fig5(base, heights, rcs, d_max=float(o["d_max"]), executor=executor)
    else:
        df = sweep_fig5(base, heights, rcs, d_max=float(o["d_max"]))
    write_csv(validate_rows(df), config.out)
    return EXIT_OK


def cmd_check_theorem(config: RunConfig) -> int:
    """Evaluate y < e^{-2r}(1 + x) and confirm it by optimizing d on the optimal teleportation resource."""
    o = config.options
    r = float(o["r"])
    channel = ChannelSpec(float(o["x"]), float(o["y"])).validate()
    g = 1.0 if o["g"] is None else float(o["g"])
    if r > 0:
        resource = optimal_teleport_triplet(r, g)
    elif g == 1:
        resource = ResourceTriplet(1.0, 1.0, 0.0)
    else:
        raise ValidationError(f"without entanglement only g=1 is checked, got g={g}", "g = 1 when r = 0")
    condition = htdt_beats_teleportation(r, channel)
    g_star = math.exp(-2 * r) * (1 + g)
    found = optimize_d(resource, channel, g, d_max=float(o["d_max"]))
    row = {
        "r": r,
        "x": channel.x,
        "y": channel.y,
        "g": g,
        "condition": condition,
        "boundary": math.exp(-2 * r) * (1 + channel.x),
        "G_min": found.G_min,
        "G_qt_star": g_star,
        "d_opt": found.d_opt,
        "numeric_advantage": found.G_min < g_star - 1e-9,
    }
    write_csv(validate_rows(pd.DataFrame([row])), config.out)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Run the command line; return the exit code (0 success, 2 invalid input, 1 internal error)."""
    load_config_dotenv()
    args = build_parser().parse_args(argv)
    handler: Callable[[RunConfig], int] = args.handler
    try:
        logging.basicConfig(
            level=logging.DEBUG if args.verbose else log_level(),
            stream=sys.stderr,
            format="%(levelname)s %(name)s: %(message)s",
        )
        config = resolve_config(args)
        logger.debug("running %s with %s", config.command, config.options)
        return handler(config)
    except ValidationError as exc:
        print(f"cv-htdt {args.command}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:
        logger.debug("internal error", exc_info=True)
        print(f"cv-htdt {args.command}: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
