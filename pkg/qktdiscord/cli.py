"""
Command-line interface for the qktdiscord package.
"""

import argparse
import json
import os
import sys
from typing import Any, Dict, List, Optional

from qktdiscord.channels import registry
from qktdiscord.config import get_config, load_config, save_sample_config
from qktdiscord.core.batch_runner import SWEEPABLE_AXES, parse_sweep_values, sweep
from qktdiscord.core.errors import ConfigError, OutputError, QKTDiscordError
from qktdiscord.core.result import RunOutput
from qktdiscord.core.runner import channel_compare, fidelity_only, oracle_diagnostic, run_scenario
from qktdiscord.core.scenario import PRESETS, ScenarioConfig, read_scenario_document, scenario_from_dict
from qktdiscord.utils import ColorFormatter, format_run_summary, format_table, get_logger, setup_logging

logger = get_logger("cli")

RUN_COMMANDS = {
    "fd": fidelity_only,
    "dynamics": run_scenario,
    "channel-compare": channel_compare,
    "oracle": oracle_diagnostic,
}

# flag destination -> scenario key
FLAG_KEYS = {
    "j": "j",
    "nu": "nu",
    "eta": "eta",
    "epsilon": "epsilon",
    "kicks": "n_kicks",
    "cx": "c_x",
    "cy": "c_y",
    "cz": "c_z",
    "theta0": "theta0",
    "phi0": "phi0",
    "seed": "seed",
    "gamma": "gamma",
    "source": "source",
    "out": "output_path",
    "format": "format",
}


def add_scenario_arguments(parser: argparse.ArgumentParser) -> None:
    """
    Add the scenario selection and override flags shared by all run commands.

    Args:
        parser: Subcommand parser to extend
    """
    parser.add_argument("--config", help="Scenario JSON document")
    parser.add_argument("--preset", choices=sorted(PRESETS), help="Start from a figure parameter set")
    parser.add_argument("--j", type=float, help="Spin quantum number J")
    parser.add_argument("--nu", type=float, help="Precession angle per kick")
    parser.add_argument("--eta", type=float, help="Kick strength")
    parser.add_argument("--epsilon", type=float, help="Qubit coupling strength")
    parser.add_argument("--kicks", type=int, help="Number of kicks")
    parser.add_argument("--cx", type=float, help="Initial correlation c_x")
    parser.add_argument("--cy", type=float, help="Initial correlation c_y")
    parser.add_argument("--cz", type=float, help="Initial correlation c_z")
    parser.add_argument("--theta0", type=float, help="Initial coherent-state polar angle")
    parser.add_argument("--phi0", type=float, help="Initial coherent-state azimuth")
    parser.add_argument("--seed", type=int, help="Seed for a random initial direction")
    parser.add_argument("--gamma", type=float, help="Markovian dephasing rate per kick")
    parser.add_argument("--source", choices=["qkt", "markovian"], help="Dephasing source")
    parser.add_argument("--out", help="Output file (default: stdout)")
    parser.add_argument("--format", choices=["csv", "json"], help="Output format")
    parser.add_argument(
        "--oracle",
        action="store_true",
        help="Also compute the brute-force discord discrepancy",
    )


def setup_cli_parser() -> argparse.ArgumentParser:
    """
    Set up the command-line argument parser.

    Returns:
        argparse.ArgumentParser: Configured argument parser
    """
    parser = argparse.ArgumentParser(
        description="qktdiscord - quantum discord under kicked-top dephasing",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )

    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="Set logging level (default: general.log_level setting)",
    )
    parser.add_argument("--log-file", help="Log file path (default: general.log_file setting)")
    parser.add_argument("--settings", help="Path to a YAML or JSON settings file")

    subparsers = parser.add_subparsers(dest="command", help="Command to execute")

    fd_parser = subparsers.add_parser(
        "fd", help="Fidelity series only", formatter_class=argparse.ArgumentDefaultsHelpFormatter
    )
    add_scenario_arguments(fd_parser)

    dynamics_parser = subparsers.add_parser(
        "dynamics",
        help="Full correlation record per kick",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    add_scenario_arguments(dynamics_parser)

    compare_parser = subparsers.add_parser(
        "channel-compare",
        help="Kicked-top and Markovian dephasing side by side",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    add_scenario_arguments(compare_parser)

    oracle_parser = subparsers.add_parser(
        "oracle",
        help="Closed-form versus numeric discord diagnostic",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    add_scenario_arguments(oracle_parser)

    sweep_parser = subparsers.add_parser(
        "sweep",
        help="Run one scenario per value of a parameter",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    add_scenario_arguments(sweep_parser)
    sweep_parser.add_argument("--sweep-axis", required=True, choices=SWEEPABLE_AXES, help="Parameter to vary")
    sweep_parser.add_argument("--sweep-values", default="", help="Comma-separated values")
    sweep_parser.add_argument("--max-workers", type=int, help="Maximum number of parallel workers")
    sweep_parser.add_argument("--runs-dir", help="Directory for the per-point datasets")

    subparsers.add_parser(
        "presets",
        help="List preset parameter sets",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )

    subparsers.add_parser(
        "sources",
        help="List available dephasing sources",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )

    config_parser = subparsers.add_parser(
        "config",
        help="Settings file management",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    config_parser.add_argument("action", choices=["generate"], help="Action to perform")
    config_parser.add_argument("--output", default="./qktdiscord.yml", help="Output file path")
    config_parser.add_argument("--format", choices=["yaml", "json"], default="yaml", help="Output format")

    return parser


def build_scenario(args: argparse.Namespace) -> ScenarioConfig:
    """
    Combine preset, scenario document and flags, in increasing precedence.

    Raises:
        ConfigError: If the combined scenario is invalid
    """
    data: Dict[str, Any] = {}
    if args.preset:
        data.update(PRESETS[args.preset])
    if args.config:
        data.update(read_scenario_document(args.config))
    for flag, key in FLAG_KEYS.items():
        value = getattr(args, flag, None)
        if value is not None:
            data[key] = value
    if args.oracle:
        data["oracle"] = True
    return scenario_from_dict(data)


def emit(output: RunOutput, cfg: ScenarioConfig) -> None:
    """Write to cfg.output_path (and print a summary) or stream the dataset to stdout."""
    format = cfg.format.value
    if cfg.output_path:
        output.write(cfg.output_path, format)
        print(format_run_summary(output.metadata, len(output)))
        print(f"Dataset written to {cfg.output_path}")
    else:
        output.check_cc_identity()
        sys.stdout.write(output.render(format))


def handle_run_command(args: argparse.Namespace) -> int:
    cfg = build_scenario(args)
    output = RUN_COMMANDS[args.command](cfg)
    emit(output, cfg)
    return 0


def handle_sweep_command(args: argparse.Namespace) -> int:
    """
    Run a sweep and report its summary table.

    Failed points are listed in the ``error`` column; the command still exits 0.
    """
    base = build_scenario(args)
    values = parse_sweep_values(args.sweep_values, args.sweep_axis)
    result = sweep(base, args.sweep_axis, values, max_workers=args.max_workers)

    format = base.format.value
    if args.runs_dir:
        for index, output in enumerate(result.outputs):
            if output is not None:
                path = os.path.join(args.runs_dir, f"{args.sweep_axis}-{index:03d}.{format}")
                output.write(path, format)

    summary = result.summary_output()
    if base.output_path:
        summary.write(base.output_path, format)
        print(format_table(summary.columns, summary.rows))
        print(f"Summary written to {base.output_path}")
    elif values:
        print(format_table(summary.columns, summary.rows))
    else:
        print("No sweep values given; nothing to run")

    if result.failed:
        print(ColorFormatter.warning(f"{len(result.failed)} of {len(values)} sweep points failed"))
    return 0


def handle_presets_command() -> int:
    print("Available presets:")
    for name in sorted(PRESETS):
        params = {k: v for k, v in PRESETS[name].items() if k != "name"}
        print(f"  {ColorFormatter.highlight(name)}: {json.dumps(params, sort_keys=True)}")
    return 0


def handle_sources_command() -> int:
    print("Available dephasing sources:")
    for kind, info in sorted(registry.get_all_sources().items()):
        print(f"  {ColorFormatter.highlight(kind)}: {info['description']}")
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the CLI."""
    parser = setup_cli_parser()
    args = parser.parse_args(argv)

    try:
        if args.settings:
            load_config(args.settings)
        setup_logging(
            level=args.log_level or get_config("general", "log_level", "INFO"),
            log_file=args.log_file or get_config("general", "log_file"),
        )

        if args.command in RUN_COMMANDS:
            return handle_run_command(args)
        elif args.command == "sweep":
            return handle_sweep_command(args)
        elif args.command == "presets":
            return handle_presets_command()
        elif args.command == "sources":
            return handle_sources_command()
        elif args.command == "config":
            if args.action == "generate":
                save_sample_config(args.output, args.format)
                print(f"Sample configuration file saved to {args.output}")
            return 0
        else:
            parser.print_help()
            return 1
    except QKTDiscordError as e:
        print(ColorFormatter.error(f"Error: {e}"), file=sys.stderr)
        return e.exit_code
    except ValueError as e:
        print(ColorFormatter.error(f"Error: {e}"), file=sys.stderr)
        return ConfigError.exit_code
    except OSError as e:
        print(ColorFormatter.error(f"I/O error: {e}"), file=sys.stderr)
        return OutputError.exit_code


if __name__ == "__main__":
    sys.exit(main())
