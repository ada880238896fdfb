"""
Copyright 2024 Wu Tingfeng <wutingfeng@outlook.com>

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
"""

import pathlib
import sys
from argparse import ArgumentParser, Namespace, RawDescriptionHelpFormatter

from weightedl1.commands import commands, has_inconclusive
from weightedl1.config import ExperimentConfig
from weightedl1.errors import EXIT_INCONCLUSIVE, EXIT_SUCCESS, exit_code_for
from weightedl1.ledger import Ledger
from weightedl1.logger import logger

command_descriptions: dict[str, tuple[str, str]] = {
    "growth": (
        "Enumerate balls of the Cayley graph and fit the growth order.",
        "Writes growth_<group>.csv with columns n, sphere_size, cumulative, and with "
        "export_elements = true also elements_<group>.csv with columns n, element.",
    ),
    "bound": (
        "Bound ‖m‖_ε for the configured weight and sweeps, with verdict and von Neumann δ.",
        "No CSV output. The JSON payload carries the zeta enclosure and its rigor flag.",
    ),
    "weight-check": (
        "Check submultiplicativity on a ball and the monotonicity of P and Q beyond K.",
        "No CSV output.",
    ),
    "vn": (
        "Derive δ, L from ‖m‖_ε and stress-test the von Neumann inequality on random elements.",
        "No CSV output. Commutative groups only.",
    ),
    "free-group": (
        "Rudin-Shapiro flatness, Hankel certificates, Ω lower bounds and the divergence sequence on F₂.",
        "Writes divergence_d<d>.csv with columns n, S_n, L_n when 2β < d.",
    ),
}


def parse_args(args: list[str]) -> Namespace:
    parser = ArgumentParser(
        prog="weightedl1",
        description="Word metrics, weights and operator-algebra bounds for weighted group algebras ℓ¹(G, ω).",
        epilog="Exit codes: 0 success, 2 usage or domain error, 3 resource cap exceeded, 4 inconclusive certificate.",
    )
    parser.add_argument("--debug", action="store_true", help="Enable debug output.")
    parser.add_argument(
        "--config",
        type=str,
        default=None,
        help="Path to experiment config file (TOML). Defaults apply when omitted.",
    )
    parser.add_argument(
        "--kg", type=float, default=None, help="Override Grothendieck constant K_G."
    )
    parser.add_argument(
        "--out", type=str, default=None, help="Override output directory."
    )
    parser.add_argument(
        "--seed", type=int, default=None, help="Override random seed."
    )
    parser.add_argument(
        "--rigorous",
        action="store_true",
        help="Fail instead of reporting bounds that rest on a fitted, non-rigorous series tail.",
    )
    parser.add_argument(
        "--json", action="store_true", help="Print the result record as JSON."
    )

    subparser_description = "Experiment to run."
    subparsers = parser.add_subparsers(
        dest="command",
        required=True,
        help=subparser_description,
        description=subparser_description,
    )
    for name, (description, epilog) in command_descriptions.items():
        subparsers.add_parser(
            name,
            help=description,
            description=description,
            epilog=epilog,
            formatter_class=RawDescriptionHelpFormatter,
        )

    parsed_args = parser.parse_args(args)

    if parsed_args.config is not None and not pathlib.Path(parsed_args.config).is_file():
        raise parser.error("--config must be path to an existing file.")
    if parsed_args.kg is not None and parsed_args.kg <= 0:
        raise parser.error("--kg must be positive.")
    return parsed_args


def load_config(args: Namespace) -> ExperimentConfig:
    config = (
        ExperimentConfig.from_file(args.config)
        if args.config is not None
        else ExperimentConfig()
    )
    return config.with_overrides(
        kg=args.kg,
        seed=args.seed,
        output_dir=args.out,
        rigorous=True if args.rigorous else None,
    )


def main(argv: list[str] | None = None) -> int:
    args: Namespace = parse_args(sys.argv[1:] if argv is None else argv)

    if args.debug:
        logger.setLevel("INFO")

    try:
        config = load_config(args)
        record = commands[args.command](config)
    except Exception as e:
        code = exit_code_for(e)
        logger.error("%s failed: %s", args.command, e)
        print(f"error: {e}", file=sys.stderr)
        return code

    output_dir = pathlib.Path(config.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    config.update_config_file(output_dir / f"config_{record.config_hash[:12]}.toml")
    Ledger(output_dir).append(record)

    print(record.to_json() if args.json else record.payload_json())
    if has_inconclusive(record.payload):
        logger.warning("%s: inconclusive spectral certificate.", args.command)
        return EXIT_INCONCLUSIVE
    return EXIT_SUCCESS


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
