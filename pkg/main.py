"""Main entry point for the Eigenvector Lab."""

import argparse
import sys
from typing import Any, Dict, List, Optional, Union

from experiments.config import ENSEMBLES, FORMATS, SUBCOMMANDS
from graph.nodes import record_from_state
from system import EigenvectorLab, print_record
from utils.logger import get_logger

logger = get_logger(__name__)


def _index(value: str) -> Union[str, int]:
    return value if value in ("bulk", "edge") else int(value)


def _floats(value: str) -> List[float]:
    return [float(v) for v in value.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="evlab", description="Eigenvector mass fluctuation experiments")
    parser.add_argument("--log-level", dest="log_level", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    subparsers = parser.add_subparsers(dest="command", required=True)

    for command in SUBCOMMANDS:
        sub = subparsers.add_parser(command)
        sub.add_argument("--config", help="JSON config file; flags override its values")
        sub.add_argument("--n", type=int)
        sub.add_argument("--set-size", dest="set_size", help='|I| as an integer or "N^a"')
        sub.add_argument("--family", choices=["coord", "random"])
        sub.add_argument("--ensemble", choices=list(ENSEMBLES))
        sub.add_argument("--profile-spread", dest="profile_spread", type=float)
        sub.add_argument("--ou-time", dest="ou_time", type=float)
        sub.add_argument("--index", type=_index, help="bulk, edge or a 0-based index")
        sub.add_argument("--samples", type=int)
        sub.add_argument("--seed", type=int)
        sub.add_argument("--out", help="output directory")
        sub.add_argument("--format", dest="formats", action="append", choices=list(FORMATS))
        sub.add_argument("--workers", type=int)
        if command == "que":
            sub.add_argument("--epsilons", type=_floats, help="comma-separated exponents")
        if command == "dbm":
            sub.add_argument("--times", type=_floats, help="comma-separated times in (0, 1]")
            sub.add_argument("--method", dest="dbm_method", choices=["ou", "sde"])
            sub.add_argument("--dt", type=float)
        if command == "flow-check":
            sub.add_argument("--step", dest="flow_step", type=float)
        if command == "reg-compare":
            sub.add_argument("--delta2", type=float)
            sub.add_argument("--epsilon2", type=float)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Run one experiment; exit code 0 iff every gate passed."""
    args = build_parser().parse_args(argv)
    flags: Dict[str, Any] = {k: v for k, v in vars(args).items() if k not in ("command", "config", "log_level")}
    experiment = SUBCOMMANDS[args.command]

    try:
        lab = EigenvectorLab(log_level=args.log_level)
        state = lab.run_settings(experiment, flags, args.config)
    except Exception as e:
        print(f"\n❌ Error: {e}")
        return 2

    if state.get("config") is None:
        print(f"\n❌ Configuration Error: {(state.get('errors') or {}).get('validate')}")
        return 2

    record = record_from_state(state)
    print_record(record)
    return 0 if record.passed else 1


if __name__ == "__main__":
    sys.exit(main())
