"""pmc command line.

    pmc sphere --kappa -1 --H '{"type":"constant","value":1}' --out sphere.csv --mesh sphere.obj
    pmc solve-radial --kappa -1 --H '{"type":"constant","value":1}' --R 1.0 --out cap.csv
    pmc verify --input sphere.csv

Exit codes: 0 success, 1 usage, 2 precondition or class violation,
3 numerical failure. Failures print ``error: <kind>: <detail>`` on stderr;
results go to stdout as JSON.
"""

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any, NoReturn, Optional

from pydantic import ValidationError

from apps.cli.commands import estimates as estimates_commands
from apps.cli.commands import graphs as graphs_commands
from apps.cli.commands import rotational as rotational_commands
from core.config import get_settings
from core.errors import PMCError, UsageError
from schemas.geometry import CHART_IDS
from schemas.run_config import RunConfig

logger = logging.getLogger(__name__)

HANDLERS = {
    **rotational_commands.HANDLERS,
    **graphs_commands.HANDLERS,
    **estimates_commands.HANDLERS,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise UsageError(message)


def _common() -> argparse.ArgumentParser:
    p = _Parser(add_help=False, argument_default=argparse.SUPPRESS)
    p.add_argument("--config", type=Path, help="JSON file mirroring the flags; flags win")
    p.add_argument("--kappa", type=int, help="curvature of the base, -1 or 1")
    p.add_argument("--H", dest="prescription", help="prescription descriptor JSON")
    p.add_argument("--step", type=float)
    p.add_argument("--out", type=Path)
    p.add_argument("--mesh", type=Path, help="write the revolved surface as OBJ")
    p.add_argument("--chart", choices=CHART_IDS)
    p.add_argument("--ntheta-mesh", dest="ntheta_mesh", type=int)
    p.add_argument("--digits", type=int, help="significant digits of written floats")
    p.add_argument("--threads", type=int)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="pmc", description="Prescribed mean curvature surfaces in M2(kappa) x R")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("sphere", parents=[common], help="rotational H-sphere by shooting from the axis")
    sub.add_parser("cylinder", parents=[common], help="vertical H-cylinder radius")

    phase = sub.add_parser("phase-plane", parents=[common], help="equilibria and orbits of the profile ODE")
    phase.add_argument("--x-range", dest="x_range", type=float, nargs=2, default=argparse.SUPPRESS)
    phase.add_argument("--sigma-range", dest="sigma_range", type=float, nargs=2, default=argparse.SUPPRESS)
    phase.add_argument("--seeds", type=int, default=argparse.SUPPRESS)

    for name, text in (("solve-radial", "radial Dirichlet graph with u(R)=0"), ("solve-disk", "Dirichlet graph on the polar grid")):
        g = sub.add_parser(name, parents=[common], help=text)
        g.add_argument("--R", type=float, default=argparse.SUPPRESS)
        if name == "solve-disk":
            g.add_argument("--nr", type=int, default=argparse.SUPPRESS)
            g.add_argument("--ntheta", type=int, default=argparse.SUPPRESS)
            g.add_argument("--tol", type=float, default=argparse.SUPPRESS)
            g.add_argument("--max-iter", dest="max_iter", type=int, default=argparse.SUPPRESS)
            g.add_argument("--damping", type=float, default=argparse.SUPPRESS)
            g.add_argument("--boundary", type=Path, default=argparse.SUPPRESS, help="JSON [[theta, value], ...]")
            g.add_argument("--g", type=float, default=argparse.SUPPRESS, help="constant boundary value")

    verify = sub.add_parser("verify", parents=[common], help="residual of a profile, radial or disk artifact")
    verify.add_argument("--input", type=Path, default=argparse.SUPPRESS)

    heights = sub.add_parser("heights", parents=[common], help="empirical vertical height probe")
    heights.add_argument("--radii", type=float, nargs="+", default=argparse.SUPPRESS)
    heights.add_argument("--H0", type=float, nargs="+", default=argparse.SUPPRESS)

    diameter = sub.add_parser("diameter", parents=[common], help="CMC-sphere diameters d(H0)")
    diameter.add_argument("--H0", type=float, nargs="+", default=argparse.SUPPRESS)
    return parser


def _read_config_file(path: Path) -> dict[str, Any]:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    if "H" in data:
        data["prescription"] = data.pop("H")
    data.pop("command", None)
    return data


def load_config(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """Parse flags, merge them over the --config file and validate."""
    args = vars(build_parser().parse_args(argv))
    config_file = args.pop("config", None)
    merged = _read_config_file(config_file) if config_file is not None else {}
    merged.update(args)
    try:
        return RunConfig.model_validate(merged)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first.get("loc", ())) or "config"
        raise UsageError(f"{where}: {first.get('msg')}") from None


def run(config: RunConfig) -> dict[str, Any]:
    """Dispatch one validated configuration; returns the summary printed on stdout."""
    logger.debug("running %s with kappa=%d", config.command, config.kappa)
    return HANDLERS[config.command](config)


def _configure_logging() -> None:
    try:
        level = get_settings().effective_log_level
    except ValidationError as exc:
        raise UsageError(f"invalid PMC_ environment: {exc.errors()[0].get('msg')}") from None
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        _configure_logging()
        summary = run(load_config(argv))
    except PMCError as exc:
        print(f"error: {exc.reason}", file=sys.stderr)
        return exc.exit_code
    print(json.dumps(summary, indent=2, default=str))
    return 0


if __name__ == "__main__":
    sys.exit(main())
