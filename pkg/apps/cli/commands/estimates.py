"""heights subcommand."""

from pathlib import Path
from typing import Any

from core import storage
from geometry.estimates import confinement_quantities, heights_frame, probe_vertical_heights
from geometry.prescribed import parse_prescription
from schemas.run_config import RunConfig


def heights(config: RunConfig) -> dict[str, Any]:
    """Height probe; with --H0 also the confinement quantities built on it."""
    H = parse_prescription(config.prescription)
    report = probe_vertical_heights(H, config.kappa, config.radii, config.step, threads=config.threads)
    result: dict[str, Any] = report.model_dump(mode="json")
    confinement = [confinement_quantities(H, config.kappa, h0, report, config.step).model_dump(mode="json") for h0 in config.H0]
    if confinement:
        result["confinement"] = confinement
    written = []
    if config.out is not None:
        written.append(str(storage.write_json(result, config.out)))
        table = Path(config.out).with_name(f"{Path(config.out).stem}.heights.csv")
        written.append(str(storage.write_frame_csv(heights_frame(report), table, config.digits)))
    return {**result, "written": written}


HANDLERS = {"heights": heights}
