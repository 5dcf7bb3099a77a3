"""Local artifact storage: profile and radial CSVs, disk grids, JSON reports, OBJ meshes.

CSV and grid files start with ``# key: value`` metadata lines. Floats are
written with ``digits`` significant digits; at 17 a write/read cycle is
bit-exact.
"""

import json
from pathlib import Path
from typing import Any, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel

from core.config import get_settings
from core.errors import UsageError
from geometry import spaceform
from schemas.geometry import as_kappa
from schemas.surfaces import Closure, DiskGraph, ProfileCurve, RadialGraph, TriangleMesh

PROFILE_COLUMNS = ["s", "x", "z", "sigma", "nu"]
RADIAL_COLUMNS = ["r", "u", "phi", "nu"]


def _digits(digits: Optional[int]) -> int:
    return get_settings().digits if digits is None else digits


def _float_format(digits: Optional[int]) -> str:
    return f"%.{_digits(digits)}g"


def _header(meta: dict[str, Any]) -> str:
    lines = []
    for key, value in meta.items():
        text = json.dumps(value, separators=(",", ":")) if isinstance(value, (dict, list)) else str(value)
        lines.append(f"# {key}: {text}\n")
    return "".join(lines)


def read_header(path: Path | str) -> tuple[dict[str, str], int]:
    """Metadata lines of an artifact and how many there are."""
    meta: dict[str, str] = {}
    count = 0
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            count += 1
            key, sep, value = line[1:].strip().partition(":")
            if sep:
                meta[key.strip()] = value.strip()
    return meta, count


def _require(meta: dict[str, str], *keys: str) -> None:
    missing = [k for k in keys if k not in meta]
    if missing:
        raise UsageError(f"artifact header lacks {', '.join(missing)}")


def _optional_float(text: Optional[str]) -> Optional[float]:
    return None if text in (None, "None", "") else float(text)


def _write_frame(path: Path | str, meta: dict[str, Any], frame: pd.DataFrame, digits: Optional[int]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(_header(meta))
        frame.to_csv(fh, index=False, float_format=_float_format(digits))
    return path


def _read_frame(path: Path | str, columns: list[str]) -> tuple[dict[str, str], pd.DataFrame]:
    try:
        meta, skip = read_header(path)
        frame = pd.read_csv(path, skiprows=skip, float_precision="round_trip")
    except (OSError, ValueError, pd.errors.ParserError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    if list(frame.columns) != columns:
        raise UsageError(f"{path}: expected columns {','.join(columns)}, got {','.join(map(str, frame.columns))}")
    return meta, frame


# ---------------------------------------------------------------------------
# Profiles and radial graphs
# ---------------------------------------------------------------------------


def write_profile_csv(curve: ProfileCurve, path: Path | str, digits: Optional[int] = None) -> Path:
    meta = {
        "kind": "profile",
        "kappa": curve.kappa.value,
        "prescription": curve.prescription,
        "step": repr(curve.step),
        "closure": curve.closure.value,
        "event": curve.event,
        "closure_defect": repr(curve.closure_defect) if curve.closure_defect is not None else None,
    }
    frame = pd.DataFrame({"s": curve.s, "x": curve.x, "z": curve.z, "sigma": curve.sigma, "nu": curve.nu})
    return _write_frame(path, meta, frame, digits)


def read_profile_csv(path: Path | str) -> ProfileCurve:
    meta, frame = _read_frame(path, PROFILE_COLUMNS)
    _require(meta, "kappa", "prescription", "step", "closure")
    return ProfileCurve(
        s=frame["s"].to_numpy(),
        x=frame["x"].to_numpy(),
        z=frame["z"].to_numpy(),
        sigma=frame["sigma"].to_numpy(),
        kappa=as_kappa(int(meta["kappa"])),
        prescription=json.loads(meta["prescription"]),
        closure=Closure(meta["closure"]),
        step=float(meta["step"]),
        event=None if meta.get("event") in (None, "None") else meta["event"],
        closure_defect=_optional_float(meta.get("closure_defect")),
    )


def write_radial_csv(graph: RadialGraph, path: Path | str, digits: Optional[int] = None) -> Path:
    meta = {"kind": "radial", "kappa": graph.kappa.value, "prescription": graph.prescription, "R": repr(graph.R)}
    frame = pd.DataFrame({"r": graph.r, "u": graph.u, "phi": graph.phi, "nu": graph.nu})
    return _write_frame(path, meta, frame, digits)


def read_radial_csv(path: Path | str) -> RadialGraph:
    meta, frame = _read_frame(path, RADIAL_COLUMNS)
    _require(meta, "kappa", "prescription", "R")
    return RadialGraph(
        R=float(meta["R"]),
        r=frame["r"].to_numpy(),
        u=frame["u"].to_numpy(),
        phi=frame["phi"].to_numpy(),
        nu=frame["nu"].to_numpy(),
        kappa=as_kappa(int(meta["kappa"])),
        prescription=json.loads(meta["prescription"]),
    )


def artifact_kind(path: Path | str) -> str:
    """``profile``, ``radial`` or ``disk`` from the header of a written artifact."""
    meta, _ = read_header(path)
    kind = meta.get("kind")
    if kind not in ("profile", "radial", "disk"):
        raise UsageError(f"{path}: unknown artifact kind {kind!r}")
    return kind


def write_frame_csv(frame: pd.DataFrame, path: Path | str, digits: Optional[int] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=_float_format(digits))
    return path


# ---------------------------------------------------------------------------
# Disk grids and boundary data
# ---------------------------------------------------------------------------


def write_disk(graph: DiskGraph, path: Path | str, digits: Optional[int] = None) -> Path:
    """Header lines then the (nr+1) x ntheta grid, row 0 the origin, row-major."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    meta = {
        "kind": "disk",
        "kappa": graph.kappa.value,
        "R": repr(graph.R),
        "nr": graph.nr,
        "ntheta": graph.ntheta,
        "prescription": graph.prescription,
        "iterations": graph.iterations,
        "residual": repr(graph.residual),
    }
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_header(meta))
        np.savetxt(fh, graph.u, fmt=_float_format(digits))
    return path


def read_disk(path: Path | str) -> DiskGraph:
    meta, _ = read_header(path)
    _require(meta, "kappa", "R", "nr", "ntheta", "prescription")
    try:
        u = np.loadtxt(path, comments="#", ndmin=2)
    except ValueError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    nr, ntheta = int(meta["nr"]), int(meta["ntheta"])
    if u.shape != (nr + 1, ntheta):
        raise UsageError(f"{path}: grid has shape {u.shape}, header says {(nr + 1, ntheta)}")
    return DiskGraph(
        R=float(meta["R"]),
        nr=nr,
        ntheta=ntheta,
        u=u,
        boundary=u[nr].copy(),
        iterations=int(meta.get("iterations", 0)),
        residual=float(meta.get("residual", "nan")),
        kappa=as_kappa(int(meta["kappa"])),
        prescription=json.loads(meta["prescription"]),
    )


def read_boundary_json(path: Path | str) -> np.ndarray:
    """Boundary data ``[[theta, value], ...]`` as an (n, 2) array sorted by θ mod 2π."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = np.asarray(json.load(fh), dtype=float)
    except (OSError, TypeError, ValueError) as exc:
        raise UsageError(f"cannot read boundary data {path}: {exc}") from None
    if data.ndim != 2 or data.shape[1] != 2 or data.shape[0] < 1 or not np.all(np.isfinite(data)):
        raise UsageError("boundary data must be a non-empty list of finite [theta, value] pairs")
    data[:, 0] = np.mod(data[:, 0], 2.0 * np.pi)
    return data[np.argsort(data[:, 0])]


def boundary_on_grid(samples: np.ndarray, ntheta: int) -> np.ndarray:
    """Periodic linear interpolation of boundary samples at θ_j = 2πj/ntheta."""
    theta = 2.0 * np.pi * np.arange(ntheta) / ntheta
    return np.interp(theta, samples[:, 0], samples[:, 1], period=2.0 * np.pi)


# ---------------------------------------------------------------------------
# Reports and meshes
# ---------------------------------------------------------------------------


def write_json(payload: BaseModel | dict[str, Any], path: Path | str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = payload.model_dump(mode="json") if isinstance(payload, BaseModel) else payload
    path.write_text(json.dumps(data, indent=2, allow_nan=True) + "\n", encoding="utf-8")
    return path


def height_companion(path: Path | str) -> Path:
    path = Path(path)
    return path.with_name(f"{path.stem}.height{path.suffix or '.obj'}")


def write_obj(mesh: TriangleMesh, path: Path | str, chart: str = "quadric", digits: Optional[int] = None) -> list[Path]:
    """Wavefront OBJ in the given chart.

    The quadric chart puts (x₁, x₂, x₃) in the vertex lines and the heights,
    one ``# h`` comment per vertex in the same order, in a companion file.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    v = mesh.vertices
    coords = spaceform.export_points(mesh.kappa, v[:, 0], v[:, 1], v[:, 2], chart)
    fmt = _float_format(digits)
    written = [path]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# pmc mesh chart={chart} kappa={mesh.kappa.value}\n")
        for row in coords[:, :3]:
            fh.write("v " + " ".join(fmt % c for c in row) + "\n")
        for face in mesh.faces + 1:
            fh.write(f"f {face[0]} {face[1]} {face[2]}\n")
    if chart == "quadric":
        companion = height_companion(path)
        with open(companion, "w", encoding="utf-8") as fh:
            fh.write(f"# heights for {path.name}, one per vertex\n")
            for h in coords[:, 3]:
                fh.write(f"# h {fmt % h}\n")
        written.append(companion)
    return written


def read_obj(path: Path | str) -> tuple[np.ndarray, np.ndarray]:
    """Vertices and zero-based faces of an OBJ written by :func:`write_obj`."""
    verts, faces = [], []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "v":
                verts.append([float(p) for p in parts[1:4]])
            elif parts[0] == "f":
                faces.append([int(p.split("/")[0]) - 1 for p in parts[1:4]])
    return np.asarray(verts, dtype=float), np.asarray(faces, dtype=np.int64)
