import json

import numpy as np
import pytest

from core import storage
from core.errors import UsageError
from geometry.graphs import solve_disk, solve_radial
from geometry.mesh import mesh_profile
from geometry.rotational import build_sphere


def test_profile_csv_is_bit_exact(tmp_path, H_one):
    curve = build_sphere(H_one, -1, 1e-2)
    path = storage.write_profile_csv(curve, tmp_path / "sphere.csv")
    back = storage.read_profile_csv(path)
    for name in ("s", "x", "z", "sigma"):
        assert np.array_equal(getattr(back, name), getattr(curve, name))
    assert back.kappa == curve.kappa
    assert back.closure == curve.closure
    assert back.step == curve.step
    assert back.closure_defect == curve.closure_defect
    assert back.prescription == {"type": "constant", "value": 1.0}
    assert storage.artifact_kind(path) == "profile"


def test_radial_csv_is_bit_exact(tmp_path, H_one):
    graph = solve_radial(H_one, -1, 0.7, 1e-2)
    back = storage.read_radial_csv(storage.write_radial_csv(graph, tmp_path / "cap.csv"))
    assert back.R == graph.R
    for name in ("r", "u", "phi", "nu"):
        assert np.array_equal(getattr(back, name), getattr(graph, name))


def test_header_precedes_columns(tmp_path, H_one):
    path = storage.write_radial_csv(solve_radial(H_one, -1, 0.5, 1e-1), tmp_path / "cap.csv")
    lines = path.read_text().splitlines()
    meta, count = storage.read_header(path)
    assert all(line.startswith("# ") for line in lines[:count])
    assert lines[count] == "r,u,phi,nu"
    assert json.loads(meta["prescription"]) == {"type": "constant", "value": 1.0}
    assert meta["kappa"] == "-1"


def test_digits_trim_output(tmp_path, H_one):
    graph = solve_radial(H_one, -1, 0.5, 1e-1)
    short = storage.read_radial_csv(storage.write_radial_csv(graph, tmp_path / "short.csv", digits=4))
    full = storage.read_radial_csv(storage.write_radial_csv(graph, tmp_path / "full.csv"))
    assert np.array_equal(full.u, graph.u)
    assert np.allclose(short.u, graph.u, rtol=1e-3, atol=1e-12)
    assert all(float(f"{v:.4g}") == v for v in short.u)
    assert (tmp_path / "short.csv").stat().st_size < (tmp_path / "full.csv").stat().st_size


def test_disk_grid_round_trip(tmp_path, H_one):
    graph = solve_disk(H_one, -1, 0.3, 0.0, nr=8, ntheta=8, tol=1e-8)
    back = storage.read_disk(storage.write_disk(graph, tmp_path / "disk.txt"))
    assert np.array_equal(back.u, graph.u)
    assert (back.nr, back.ntheta, back.R) == (8, 8, 0.3)
    assert back.iterations == graph.iterations


def test_boundary_json(tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps([[0.0, 1.0], [np.pi, -1.0], [np.pi / 2, 0.0], [1.5 * np.pi, 0.0]]))
    samples = storage.read_boundary_json(path)
    assert samples[:, 0].tolist() == sorted(samples[:, 0].tolist())
    values = storage.boundary_on_grid(samples, 8)
    assert values == pytest.approx(np.cos(2 * np.pi * np.arange(8) / 8), abs=0.3)
    assert values[0] == 1.0 and values[4] == -1.0


def test_bad_boundary_json(tmp_path):
    path = tmp_path / "g.json"
    path.write_text('{"theta": 1}')
    with pytest.raises(UsageError):
        storage.read_boundary_json(path)


def test_wrong_columns_are_rejected(tmp_path):
    path = tmp_path / "x.csv"
    path.write_text("# kind: radial\na,b\n1,2\n")
    with pytest.raises(UsageError):
        storage.read_radial_csv(path)


def test_obj_with_height_companion(tmp_path, H_one):
    mesh = mesh_profile(build_sphere(H_one, -1, 1e-2), ntheta=12)
    written = storage.write_obj(mesh, tmp_path / "sphere.obj", chart="quadric")
    assert [p.name for p in written] == ["sphere.obj", "sphere.height.obj"]
    verts, faces = storage.read_obj(written[0])
    assert verts.shape == (mesh.n_vertices, 3)
    assert np.array_equal(faces, mesh.faces)
    assert np.allclose(verts[:, 0] ** 2 + verts[:, 1] ** 2 - verts[:, 2] ** 2, -1.0, atol=1e-9)
    heights = [float(line.split()[2]) for line in written[1].read_text().splitlines()[1:]]
    assert heights == pytest.approx(mesh.vertices[:, 2].tolist())


def test_json_report(tmp_path, H_one):
    from geometry.prescribed import validate_class

    path = storage.write_json(validate_class(H_one, -1), tmp_path / "class.json")
    data = json.loads(path.read_text())
    assert data["in_c1k"] is True
    assert data["kappa"] == {"value": -1}
