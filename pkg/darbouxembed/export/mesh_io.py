"""Mesh, report and JSON record input-output"""

import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Dict, Union

import numpy as np
import pandas as pd

from ..errors import InputFormatError
from ..models.curves import GeneratorPair, InitialCurve
from ..models.mesh import SurfaceMesh
from ..models.metric import OrthogonalMetric2D
from ..models.report import Report

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

MESH_FORMATS = ('obj', 'csv')

CURVE_PRESETS = {
    'example2': InitialCurve.example2,
}


def _atomic_write(path: PathLike, text: str):
    """Write through a temporary file in the target directory, then rename over the target"""
    path = Path(path)
    directory = path.parent if str(path.parent) else Path('.')
    with tempfile.NamedTemporaryFile('w', dir=directory, prefix=f'.{path.name}.', suffix='.tmp',
                                     delete=False, encoding='utf-8', newline='\n') as fh:
        fh.write(text)
        tmp_name = fh.name
    try:
        os.replace(tmp_name, path)
    except OSError:
        os.unlink(tmp_name)
        raise


def mesh_to_obj(mesh: SurfaceMesh, name: str = 'surface') -> str:
    """OBJ text: row-major `v` lines, then one-based quad `f` lines"""
    if mesh.n_vertices == 0:
        raise ValueError("Cannot export an empty mesh")
    lines = [f"o {name}"]
    lines += [f"v {x:.12g} {y:.12g} {z:.12g}" for x, y, z in mesh.points.reshape(-1, 3)]
    lines += [f"f {a + 1} {b + 1} {c + 1} {d + 1}" for a, b, c, d in mesh.faces()]
    return "\n".join(lines) + "\n"


def mesh_to_frame(mesh: SurfaceMesh) -> pd.DataFrame:
    """
    One row per vertex: both parameters as t1, t2 (mesh.axes names them in
    the report), the coordinates as given (Lorentz
    meshes are not Euclideanised), the isometry and curvature residuals.
    """
    A, B = mesh.grid()
    pts = mesh.points.reshape(-1, 3)
    n = mesh.n_vertices
    nan = np.full(n, np.nan)
    isom = mesh.residuals.get('isometry')
    curv = mesh.residuals.get('curvature')
    return pd.DataFrame({
        't1': A.ravel(),
        't2': B.ravel(),
        'x1': pts[:, 0],
        'x2': pts[:, 1],
        'x3': pts[:, 2],
        'res_isom': nan if isom is None else np.ravel(isom),
        'res_K': nan if curv is None else np.ravel(curv),
    })


def export_mesh(mesh: SurfaceMesh, path: PathLike, fmt: str = None) -> Path:
    """
    Write a mesh as OBJ or CSV; the format defaults to the file suffix.

    Raises:
        ValueError: Unknown format or empty mesh
        OSError: Unwritable path
    """
    path = Path(path)
    fmt = (fmt or path.suffix.lstrip('.') or 'obj').lower()
    if fmt not in MESH_FORMATS:
        raise ValueError(f"Unknown mesh format {fmt!r}; use one of {', '.join(MESH_FORMATS)}")
    if fmt == 'obj':
        text = mesh_to_obj(mesh, name=str(mesh.metadata.get('kind', 'surface')))
    else:
        text = mesh_to_frame(mesh).to_csv(index=False, float_format='%.12g', na_rep='nan')
    _atomic_write(path, text)
    logger.info(f"Wrote {mesh.n_vertices} vertices to {path} ({fmt})")
    return path


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"Object of type {type(obj).__name__} is not JSON serializable")


def report_to_json(report: Union[Report, Dict]) -> str:
    data = report.to_dict() if isinstance(report, Report) else report
    return json.dumps(data, sort_keys=True, indent=2, default=_json_default) + "\n"


def write_report(report: Union[Report, Dict], path: PathLike) -> Path:
    """Write a report as sorted-key JSON"""
    path = Path(path)
    _atomic_write(path, report_to_json(report))
    logger.info(f"Report written to {path}")
    return path


def load_json(path: PathLike) -> Dict:
    """
    Raises:
        InputFormatError: If the file is not a JSON object
        OSError: If it cannot be read
    """
    with open(path, 'r', encoding='utf-8') as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise InputFormatError(f"{path}: invalid JSON ({e})") from e
    if not isinstance(data, dict):
        raise InputFormatError(f"{path}: expected a JSON object, got {type(data).__name__}")
    return data


def load_curve(source: PathLike) -> InitialCurve:
    """Initial curve from a preset name or a JSON record {x1, x2, x3, domain[, t0, name]}"""
    if str(source) in CURVE_PRESETS:
        return CURVE_PRESETS[str(source)]()
    data = load_json(source)
    data.setdefault('name', Path(source).stem)
    return InitialCurve.from_dict(data)


def load_generators(path: PathLike) -> GeneratorPair:
    return GeneratorPair.from_dict(load_json(path))


def load_metric(path: PathLike) -> OrthogonalMetric2D:
    data = load_json(path)
    try:
        return OrthogonalMetric2D.from_dict(data)
    except (KeyError, TypeError) as e:
        raise InputFormatError(f"{path}: malformed metric record ({e})") from e
