"""Tests for mesh export and JSON inputs"""

import json

import numpy as np
import pytest

from darbouxembed.errors import InputFormatError
from darbouxembed.export.mesh_io import (
    export_mesh,
    load_curve,
    load_generators,
    load_json,
    load_metric,
    mesh_to_frame,
    mesh_to_obj,
    report_to_json,
    write_report,
)
from darbouxembed.geometry.catalog import catalog
from darbouxembed.models.curves import GeneratorPair
from darbouxembed.models.mesh import SurfaceMesh
from darbouxembed.numkit.linalg import Signature


@pytest.fixture
def square():
    points = np.array([[[0.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
                       [[1.0, 0.0, 0.0], [1.0, 1.0, 2.0]]])
    return SurfaceMesh(axes=('u', 'v'), a_values=np.array([0.0, 1.0]), b_values=np.array([0.0, 1.0]),
                       points=points, signature=Signature.LORENTZ, metadata={'kind': 'special'})


def test_obj_layout(square):
    lines = mesh_to_obj(square).splitlines()
    assert lines[0] == 'o surface'
    assert sum(line.startswith('v ') for line in lines) == 4
    assert lines[-1] == 'f 1 3 4 2'
    assert lines[4] == 'v 1 1 2'


def test_csv_columns_are_fixed(square, tmp_path):
    path = export_mesh(square, tmp_path / 'mesh.csv')
    lines = path.read_text().splitlines()
    assert len(lines) == square.n_vertices + 1
    assert lines[0] == 't1,t2,x1,x2,x3,res_isom,res_K'
    assert mesh_to_frame(square)['t2'].tolist() == [0.0, 1.0, 0.0, 1.0]
    frame = mesh_to_frame(square)
    # Lorentz coordinates are written as they are
    assert frame['x3'].tolist() == [0.0, 0.0, 0.0, 2.0]
    assert frame['res_isom'].isna().all()


def test_csv_carries_residuals(square):
    square.residuals['isometry'] = np.full((2, 2), 1e-9)
    assert np.allclose(mesh_to_frame(square)['res_isom'], 1e-9)


def test_export_leaves_no_temporaries(square, tmp_path):
    export_mesh(square, tmp_path / 'mesh.obj')
    export_mesh(square, tmp_path / 'mesh.obj')
    assert [p.name for p in tmp_path.iterdir()] == ['mesh.obj']


def test_format_override_and_rejection(square, tmp_path):
    path = export_mesh(square, tmp_path / 'mesh.txt', fmt='obj')
    assert path.read_text().startswith('o special')
    with pytest.raises(ValueError, match="Unknown mesh format"):
        export_mesh(square, tmp_path / 'mesh.ply')
    with pytest.raises(ValueError):
        export_mesh(square, tmp_path / 'mesh.obj', fmt='stl')


def test_empty_mesh_rejected():
    with pytest.raises(ValueError):
        SurfaceMesh(axes=('u', 'v'), a_values=np.array([]), b_values=np.array([]),
                    points=np.zeros((0, 0, 3)), signature=Signature.EUCLIDEAN)


def test_report_json_sorted(tmp_path):
    report = {'verdict': True, 'command': 'check', 'residuals': {'b': np.float64(1.0), 'a': np.arange(2)}}
    text = report_to_json(report)
    data = json.loads(text)
    assert list(data) == sorted(data)
    assert data['residuals'] == {'a': [0, 1], 'b': 1.0}
    path = write_report(report, tmp_path / 'report.json')
    assert json.loads(path.read_text()) == data


@pytest.mark.parametrize("text", ['{not json', '[1, 2, 3]', '"text"'])
def test_bad_json_rejected(tmp_path, text):
    path = tmp_path / 'bad.json'
    path.write_text(text)
    with pytest.raises(InputFormatError):
        load_json(path)


def test_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_json(tmp_path / 'missing.json')


def test_load_curve_preset_and_file(example2_path):
    preset = load_curve('example2')
    loaded = load_curve(example2_path)
    ts = np.linspace(0.6, 1.4, 5)
    assert loaded.name == 'example2'
    assert loaded.start == 1.0
    assert loaded.v0 == preset.v0 == 1.5
    assert loaded.domain == preset.domain == (0.5, 2.5)
    assert np.allclose(loaded.position(ts), preset.position(ts))
    assert np.allclose(loaded.velocity(ts), preset.velocity(ts))


def test_load_curve_malformed(tmp_path):
    path = tmp_path / 'curve.json'
    path.write_text(json.dumps({'x1': [0, 1], 'x2': [0, -1]}))
    with pytest.raises(InputFormatError):
        load_curve(path)


def test_load_generators(tmp_path):
    pair = GeneratorPair.constant(1.0, 2.0)
    path = tmp_path / 'pair.json'
    path.write_text(json.dumps(pair.to_dict()))
    back = load_generators(path)
    assert back.p_domain == pair.p_domain
    assert back.G(1.5) == pytest.approx(pair.G(1.5))
    path.write_text(json.dumps({'F': [0, 0, 0, 1]}))
    with pytest.raises(InputFormatError):
        load_generators(path)


def test_load_metric(tmp_path):
    metric = catalog('R2').metric
    path = tmp_path / 'metric.json'
    path.write_text(json.dumps(metric.to_dict()))
    back = load_metric(path)
    assert back.name == metric.name
    assert np.allclose(back.coefficients(1.0, 0.3), metric.coefficients(1.0, 0.3))
