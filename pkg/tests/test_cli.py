"""End-to-end tests of the command line"""

import json

import pytest

from darbouxembed import __version__
from darbouxembed.cli import EXIT_ERROR, EXIT_FAIL, EXIT_PASS, parse_grid, parse_smooth, run
from darbouxembed.geometry.errata import ERRATA_FLAGS


def read_report(path):
    return json.loads(path.read_text())


def test_catalog_listing(capsys):
    assert run(['catalog']) == EXIT_PASS
    out = capsys.readouterr().out
    assert 'LH-T3' in out and 'R1' in out


def test_catalog_json(tmp_path):
    out = tmp_path / 'catalog.json'
    assert run(['catalog', '--json', '--out', str(out)]) == EXIT_PASS
    assert len(json.loads(out.read_text())) == 12


def test_check_catalog_metric(tmp_path):
    report = tmp_path / 'check.json'
    assert run(['check', '--metric', 'R1', '--grid', '3x3', '--report', str(report)]) == EXIT_PASS
    data = read_report(report)
    assert data['verdict'] is True
    assert data['command'] == 'check'
    assert set(data['errata']) == set(ERRATA_FLAGS)
    assert data['config']['outputs'] == [str(report)]


def test_check_sphere_fails(tmp_path):
    report = tmp_path / 'check.json'
    assert run(['check', '--metric', 'sphere', '--grid', '3x3', '--report', str(report)]) == EXIT_FAIL
    assert read_report(report)['verdict'] is False


def test_check_flat_metric_fails_cleanly(tmp_path):
    report = tmp_path / 'check.json'
    assert run(['check', '--metric', 'flat', '--grid', '3x3', '--report', str(report)]) == EXIT_FAIL
    assert 'reason' in read_report(report)['details']


def test_check_metric_file(tmp_path):
    from darbouxembed.geometry.catalog import catalog

    metric = tmp_path / 'metric.json'
    metric.write_text(json.dumps(catalog('R3').metric.to_dict()))
    report = tmp_path / 'check.json'
    assert run(['check', '--metric', str(metric), '--grid', '3x3', '--report', str(report)]) == EXIT_PASS


@pytest.mark.parametrize("argv", [
    ['check', '--metric', 'torus'],
    ['check', '--metric', 'R1', '--grid', '3'],
    ['check', '--metric', 'R1', '--grid', '1x4'],
    ['check'],
    ['nonsense'],
    [],
])
def test_usage_and_input_errors(argv, capsys):
    assert run(argv) == EXIT_ERROR
    assert 'darbouxembed:' in capsys.readouterr().err


def test_missing_and_malformed_files(tmp_path):
    assert run(['cauchy', '--curve', str(tmp_path / 'missing.json')]) == EXIT_ERROR
    bad = tmp_path / 'bad.json'
    bad.write_text('{"x1": ')
    assert run(['cauchy', '--curve', str(bad)]) == EXIT_ERROR


def test_embed_needs_generators():
    assert run(['embed', '--grid', '4x4']) == EXIT_ERROR


def test_embed_special_rejects_opposite_eps():
    assert run(['embed', '--special', '2,-2', '--grid', '4x4']) == EXIT_ERROR


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        run(['--version'])
    assert exc.value.code == 0
    assert __version__ in capsys.readouterr().out


@pytest.mark.parametrize("curve", ['example2', 'fixture'])
def test_cauchy_writes_mesh_and_report(tmp_path, example2_path, curve):
    out = tmp_path / 'cauchy.obj'
    report = tmp_path / 'cauchy.json'
    source = str(example2_path) if curve == 'fixture' else curve
    code = run(['cauchy', '--curve', source, '--grid', '5x5', '--t-range', '0.8,1.2',
                '--out', str(out), '--report', str(report)])
    assert code == EXIT_PASS
    assert sum(line.startswith('v ') for line in out.read_text().splitlines()) == 25
    data = read_report(report)
    assert data['details']['diagnostics']['diagonal_error'] < 1e-6
    assert data['config']['options']['v0'] == 1.5
    assert data['details']['axes'] == ['t1', 't2']
    assert str(out) in data['config']['outputs']


def test_embed_special(tmp_path):
    out = tmp_path / 'special.csv'
    report = tmp_path / 'embed.json'
    code = run(['embed', '--special', '1,2', '--grid', '6x6', '--out', str(out), '--report', str(report)])
    assert code == EXIT_PASS
    assert out.read_text().splitlines()[0] == 't1,t2,x1,x2,x3,res_isom,res_K'
    assert read_report(report)['details']['axes'] == ['u', 'v']
    assert read_report(report)['residuals']['isometry']['max'] < 1e-5


def test_embed_from_coefficients(tmp_path):
    report = tmp_path / 'embed.json'
    code = run(['embed', '--F', '0,0,0,1', '--G', '0,0,0,2', '--pq-domain', '0.1,0.9,1.1,2',
                '--grid', '6x6', '--report', str(report)])
    assert code == EXIT_PASS
    assert read_report(report)['config']['options']['p_range'] == [0.1, 0.9]


def test_revolve(tmp_path):
    report = tmp_path / 'revolve.json'
    code = run(['revolve', '--grid', '8x8', '--s-range', '0.2,1.5', '--report', str(report)])
    assert code == EXIT_PASS
    data = read_report(report)
    assert data['details']['metric'] == 'R1'
    assert data['details']['diagnostics']['paraboloid_deviation'] < 1e-5


def test_selftest(tmp_path):
    report = tmp_path / 'selftest.json'
    assert run(['selftest', '--samples', '5', '--seed', '3', '--report', str(report)]) == EXIT_PASS
    assert all(check['passed'] for check in read_report(report)['details']['checks'].values())


def test_parse_helpers():
    assert parse_grid('12X7') == (12, 7)
    assert parse_smooth('1,2')(1.0) == pytest.approx(3.0)
    assert parse_smooth('cosh')(0.0) == pytest.approx(1.0)
