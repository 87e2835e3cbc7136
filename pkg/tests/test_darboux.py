"""Tests for the integrability conditions"""

import numpy as np
import pytest

from darbouxembed.errors import FlatPointError, MixedTypeError
from darbouxembed.geometry.catalog import CATALOG_IDS, catalog, metric_by_name
from darbouxembed.geometry.coframe import frame_jet
from darbouxembed.geometry.darboux import (
    JetConfig,
    check_integrability,
    classify,
    condition_residuals,
    curvature_jet,
    k_condition_residuals,
    rotate_jet,
)
from darbouxembed.models.metric import OrthogonalMetric2D, Smooth2D
from darbouxembed.numkit.functions import CatalogSmooth, poly


@pytest.mark.parametrize("case_id", CATALOG_IDS)
def test_catalog_passes(case_id):
    report = check_integrability(catalog(case_id).metric, grid=(4, 4))
    assert report.verdict, report.summary()
    assert report.epsilon == catalog(case_id).epsilon
    assert report.sigma == catalog(case_id).metric.sigma


@pytest.mark.parametrize("name", ['sphere', 'hyperbolic-plane', 'perturbed-R1'])
def test_reference_metrics_fail(name):
    report = check_integrability(metric_by_name(name), grid=(4, 4))
    assert not report.verdict
    assert report.max_residual > 1e-2


def test_constant_curvature_residual_is_the_target():
    # q is constant, so q11 - 3 q^(-1/3) = -3
    report = check_integrability(metric_by_name('sphere'), grid=(3, 3))
    assert np.allclose(report.residuals['q11'], -3.0, atol=1e-6)
    assert np.allclose(report.residuals['q12'], 0.0, atol=1e-6)


@pytest.mark.parametrize("case_id", ['R1', 'R4', 'LE-S2', 'LH-T3'])
def test_k_form_agrees(case_id):
    metric = catalog(case_id).metric
    report = check_integrability(metric, grid=(3, 3), form='k')
    assert report.verdict
    assert set(report.residuals) == {'k11', 'k12', 'k21', 'k22'}


def test_k_form_rejects_perturbation():
    u, v = 0.8, 1.0
    residuals = k_condition_residuals(metric_by_name('perturbed-R1'), u, v)
    assert max(abs(r) for r in residuals.values()) > 1e-3


def test_flat_metric_raises():
    with pytest.raises(FlatPointError):
        check_integrability(metric_by_name('flat'), grid=(3, 3))
    with pytest.raises(FlatPointError):
        curvature_jet(metric_by_name('flat-lorentz'), 0.0, 0.0)


def test_mixed_sign_raises():
    # du^2 + (2 + u^3)^2 dv^2 has K = -6u / (2 + u^3)
    metric = OrthogonalMetric2D(Smooth2D(CatalogSmooth('const')), Smooth2D(poly(2.0, 0.0, 0.0, 1.0)),
                                domain=((-1.0, 1.0), (0.0, 1.0)), name='mixed')
    vs = np.linspace(0.0, 1.0, 3)
    assert classify(metric, np.linspace(0.1, 0.9, 5), vs) == -1
    assert classify(metric, np.linspace(-0.9, -0.1, 5), vs) == 1
    with pytest.raises(MixedTypeError):
        classify(metric, np.linspace(-0.9, 0.9, 10), vs)
    with pytest.raises(MixedTypeError):
        check_integrability(metric, grid=(6, 2))


@pytest.mark.parametrize("angle", [0.3, 1.1, -2.0])
def test_rotation_invariance_riemannian(angle):
    metric = catalog('R2').metric
    jet = curvature_jet(metric, 1.2, 0.4)
    base = condition_residuals(jet, 1)
    turned = condition_residuals(rotate_jet(jet, angle), 1)
    for name in base:
        assert turned[name] == pytest.approx(base[name], abs=1e-6)


def test_rotation_invariance_of_failure():
    jet = curvature_jet(metric_by_name('perturbed-R1'), 0.9, 0.1)
    before = max(abs(r) for r in condition_residuals(jet, 1).values())
    after = max(abs(r) for r in condition_residuals(rotate_jet(jet, 0.7), 1).values())
    assert before > 1e-3 and after > 1e-3


def test_frame_jet_of_linear_function():
    metric = catalog('R3').metric
    u, v = 1.3, 0.2
    jet = frame_jet(metric, lambda a, b: 2 * a + 0 * b, u, v)
    # e1 = du / u
    assert jet.first[0] == pytest.approx(2 / u, rel=1e-8)
    assert jet.first[1] == pytest.approx(0.0, abs=1e-8)


def test_jet_config_validation():
    with pytest.raises(ValueError):
        JetConfig(step=0.0)
    with pytest.raises(ValueError):
        check_integrability(catalog('R1').metric, form='x')


def test_report_dict():
    report = check_integrability(catalog('LH-T3').metric, grid=(3, 2), tol=1e-3)
    data = report.to_dict()
    assert data['type'] == 'hyperbolic'
    assert data['signature'] == 'lorentzian'
    assert data['grid'] == [3, 2]
    assert data['verdict'] is True
    assert set(data['residuals']) == {'q11', 'q22', 'q12', 'q21'}
