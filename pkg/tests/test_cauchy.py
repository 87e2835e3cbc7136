"""Tests for the Cauchy pipeline on the reference curve"""

import numpy as np
import pytest

from darbouxembed.errors import DomainError, LiftBreakdownError
from darbouxembed.geometry.superposition import superpose, surface_from_superposed
from darbouxembed.models.curves import InitialCurve
from darbouxembed.numkit.functions import poly
from darbouxembed.numkit.integrate import OdeConfig
from darbouxembed.processor.cauchy import (
    LiftMethod,
    check_quadrature_parametrization,
    four_function_relation,
    lift,
    lift_residuals,
    solve,
    specify_lambda,
    split,
    two_function_relation,
    validate,
)

T_RANGE = (0.8, 1.2)


def known_lift(ts):
    """r = t, s = 3 / (2t), v = 3t / 2"""
    return np.stack([ts, 1.5 / ts, 1.5 * ts])


def closed_form_x1(u, v):
    return (108 * u + 135 * v + 16 * u ** 3 + 60 * u ** 2 * v + 48 * u * v ** 2 + 20 * v ** 3) / 108


def closed_form_x3(u, v):
    return (5 * u ** 2 + 8 * u * v + 5 * v ** 2) / 6


@pytest.fixture
def reference_lift(example2):
    return lift(example2, r0=1.0, t_range=T_RANGE)


@pytest.fixture(scope="module")
def reference_solution():
    return solve(InitialCurve.example2(), r0=1.0, grid=(11, 11), t_range=T_RANGE)


@pytest.fixture(scope="module")
def wide_solution():
    config = OdeConfig(rtol=1e-12, atol=1e-14)
    return solve(InitialCurve.example2(), grid=(3, 3), t_range=(1.0, 2.0), config=config, verify=False)


def test_reference_curve_is_admissible(example2):
    report = validate(example2)
    assert report.passed
    # x1' - x2' = 3 t^2 is smallest at t = 0.5
    assert report.min_dx12 == pytest.approx(0.75)


def test_flat_x3_is_not_admissible():
    curve = InitialCurve(poly(0.0, 1.0), poly(0.0, -1.0), poly(2.0))
    report = validate(curve)
    assert not report.passed
    assert report.to_dict()['passed'] is False


def test_reference_constraint_vanishes(example2):
    residual, worst = check_quadrature_parametrization(example2)
    assert worst < 1e-9
    assert residual(np.array([0.7, 1.3])) == pytest.approx([0.0, 0.0], abs=1e-9)


def test_default_s0(example2):
    lifted = lift(example2, t_range=T_RANGE)
    assert lifted.initial == (1.0, 1.5, 1.5)


def test_explicit_v0_overrides_curve(example2):
    lifted = lift(example2, v0=0.0, t_range=T_RANGE)
    assert lifted.initial[2] == 0.0
    assert lifted.state(1.1)[2] == pytest.approx(1.5 * 1.1 - 1.5, abs=1e-8)


def test_default_arguments_give_known_lift(example2):
    lifted = lift(example2, r0=1.0)
    assert (lifted.path.t_min, lifted.path.t_max) == pytest.approx(example2.domain)
    ts = np.linspace(*example2.domain, 41)
    assert np.max(np.abs(lifted.state(ts) - known_lift(ts))) < 1e-7


def test_direct_lift_matches_known_lift(reference_lift):
    ts = np.linspace(*T_RANGE, 21)
    assert np.max(np.abs(reference_lift.state(ts) - known_lift(ts))) < 1e-8
    state = reference_lift.lift_state(1.0)
    # p = 1/t, q = -2/t, u = -3t/2
    assert state.p == pytest.approx(1.0)
    assert state.q == pytest.approx(-2.0)
    assert state.u == pytest.approx(-1.5)


def test_printed_lift_agrees_with_direct(example2, reference_lift):
    printed = lift(example2, r0=1.0, method='printed', t_range=T_RANGE)
    ts = np.linspace(*T_RANGE, 21)
    assert printed.method is LiftMethod.PRINTED
    assert np.max(np.abs(printed.state(ts) - reference_lift.state(ts))) < 1e-7


def test_verbatim_lift_drifts(example2):
    ts = np.linspace(*T_RANGE, 21)
    try:
        verbatim = lift(example2, r0=1.0, method=LiftMethod.VERBATIM, t_range=T_RANGE)
    except LiftBreakdownError:
        return
    assert np.max(np.abs(verbatim.state(ts) - known_lift(ts))) > 0.1


def test_lift_residuals_small(reference_lift):
    residuals = lift_residuals(reference_lift)
    assert set(residuals) == {'form_x1', 'form_x2', 'form_x3', 'form_v', 'v_identity'}
    assert max(residuals.values()) < 1e-7


def test_lift_guards(example2):
    with pytest.raises(DomainError):
        lift(example2, t0=3.0)
    with pytest.raises(DomainError):
        lift(example2, r0=0.0)
    with pytest.raises(LiftBreakdownError):
        lift(example2, s0=0.0)


def test_lift_relations_hold(reference_lift, example2):
    ts = np.linspace(*T_RANGE, 9)
    p, q, r = reference_lift.pq(ts)
    lam = specify_lambda(p, r, q, r)
    # p0 = q0 along the lift
    assert np.allclose(lam, 1.0)
    assert np.allclose(four_function_relation(p, r, q, r, lam), 0.0, atol=1e-10)
    assert np.allclose(two_function_relation(example2.velocity(ts), p, q, 1.0), 0.0, atol=1e-8)


def test_specify_lambda_solves_relation():
    p, p0, q, q0 = 0.3, 1.2, -0.7, 0.8
    lam = specify_lambda(p, p0, q, q0)
    assert four_function_relation(p, p0, q, q0, lam) == pytest.approx(0.0, abs=1e-12)


def test_split_reconstructs_lift(reference_lift):
    parts = split(reference_lift)
    assert parts.conservation < 1e-7
    assert parts.plus.side == '+' and parts.minus.side == '-'


def test_split_curves_in_closed_form(reference_lift):
    parts = split(reference_lift)
    ts = np.linspace(*T_RANGE, 9)
    plus, minus = parts.plus(ts), parts.minus(ts)
    assert np.allclose(plus[0], 1 / ts) and np.allclose(minus[0], -2 / ts)
    assert np.allclose(plus[1], ts) and np.allclose(minus[1], ts)
    assert np.max(np.abs(plus[2] - (2 * ts + 1) / 4)) < 1e-8
    assert np.max(np.abs(minus[2] - (4 * ts - 1) / 4)) < 1e-8
    assert np.max(np.abs(plus[3] - (3 * ts + ts ** 3 + 11) / 24)) < 1e-8


def test_superposed_split_reproduces_lift(reference_lift, example2, rng):
    parts = split(reference_lift)
    ts = rng.uniform(*T_RANGE, 25)
    x, u, v = surface_from_superposed(superpose(parts.plus(ts), parts.minus(ts)))
    assert np.max(np.abs(x - example2.position(ts).T)) < 1e-7
    assert np.allclose(u, -1.5 * ts, atol=1e-8)
    assert np.allclose(v, 1.5 * ts, atol=1e-8)


def test_solution_diagonal(reference_solution):
    diagnostics = reference_solution.diagnostics
    assert diagnostics['diagonal_error'] < 1e-6
    assert diagnostics['constraint_residual'] < 1e-9
    assert diagnostics['admissibility']['passed']


def test_solution_matches_closed_form(reference_solution):
    mesh = reference_solution.mesh
    u, v = mesh.chart[..., 0], mesh.chart[..., 1]
    assert np.max(np.abs(mesh.points[..., 0] - closed_form_x1(u, v))) < 1e-6
    assert np.max(np.abs(mesh.points[..., 2] - closed_form_x3(u, v))) < 1e-6


def test_off_diagonal_point(wide_solution):
    # t1 = 1, t2 = 2 gives u = -2, v = 5/2
    u, v = wide_solution.surface.chart(1.0, 2.0)
    assert u == pytest.approx(-2.0, abs=1e-8)
    assert v == pytest.approx(2.5, abs=1e-8)
    assert wide_solution.surface.point(1.0, 1.0) == pytest.approx([7 / 8, -1 / 8, 3 / 4], abs=1e-8)
    corner = wide_solution.mesh.points[0, -1]
    assert corner[2] == pytest.approx(15 / 8, abs=1e-8)
    assert corner[0] == pytest.approx(closed_form_x1(-2.0, 2.5), abs=1e-8)


def test_solution_is_isometric(reference_solution):
    verification = reference_solution.diagnostics['verification']
    assert verification['isometry']['max'] < 1e-5
    assert reference_solution.to_dict()['method'] == 'direct'
