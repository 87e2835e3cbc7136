"""Tests for the extrinsically symmetric Riemannian sweeps"""

import numpy as np
import pytest

from darbouxembed.errors import DomainError, ProfileSingularityError
from darbouxembed.processor.revolve import (
    AmbientKilling,
    ExtrinsicParams,
    hausdorff_distance,
    integrate_profile,
    killing_predicate,
    mirror_distance,
    revolve,
    sweep,
)

S_RANGE = (0.05, 1.5)


@pytest.fixture(scope="module")
def paraboloid():
    return revolve('R1', ExtrinsicParams(3.0, 0.0), S_RANGE, grid=(16, 16))


def test_r1_sweep_is_a_paraboloid(paraboloid):
    diagnostics = paraboloid.diagnostics
    assert diagnostics['paraboloid_deviation'] < 1e-5
    assert diagnostics['pitch'] == pytest.approx(0.0, abs=1e-9)


def test_profile_invariants_conserved(paraboloid):
    diagnostics = paraboloid.diagnostics
    assert diagnostics['slope_drift'] < 1e-7
    assert diagnostics['speed_drift'] < 1e-7
    assert diagnostics['frame_defect'] < 1e-7
    assert diagnostics['W_drift'] < 1e-6
    assert diagnostics['Z_drift'] < 1e-6


def test_sweep_is_isometric(paraboloid):
    verification = paraboloid.diagnostics['verification']
    assert verification['isometry']['max'] < 1e-5
    assert verification['killing_length']['max'] < 1e-5
    assert max(paraboloid.diagnostics['killing_predicate'].values()) < 1e-5


def test_revolve_report(paraboloid):
    data = paraboloid.to_dict()
    assert data['metric'] == 'R1'
    assert data['params'] == {'alpha': 3.0, 'beta': 0.0}
    assert data['mesh']['axes'] == ['u', 't']
    assert data['mesh']['shape'] == [16, 16]


def test_default_flow_times_cover_one_turn(paraboloid):
    mesh = paraboloid.mesh
    assert mesh.b_values[0] == pytest.approx(-np.pi / 3)
    assert mesh.b_values[-1] == pytest.approx(np.pi / 3)


def test_lorentzian_case_rejected():
    with pytest.raises(DomainError):
        revolve('LE-S1', ExtrinsicParams(3.0), S_RANGE)


def test_empty_s_range_rejected():
    with pytest.raises(DomainError):
        integrate_profile('R1', ExtrinsicParams(3.0), (1.0, 0.5))


@pytest.mark.parametrize("alpha", [0.0, -1.0])
def test_alpha_must_be_positive(alpha):
    with pytest.raises(ValueError):
        ExtrinsicParams(alpha)


def test_no_real_z1():
    with pytest.raises(ProfileSingularityError):
        ExtrinsicParams(0.1).z_initial(1.0, 1.0)
    z1, z2 = ExtrinsicParams(5.0, 3.0).z_initial(1.0, 0.0)
    assert (z1, z2) == pytest.approx((4.0, 3.0))


def test_opposite_slopes_are_mirror_images():
    plus = revolve('R1', ExtrinsicParams(3.0, 0.5), S_RANGE, grid=(12, 12), verify=False)
    minus = revolve('R1', ExtrinsicParams(3.0, -0.5), S_RANGE, grid=(12, 12), verify=False)
    assert mirror_distance(plus.mesh, minus.mesh) < 1e-6
    assert plus.killing.pitch == pytest.approx(0.5 / 9, rel=1e-6)


class TestAmbientKilling:
    @pytest.fixture
    def killing(self):
        return AmbientKilling(W=np.array([0.3, -0.2, 0.5]), Z=np.array([0.0, 1.0, 2.0]))

    def test_identity_at_zero(self, killing, rng):
        x = rng.normal(size=(5, 3))
        assert np.allclose(killing.flow(0.0, x), x, atol=1e-12)

    def test_flow_is_rigid(self, killing, rng):
        x = rng.normal(size=(2, 3))
        moved = killing.flow(0.7, x)
        assert np.linalg.norm(moved[0] - moved[1]) == pytest.approx(np.linalg.norm(x[0] - x[1]))

    def test_flow_follows_velocity(self, killing):
        x = np.array([1.0, 0.5, -0.3])
        h = 1e-6
        derivative = (killing.flow(h, x) - killing.flow(-h, x)) / (2 * h)
        assert np.allclose(derivative, killing.velocity(x), atol=1e-8)

    def test_pitch_and_axis(self, killing):
        assert killing.pitch == pytest.approx((-0.2 + 1.0) / 5)
        assert killing.axis_direction @ killing.Z == pytest.approx(np.sqrt(5))
        # the axis point only moves along the axis
        drift = killing.velocity(killing.axis_point)
        assert np.allclose(np.cross(drift, killing.Z), 0.0, atol=1e-12)

    def test_zero_rotation_rejected(self):
        with pytest.raises(ValueError):
            AmbientKilling(W=np.ones(3), Z=np.zeros(3))


def test_hausdorff_distance():
    a = np.zeros((1, 3))
    b = np.array([[0.0, 0.0, 0.0], [3.0, 4.0, 0.0]])
    assert hausdorff_distance(a, b) == pytest.approx(5.0)
    assert hausdorff_distance(b, b) == 0.0


def test_killing_predicate_vanishes_for_zero_field(paraboloid):
    mesh = paraboloid.mesh
    zeros = np.zeros(mesh.points.shape)
    out = killing_predicate(mesh, zeros, np.zeros(3))
    assert set(out) == {'y1', 'y2', 'normal', 'z'}
    assert all(np.max(v) == 0.0 for v in out.values())


def test_sweep_clips_s_range():
    profile = integrate_profile('R1', ExtrinsicParams(3.0), (0.2, 1.0))
    mesh = sweep(profile, grid=(5, 4), s_range=(0.3, 0.8), verify=False)
    s = profile.case.profile.s_of_u(mesh.a_values)
    assert s[0] == pytest.approx(0.3, abs=1e-9)
    assert s[-1] == pytest.approx(0.8, abs=1e-9)


def test_profile_rhs_conserves_invariants(rng):
    from darbouxembed.geometry.catalog import catalog
    from darbouxembed.processor.revolve import STATE_SIZE, profile_ode_rhs

    case = catalog('R1')
    u = 0.7
    _, _, q1, q2, _ = case.profile.jet(u)
    state = np.zeros(STATE_SIZE)
    state[3:12] = np.eye(3).ravel()
    state[12:] = rng.uniform(0.5, 1.5, 2)
    z1, z2 = state[12], state[13]
    out = profile_ode_rhs(case, ExtrinsicParams(3.0), state, u)

    assert out[13] * q1 + z2 * q2 == pytest.approx(0.0, abs=1e-12)
    assert z1 * out[12] + z2 * out[13] + q2 * case.profile.jet(u)[4] == pytest.approx(0.0, abs=1e-12)
    frame = state[3:12].reshape(3, 3)
    dframe = out[3:12].reshape(3, 3)
    assert np.allclose(dframe @ frame.T + frame @ dframe.T, 0.0, atol=1e-12)


def test_profile_rhs_rejects_z1_zero():
    from darbouxembed.geometry.catalog import catalog
    from darbouxembed.processor.revolve import STATE_SIZE, profile_ode_rhs

    state = np.zeros(STATE_SIZE)
    state[13] = 1.0
    with pytest.raises(ProfileSingularityError):
        profile_ode_rhs(catalog('R1'), ExtrinsicParams(3.0), state, 0.7)


def test_canonical_alignment_puts_axis_on_z(rng):
    from darbouxembed.processor.revolve import canonical_alignment

    killing = AmbientKilling(W=np.array([0.3, -0.2, 0.5]), Z=np.array([0.0, 1.0, 2.0]))
    start = rng.normal(size=(1, 3))
    orbit = np.concatenate([killing.flow(t, start) for t in np.linspace(0.0, 2.0, 9)])
    aligned = canonical_alignment(orbit, killing)
    radius = np.hypot(aligned[:, 0], aligned[:, 1])
    assert np.allclose(radius, radius[0], atol=1e-10)
    assert aligned[0, 1] == pytest.approx(0.0, abs=1e-12)
    assert aligned[0, 0] >= 0.0
    assert aligned[0, 2] == pytest.approx(0.0, abs=1e-12)
    # the screw advances along +z at a constant rate
    assert np.allclose(np.diff(aligned[:, 2]), aligned[1, 2] - aligned[0, 2], atol=1e-10)


def test_flow_matches_matrix_exponential():
    from scipy.linalg import expm

    killing = AmbientKilling(W=np.array([0.3, -0.2, 0.5]), Z=np.array([0.0, 1.0, 2.0]))
    z1, z2, z3 = killing.Z
    # x -> x cross Z as a matrix
    generator = np.array([[0.0, z3, -z2], [-z3, 0.0, z1], [z2, -z1, 0.0]])
    x = np.array([1.0, -0.4, 0.8])
    t = 0.9
    expected = (killing.axis_point + expm(t * generator) @ (x - killing.axis_point)
                + killing.pitch * t * killing.Z)
    assert np.allclose(killing.flow(t, x), expected, atol=1e-10)
