"""Tests for singular-curve superposition and the generator embeddings"""

import numpy as np
import pytest

from darbouxembed.errors import ChartError, DomainError, GeneratorError
from darbouxembed.geometry.so12 import g0_metric, n1_pfaffian_forms
from darbouxembed.geometry.superposition import (
    GeneratorSurface,
    constant_generator_pq,
    embed_from_generators,
    from_null_coordinates,
    generator_mesh,
    null_coordinates,
    singular_curve_from_generator,
    special_embedding,
    special_mesh,
    superpose,
    superpose_points,
    surface_from_superposed,
)
from darbouxembed.geometry.verify import verify_embedding
from darbouxembed.models.charts import N2Point
from darbouxembed.models.curves import GeneratorPair
from darbouxembed.numkit.functions import poly


def test_constant_generators_match_closed_form(constant_pair, constant_eps, rng):
    eps1, eps2 = constant_eps
    u = rng.uniform(0.2, 1.0, 50)
    v = rng.uniform(-1.0, 1.0, 50)
    p, q = constant_generator_pq(eps1, eps2, u, v)
    x, uv = embed_from_generators(constant_pair, p, q)
    assert np.allclose(uv[..., 0], u, atol=1e-12)
    assert np.allclose(uv[..., 1], v, atol=1e-9)
    assert np.max(np.abs(x - special_embedding(eps1, eps2, u, v))) < 1e-9


def test_special_embedding_value():
    # eps = (1, 2) at u = 1, v = 2
    x = special_embedding(1.0, 2.0, 1.0, 2.0)
    assert x[0] == pytest.approx(13 / 6)


@pytest.mark.parametrize("eps1, eps2", [(1.0, 1.0), (1.0, -1.0), (2.0, -2.0), (-3.0, 3.0)])
def test_constant_generators_need_distinct_squares(eps1, eps2):
    with pytest.raises(ChartError):
        constant_generator_pq(eps1, eps2, 0.5, 0.0)
    with pytest.raises(ChartError):
        special_embedding(eps1, eps2, 0.5, 0.0)


def test_opposite_eps_is_a_valid_pair():
    x = special_embedding(1.0, -2.0, 0.5, 0.3)
    assert np.all(np.isfinite(x))


def test_superpose_adds_fibres(rng):
    plus = rng.normal(size=(6, 4))
    minus = rng.normal(size=(6, 4))
    rows = superpose(plus, minus)
    assert rows.shape == (8, 4)
    assert np.array_equal(rows[0], plus[0])
    assert np.array_equal(rows[3], minus[1])
    assert np.allclose(rows[4:], plus[2:] + minus[2:])


def test_superpose_rejects_degenerate_rows(rng):
    plus = rng.normal(size=(6, 3))
    minus = rng.normal(size=(6, 3))
    same = minus.copy()
    same[0, 1] = plus[0, 1]
    with pytest.raises(ChartError):
        superpose(plus, same)
    flat = minus.copy()
    flat[1, 2] = 0.0
    with pytest.raises(ChartError):
        superpose(plus, flat)
    # p = q = 1 with p0 = q0 = 1
    with pytest.raises(ChartError):
        superpose(np.ones(6), np.ones(6))


@pytest.mark.parametrize("values", [
    (1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0),
    (0.5, 0.0, 1.5, 1.0, 0.0, 0.0, 0.0, 0.0),
    (0.5, 1.0, 1.5, 0.0, 0.0, 0.0, 0.0, 0.0),
])
def test_n2_point_rejects_degenerate_values(values):
    with pytest.raises(ChartError):
        N2Point(*values)
    with pytest.raises(ChartError):
        N2Point.from_array(values)


def test_superpose_points_of_generator_curves():
    pair = GeneratorPair.constant(1.0, 2.0)
    plus = singular_curve_from_generator('+', pair.F, pair.p_domain)
    minus = singular_curve_from_generator('-', pair.G, pair.q_domain)
    point = superpose_points(plus, 0.5, minus, 1.5)
    assert (point.p, point.q) == (0.5, 1.5)
    assert point.p0 == pytest.approx(1.0)
    assert point.q0 == pytest.approx(2.0)
    with pytest.raises(ChartError):
        superpose_points(plus, 0.5, minus, 0.5)


def test_superpose_points_rejects_vanishing_root():
    # F''' = p vanishes at p = 0, so p0 = 0 there
    plus = singular_curve_from_generator('+', poly(0, 0, 0, 0, 1 / 24), (0.0, 1.0))
    minus = singular_curve_from_generator('-', poly(0, 0, 0, 1 / 6), (1.0, 2.0))
    assert isinstance(superpose_points(plus, 0.5, minus, 1.5), N2Point)
    with pytest.raises(ChartError):
        superpose_points(plus, 0.0, minus, 1.5)


def test_superposed_rows_are_integral(random_pair):
    # both singular curves solve their systems, so the superposed surface is an integral surface
    pair = random_pair(3)
    surface = GeneratorSurface(pair)
    p, q, h = 0.5, 1.5, 1e-5
    x_p = (surface.point(p + h, q) - surface.point(p - h, q)) / (2 * h)
    rows = surface.rows(np.array([p - h, p, p + h]), np.array([q, q, q]))
    dp0 = (rows[1, 2] - rows[1, 0]) / (2 * h)
    dv = (rows[4, 2] - rows[4, 0]) / (2 * h)
    tangent = np.concatenate([[1.0, dp0, 0.0, 0.0, dv], x_p])
    forms = n1_pfaffian_forms(p, rows[1, 1], q, rows[3, 1])
    assert np.allclose(forms @ tangent, 0.0, atol=1e-5)


def test_surface_from_superposed_matches_point(random_pair):
    surface = GeneratorSurface(random_pair(5))
    p = np.array([0.2, 0.6])
    q = np.array([1.3, 1.8])
    x, u, v = surface_from_superposed(surface.rows(p, q))
    assert np.allclose(x, surface.point(p, q), atol=1e-10)
    assert np.allclose(np.stack([u, v], axis=-1), surface.chart(p, q), atol=1e-10)


@pytest.mark.parametrize("seed", [0, 1, 2, 7])
def test_random_generators_embed_isometrically(random_pair, seed):
    mesh = generator_mesh(random_pair(seed), grid=(12, 12))
    channels = verify_embedding(mesh, g0_metric())
    u_max = np.max(np.abs(mesh.chart[..., 0]))
    assert np.max(channels['isometry']) < 1e-5 * (1 + u_max ** 2)
    assert np.nanmax(channels['curvature']) < 1e-3
    assert np.all(mesh.chart[..., 0] > 0)


def test_generator_mesh_nudges_diagonal():
    pair = GeneratorPair(poly(0, 0, 0, 1.0), poly(0, 0, 0, 1.0), p_domain=(0.0, 1.0), q_domain=(0.0, 2.0))
    mesh = generator_mesh(pair, grid=(3, 5))
    assert not np.any(np.isin(mesh.a_values, mesh.b_values))
    assert np.all(np.isfinite(mesh.points))


def test_generator_validation():
    with pytest.raises(GeneratorError):
        GeneratorSurface(GeneratorPair(poly(0, 0, 0, -1.0), poly(0, 0, 0, 1.0)))
    with pytest.raises(GeneratorError):
        GeneratorPair(poly(0, 0, 1.0), poly(0, 0, 0, 1.0)).validate()


def test_embed_rejects_degenerate_and_outside():
    pair = GeneratorPair.constant(1.0, 2.0)
    with pytest.raises(ChartError):
        embed_from_generators(pair, np.array(0.5), np.array(0.5))
    with pytest.raises(DomainError):
        embed_from_generators(pair, np.array(5.0), np.array(0.5))


def test_singular_curve_arc_sign():
    F = poly(0, 0, 0, 1 / 48)
    plus = singular_curve_from_generator('+', F, (-1.0, 1.0))
    minus = singular_curve_from_generator('-', F, (-1.0, 1.0))
    # F''' = 1/8, so v moves by -+ t / 2
    assert plus(0.6)[2] == pytest.approx(-0.3)
    assert minus(0.6)[2] == pytest.approx(0.3)
    assert plus(0.6)[1] == pytest.approx(1.0)
    with pytest.raises(ValueError):
        singular_curve_from_generator('x', F, (-1.0, 1.0))


@pytest.mark.parametrize("null_coords, a_range, b_range", [
    (False, (0.2, 1.0), (-1.0, 1.0)),
    # u = (vbar - ubar) / 2 stays in [0.2, 1]
    (True, (-1.0, -0.2), (0.2, 1.0)),
])
def test_special_mesh_frames(null_coords, a_range, b_range):
    mesh = special_mesh(1.0, 2.0, a_range, b_range, grid=(6, 6), null_coords=null_coords)
    channels = verify_embedding(mesh, g0_metric())
    assert np.max(channels['isometry']) < 1e-6
    assert np.nanmax(channels['curvature']) < 1e-4
    assert np.max(channels['pfaffian']) < 1e-4
    assert mesh.axes == (('ubar', 'vbar') if null_coords else ('u', 'v'))


def test_null_coordinates_round_trip():
    u, v = np.array([0.3, 1.2]), np.array([-0.5, 0.7])
    ubar, vbar = null_coordinates(u, v)
    assert np.allclose(ubar, v - u)
    back_u, back_v = from_null_coordinates(ubar, vbar)
    assert np.allclose(back_u, u) and np.allclose(back_v, v)


def test_chart_jacobian_sign_changes(caplog):
    from darbouxembed.geometry.superposition import chart_jacobian_sign_changes
    from darbouxembed.models.mesh import SurfaceEvaluator, SurfaceMesh
    from darbouxembed.numkit.linalg import Signature

    def jacobian(a, b):
        out = np.zeros(np.shape(a) + (2, 2))
        out[..., 0, 0] = a
        out[..., 1, 1] = 1.0
        return out

    evaluator = SurfaceEvaluator(point=lambda a, b: np.stack([a, b, np.zeros_like(a)], axis=-1),
                                 chart_jacobian=jacobian)
    folded = SurfaceMesh.from_evaluator(('p', 'q'), [-1.0, -0.5, 0.5, 1.0], [0.0, 1.0, 2.0],
                                        evaluator, Signature.LORENTZ)
    assert chart_jacobian_sign_changes(folded) == 3
    assert 'changes sign' in caplog.text
    assert chart_jacobian_sign_changes(special_mesh(1.0, 2.0, (0.2, 1.0), (-1.0, 1.0), grid=(4, 4))) == 0
