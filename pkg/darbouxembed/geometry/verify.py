"""Residual checks that a mesh is an isometric embedding of a given metric"""

import logging
from typing import Dict

import numpy as np

from ..models.mesh import SurfaceMesh
from ..models.metric import OrthogonalMetric2D
from ..numkit.differentiate import grid_first_partials, grid_second_partials
from .coframe import coframe, gauss_curvature

logger = logging.getLogger(__name__)

DEGENERATE_TOL = 1e-14


def _tangents(mesh: SurfaceMesh):
    """(X_a, X_b) by central differences of the exact map, or of the samples"""
    if mesh.evaluator is not None:
        A, B = mesh.grid()
        return grid_first_partials(mesh.evaluator.point, A, B)
    X_a = np.gradient(mesh.points, mesh.a_values, axis=0, edge_order=2)
    X_b = np.gradient(mesh.points, mesh.b_values, axis=1, edge_order=2)
    return X_a, X_b


def _chart_jacobian(mesh: SurfaceMesh) -> np.ndarray:
    ev = mesh.evaluator
    A, B = mesh.grid()
    if ev is not None and ev.chart_jacobian is not None:
        return np.asarray(ev.chart_jacobian(A, B), dtype=float)
    if ev is not None and ev.chart is not None:
        c_a, c_b = grid_first_partials(ev.chart, A, B)
    else:
        c_a = np.gradient(mesh.chart, mesh.a_values, axis=0, edge_order=2)
        c_b = np.gradient(mesh.chart, mesh.b_values, axis=1, edge_order=2)
    return np.stack([c_a, c_b], axis=-1)


def _normal(mesh: SurfaceMesh, X_a, X_b):
    sig = mesh.signature
    n = sig.cross(X_a, X_b)
    norm2 = sig.quadratic_form(n)
    n = n / np.sqrt(np.abs(norm2))[..., None]
    return n, np.sign(norm2)


def verify_embedding(mesh: SurfaceMesh, metric: OrthogonalMetric2D,
                     store: bool = True) -> Dict[str, np.ndarray]:
    """
    Compare the induced metric and curvature of a mesh with a target metric.

    Channels (per vertex):
        isometry: max deviation of <x_a, x_b> from the pulled-back metric
        curvature: |K_image - K_metric|, NaN where the tangent plane degenerates
        theta0..theta3, pfaffian: frame residuals when the mesh carries frames

    Args:
        mesh: Mesh with a chart (u, v) per vertex
        metric: Target metric in the (u, v) chart
        store: Also write the channels into mesh.residuals

    Returns:
        Dict channel -> (n_a, n_b) array
    """
    if mesh.chart is None:
        raise ValueError("Verification needs the (u, v) chart of every vertex")

    sig = mesh.signature
    U, V = mesh.chart[..., 0], mesh.chart[..., 1]
    X_a, X_b = _tangents(mesh)
    J = _chart_jacobian(mesh)

    g_uu, g_vv = metric.coefficients(U, V)
    G = np.zeros(U.shape + (2, 2))
    G[..., 0, 0] = g_uu
    G[..., 1, 1] = g_vv
    target = np.swapaxes(J, -1, -2) @ G @ J

    E_ = sig.dot(X_a, X_a)
    F_ = sig.dot(X_a, X_b)
    G_ = sig.dot(X_b, X_b)
    isometry = np.maximum.reduce([
        np.abs(E_ - target[..., 0, 0]),
        np.abs(F_ - target[..., 0, 1]),
        np.abs(G_ - target[..., 1, 1])
    ])
    channels: Dict[str, np.ndarray] = {'isometry': isometry}

    det_I = E_ * G_ - F_ ** 2
    degenerate = np.abs(det_I) <= DEGENERATE_TOL * np.maximum(1.0, np.abs(E_ * G_))
    if mesh.evaluator is not None:
        A, B = mesh.grid()
        X_aa, X_ab, X_bb = grid_second_partials(mesh.evaluator.point, A, B)
        with np.errstate(divide='ignore', invalid='ignore'):
            n, n_sign = _normal(mesh, X_a, X_b)
            L, M, N = sig.dot(X_aa, n), sig.dot(X_ab, n), sig.dot(X_bb, n)
            K_image = n_sign * (L * N - M ** 2) / det_I
        K_target = gauss_curvature(metric, U, V)
        curvature = np.where(degenerate, np.nan, np.abs(K_image - K_target))
        channels['curvature'] = curvature
        if np.any(degenerate):
            logger.warning(f"{int(np.sum(degenerate))} vertices have a degenerate tangent plane")

    if mesh.evaluator is not None and mesh.evaluator.frame is not None:
        channels.update(_frame_residuals(mesh, metric, X_a, X_b, J))

    if store:
        mesh.residuals.update(channels)
    return channels


def _frame_residuals(mesh: SurfaceMesh, metric: OrthogonalMetric2D, X_a, X_b, J) -> Dict[str, np.ndarray]:
    """
    theta0 = eps3 <dx, e3>, theta_i = eps_i <dx, e_i> - eta^i,
    theta3 = eps1 <de2, e1> - eta^1_2, each evaluated on both grid directions.
    """
    sig = mesh.signature
    A, B = mesh.grid()
    frame = mesh.evaluator.frame
    F0 = np.asarray(frame(A, B), dtype=float)
    dF_a, dF_b = grid_first_partials(frame, A, B)
    e = [F0[..., :, k] for k in range(3)]
    eps = [np.sign(sig.dot(ek, ek)) for ek in e]

    U, V = mesh.chart[..., 0], mesh.chart[..., 1]
    cf = coframe(metric, U, V)
    conn_x, conn_y = cf.connection
    # rows of J are (u, v); the coframe works in (x, y)
    xy = J[..., ::-1, :] if cf.swapped else J

    out = {f'theta{k}': np.zeros(U.shape) for k in range(4)}
    for col, (X, dF) in enumerate(((X_a, dF_a), (X_b, dF_b))):
        x_d = xy[..., 0, col]
        y_d = xy[..., 1, col]
        eta1 = cf.A * x_d
        eta2 = cf.B * y_d
        eta12 = conn_x * x_d + conn_y * y_d
        de2 = dF[..., :, 1]
        terms = {
            'theta0': eps[2] * sig.dot(X, e[2]),
            'theta1': eps[0] * sig.dot(X, e[0]) - eta1,
            'theta2': eps[1] * sig.dot(X, e[1]) - eta2,
            'theta3': eps[0] * sig.dot(de2, e[0]) - eta12,
        }
        for name, value in terms.items():
            out[name] = np.maximum(out[name], np.abs(value))

    out['pfaffian'] = np.maximum.reduce([out[f'theta{k}'] for k in range(4)])
    return out
