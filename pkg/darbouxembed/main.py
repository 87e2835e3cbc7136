"""Main application entry point for darbouxembed"""

import logging
import sys
import time
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

import pandas as pd

from .config import Settings, get_settings
from .errors import FlatPointError, MixedTypeError
from .export.mesh_io import load_metric
from .geometry.catalog import catalog_table, metric_by_name
from .geometry.darboux import JetConfig, check_integrability
from .geometry.errata import detect_errata
from .geometry.superposition import generator_mesh, special_mesh
from .geometry.so12 import g0_metric
from .geometry.verify import verify_embedding
from .models.curves import GeneratorPair, InitialCurve
from .models.mesh import SurfaceMesh
from .models.metric import OrthogonalMetric2D
from .models.report import Report, RunConfig
from .processor.cauchy import LiftMethod, solve
from .processor.revolve import ExtrinsicParams, revolve
from .selftest import run_selftest

logger = logging.getLogger(__name__)

# residual channel -> default pass threshold for mesh-producing commands
MESH_TOLERANCES = {
    'isometry': 1e-5,
    'curvature': 1e-3,
    'pfaffian': 1e-4,
}
DIAGONAL_TOL = 1e-6
CONSERVATION_TOL = 1e-8


def _mesh_verdict(summary: Dict, tolerances: Dict[str, float]) -> bool:
    """Every channel with a tolerance must be present-and-finite or absent, and below its threshold"""
    for channel, tol in tolerances.items():
        if channel not in summary:
            continue
        value = summary[channel]['max']
        if value is None or not value < tol:
            return False
    return True


class DarbouxEmbed:
    """Main darbouxembed system class"""

    def __init__(self, settings: Optional[Settings] = None):
        """
        Initialize the system

        Args:
            settings: Runtime settings (defaults to the environment)
        """
        self.settings = settings or get_settings()

    def catalog(self) -> pd.DataFrame:
        """The twelve normal forms as a table"""
        return catalog_table()

    def resolve_metric(self, metric: Union[str, OrthogonalMetric2D]) -> OrthogonalMetric2D:
        """Catalog id, reference name, JSON metric file, or a metric object"""
        if isinstance(metric, OrthogonalMetric2D):
            return metric
        if Path(metric).suffix == '.json' and Path(metric).exists():
            return load_metric(metric)
        return metric_by_name(metric)

    def _report(self, command: str, options: Dict, grid: Tuple[int, int], tol: float,
                tolerances: Dict[str, float], residuals: Dict, verdict: bool,
                details: Dict, started: float) -> Report:
        return Report(
            command=command,
            config=RunConfig(command=command, options=options, grid=tuple(grid), tolerance=tol),
            tolerances=tolerances,
            residuals=residuals,
            verdict=bool(verdict),
            errata=detect_errata(),
            details=details,
            timing={'seconds': time.perf_counter() - started}
        )

    def check(self, metric: Union[str, OrthogonalMetric2D], grid: Tuple[int, int] = (20, 20),
              tol: float = 1e-4, step: float = 1e-3, form: str = 'q') -> Report:
        """
        Run the integrability conditions on a metric.

        A metric with a flat point or a curvature sign change fails the
        check rather than erroring.
        """
        started = time.perf_counter()
        resolved = self.resolve_metric(metric)
        options = {'metric': resolved.name, 'step': step, 'form': form}
        tolerances = {'integrability': tol}
        try:
            result = check_integrability(resolved, grid=grid, tol=tol, config=JetConfig(step=step), form=form)
        except (FlatPointError, MixedTypeError) as e:
            logger.warning(f"{resolved.name} cannot be tested: {e}")
            return self._report('check', options, grid, tol, tolerances, {}, False,
                                {'metric': resolved.to_dict(), 'reason': str(e)}, started)

        details = result.to_dict()
        logger.info(f"check {resolved.name}: max residual {result.max_residual:.3e}")
        return self._report('check', options, grid, tol, tolerances, result.summary(),
                            result.verdict, details, started)

    def embed(self, pair: Optional[GeneratorPair] = None, special: Optional[Tuple[float, float]] = None,
              grid: Tuple[int, int] = (50, 50), p_range=None, q_range=None,
              u_range=(0.2, 1.0), v_range=(-1.0, 1.0), null_coords: bool = False,
              tol: float = 1e-5) -> Tuple[Report, SurfaceMesh]:
        """Embed u^2 (dv^2 - du^2) from generators, or from the constant-generator closed form"""
        started = time.perf_counter()
        if special is not None:
            eps1, eps2 = special
            mesh = special_mesh(eps1, eps2, u_range, v_range, grid, null_coords=null_coords)
            options = {'special': [eps1, eps2], 'u_range': list(u_range), 'v_range': list(v_range),
                       'null_coords': null_coords}
        elif pair is not None:
            mesh = generator_mesh(pair, grid, p_range, q_range)
            options = {'generators': pair.to_dict(),
                       'p_range': list(p_range or pair.p_domain), 'q_range': list(q_range or pair.q_domain)}
        else:
            raise ValueError("embed needs a generator pair or constant generators")

        verify_embedding(mesh, g0_metric())
        tolerances = dict(MESH_TOLERANCES, isometry=tol)
        summary = mesh.summary()
        verdict = _mesh_verdict(summary, tolerances)
        details = mesh.to_dict()
        return self._report('embed', options, grid, tol, tolerances, summary, verdict, details, started), mesh

    def cauchy(self, curve: InitialCurve, t0: Optional[float] = None, r0: float = 1.0,
               grid: Tuple[int, int] = (41, 41), method: str = 'direct', s0: Optional[float] = None,
               v0: Optional[float] = None, t_range=None, tol: float = 1e-5) -> Tuple[Report, SurfaceMesh]:
        """Solve the geometric Cauchy problem for an initial curve; v0 defaults to the curve's"""
        started = time.perf_counter()
        method = LiftMethod(method)
        solution = solve(curve, r0=r0, grid=grid, method=method, t0=t0, s0=s0, v0=v0, t_range=t_range)
        mesh = solution.mesh
        tolerances = dict(MESH_TOLERANCES, isometry=tol, diagonal=DIAGONAL_TOL)
        summary = mesh.summary()
        diag = solution.diagnostics
        verdict = _mesh_verdict(summary, dict(MESH_TOLERANCES, isometry=tol)) and diag['diagonal_error'] < DIAGONAL_TOL
        options = {'curve': curve.to_dict(), 't0': solution.lift.t0, 'r0': r0, 'method': method.value,
                   's0': solution.lift.initial[1], 'v0': solution.lift.initial[2],
                   't_range': list(t_range or curve.domain)}
        details = dict(solution.to_dict(), axes=list(mesh.axes))
        return self._report('cauchy', options, grid, tol, tolerances, summary, verdict, details, started), mesh

    def revolve(self, metric: str = 'R1', alpha: float = 3.0, beta: float = 0.0,
                s_range=(0.01, 2.0), grid: Tuple[int, int] = (40, 40), t_range=None,
                tol: float = 1e-5) -> Tuple[Report, SurfaceMesh]:
        """Sweep a Riemannian normal form by its ambient Killing field"""
        started = time.perf_counter()
        result = revolve(metric, ExtrinsicParams(alpha, beta), tuple(s_range), grid=grid, t_range=t_range)
        mesh = result.mesh
        summary = mesh.summary()
        diag = result.diagnostics
        tolerances = dict(MESH_TOLERANCES, isometry=tol, conservation=CONSERVATION_TOL)
        conserved = max(diag['slope_drift'], diag['speed_drift'])
        verdict = _mesh_verdict(summary, dict(MESH_TOLERANCES, isometry=tol)) and conserved < CONSERVATION_TOL
        options = {'metric': metric, 'alpha': alpha, 'beta': beta, 's_range': list(s_range),
                   't_range': None if t_range is None else list(t_range)}
        details = dict(result.to_dict(), axes=list(mesh.axes))
        return self._report('revolve', options, grid, tol, tolerances, summary, verdict,
                            details, started), mesh

    def selftest(self, seed: int = 0, samples: int = 100) -> Report:
        """Seeded randomised property battery"""
        started = time.perf_counter()
        passed, results = run_selftest(seed, samples)
        residuals = {name: {'max': r['error'], 'mean': r['error']} for name, r in results.items()}
        tolerances = {name: r['tolerance'] for name, r in results.items()}
        return self._report('selftest', {'seed': seed, 'samples': samples}, (2, 2),
                            min(tolerances.values()), tolerances, residuals, passed,
                            {'checks': results}, started)


def main():
    """Console entry point"""
    from .cli import run
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
