"""Command-line front end"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from . import __version__
from .config import get_settings
from .errors import DarbouxEmbedError, InputFormatError
from .export.mesh_io import export_mesh, load_curve, load_generators, load_json, report_to_json, write_report
from .geometry.catalog import list_cases
from .main import DarbouxEmbed
from .models.curves import GeneratorPair
from .numkit.functions import smooth_from_dict

logger = logging.getLogger(__name__)

EXIT_PASS, EXIT_ERROR, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    """Bad command line"""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_grid(text: str) -> Tuple[int, int]:
    """'41x41' -> (41, 41)"""
    try:
        n, m = (int(part) for part in text.lower().split('x'))
    except ValueError:
        raise argparse.ArgumentTypeError(f"Grid must look like NxM, got {text!r}")
    if n < 2 or m < 2:
        raise argparse.ArgumentTypeError(f"Grid must be at least 2x2, got {text!r}")
    return n, m


def parse_floats(count: int):
    def parse(text: str) -> Tuple[float, ...]:
        try:
            values = tuple(float(part) for part in text.split(','))
        except ValueError:
            raise argparse.ArgumentTypeError(f"Expected {count} comma-separated numbers, got {text!r}")
        if len(values) != count:
            raise argparse.ArgumentTypeError(f"Expected {count} comma-separated numbers, got {text!r}")
        return values
    return parse


def parse_smooth(text: str):
    """Comma-separated ascending coefficients, a catalog function name, or a JSON file"""
    if Path(text).suffix == '.json':
        return smooth_from_dict(load_json(text))
    try:
        return smooth_from_dict([float(part) for part in text.split(',')])
    except ValueError:
        return smooth_from_dict({'name': text})


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog='darbouxembed',
                     description="Darboux-integrable 2-metrics and their isometric embeddings")
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('-v', '--verbose', action='count', default=0, help="-v for INFO, -vv for DEBUG")

    common = _Parser(add_help=False)
    common.add_argument('--report', help="Write the JSON report here (default: stdout)")
    common.add_argument('--tol', type=float, help="Pass threshold")
    common.add_argument('--grid', type=parse_grid, help="Sample grid NxM")

    mesh_out = _Parser(add_help=False)
    mesh_out.add_argument('--out', help="Mesh file (.obj or .csv)")
    mesh_out.add_argument('--format', choices=('obj', 'csv'), help="Mesh format (default: from --out suffix)")

    sub = parser.add_subparsers(dest='command', required=True, parser_class=_Parser)

    p = sub.add_parser('catalog', help="List the normal forms")
    p.add_argument('--json', action='store_true', help="Emit the catalog records as JSON")
    p.add_argument('--out', help="Write the listing here (default: stdout)")

    p = sub.add_parser('check', parents=[common], help="Test the integrability conditions on a metric")
    p.add_argument('--metric', required=True, help="Catalog id, reference metric name, or metric JSON file")
    p.add_argument('--step', type=float, default=1e-3, help="Curvature differencing step")
    p.add_argument('--form', choices=('q', 'k'), default='q', help="Condition form")

    p = sub.add_parser('embed', parents=[common, mesh_out], help="Embed u^2 (dv^2 - du^2) from generators")
    p.add_argument('--F', dest='F', help="Generator F: coefficients, function name or JSON file")
    p.add_argument('--G', dest='G', help="Generator G: coefficients, function name or JSON file")
    p.add_argument('--generators', help="Generator pair JSON file")
    p.add_argument('--pq-domain', type=parse_floats(4), help="p_lo,p_hi,q_lo,q_hi")
    p.add_argument('--special', type=parse_floats(2), help="Constant generators eps1,eps2")
    p.add_argument('--uv-domain', type=parse_floats(4), default=(0.2, 1.0, -1.0, 1.0),
                   help="u_lo,u_hi,v_lo,v_hi for --special")
    p.add_argument('--null-coords', action='store_true', help="Mesh --special over (v - u, v + u)")

    p = sub.add_parser('cauchy', parents=[common, mesh_out], help="Solve the geometric Cauchy problem")
    p.add_argument('--curve', required=True, help="Curve JSON file or preset name (example2)")
    p.add_argument('--t0', type=float, help="Start parameter (default: the curve's t0)")
    p.add_argument('--r0', type=float, default=1.0, help="r(t0)")
    p.add_argument('--s0', type=float, help="s(t0) (default: makes r'(t0) = 1)")
    p.add_argument('--v0', type=float, help="v(t0) (default: the curve's v0)")
    p.add_argument('--t-range', type=parse_floats(2), help="Mesh range for t1 and t2")
    p.add_argument('--method', choices=('direct', 'printed', 'verbatim'), default='direct')

    p = sub.add_parser('revolve', parents=[common, mesh_out], help="Sweep a Riemannian normal form")
    p.add_argument('--metric', default='R1', help="Riemannian catalog id R1..R4")
    p.add_argument('--alpha', type=float, default=3.0)
    p.add_argument('--beta', type=float, default=0.0)
    p.add_argument('--s-range', type=parse_floats(2), default=(0.01, 2.0))
    p.add_argument('--t-range', type=parse_floats(2), help="Flow times (default: one full turn)")

    p = sub.add_parser('selftest', parents=[common], help="Run the randomised property battery")
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--samples', type=int, default=100)

    return parser


def _configure_logging(verbose: int):
    if verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = getattr(logging, get_settings().log_level)
    logging.basicConfig(level=level, format='%(asctime)s - %(levelname)s - %(message)s')


def _pair_from_args(args) -> GeneratorPair:
    if args.generators:
        pair = load_generators(args.generators)
    elif args.F and args.G:
        pair = GeneratorPair(parse_smooth(args.F), parse_smooth(args.G))
    else:
        raise InputFormatError("embed needs --generators, --F and --G, or --special")
    if args.pq_domain:
        p_lo, p_hi, q_lo, q_hi = args.pq_domain
        pair = GeneratorPair(pair.F, pair.G, (p_lo, p_hi), (q_lo, q_hi), pair.p0_sign, pair.q0_sign)
    return pair


def _emit(report, args) -> int:
    if args.report:
        report.config.outputs.append(str(args.report))
        write_report(report, args.report)
    else:
        sys.stdout.write(report_to_json(report))
    logger.info(f"{report.command}: verdict {'pass' if report.verdict else 'fail'}")
    return report.exit_code


def _catalog(system: DarbouxEmbed, args) -> int:
    if args.json:
        text = json.dumps([case.to_dict() for case in list_cases()], sort_keys=True, indent=2) + "\n"
    else:
        text = system.catalog().to_string(index=False) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding='utf-8')
    else:
        sys.stdout.write(text)
    return EXIT_PASS


def _dispatch(system: DarbouxEmbed, args) -> int:
    if args.command == 'catalog':
        return _catalog(system, args)

    if args.command == 'check':
        report = system.check(args.metric, grid=args.grid or (20, 20), tol=args.tol or 1e-4,
                              step=args.step, form=args.form)
        return _emit(report, args)

    if args.command == 'selftest':
        return _emit(system.selftest(seed=args.seed, samples=args.samples), args)

    if args.command == 'embed':
        grid = args.grid or (50, 50)
        tol = args.tol or 1e-5
        if args.special:
            u_lo, u_hi, v_lo, v_hi = args.uv_domain
            report, mesh = system.embed(special=args.special, grid=grid, u_range=(u_lo, u_hi),
                                        v_range=(v_lo, v_hi), null_coords=args.null_coords, tol=tol)
        else:
            report, mesh = system.embed(pair=_pair_from_args(args), grid=grid, tol=tol)
    elif args.command == 'cauchy':
        report, mesh = system.cauchy(load_curve(args.curve), t0=args.t0, r0=args.r0, grid=args.grid or (41, 41),
                                     method=args.method, s0=args.s0, v0=args.v0, t_range=args.t_range,
                                     tol=args.tol or 1e-5)
    else:
        report, mesh = system.revolve(args.metric, alpha=args.alpha, beta=args.beta, s_range=args.s_range,
                                      grid=args.grid or (40, 40), t_range=args.t_range, tol=args.tol or 1e-5)

    if args.out:
        export_mesh(mesh, args.out, args.format)
        report.config.outputs.append(str(args.out))
    return _emit(report, args)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse argv, run one command, write its artifacts.

    Returns:
        0 when the verdict passes, 2 when it fails, 1 on usage, input or IO errors
    """
    argv: List[str] = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        sys.stderr.write(f"darbouxembed: {e}\n")
        return EXIT_ERROR

    _configure_logging(args.verbose)
    try:
        return _dispatch(DarbouxEmbed(), args)
    except (DarbouxEmbedError, OSError, json.JSONDecodeError, argparse.ArgumentTypeError) as e:
        logger.error(f"{args.command} failed: {e}")
        sys.stderr.write(f"darbouxembed: {e}\n")
        return EXIT_ERROR
