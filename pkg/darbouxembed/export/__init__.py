"""Mesh, report and input record I/O"""

from .mesh_io import (
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

__all__ = [
    'export_mesh', 'load_curve', 'load_generators', 'load_json', 'load_metric',
    'mesh_to_frame', 'mesh_to_obj', 'report_to_json', 'write_report'
]
