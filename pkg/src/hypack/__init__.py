"""Generalized hyperbolic circle packings on closed triangulated surfaces.

Given a closed triangulated surface and a prescribed positive total
geodesic curvature per vertex, decide feasibility, compute the unique
packing metric (circles, horocycles, hypercycles) by curvature flow
and/or Newton iteration, and realize the resulting geometry (cone
angles, cusps, geodesic boundary lengths) with a Gauss-Bonnet audit.
"""

from .flow import (
    FlowConfig,
    FlowTrace,
    RateEstimate,
    SolveResult,
    SolveStatus,
    StiffnessError,
    flow_step,
    rate_estimate,
    solve,
)
from .hyptrig import (
    KIND_TOL,
    BigonResult,
    CurveKind,
    InfeasibleGeometryError,
    PolygonSolution,
    bigon_kernel,
    classify_curvature,
    curvature_to_radius,
    horocycle_chord,
    radius_to_curvature,
    solve_hexagon,
    solve_pentagon,
    solve_quadrilateral,
    triangle_angles,
)
from .packing import (
    CurvatureReport,
    global_jacobian,
    phi_gradient,
    potential_value,
    vertex_curvatures,
)
from .realize import (
    CLASS_TOL,
    RealizedMetric,
    boundary_data,
    classify,
    cone_data,
    gauss_bonnet_audit,
    realize_metric,
    render_face_svg,
    report_document,
)
from .surface import (
    Admissibility,
    CapacityError,
    Defect,
    ParseError,
    Triangulation,
    check_admissible,
    euler_characteristic,
    faces_incident,
    load_targets,
    load_triangulation,
)
from .tangency import (
    EmbeddedCircle,
    EmbeddedFace,
    FaceGeometry,
    GeneralizedCircle,
    edge_length,
    face_jacobian,
    realize_face,
    solve_face,
)

__version__ = "0.1.0"
