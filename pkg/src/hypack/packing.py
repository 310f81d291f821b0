"""Whole-surface assembly: per-vertex total geodesic curvatures L(K),
the global Jacobian/Hessian M = [dL_i/dK_j], and the convex potential.

The state is the log-curvature vector K (K_i = ln k_i), which makes the
domain all of R^|V|.  Face evaluations use a fixed face order and
fixed-order summation so results are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import sparse

from .surface import Triangulation
from .tangency import FaceGeometry, corner_curvatures, face_jacobian, solve_face

__all__ = [
    "CurvatureReport",
    "vertex_curvatures",
    "vertex_curvature_sums",
    "global_jacobian",
    "phi_gradient",
    "potential_value",
    "DENSE_BELOW",
]

# below this vertex count M is assembled dense, otherwise sparse CSR
DENSE_BELOW = 64


@dataclass(frozen=True)
class CurvatureReport:
    """Per-vertex curvature sums plus the per-face geometry behind them."""

    L: np.ndarray
    faces: tuple[FaceGeometry, ...]
    total_area: float


def vertex_curvature_sums(tri: Triangulation, K) -> np.ndarray:
    """L_i = sum over faces at i of the corner total curvature (fast path)."""
    k = np.exp(np.asarray(K, dtype=float))
    if k.shape != (tri.num_vertices,):
        raise ValueError(f"expected {tri.num_vertices} state entries, got {k.shape}")
    L = np.zeros(tri.num_vertices)
    kl = k.tolist()
    for a, b, c in tri.faces:
        La, Lb, Lc = corner_curvatures(kl[a], kl[b], kl[c])
        L[a] += La
        L[b] += Lb
        L[c] += Lc
    return L


def vertex_curvatures(tri: Triangulation, K) -> CurvatureReport:
    """Full report: curvature sums, solved faces, total enclosed area."""
    k = np.exp(np.asarray(K, dtype=float))
    if k.shape != (tri.num_vertices,):
        raise ValueError(f"expected {tri.num_vertices} state entries, got {k.shape}")
    L = np.zeros(tri.num_vertices)
    faces = []
    total_area = 0.0
    kl = k.tolist()
    for a, b, c in tri.faces:
        fg = solve_face(kl[a], kl[b], kl[c])
        faces.append(fg)
        L[a] += fg.total_curvature[0]
        L[b] += fg.total_curvature[1]
        L[c] += fg.total_curvature[2]
        total_area += fg.area
    return CurvatureReport(L=L, faces=tuple(faces), total_area=total_area)


def global_jacobian(tri: Triangulation, K, *, dense_below: int = DENSE_BELOW):
    """Hessian M with M[i, j] = dL_i/dK_j, assembled from per-face blocks.

    Symmetric (up to finite-difference noise), strictly diagonally
    dominant with positive diagonal, hence positive definite.  Dense
    ndarray below dense_below vertices, scipy CSR above.
    """
    k = np.exp(np.asarray(K, dtype=float))
    n = tri.num_vertices
    if k.shape != (n,):
        raise ValueError(f"expected {n} state entries, got {k.shape}")
    kl = k.tolist()
    dense = n < dense_below
    if dense:
        M = np.zeros((n, n))
    else:
        M = sparse.lil_matrix((n, n))
    for f in tri.faces:
        J = face_jacobian(kl[f[0]], kl[f[1]], kl[f[2]])
        for a in range(3):
            for b in range(3):
                M[f[a], f[b]] += J[a][b]
    return M if dense else M.tocsr()


def phi_gradient(tri: Triangulation, K, l_hat) -> np.ndarray:
    """Gradient of the potential: L(K) - Lhat (zero exactly at the packing
    with the prescribed curvatures)."""
    L = vertex_curvature_sums(tri, K)
    target = np.asarray(l_hat, dtype=float)
    if target.shape != L.shape:
        raise ValueError(f"target shape {target.shape} != state shape {L.shape}")
    return L - target


def potential_value(tri: Triangulation, K, K_ref, l_hat, *,
                    waypoints=(), panels: int = 64) -> float:
    """Potential difference Phi(K) - Phi(K_ref), as a diagnostic.

    The surface functional W is evaluated by integrating sum_i L_i dK_i
    along the straight segment from K_ref to K (composite Gauss-Legendre
    quadrature, `panels` panels of 4 nodes), then the linear term
    sum_i Lhat_i (K_i - K_ref_i) is subtracted.  Optional waypoints turn
    the path into a polyline; by closedness of the curvature form the
    value is path-independent, which is a test, not an assumption here.
    """
    K = np.asarray(K, dtype=float)
    K_ref = np.asarray(K_ref, dtype=float)
    target = np.asarray(l_hat, dtype=float)
    nodes, weights = leggauss(4)
    total = 0.0
    pts = [K_ref, *[np.asarray(w, dtype=float) for w in waypoints], K]
    for a, b in zip(pts[:-1], pts[1:]):
        delta = b - a
        if not np.any(delta):
            continue
        for p in range(panels):
            lo = p / panels
            hi = (p + 1) / panels
            mid = 0.5 * (lo + hi)
            half = 0.5 * (hi - lo)
            for x, w in zip(nodes, weights):
                t = mid + half * x
                L = vertex_curvature_sums(tri, a + t * delta)
                total += w * half * float(L @ delta)
    return total - float(target @ (K - K_ref))
