"""Curvature flow dK_i/dt = -(L_i - Lhat_i) and its Newton accelerator.

The flow is the negative gradient flow of a smooth strictly convex
potential, so for admissible targets it converges exponentially to the
unique log-curvature vector realizing the prescribed per-vertex total
geodesic curvatures.  Time integration uses an embedded Dormand-Prince
5(4) pair with per-step error control; once the residual is small a
damped Newton iteration on the same gradient finishes the job.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import sparse
from scipy.linalg import cho_factor, cho_solve
from scipy.sparse.linalg import cg as _cg

from .hyptrig import InfeasibleGeometryError
from .packing import global_jacobian, vertex_curvature_sums
from .surface import ADMISSIBILITY_VERTEX_CAP, Triangulation, check_admissible

__all__ = [
    "FlowConfig",
    "FlowTrace",
    "SolveResult",
    "SolveStatus",
    "StiffnessError",
    "RateEstimate",
    "flow_step",
    "solve",
    "rate_estimate",
]

# Dormand-Prince 5(4) tableau; row 7 of A is the 5th-order weights (FSAL).
_DP_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_DP_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200,
          187 / 2100, 1 / 40)

NEWTON_DIRECT_BELOW = 2000   # direct symmetric factorization below, CG above
# |K_i| beyond this while the residual stalls => infeasible heuristic.  Kept
# safely below ~36.7 where exp(K) exceeds the polygon solvers' double-
# precision range, so divergence is diagnosed before evaluations degenerate.
_DRIFT_LIMIT = 30.0


class StiffnessError(RuntimeError):
    """Step size underflowed while the error estimate stayed too large."""

    def __init__(self, message, K=None, t=None):
        super().__init__(message)
        self.K = K
        self.t = t


class SolveStatus(Enum):
    CONVERGED = "converged"
    MAX_STEPS_EXCEEDED = "max_steps_exceeded"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class FlowConfig:
    """Solver knobs.  residual_tol and newton_switch_tol are max-norm
    bounds on L - Lhat; step_error_tol is the per-step acceptance bound
    of the embedded pair."""

    residual_tol: float = 1e-10
    max_time: float = 1e5
    max_steps: int = 50_000
    stepper: str = "adaptive"          # "adaptive" | "rk4"
    newton: bool = True
    newton_switch_tol: float = 1e-3
    newton_damping: float = 1.0        # initial/maximal Newton step fraction
    step_error_tol: float = 1e-8
    # relative cap: a step is also rejected when its error estimate exceeds
    # this fraction of the current residual, keeping the decaying tail
    # accuracy-limited instead of stability-limited
    rel_step_error: float = 0.05
    fixed_step: float = 0.05           # rk4 stepper only
    initial_step: float = 0.01
    max_step: float = 5.0
    min_step: float = 1e-14
    check_admissibility: bool = True

    def __post_init__(self):
        for name in ("residual_tol", "max_time", "newton_switch_tol",
                     "step_error_tol", "fixed_step", "initial_step", "max_step"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.newton_switch_tol <= self.residual_tol:
            raise ValueError("newton_switch_tol must exceed residual_tol")
        if not 0.0 < self.newton_damping <= 1.0:
            raise ValueError("newton_damping must lie in (0, 1]")
        if self.stepper not in ("adaptive", "rk4"):
            raise ValueError(f"unknown stepper {self.stepper!r}")


@dataclass
class FlowTrace:
    """Accepted-step history: strictly increasing times, state snapshots,
    residual norms, and the phase ('flow' or 'newton') of each row."""

    ts: list[float] = field(default_factory=list)
    K: list[np.ndarray] = field(default_factory=list)
    residual_max: list[float] = field(default_factory=list)
    residual_2norm: list[float] = field(default_factory=list)
    phase: list[str] = field(default_factory=list)
    config: FlowConfig | None = None

    def append(self, t, K, res, phase):
        self.ts.append(t)
        self.K.append(np.array(K, copy=True))
        self.residual_max.append(float(np.max(np.abs(res))))
        self.residual_2norm.append(float(np.linalg.norm(res)))
        self.phase.append(phase)

    def write_csv(self, path: str):
        """One row per accepted step: t, residual_max, residual_2norm, K...;
        header row carries the vertex count."""
        n = len(self.K[0]) if self.K else 0
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("t,residual_max,residual_2norm," +
                     ",".join(f"K{i}" for i in range(n)) +
                     f"  # vertices={n}\n")
            for t, rm, r2, K in zip(self.ts, self.residual_max,
                                    self.residual_2norm, self.K):
                fh.write(f"{t!r},{rm!r},{r2!r},"
                         + ",".join(repr(float(x)) for x in K) + "\n")


@dataclass(frozen=True)
class SolveResult:
    K: np.ndarray
    trace: FlowTrace
    status: SolveStatus
    witness: tuple[int, ...] | None = None


def flow_step(tri: Triangulation, K, l_hat, h: float):
    """One embedded Dormand-Prince 5(4) step of dK/dt = -(L - Lhat).

    Returns (K', error_estimate) where the estimate is the max-norm
    difference of the 5th- and 4th-order solutions; the caller accepts
    the step when the estimate is below the configured bound and halves
    h otherwise.
    """
    if not h > 0.0:
        raise ValueError(f"step size must be positive, got {h}")
    K = np.asarray(K, dtype=float)
    target = np.asarray(l_hat, dtype=float)
    ks = []
    for i in range(7):
        y = K
        if i:
            y = K + h * sum(a * kk for a, kk in zip(_DP_A[i], ks))
        ks.append(target - vertex_curvature_sums(tri, y))
    K5 = K + h * sum(b * kk for b, kk in zip(_DP_B5, ks))
    K4 = K + h * sum(b * kk for b, kk in zip(_DP_B4, ks))
    return K5, float(np.max(np.abs(K5 - K4)))


def _rk4_step(tri, K, target, h):
    f = lambda y: target - vertex_curvature_sums(tri, y)
    k1 = f(K)
    k2 = f(K + 0.5 * h * k1)
    k3 = f(K + 0.5 * h * k2)
    k4 = f(K + h * k3)
    return K + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _newton_direction(tri, K, res):
    M = global_jacobian(tri, K)
    if sparse.issparse(M):
        Ms = 0.5 * (M + M.T)
        if tri.num_vertices < NEWTON_DIRECT_BELOW:
            return np.linalg.solve(Ms.toarray(), res)
        x, info = _cg(Ms, res, rtol=1e-12, atol=0.0)
        if info != 0:
            raise RuntimeError(f"conjugate gradient failed to converge (info={info})")
        return x
    Ms = 0.5 * (M + M.T)
    return cho_solve(cho_factor(Ms, lower=True), res)


def solve(tri: Triangulation, l_hat, K0=None, config: FlowConfig | None = None) -> SolveResult:
    """Drive the flow (plus optional Newton finish) to the packing with
    prescribed total geodesic curvatures.

    For at most 25 vertices the target is first checked against the
    feasibility polytope and rejected with a witness subset; above that
    an infeasible target is detected heuristically when the residual
    stalls while some K_i drifts beyond +-40.  On convergence the result
    is independent of K0 (the packing is unique).
    """
    cfg = config or FlowConfig()
    defects = tri.validate()
    if defects:
        raise ValueError("triangulation is not a closed surface: "
                         + "; ".join(str(d) for d in defects[:5]))
    target = np.asarray(l_hat, dtype=float)
    if target.shape != (tri.num_vertices,):
        raise ValueError(f"expected {tri.num_vertices} targets, got {target.shape}")
    if not np.all(target > 0.0):
        raise ValueError("target curvatures must be positive")

    trace = FlowTrace(config=cfg)
    if cfg.check_admissibility and tri.num_vertices <= ADMISSIBILITY_VERTEX_CAP:
        adm = check_admissible(tri, target)
        if not adm.admissible:
            return SolveResult(K=np.zeros(tri.num_vertices), trace=trace,
                               status=SolveStatus.INFEASIBLE, witness=adm.witness)

    K = (np.zeros(tri.num_vertices) if K0 is None
         else np.array(K0, dtype=float, copy=True))
    t = 0.0
    h = cfg.initial_step
    res = vertex_curvature_sums(tri, K) - target
    trace.append(t, K, res, "flow")
    steps = 0

    # ---- flow phase ----
    while True:
        res_max = float(np.max(np.abs(res)))
        if res_max < cfg.residual_tol:
            return SolveResult(K=K, trace=trace, status=SolveStatus.CONVERGED)
        if cfg.newton and res_max < cfg.newton_switch_tol:
            break
        if steps >= cfg.max_steps or t >= cfg.max_time:
            return SolveResult(K=K, trace=trace, status=SolveStatus.MAX_STEPS_EXCEEDED)
        if res_max > cfg.residual_tol * 10 and float(np.max(np.abs(K))) > _DRIFT_LIMIT:
            return SolveResult(K=K, trace=trace, status=SolveStatus.INFEASIBLE)

        if cfg.stepper == "rk4":
            try:
                K = _rk4_step(tri, K, target, cfg.fixed_step)
            except InfeasibleGeometryError as exc:
                raise StiffnessError(
                    f"fixed-step evaluation left the solvable domain at t={t}: {exc}",
                    K=K, t=t) from exc
            t += cfg.fixed_step
            steps += 1
            res = vertex_curvature_sums(tri, K) - target
            trace.append(t, K, res, "flow")
            continue

        h = min(h, cfg.max_step, max(cfg.max_time - t, cfg.min_step))
        eff_tol = min(cfg.step_error_tol, cfg.rel_step_error * res_max)
        steps += 1
        try:
            K_new, err = flow_step(tri, K, target, h)
        except InfeasibleGeometryError:
            # a stage overshot the solvable domain (diverging trajectory)
            K_new, err = None, math.inf
        if err < eff_tol:
            t += h
            K = K_new
            res = vertex_curvature_sums(tri, K) - target
            trace.append(t, K, res, "flow")
            if err > 0.0:
                h = min(cfg.max_step, h * min(5.0, 0.9 * (eff_tol / err) ** 0.2))
            else:
                h = min(cfg.max_step, 5.0 * h)
        else:
            h *= 0.5
            if h < cfg.min_step:
                raise StiffnessError(
                    f"step size underflowed at t={t} (residual {res_max:.3e})",
                    K=K, t=t)

    # ---- Newton phase ----
    res_norm = float(np.linalg.norm(res))
    for _ in range(200):
        if float(np.max(np.abs(res))) < cfg.residual_tol:
            return SolveResult(K=K, trace=trace, status=SolveStatus.CONVERGED)
        if steps >= cfg.max_steps:
            return SolveResult(K=K, trace=trace, status=SolveStatus.MAX_STEPS_EXCEEDED)
        direction = _newton_direction(tri, K, res)
        alpha = cfg.newton_damping
        while True:
            K_try = K - alpha * direction
            res_try = vertex_curvature_sums(tri, K_try) - target
            if float(np.linalg.norm(res_try)) < res_norm:
                break
            alpha *= 0.5
            if alpha < 1e-12:
                raise StiffnessError("Newton backtracking stalled", K=K, t=t)
        K = K_try
        res = res_try
        res_norm = float(np.linalg.norm(res))
        t += alpha
        steps += 1
        trace.append(t, K, res, "newton")
    return SolveResult(K=K, trace=trace, status=SolveStatus.MAX_STEPS_EXCEEDED)


@dataclass(frozen=True)
class RateEstimate:
    lam: float
    r_squared: float
    n_samples: int


def rate_estimate(trace: FlowTrace) -> RateEstimate | None:
    """Exponential decay rate of the residual over the pure-flow window.

    Least-squares slope of ln(residual 2-norm) against t over flow-phase
    samples with residual in (10 * residual_tol, newton_switch_tol);
    None when fewer than 10 samples land in the window.
    """
    cfg = trace.config or FlowConfig()
    lo = 10.0 * cfg.residual_tol
    hi = cfg.newton_switch_tol
    ts, ys = [], []
    for t, r2, ph in zip(trace.ts, trace.residual_2norm, trace.phase):
        if ph == "flow" and lo < r2 < hi:
            ts.append(t)
            ys.append(math.log(r2))
    if len(ts) < 10:
        return None
    tarr = np.array(ts)
    yarr = np.array(ys)
    A = np.vstack([tarr, np.ones_like(tarr)]).T
    coef, *_ = np.linalg.lstsq(A, yarr, rcond=None)
    fit = A @ coef
    ss_res = float(np.sum((yarr - fit) ** 2))
    ss_tot = float(np.sum((yarr - yarr.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return RateEstimate(lam=-float(coef[0]), r_squared=r2, n_samples=len(ts))
