"""Scaled Jacobian, known upper bounds, and max-min vertex-position optimization."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .hexmesh import CORNER_NEIGHBORS, HexMesh

_NB = np.array(CORNER_NEIGHBORS)
_DEGENERATE = 1e-12


def _corner_values(C: np.ndarray) -> np.ndarray:
    """Scaled Jacobians at every corner; ``C`` has shape (..., 8, 3). Degenerate hexes give 0 everywhere."""
    E = C[..., _NB, :] - C[..., :, None, :]  # (..., 8, 3, 3)
    L = np.linalg.norm(E, axis=-1)
    scale = L.max(axis=(-1, -2), keepdims=True)
    bad = (L <= _DEGENERATE * np.maximum(scale, 1.0)).any(axis=(-1, -2))
    U = E / np.where(L > 0, L, 1.0)[..., None]
    d = np.linalg.det(U)
    return np.where(bad[..., None], 0.0, d)


def scaled_jacobian(corners) -> float:
    C = np.asarray(corners, dtype=float).reshape(8, 3)
    return float(_corner_values(C).min())


def hex_jacobians(mesh: HexMesh) -> np.ndarray:
    if not mesh.hexes:
        return np.zeros(0)
    C = mesh.vertices[np.array(mesh.hexes)]
    return _corner_values(C).min(axis=1)


# -- bounds -----------------------------------------------------------------------

_SIGNATURE_BOUNDS = {
    (4, 0, 0): 4 / (3 * math.sqrt(3)),
    (0, 0, 12): math.sqrt(2 * (5 + math.sqrt(5))) / 5,
}


def theoretical_bound(context) -> float | None:
    """Upper bound on the min scaled Jacobian near a node signature or along a valence-k curve.

    ``context`` is an int (curve valence) or a signature tuple/string.
    """
    if isinstance(context, (int, np.integer)):
        k = int(context)
        return math.sin(2 * math.pi / k) if k >= 3 else None
    if isinstance(context, str):
        from .spheretri.triangulation import parse_signature
        context = parse_signature(context)
    sig = tuple(context)
    while len(sig) > 3 and sig[-1] == 0:
        sig = sig[:-1]
    return _SIGNATURE_BOUNDS.get(sig)


def mesh_bound(mesh: HexMesh) -> tuple[float | None, str | None]:
    """Smallest applicable bound over the node signatures and curve valences present."""
    from .singular import trace_curves
    from .spheretri.triangulation import format_signature, signature

    graph = trace_curves(mesh)
    best = (None, None)

    def offer(value, reason):
        nonlocal best
        if value is not None and (best[0] is None or value < best[0]):
            best = (value, reason)

    for v in graph.nodes:
        sig = signature(mesh.vertex_link(v).triangulation())
        offer(theoretical_bound(sig), f"node {format_signature(sig)}")
    for k in sorted({mesh.edge_degree[e] for e in graph.edges}):
        offer(theoretical_bound(k), f"valence-{k} curve")
    return best


@dataclass
class QualityReport:
    per_hex: list[float]
    minimum: float
    mean: float
    worst_hex: int
    bound: float | None = None
    bound_reason: str | None = None
    history: list[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "minimum": self.minimum,
            "mean": self.mean,
            "worst_hex": self.worst_hex,
            "bound": self.bound,
            "bound_reason": self.bound_reason,
            "per_hex": self.per_hex,
            "history": self.history,
        }


def quality_report(mesh: HexMesh, with_bound: bool = True) -> QualityReport:
    q = hex_jacobians(mesh)
    bound, reason = mesh_bound(mesh) if with_bound else (None, None)
    return QualityReport(
        [float(x) for x in q],
        float(q.min()) if len(q) else 1.0,
        float(q.mean()) if len(q) else 1.0,
        int(q.argmin()) if len(q) else -1,
        bound,
        reason,
    )


# -- optimization ---------------------------------------------------------------------


@dataclass(frozen=True)
class OptimizeParams:
    mode: Literal["free", "fixed-boundary"] = "free"
    max_iters: int = 400
    tol: float = 1e-7
    sharpness: tuple[float, ...] = (10.0, 30.0, 100.0, 300.0)
    initial_step: float = 0.05  # in units of mean edge length
    patience: int = 20  # stalled soft-min iterations before sharpening
    polish_iters: int = 300  # trust-region LP iterations after the soft-min phase
    active_margin: float = 0.25  # corners within this of the minimum enter the LP
    restarts: int = 4  # random perturbations of the best mesh, each re-optimized
    perturbation: float = 0.15  # restart noise in units of mean edge length
    smoothing_iters: int = 200  # Laplacian smoothing of interior vertices for the second starting point
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("free", "fixed-boundary"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")


def _softmin(q, beta):
    m = q.min()
    w = np.exp(-beta * (q - m))
    s = w.sum()
    return m - math.log(s) / beta, w / s


def _frame_det(P):
    """Determinant of the unit edge vectors from point 0 to points 1-3; ``P`` has shape (..., 4, 3)."""
    E = P[..., 1:, :] - P[..., :1, :]
    L = np.linalg.norm(E, axis=-1, keepdims=True)
    return np.linalg.det(E / np.where(L > 0, L, 1.0))


def _corner_gradients(C, h):
    """d(corner value)/d(point) for the corner point and its three neighbours, by central differences.

    Returns an array (m, 8, 4, 3): slot 0 is the corner itself, slots 1-3 its neighbours.
    """
    slots = np.concatenate([np.arange(8)[:, None], _NB], axis=1)
    F = C[:, slots, :]  # (m, 8, 4, 3)
    G = np.zeros(F.shape)
    step = h[:, None]
    for slot in range(4):
        for d in range(3):
            plus = F.copy()
            plus[:, :, slot, d] += step
            minus = F.copy()
            minus[:, :, slot, d] -= step
            G[:, :, slot, d] = (_frame_det(plus) - _frame_det(minus)) / (2 * step)
    return G


class _Problem:
    def __init__(self, mesh: HexMesh, params: OptimizeParams):
        self.H = np.array(mesh.hexes)
        self.movable = np.ones(mesh.n_vertices, dtype=bool)
        if params.mode == "fixed-boundary":
            self.movable[[v for v in range(mesh.n_vertices) if mesh.is_boundary_vertex(v)]] = False
        self.scale = mesh.mean_edge_length()
        slots = np.concatenate([np.arange(8)[:, None], _NB], axis=1)
        self.targets = self.H[:, slots]  # (m, 8, 4): mesh vertex in each slot of each corner

    def values(self, X):
        return _corner_values(X[self.H])

    def gradients(self, X):
        C = X[self.H]
        lengths = np.linalg.norm(C[:, _NB, :] - C[:, :, None, :], axis=-1).mean(axis=(1, 2))
        return _corner_gradients(C, 1e-6 * np.maximum(lengths, 1e-12))


def _softmin_phase(P: _Problem, X, params, history):
    q = P.values(X)
    best = q.min()
    step = params.initial_step
    stall = 0
    level = 0
    for _ in range(params.max_iters):
        beta = params.sharpness[level]
        _, w = _softmin(q.ravel(), beta)
        G = P.gradients(X)
        grad = np.zeros_like(X)
        np.add.at(grad, P.targets.reshape(-1), (w.reshape(q.shape + (1, 1)) * G).reshape(-1, 3))
        grad[~P.movable] = 0.0
        gmax = np.abs(grad).max()
        if gmax == 0:
            break
        direction = grad / gmax * P.scale
        current = _softmin(q.ravel(), beta)[0]
        s = step
        accepted = False
        while s > 1e-6:
            Xn = X + s * direction
            qn = P.values(Xn)
            if qn.min() >= best and _softmin(qn.ravel(), beta)[0] > current:
                accepted = True
                break
            s *= 0.5
        if accepted:
            gain = qn.min() - best
            X, q, best = Xn, qn, qn.min()
            history.append(float(best))
            step = min(2 * s, 0.2)
            stall = stall + 1 if gain < params.tol else 0
        else:
            stall = params.patience
        if stall >= params.patience:
            if level + 1 >= len(params.sharpness):
                break
            level += 1
            stall = 0
            step = params.initial_step
    return X


def _polish_phase(P: _Problem, X, params, history):
    """Trust-region sequential LP on: maximize t subject to linearized corner values >= t."""
    from scipy.optimize import linprog
    from scipy.sparse import coo_matrix

    q = P.values(X)
    best = q.min()
    radius = 0.05 * P.scale
    free_index = -np.ones(len(X), dtype=int)
    free_index[P.movable] = np.arange(P.movable.sum())
    for _ in range(params.polish_iters):
        if radius < 1e-9 * P.scale:
            break
        G = P.gradients(X)
        hexes, corners = np.nonzero(q <= best + params.active_margin)
        rows, cols, vals = [], [], []
        for r, (h, c) in enumerate(zip(hexes, corners)):
            for slot in range(4):
                j = free_index[P.targets[h, c, slot]]
                if j < 0:
                    continue
                for d in range(3):
                    rows.append(r)
                    cols.append(3 * j + d)
                    vals.append(-G[h, c, slot, d])
        n = 3 * int(P.movable.sum())
        k = len(hexes)
        A = coo_matrix(
            (np.concatenate([vals, np.ones(k)]), (np.concatenate([rows, np.arange(k)]), np.concatenate([cols, np.full(k, n)]))),
            shape=(k, n + 1),
        ).tocsr()
        cost = np.zeros(n + 1)
        cost[-1] = -1.0
        bounds = [(-radius, radius)] * n + [(None, None)]
        res = linprog(cost, A_ub=A, b_ub=q[hexes, corners], bounds=bounds, method="highs")
        if res.status != 0:
            radius *= 0.5
            continue
        dx = np.zeros_like(X)
        dx[P.movable] = res.x[:n].reshape(-1, 3)
        Xn = X + dx
        qn = P.values(Xn)
        predicted = res.x[-1] - best
        gain = qn.min() - best
        if gain > 0:
            X, q, best = Xn, qn, qn.min()
            history.append(float(best))
            if gain < params.tol and predicted < 10 * params.tol:
                break
            radius = min(radius * (2.0 if gain > 0.5 * predicted else 1.0), 0.2 * P.scale)
        else:
            radius *= 0.5
    return X


def _smoothed(mesh: HexMesh, X, iters):
    """Jacobi Laplacian smoothing of interior vertices; boundary vertices stay put."""
    E = np.array(mesh.edges)
    inner = ~np.array(mesh.boundary_vertex_mask, dtype=bool)
    count = np.bincount(E.ravel(), minlength=len(X)).astype(float)[:, None]
    X = X.copy()
    for _ in range(iters):
        S = np.zeros_like(X)
        np.add.at(S, E[:, 0], X[E[:, 1]])
        np.add.at(S, E[:, 1], X[E[:, 0]])
        X[inner] = (S / np.maximum(count, 1))[inner]
    return X


def _local(P, X, params, history):
    X = _softmin_phase(P, X, params, history)
    if params.polish_iters > 0:
        X = _polish_phase(P, X, params, history)
    return X


def optimize(mesh: HexMesh, params: OptimizeParams | None = None) -> tuple[HexMesh, QualityReport]:
    """Maximize the minimum scaled Jacobian; connectivity is untouched.

    A soft-min ascent with a sharpening schedule moves the mesh out of bad
    configurations, then a trust-region linear-programming phase works on the
    exact minimum.  Seeded random restarts from the best mesh found escape
    local optima.  The recorded history of accepted minima never decreases.
    """
    params = params or OptimizeParams()
    if not mesh.hexes or mesh.n_vertices == 0:
        return mesh, quality_report(mesh)
    P = _Problem(mesh, params)
    X = mesh.vertices.copy()
    history = [float(P.values(X).min())]
    X = _local(P, X, params, history)
    if params.smoothing_iters > 0:
        # inflated layers start thin and tangled; a smoothed start often lands in a better basin
        trial = _local(P, _smoothed(mesh, mesh.vertices, params.smoothing_iters), params, [])
        if P.values(trial).min() > history[-1]:
            X = trial
            history.append(float(P.values(X).min()))
    rng = np.random.default_rng(params.seed)
    for _ in range(params.restarts):
        noise = rng.normal(scale=params.perturbation * P.scale, size=X.shape)
        noise[~P.movable] = 0.0
        trial = _local(P, X + noise, params, [])
        if P.values(trial).min() > history[-1]:
            X = trial
            history.append(float(P.values(X).min()))
    out = mesh.with_vertices(X)
    report = quality_report(out)
    report.history = history
    return out, report
