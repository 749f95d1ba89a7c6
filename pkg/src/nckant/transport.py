"""Wasserstein-1 machinery on finite cost spaces.

The primal problem minimizes the transported cost over joint plans with
prescribed marginals; the dual maximizes potential differences subject to
cost constraints.  Infinite cost entries are handled structurally (the
corresponding plan variables simply do not exist), never through big-M
penalties.

The dual is solved in the general two-potential form f_i + g_j <= c_ij,
which closes the duality gap for every cost matrix.  On a genuine metric the
solution is then folded into a single 1-Lipschitz potential by a c-transform,
which keeps the classical |f(x) - f(y)| <= d(x, y) certificate available.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import ValidationError

MARGINAL_SUM_ATOL = 1e-10
MARGINAL_MATCH_ATOL = 1e-8
METRIC_ATOL = 1e-9

_LP_OPTIONS = {
    "primal_feasibility_tolerance": 1e-10,
    "dual_feasibility_tolerance": 1e-10,
}


@dataclass
class FiniteCostSpace:
    """Point labels plus a symmetric nonnegative cost matrix (entries may be
    +inf); ``metric`` marks costs that satisfy the metric axioms."""

    points: list
    cost: np.ndarray
    metric: bool

    @property
    def size(self) -> int:
        return len(self.points)


@dataclass
class TransportPlan:
    plan: np.ndarray | None
    value: float


@dataclass
class LipschitzWitness:
    """Dual certificate.  On metric spaces ``copotential == -potential`` and
    the potential is 1-Lipschitz; on general costs the pair (f, g) satisfies
    f_i + g_j <= cost_ij."""

    potential: np.ndarray | None
    copotential: np.ndarray | None
    value: float


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------

def _validate_cost(cost) -> np.ndarray:
    c = np.asarray(cost, dtype=float)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise ValidationError(f"cost matrix must be square, got shape {c.shape}")
    if np.any(np.isnan(c)):
        raise ValidationError("cost matrix contains NaN")
    if np.any(c < 0):
        raise ValidationError("cost entries must be nonnegative")
    if not np.array_equal(c, c.T):
        raise ValidationError("cost matrix must be symmetric")
    return c


def metric_residuals(cost) -> dict:
    """Measured deviations from the metric axioms, +inf aware."""
    c = np.asarray(cost, dtype=float)
    diag = float(np.max(np.abs(np.diag(c)))) if len(c) else 0.0
    # triangle: c[i,k] <= min_j c[i,j] + c[j,k]; an infinite direct cost with
    # a finite detour counts as a violation (components must be closed)
    via = np.min(c[:, :, None] + c[None, :, :], axis=1)
    both = np.isfinite(c) & np.isfinite(via)
    gap = np.zeros_like(c)
    gap[both] = c[both] - via[both]
    gap[~np.isfinite(c) & np.isfinite(via)] = np.inf
    triangle = float(np.max(gap)) if gap.size else 0.0
    return {"diagonal": diag, "triangle": triangle}


def explicit_space(cost, points=None, metric: bool | None = None) -> FiniteCostSpace:
    """Wrap an explicit cost matrix; ``metric=None`` autodetects the flag."""
    c = _validate_cost(cost)
    k = c.shape[0]
    pts = [str(p) for p in points] if points is not None else [str(i) for i in range(k)]
    if len(pts) != k:
        raise ValidationError("number of point labels does not match the cost matrix")
    res = metric_residuals(c)
    is_metric = res["diagonal"] <= METRIC_ATOL and res["triangle"] <= METRIC_ATOL
    if metric is None:
        metric = is_metric
    elif metric and not is_metric:
        raise ValidationError(
            f"cost violates the metric axioms (diagonal {res['diagonal']:.2e}, "
            f"triangle {res['triangle']:.2e})")
    return FiniteCostSpace(points=pts, cost=c, metric=bool(metric))


def cycle_space(n: int) -> FiniteCostSpace:
    """n points at k/n on the unit circle with arc distance min(|dx|, 1-|dx|)."""
    if n < 2:
        raise ValidationError("cycle needs at least 2 points")
    x = np.arange(n) / n
    d = np.abs(x[:, None] - x[None, :])
    cost = np.minimum(d, 1.0 - d)
    return explicit_space(cost, points=[f"{v:g}" for v in x], metric=True)


def interval_space(n: int) -> FiniteCostSpace:
    """n interior points k/(n+1) of the open unit interval with cost |x - y|."""
    if n < 2:
        raise ValidationError("interval needs at least 2 points")
    x = np.arange(1, n + 1) / (n + 1)
    cost = np.abs(x[:, None] - x[None, :])
    return explicit_space(cost, points=[f"{v:g}" for v in x], metric=True)


def two_sheet_space(base: FiniteCostSpace, inv_m: float) -> FiniteCostSpace:
    """Double the base space; crossing sheets costs sqrt(base^2 + inv_m^2)."""
    if inv_m < 0:
        raise ValidationError("inv_m must be nonnegative")
    b = base.cost
    cross = np.sqrt(b * b + inv_m * inv_m)
    cost = np.block([[b, cross], [cross, b]])
    pts = [f"{p}|1" for p in base.points] + [f"{p}|2" for p in base.points]
    return explicit_space(cost, points=pts, metric=True)


def make_cost_space(spec: str) -> FiniteCostSpace:
    """Build a space from a compact string: ``cycle:N``, ``interval:N`` or
    ``two-sheet:<base>,<inv_m>``."""
    s = spec.strip()
    if s.startswith("cycle:"):
        return cycle_space(int(s.split(":", 1)[1]))
    if s.startswith("interval:"):
        return interval_space(int(s.split(":", 1)[1]))
    if s.startswith("two-sheet:"):
        rest = s.split(":", 1)[1]
        base_spec, _, inv = rest.rpartition(",")
        if not base_spec:
            raise ValidationError("two-sheet spec must look like two-sheet:cycle:15,0.3")
        return two_sheet_space(make_cost_space(base_spec), float(inv))
    raise ValidationError(f"unknown cost-space spec {spec!r}")


def as_probability_vector(weights, size: int | None = None) -> np.ndarray:
    """Validate, clamp tiny negatives to zero, and return a copy."""
    w = np.asarray(weights, dtype=float).copy()
    if w.ndim != 1 or (size is not None and len(w) != size):
        raise ValidationError(f"marginal has shape {w.shape}, expected ({size},)")
    if np.any(w < -1e-12):
        raise ValidationError(f"negative weight {float(np.min(w)):.3e}")
    w[w < 0] = 0.0
    if abs(float(w.sum()) - 1.0) > MARGINAL_SUM_ATOL:
        raise ValidationError(f"weights sum to {float(w.sum())!r}, expected 1")
    return w


def dirac_vector(index: int, size: int) -> np.ndarray:
    if not 0 <= index < size:
        raise ValidationError(f"dirac index {index} out of range for {size} points")
    w = np.zeros(size)
    w[index] = 1.0
    return w


# ---------------------------------------------------------------------------
# Primal and dual solvers
# ---------------------------------------------------------------------------

def wasserstein_primal(space: FiniteCostSpace, mu, nu) -> TransportPlan:
    """Optimal transport plan between two marginals on the space."""
    k = space.size
    mu = as_probability_vector(mu, k)
    nu = as_probability_vector(nu, k)
    if abs(float(mu.sum() - nu.sum())) > MARGINAL_MATCH_ATOL:
        raise ValidationError("marginal masses differ")

    fi, fj = np.nonzero(np.isfinite(space.cost))
    if len(fi) == 0:
        return TransportPlan(None, np.inf)
    cvec = space.cost[fi, fj]
    nv = len(fi)
    a_eq = np.zeros((2 * k, nv))
    a_eq[fi, np.arange(nv)] = 1.0
    a_eq[k + fj, np.arange(nv)] = 1.0
    res = linprog(cvec, A_eq=a_eq, b_eq=np.concatenate([mu, nu]),
                  bounds=[(0, None)] * nv, method="highs", options=_LP_OPTIONS)
    if res.status == 2:
        return TransportPlan(None, np.inf)
    if res.status != 0:
        raise RuntimeError(f"transport LP failed: {res.message}")
    plan = np.zeros((k, k))
    plan[fi, fj] = np.maximum(res.x, 0.0)
    return TransportPlan(plan, float(res.fun))


def kantorovich_dual(space: FiniteCostSpace, mu, nu) -> LipschitzWitness:
    """Dual potentials; on metric spaces a single 1-Lipschitz potential."""
    k = space.size
    mu = as_probability_vector(mu, k)
    nu = as_probability_vector(nu, k)
    if abs(float(mu.sum() - nu.sum())) > MARGINAL_MATCH_ATOL:
        raise ValidationError("marginal masses differ")
    if space.metric and float(np.max(np.abs(mu - nu))) <= 1e-15:
        # on a metric the zero potential is the canonical optimum here
        return LipschitzWitness(np.zeros(k), np.zeros(k), 0.0)

    fi, fj = np.nonzero(np.isfinite(space.cost))
    nr = len(fi)
    a_ub = np.zeros((nr, 2 * k))
    a_ub[np.arange(nr), fi] = 1.0
    a_ub[np.arange(nr), k + fj] = 1.0
    res = linprog(-np.concatenate([mu, nu]), A_ub=a_ub, b_ub=space.cost[fi, fj],
                  bounds=[(None, None)] * (2 * k), method="highs", options=_LP_OPTIONS)
    if res.status == 3:
        return LipschitzWitness(None, None, np.inf)
    if res.status != 0:
        raise RuntimeError(f"dual LP failed: {res.message}")

    f, g = res.x[:k], res.x[k:]
    if space.metric:
        # c-transform: fold (f, g) into one 1-Lipschitz potential with the
        # same objective (diagonal is zero, so f~_i <= -g_i is automatic)
        shifted = np.where(np.isfinite(space.cost), space.cost - g[None, :], np.inf)
        f = np.min(shifted, axis=1)
        g = -f
    value = float(np.dot(f, mu) + np.dot(g, nu))
    support = np.nonzero((mu > 0) | (nu > 0))[0]
    anchor = f[support[0]] if len(support) else f[0]
    return LipschitzWitness(f - anchor, g + anchor, value)


def lipschitz_residual(space: FiniteCostSpace, potential) -> float:
    """max over finite-cost pairs of |f_i - f_j| - cost_ij."""
    f = np.asarray(potential, dtype=float)
    gap = np.abs(f[:, None] - f[None, :]) - space.cost
    return float(np.max(np.where(np.isfinite(space.cost), gap, -np.inf)))


# ---------------------------------------------------------------------------
# Serialization:
#   space JSON: {"points": [...], "cost": [[...]], "metric": bool}, "inf" for +inf
#   marginals:  JSON array, or CSV rows "index,weight"
# ---------------------------------------------------------------------------

def cost_space_to_json(space: FiniteCostSpace) -> dict:
    cost = [[(x if np.isfinite(x) else "inf") for x in row] for row in space.cost.tolist()]
    return {"points": list(space.points), "cost": cost, "metric": bool(space.metric)}


def cost_space_from_json(obj) -> FiniteCostSpace:
    try:
        rows = [[np.inf if x == "inf" else float(x) for x in row] for row in obj["cost"]]
        points = obj["points"]
        metric = bool(obj.get("metric", False))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed cost-space JSON: {exc}") from exc
    return explicit_space(np.array(rows), points=points, metric=metric)


def load_cost_space(path: str) -> FiniteCostSpace:
    with open(path) as fh:
        return cost_space_from_json(json.load(fh))


def marginal_from_csv(path: str, size: int) -> np.ndarray:
    w = np.zeros(size)
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().lower() in ("index", "#"):
                continue
            w[int(row[0])] = float(row[1])
    return as_probability_vector(w, size)


def plan_to_csv(plan: TransportPlan, space: FiniteCostSpace, path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["from", "to", "mass"])
        if plan.plan is not None:
            for i, j in zip(*np.nonzero(plan.plan > 0)):
                writer.writerow([space.points[i], space.points[j], repr(float(plan.plan[i, j]))])
