"""Transport-style distance on algebra states with pure-state spectral cost.

Over a finite sample of pure states, an algebra element is "Lipschitz" when
its evaluation gap between any two sampled states is bounded by their
spectral distance.  Maximizing the evaluation gap of two states over that
constraint set gives an upper bound on the spectral distance between them
(fewer constraints than the full Lipschitz ball can only enlarge the
supremum); refining the sample can only shrink the value.  Pairs at infinite
cost impose no constraint, and an objective direction left completely
unconstrained makes the program unbounded: the distance is infinite.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from . import linalg, models
from .errors import InfeasibleError, NotApplicableError, ValidationError
from .spectral import SolverOptions, spectral_distance
from .triple import DensityState, FiniteSpectralTriple, density_state

UNBOUNDED_RTOL = 1e-9
_LP_OPTIONS = {
    "primal_feasibility_tolerance": 1e-10,
    "dual_feasibility_tolerance": 1e-10,
}


@dataclass
class PureStateSample:
    """Pure states with their pairwise spectral-distance cost matrix.

    ``points`` carries Bloch coordinates when the sample lives on the qubit
    sphere; ``theta`` is set when the costs come from the ball cost formula
    instead of a Dirac operator.
    """

    label: str
    states: list
    costs: np.ndarray
    points: np.ndarray | None = None
    theta: float | None = None

    @property
    def size(self) -> int:
        return len(self.states)


@dataclass
class LipDConstraintSet:
    """Finite-cost pair constraints |a(w_i) - a(w_j)| <= cost_ij, as rows of
    evaluation differences against an algebra basis."""

    pairs: list
    matrix: np.ndarray
    bound: np.ndarray


@dataclass
class WdResult:
    finite: bool
    value: float
    witness: np.ndarray | None


def _require_pure(states) -> list:
    out = []
    for s in states:
        st = s if isinstance(s, DensityState) else density_state(s)
        if not st.pure:
            raise ValidationError(f"sample state is not pure (purity {st.purity!r})")
        out.append(st)
    return out


def pure_sample_cost_matrix(t: FiniteSpectralTriple, states, opts: SolverOptions | None = None,
                            analytic: bool = True) -> PureStateSample:
    """Pairwise spectral distances of a pure-state sample.

    Catalogue triples use their closed forms when ``analytic`` is set;
    otherwise every pair goes through the solver, with infinities recorded
    exactly by the kernel test.
    """
    sts = _require_pure(states)
    k = len(sts)
    costs = np.zeros((k, k))
    points = None
    if t.hilbert_dim == 2:
        try:
            points = np.array([models.density_to_bloch(s) for s in sts])
        except ValidationError:
            points = None
    for i in range(k):
        for j in range(i + 1, k):
            val = models.catalogue_pure_distance(t, sts[i], sts[j]) if analytic else None
            if val is None:
                res = spectral_distance(t, sts[i], sts[j], opts)
                val = res.value if res.finite else np.inf
            costs[i, j] = costs[j, i] = val
    return PureStateSample(label=t.label, states=sts, costs=costs, points=points)


def moyal_sample(points, params: models.MoyalCostParams) -> PureStateSample:
    """Sphere sample with the ball cost of a truncated Moyal plane."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    states = [models.bloch_to_density(p) for p in pts]
    for p, s in zip(pts, states):
        if not s.pure:
            raise ValidationError(f"sample point {p} is not on the unit sphere")
    k = len(pts)
    costs = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            costs[i, j] = costs[j, i] = models.moyal_ball_cost(pts[i], pts[j], params)
    return PureStateSample(label=f"moyal(theta={params.theta:g})", states=states,
                           costs=costs, points=pts, theta=params.theta)


def _basis_of(t) -> list:
    if isinstance(t, FiniteSpectralTriple):
        return t.algebra_basis
    return [linalg.require_hermitian(b) for b in t]


def lipd_constraints(sample: PureStateSample, basis_or_triple) -> LipDConstraintSet:
    """Constraint rows over the finite-cost pairs of the sample."""
    basis = _basis_of(basis_or_triple)
    evals = np.array([[float(np.trace(s.matrix @ b).real) for b in basis]
                      for s in sample.states])
    pairs, rows, bound = [], [], []
    for i in range(sample.size):
        for j in range(i + 1, sample.size):
            if np.isfinite(sample.costs[i, j]):
                pairs.append((i, j))
                rows.append(evals[i] - evals[j])
                bound.append(sample.costs[i, j])
    matrix = np.array(rows) if rows else np.zeros((0, len(basis)))
    return LipDConstraintSet(pairs=pairs, matrix=matrix, bound=np.array(bound))


def wd_distance(sample: PureStateSample, basis_or_triple, phi: DensityState,
                psi: DensityState) -> WdResult:
    """sup { phi(a) - psi(a) : a within every sampled pair constraint }.

    An unbounded program (all constraints on some objective direction were
    dropped as infinite) reports an infinite distance.
    """
    if sample.size == 0:
        raise ValidationError("empty sample")
    basis = _basis_of(basis_or_triple)
    cons = lipd_constraints(sample, basis)
    g = np.array([float(np.trace((phi.matrix - psi.matrix) @ b).real) for b in basis])

    gscale = max(1.0, float(np.linalg.norm(g)))
    if cons.matrix.shape[0] == 0:
        if float(np.linalg.norm(g)) <= UNBOUNDED_RTOL * gscale:
            return WdResult(True, 0.0, np.zeros(len(basis)))
        return WdResult(False, np.inf, None)

    _, sv, vt = np.linalg.svd(cons.matrix, full_matrices=True)
    rank = int(np.sum(sv > 1e-12 * max(float(sv[0]), 1.0)))
    null = vt[rank:].T
    if null.shape[1] and float(np.max(np.abs(null.T @ g))) > UNBOUNDED_RTOL * gscale:
        return WdResult(False, np.inf, None)

    row_space = vt[:rank].T
    m_red = cons.matrix @ row_space
    g_red = row_space.T @ g
    res = linprog(-g_red, A_ub=np.vstack([m_red, -m_red]),
                  b_ub=np.concatenate([cons.bound, cons.bound]),
                  bounds=[(None, None)] * rank, method="highs", options=_LP_OPTIONS)
    if res.status != 0:
        raise RuntimeError(f"constraint LP failed: {res.message}")
    return WdResult(True, float(-res.fun), row_space @ res.x)


def lambda_rescale(sample: PureStateSample, basis_or_triple, coeffs):
    """Largest scale at which a violating element re-enters the constraint
    set: min over violated pairs of cost / |gap|.  Returns (scale, pair)."""
    basis = _basis_of(basis_or_triple)
    cons = lipd_constraints(sample, basis)
    c = np.asarray(coeffs, dtype=float)
    gaps = np.abs(cons.matrix @ c) if cons.matrix.size else np.zeros(0)
    violated = gaps > cons.bound
    if not np.any(violated):
        raise NotApplicableError("element satisfies every sampled constraint")
    ratios = cons.bound[violated] / gaps[violated]
    best = int(np.argmin(ratios))
    pair = [cons.pairs[i] for i in np.nonzero(violated)[0]][best]
    return float(ratios[best]), pair


def quotient_transport(sample: PureStateSample, phi_barycenter, psi_barycenter) -> float:
    """Cheapest sampled transport between measures representing two states.

    Minimizes the plan cost over joint measures on the sample whose marginals
    have the prescribed barycenters (the measures themselves are eliminated:
    qubit states see only barycenters).  Raises when a barycenter is not a
    convex combination of the sample.
    """
    if sample.points is None:
        raise ValidationError("quotient transport needs Bloch coordinates for the sample")
    pts = sample.points
    for p in pts:
        if not models.is_pure_bloch(p):
            raise ValidationError("sample points must lie on the unit sphere")
    bp = models.bloch_point(phi_barycenter)
    bq = models.bloch_point(psi_barycenter)

    fi, fj = np.nonzero(np.isfinite(sample.costs))
    if len(fi) == 0:
        raise InfeasibleError("no finite-cost cells")
    nv = len(fi)
    a_eq = np.zeros((7, nv))
    a_eq[0] = 1.0
    a_eq[1:4] = pts[fi].T
    a_eq[4:7] = pts[fj].T
    b_eq = np.concatenate([[1.0], bp, bq])
    res = linprog(sample.costs[fi, fj], A_eq=a_eq, b_eq=b_eq,
                  bounds=[(0, None)] * nv, method="highs", options=_LP_OPTIONS)
    if res.status == 2:
        raise InfeasibleError("barycenter is not representable over the sample")
    if res.status != 0:
        raise RuntimeError(f"quotient LP failed: {res.message}")
    return float(res.fun)


# ---------------------------------------------------------------------------
# Chord consistency harness
# ---------------------------------------------------------------------------

@dataclass
class ChordEqualityReport:
    """Three routes to the distance between two points of one chord:
    direct, |lam - lam'| times the endpoint cost, and the sampled-constraint
    supremum.  On chords all three agree."""

    lam: float
    lam_tilde: float
    direct: float
    scaled_endpoint: float
    constrained: float
    max_spread: float
    lower_bound_ok: bool

    def within(self, tol: float) -> bool:
        return self.max_spread <= tol and self.lower_bound_ok


def _find_in_sample(sample: PureStateSample, state: DensityState) -> int:
    for i, s in enumerate(sample.states):
        if float(np.max(np.abs(s.matrix - state.matrix))) <= 1e-10:
            return i
    raise ValidationError("pure state is not part of the sample")


def chord_equality_check(sample: PureStateSample, omega1: DensityState, omega2: DensityState,
                         lam: float, lam_tilde: float,
                         triple: FiniteSpectralTriple | None = None,
                         opts: SolverOptions | None = None,
                         tol: float = 2e-4) -> ChordEqualityReport:
    """Compare the three distance routes for states on the chord between two
    sampled pure states."""
    if not (0.0 <= lam <= 1.0 and 0.0 <= lam_tilde <= 1.0):
        raise ValidationError("chord parameters must lie in [0, 1]")
    i = _find_in_sample(sample, omega1)
    j = _find_in_sample(sample, omega2)

    phi = density_state(lam * omega1.matrix + (1.0 - lam) * omega2.matrix)
    psi = density_state(lam_tilde * omega1.matrix + (1.0 - lam_tilde) * omega2.matrix)

    if sample.theta is not None:
        params = models.MoyalCostParams(sample.theta)
        direct = models.moyal_ball_cost(models.density_to_bloch(phi),
                                        models.density_to_bloch(psi), params)
        basis = models.m2_algebra()
    elif triple is not None:
        res = spectral_distance(triple, phi, psi, opts)
        direct = res.value if res.finite else np.inf
        basis = triple.algebra_basis
    else:
        raise ValidationError("need a triple (or a ball-cost sample) for the direct route")

    scaled = abs(lam - lam_tilde) * float(sample.costs[i, j])
    wd = wd_distance(sample, basis, phi, psi)
    constrained = wd.value if wd.finite else np.inf
    values = [direct, scaled, constrained]
    spread = float(max(values) - min(values)) if all(np.isfinite(values)) else np.inf
    if lam == lam_tilde:
        spread = float(max(values))
    return ChordEqualityReport(
        lam=lam, lam_tilde=lam_tilde, direct=direct, scaled_endpoint=scaled,
        constrained=constrained, max_spread=spread,
        lower_bound_ok=direct <= constrained + tol)


# ---------------------------------------------------------------------------
# Sphere-sample grammar and serialization
# ---------------------------------------------------------------------------

def sphere_sample_points(spec: str) -> np.ndarray:
    """Parse ``fib:N[:shell]``, ``poles``, ``equator:N`` and ``p:x,y,z``
    tokens joined by '+' into a stack of Bloch points."""
    chunks = []
    for token in spec.split("+"):
        token = token.strip()
        if not token:
            continue
        if token.startswith("fib:"):
            parts = token.split(":")
            n = int(parts[1])
            shell = int(parts[2]) if len(parts) > 2 else 0
            chunks.append(models.fibonacci_sphere(n, shell))
        elif token == "poles":
            chunks.append(np.array([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]]))
        elif token.startswith("equator:"):
            n = int(token.split(":", 1)[1])
            ang = 2.0 * np.pi * np.arange(n) / n
            chunks.append(np.column_stack([np.cos(ang), np.sin(ang), np.zeros(n)]))
        elif token.startswith("p:"):
            p = np.array([float(x) for x in token[2:].split(",")])
            if p.shape != (3,):
                raise ValidationError(f"bad point token {token!r}")
            chunks.append(p[None, :])
        else:
            raise ValidationError(f"unknown sample token {token!r}")
    if not chunks:
        raise ValidationError("empty sample spec")
    return np.vstack(chunks)


def sample_to_json(sample: PureStateSample) -> dict:
    from .triple import state_to_json
    costs = [[(x if np.isfinite(x) else "inf") for x in row] for row in sample.costs.tolist()]
    out = {
        "triple": sample.label,
        "states": [state_to_json(s) for s in sample.states],
        "costs": costs,
    }
    if sample.points is not None:
        out["points"] = [[float(x) for x in p] for p in sample.points]
    if sample.theta is not None:
        out["theta"] = float(sample.theta)
    return out


def sample_from_json(obj) -> PureStateSample:
    from .triple import state_from_json
    try:
        states = [state_from_json(s) for s in obj["states"]]
        costs = np.array([[np.inf if x == "inf" else float(x) for x in row]
                          for row in obj["costs"]])
        label = obj.get("triple", "")
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed sample JSON: {exc}") from exc
    points = np.array(obj["points"]) if "points" in obj else None
    theta = float(obj["theta"]) if "theta" in obj else None
    return PureStateSample(label=label, states=_require_pure(states), costs=costs,
                           points=points, theta=theta)


def load_sample(path: str) -> PureStateSample:
    with open(path) as fh:
        return sample_from_json(json.load(fh))
