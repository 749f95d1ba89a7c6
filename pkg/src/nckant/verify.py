"""Verification suite: every closed-form value and inequality the library is
expected to reproduce, runnable as one batch.

Each check measures a residual against a stated tolerance and records what
was compared, so the emitted report doubles as a regression log.  All
randomness is seeded; two runs with one seed produce identical reports.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import models, transport, wd
from .spectral import SolverOptions, spectral_distance, spectral_distance_oracle
from .triple import density_state, make_triple
from .wd import chord_equality_check, lambda_rescale, moyal_sample, wd_distance


@dataclass
class Check:
    id: str
    description: str
    anchor: str
    expected: float
    computed: float
    tolerance: float
    passed: bool
    seconds: float = 0.0


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)


def report_to_json(report: VerificationReport) -> dict:
    return {
        "overall": report.overall,
        "checks": [{
            "id": c.id, "description": c.description, "anchor": c.anchor,
            "expected": _jsonable(c.expected), "computed": _jsonable(c.computed),
            "tolerance": c.tolerance, "pass": c.passed,
            "seconds": round(c.seconds, 3),
        } for c in report.checks],
    }


def _jsonable(x):
    x = float(x)
    return x if np.isfinite(x) else ("inf" if x > 0 else "-inf")


# ---------------------------------------------------------------------------
# Sampling helpers (seeded)
# ---------------------------------------------------------------------------

def _equal_z_pair(rng, min_sep=0.05):
    while True:
        z = rng.uniform(-0.9, 0.9)
        rmax = np.sqrt(1.0 - z * z)
        r1, r2 = rng.uniform(0, rmax, 2)
        a1, a2 = rng.uniform(0, 2 * np.pi, 2)
        p = np.array([r1 * np.cos(a1), r1 * np.sin(a1), z])
        q = np.array([r2 * np.cos(a2), r2 * np.sin(a2), z])
        if np.linalg.norm(p - q) >= min_sep:
            return p, q


def _ball_point(rng):
    v = rng.standard_normal(3)
    v /= np.linalg.norm(v)
    return v * rng.uniform(0, 1) ** (1.0 / 3.0)


def _sphere_point(rng):
    v = rng.standard_normal(3)
    return v / np.linalg.norm(v)


def _random_hermitian(rng, n):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (a + a.conj().T) / 2.0


# ---------------------------------------------------------------------------
# Criterion 1: two-point model closed form
# ---------------------------------------------------------------------------

def check_two_point(seed: int) -> list:
    opts = SolverOptions(seed=seed)
    worst = 0.0
    for m in (0.5, 1.0, 2.0, 1.0 + 1.0j):
        t = models.two_point_triple(m)
        res = spectral_distance(t, models.two_point_state(1.0), models.two_point_state(0.0), opts)
        expected = 1.0 / abs(m)
        worst = max(worst, abs(res.value - expected) / expected)
        if models.two_point_distance(m) != expected:
            worst = np.inf
    return [Check("01-two-point-closed-form",
                  "solver reproduces 1/|m| for m in {0.5, 1, 2, 1+i}; analytic backend exact",
                  "d(delta1, delta2) = 1/|m|", 0.0, worst, 1e-4, worst <= 1e-4)]


# ---------------------------------------------------------------------------
# Criterion 2: diagonal-Dirac qubit closed form + exact infinities
# ---------------------------------------------------------------------------

def check_m2_diagonal(seed: int) -> list:
    rng = np.random.default_rng(seed)
    t = models.m2_diagonal_triple(1.0, 3.0)
    opts = SolverOptions(seed=seed)
    worst = 0.0
    for _ in range(100):
        p, q = _equal_z_pair(rng)
        res = spectral_distance(t, models.bloch_to_density(p), models.bloch_to_density(q), opts)
        closed = models.m2_diagonal_distance(1.0, 3.0, p, q)
        worst = max(worst, abs(res.value - closed.value) / closed.value)
    flips = 0
    for _ in range(20):
        z1 = rng.uniform(-0.9, 0.9)
        z2 = z1
        while abs(z2 - z1) < 0.05:
            z2 = rng.uniform(-0.9, 0.9)
        p = np.array([0.0, 0.0, z1])
        q = np.array([rng.uniform(-0.3, 0.3), 0.0, z2])
        q[0] = min(q[0], np.sqrt(1 - z2 * z2))
        res = spectral_distance(t, models.bloch_to_density(p), models.bloch_to_density(q), opts)
        if res.finite:
            flips += 1
    return [
        Check("02-m2-closed-form",
              "solver matches the equal-z closed form on 100 seeded pairs",
              "d = dEc/|D1 - D2| on equal z (standard Bloch)", 0.0, worst, 1e-3, worst <= 1e-3),
        Check("02-m2-infinite",
              "20 differing-z pairs flagged infinite by the kernel test alone",
              "d = +inf when z differs", 0.0, float(flips), 0.0, flips == 0),
    ]


# ---------------------------------------------------------------------------
# Criterion 3: primal/dual agreement on random cost spaces
# ---------------------------------------------------------------------------

def check_duality(seed: int) -> list:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for trial in range(50):
        k = int(rng.integers(3, 51))
        if trial % 2 == 0:
            pts = rng.standard_normal((k, 2))
            cost = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
        else:
            cost = rng.uniform(0.0, 2.0, (k, k))
            cost = (cost + cost.T) / 2.0
            if trial % 4 == 1:
                np.fill_diagonal(cost, rng.uniform(0.1, 0.5, k))
            else:
                np.fill_diagonal(cost, 0.0)
        space = transport.explicit_space(cost)
        mu = rng.uniform(0, 1, k); mu /= mu.sum()
        nu = rng.uniform(0, 1, k); nu /= nu.sum()
        p = transport.wasserstein_primal(space, mu, nu).value
        d = transport.kantorovich_dual(space, mu, nu).value
        worst = max(worst, abs(p - d) / (1.0 + abs(p)))
    return [Check("03-kantorovich-duality",
                  "|primal - dual| <= 1e-8 (1 + value) on 50 seeded metric and non-metric spaces",
                  "transport LP value = potential LP value", 0.0, worst, 1e-8, worst <= 1e-8)]


# ---------------------------------------------------------------------------
# Criterion 4: cycle vs interval point-mass distances
# ---------------------------------------------------------------------------

def check_cycle_interval(seed: int) -> list:
    worst = 0.0
    cyc = transport.cycle_space(20)
    for i in range(20):
        for j in range(i + 1, 20):
            val = transport.wasserstein_primal(
                cyc, transport.dirac_vector(i, 20), transport.dirac_vector(j, 20)).value
            worst = max(worst, abs(val - min(abs(i - j), 20 - abs(i - j)) / 20.0))
    itv = transport.interval_space(20)
    xs = np.arange(1, 21) / 21.0
    for i in range(20):
        for j in range(i + 1, 20):
            val = transport.wasserstein_primal(
                itv, transport.dirac_vector(i, 20), transport.dirac_vector(j, 20)).value
            worst = max(worst, abs(val - abs(xs[i] - xs[j])))
    c10 = transport.cycle_space(10)
    v_cyc = transport.wasserstein_primal(
        c10, transport.dirac_vector(2, 10), transport.dirac_vector(9, 10)).value
    i9 = transport.interval_space(9)
    v_itv = transport.wasserstein_primal(
        i9, transport.dirac_vector(1, 9), transport.dirac_vector(8, 9)).value
    pair_res = max(abs(v_cyc - 0.3), abs(v_itv - 0.7))
    return [
        Check("04-cycle-vs-interval",
              "all point-mass pairs exact on cycle(20) and interval(20)",
              "W_circle = min(|dx|, 1 - |dx|); W_interval = |dx|",
              0.0, worst, 1e-9, worst <= 1e-9),
        Check("04-separating-pair",
              "the 0.2/0.9 pair costs 0.3 on the circle and 0.7 on the interval",
              "removing a point can change the transport distance",
              0.0, pair_res, 1e-9, pair_res <= 1e-9),
    ]


# ---------------------------------------------------------------------------
# Criterion 5: state distance below the constrained supremum + monotonicity
# ---------------------------------------------------------------------------

def check_bound_and_monotonicity(seed: int) -> list:
    rng = np.random.default_rng(seed)
    params = models.MoyalCostParams(2.0)
    base = models.fibonacci_sphere(30)
    refined = np.vstack([base, models.fibonacci_sphere(30, shell=1)])
    sample30 = moyal_sample(base, params)
    sample60 = moyal_sample(refined, params)
    basis = models.m2_algebra()
    worst_bound = -np.inf
    worst_mono = -np.inf
    for _ in range(50):
        bp, bq = _ball_point(rng), _ball_point(rng)
        phi = models.bloch_to_density(bp)
        psi = models.bloch_to_density(bq)
        direct = models.moyal_ball_cost(bp, bq, params)
        w30 = wd_distance(sample30, basis, phi, psi).value
        w60 = wd_distance(sample60, basis, phi, psi).value
        worst_bound = max(worst_bound, direct - w30)
        worst_mono = max(worst_mono, w60 - w30)
    return [
        Check("05-distance-below-constrained-sup",
              "direct state distance <= sampled-constraint supremum on 50 seeded pairs",
              "d(phi, psi) <= W(phi, psi)", 0.0, worst_bound, 2e-4, worst_bound <= 2e-4),
        Check("05-sample-monotonicity",
              "refining the sample 30 -> 60 points never raises the supremum",
              "constraints only accumulate", 0.0, worst_mono, 1e-9, worst_mono <= 1e-9),
    ]


# ---------------------------------------------------------------------------
# Criterion 6: three-way chord equality
# ---------------------------------------------------------------------------

def check_chord_equality(seed: int) -> list:
    rng = np.random.default_rng(seed)
    opts = SolverOptions(seed=seed)
    worst_diag = 0.0
    t = models.m2_diagonal_triple(1.0, 3.0)
    for _ in range(10):
        z = rng.uniform(-0.8, 0.8)
        r = np.sqrt(1.0 - z * z)
        a1 = rng.uniform(0, 2 * np.pi)
        a2 = a1 + rng.uniform(0.5, np.pi)
        w1 = np.array([r * np.cos(a1), r * np.sin(a1), z])
        w2 = np.array([r * np.cos(a2), r * np.sin(a2), z])
        pts = np.vstack([models.fibonacci_sphere(30), w1, w2])
        states = [models.bloch_to_density(p) for p in pts]
        sample = wd.pure_sample_cost_matrix(t, states)
        lam, lam_t = rng.uniform(0, 1, 2)
        rep = chord_equality_check(sample, states[-2], states[-1], lam, lam_t,
                                   triple=t, opts=opts)
        worst_diag = max(worst_diag, rep.max_spread)
    worst_moyal = 0.0
    params = models.MoyalCostParams(2.0)
    for _ in range(10):
        w1, w2 = _sphere_point(rng), _sphere_point(rng)
        pts = np.vstack([models.fibonacci_sphere(30), w1, w2])
        sample = moyal_sample(pts, params)
        lam, lam_t = rng.uniform(0, 1, 2)
        rep = chord_equality_check(sample, sample.states[-2], sample.states[-1], lam, lam_t)
        worst_moyal = max(worst_moyal, rep.max_spread)
    return [
        Check("06-chord-equality-diagonal",
              "direct, rescaled-endpoint, and constrained values agree on 10 equal-z chords",
              "d(phi_l, phi_l') = |l - l'| d(w1, w2) = W(phi_l, phi_l')",
              0.0, worst_diag, 2e-4, worst_diag <= 2e-4),
        Check("06-chord-equality-ball-cost",
              "the same three-way equality for the ball cost on 10 chords",
              "d(phi_l, phi_l') = |l - l'| d(w1, w2) = W(phi_l, phi_l')",
              0.0, worst_moyal, 2e-4, worst_moyal <= 2e-4),
    ]


# ---------------------------------------------------------------------------
# Criterion 7: rescaling bounds for constraint violators
# ---------------------------------------------------------------------------

def check_lambda_bounds(seed: int) -> list:
    from .triple import commutator_norm
    rng = np.random.default_rng(seed)
    worst_left = -np.inf
    worst_lambda = 0.0
    worst_feas = -np.inf

    t2 = models.two_point_triple(1.0)
    sample2 = wd.pure_sample_cost_matrix(
        t2, [models.two_point_state(1.0), models.two_point_state(0.0)])
    tm = models.m2_diagonal_triple(1.0, 3.0)
    ring = np.vstack([models.fibonacci_sphere(20),
                      wd.sphere_sample_points("equator:12")])
    samplem = wd.pure_sample_cost_matrix(tm, [models.bloch_to_density(p) for p in ring])

    produced = 0
    while produced < 100:
        if produced % 2 == 0:
            t, sample = t2, sample2
            c = rng.uniform(-3, 3, 2)
        else:
            t, sample = tm, samplem
            c = rng.uniform(-3, 3, 4)
        try:
            lam, _ = lambda_rescale(sample, t, c)
        except Exception:
            continue
        produced += 1
        nrm = commutator_norm(t, c)
        worst_left = max(worst_left, 1.0 / nrm - lam)
        worst_lambda = max(worst_lambda, lam)
        cons = wd.lipd_constraints(sample, t)
        gaps = np.abs(cons.matrix @ (lam * c)) - cons.bound
        worst_feas = max(worst_feas, float(np.max(gaps)))
    return [
        Check("07-rescale-left-bound",
              "1/||[D, a]|| - 1e-9 <= lambda on 100 seeded violating elements",
              "1/||[D, a]|| <= lambda_a", 0.0, worst_left, 1e-9, worst_left <= 1e-9),
        Check("07-rescale-strict-upper",
              "lambda < 1 for every violating element",
              "lambda_a < 1", 1.0, worst_lambda, 0.0, worst_lambda < 1.0),
        Check("07-rescaled-feasible",
              "lambda * a satisfies every sampled constraint within 1e-10",
              "lambda_a a lies in the constraint set", 0.0, worst_feas, 1e-10,
              worst_feas <= 1e-10),
    ]


# ---------------------------------------------------------------------------
# Criterion 8: ball-cost branches and triangle inequality
# ---------------------------------------------------------------------------

def check_moyal(seed: int) -> list:
    rng = np.random.default_rng(seed)
    params = models.MoyalCostParams(2.0)
    res = max(
        abs(models.moyal_ball_cost((0, 0, 0), (1, 0, 0), params) - 1.0),
        abs(models.moyal_ball_cost((0, 0, 0), (0, 0, 1), params) - 0.5),
    )
    h = 0.5 / np.sqrt(2.0)
    d = np.linalg.norm([h, 0, h])
    alpha = np.arcsin(h / d)
    branch_gap = abs(np.cos(alpha) * d - d / (2 * np.sin(alpha)))
    res = max(res, branch_gap)
    worst_tri = -np.inf
    violations = 0
    for _ in range(1000):
        a, b, c = (_ball_point(rng) for _ in range(3))
        gap = (models.moyal_ball_cost(a, c, params)
               - models.moyal_ball_cost(a, b, params)
               - models.moyal_ball_cost(b, c, params))
        worst_tri = max(worst_tri, gap)
        if gap > 1e-9:
            violations += 1
    return [
        Check("08-ball-cost-branches",
              "horizontal -> 1 and vertical -> 0.5 at theta=2; branches agree at pi/4",
              "sqrt(theta/2) {cos(a) d; d/(2 sin a)}", 0.0, res, 1e-12, res <= 1e-12),
        Check("08-ball-cost-triangle",
              f"triangle inequality on 1000 seeded ball triples ({violations} violations)",
              "the ball cost is a distance", 0.0, worst_tri, 1e-9, worst_tri <= 1e-9),
    ]


# ---------------------------------------------------------------------------
# Criterion 9: two-sheet space
# ---------------------------------------------------------------------------

def check_two_sheet(seed: int) -> list:
    rng = np.random.default_rng(seed)
    base = transport.cycle_space(15)
    doubled = transport.two_sheet_space(base, 0.3)
    worst = 0.0
    for trial in range(20):
        sheet = trial % 2
        mu_b = rng.uniform(0, 1, 15); mu_b /= mu_b.sum()
        nu_b = rng.uniform(0, 1, 15); nu_b /= nu_b.sum()
        w_base = transport.wasserstein_primal(base, mu_b, nu_b).value
        lift = np.zeros(30); lift[sheet * 15:(sheet + 1) * 15] = mu_b
        lift2 = np.zeros(30); lift2[sheet * 15:(sheet + 1) * 15] = nu_b
        w_two = transport.wasserstein_primal(doubled, lift, lift2).value
        worst = max(worst, abs(w_two - w_base))
    cross = max(abs(models.two_sheet_cost(3.0, 4.0) - 5.0),
                abs(models.two_sheet_cost(0.0, 0.3) - 0.3))
    return [
        Check("09-two-sheet-same-sheet",
              "marginals on one sheet transport exactly as on the base space (20 pairs)",
              "same-sheet W equals the base-space W", 0.0, worst, 1e-10, worst <= 1e-10),
        Check("09-two-sheet-cross-cost",
              "cross-sheet cost examples (3,4)->5 and (0, h)->h exact",
              "c(x, y) = sqrt(d(x, y)^2 + h^2); c(x, x) = h != 0",
              0.0, cross, 0.0, cross == 0.0),
    ]


# ---------------------------------------------------------------------------
# Criterion 10: distinct measures, one state
# ---------------------------------------------------------------------------

def check_measure_quotient(seed: int) -> list:
    north, south = np.array([0., 0., 1.]), np.array([0., 0., -1.])
    east, west = np.array([1., 0., 0.]), np.array([-1., 0., 0.])
    poles = models.sphere_measure([north, south], [0.5, 0.5])
    equator = models.sphere_measure([east, west], [0.5, 0.5])
    s1, _ = models.state_from_measure(poles)
    s2, _ = models.state_from_measure(equator)
    state_gap = float(np.max(np.abs(s1.matrix - s2.matrix)))

    params = models.MoyalCostParams(2.0)
    sample = moyal_sample(np.vstack([north, south, east, west]), params)
    wd_val = wd_distance(sample, models.m2_algebra(), s1, s2).value
    space = transport.explicit_space(sample.costs)
    w_classical = transport.wasserstein_primal(
        space, np.array([0.5, 0.5, 0, 0]), np.array([0, 0, 0.5, 0.5])).value
    res = max(state_gap, abs(wd_val))
    return [
        Check("10-measures-collapse-to-state",
              "pole and equator measures give one density matrix; state distance 0",
              "distinct measures, one state", 0.0, res, 1e-12, res <= 1e-12),
        Check("10-classical-separation",
              f"classical W between the two measures is {w_classical:.3f} >= 0.5",
              "the measure space is strictly finer than the state space",
              0.5, w_classical, 0.0, w_classical >= 0.5),
    ]


# ---------------------------------------------------------------------------
# Criterion 11: solver vs direction-sampling oracle
# ---------------------------------------------------------------------------

def _random_finite_states(rng, t):
    """A pair of states whose difference pairs trivially with the commutant."""
    from .triple import commutant_kernel, represent
    kern = commutant_kernel(t)
    n = t.hilbert_dim
    while True:
        delta = _random_hermitian(rng, n)
        delta -= np.trace(delta).real / n * np.eye(n)
        for kc in kern.elements:
            km = represent(t, kc)
            delta -= np.trace(km.conj().T @ delta).real * km
        top = float(np.max(np.abs(np.linalg.eigvalsh(delta))))
        if top < 1e-8:
            continue
        scale = 2.0 * top * n
        rho = np.eye(n) / n + delta / scale
        sigma = np.eye(n) / n - delta / scale
        return density_state(rho), density_state(sigma)


def check_oracle(seed: int) -> list:
    rng = np.random.default_rng(seed)
    opts = SolverOptions(seed=seed)
    worst_below = -np.inf
    worst_above = -np.inf
    for trial in range(30):
        if trial % 2 == 0:
            t = make_triple(models.m2_algebra(), _random_hermitian(rng, 2),
                            label="random-full")
        else:
            off = rng.standard_normal() + 1j * rng.standard_normal()
            d = _random_hermitian(rng, 2)
            d[0, 1] = off; d[1, 0] = np.conj(off)
            t = make_triple([np.diag([1.0, 0.0]).astype(complex),
                             np.diag([0.0, 1.0]).astype(complex)], d,
                            label="random-diagonal-algebra")
        rho, sigma = _random_finite_states(rng, t)
        solver = spectral_distance(t, rho, sigma, opts).value
        oracle = spectral_distance_oracle(t, rho, sigma, 100000, seed=seed + trial)
        worst_below = max(worst_below, oracle - solver)
        worst_above = max(worst_above, solver - oracle)
    return [
        Check("11-solver-above-oracle",
              "solver >= oracle - 1e-4 on 30 seeded random qubit triples",
              "the oracle is a lower bound", 0.0, worst_below, 1e-4, worst_below <= 1e-4),
        Check("11-solver-within-oracle-band",
              "solver <= oracle + 5e-2 (the direction search is near exhaustive)",
              "two-parameter search space", 0.0, worst_above, 5e-2, worst_above <= 5e-2),
    ]


# ---------------------------------------------------------------------------
# Criterion 12: metric axioms across the board
# ---------------------------------------------------------------------------

def check_metric_axioms(seed: int) -> list:
    rng = np.random.default_rng(seed)
    opts = SolverOptions(seed=seed)

    worst = 0.0
    t = models.m2_diagonal_triple(1.0, 3.0)
    for _ in range(5):
        z = rng.uniform(-0.8, 0.8)
        states = []
        for _ in range(3):
            r = rng.uniform(0, np.sqrt(1 - z * z))
            a = rng.uniform(0, 2 * np.pi)
            states.append(models.bloch_to_density((r * np.cos(a), r * np.sin(a), z)))
        d01 = spectral_distance(t, states[0], states[1], opts).value
        d10 = spectral_distance(t, states[1], states[0], opts).value
        d12 = spectral_distance(t, states[1], states[2], opts).value
        d02 = spectral_distance(t, states[0], states[2], opts).value
        scale = max(1.0, d02)
        worst = max(worst, abs(d01 - d10) / scale,
                    (d02 - d01 - d12) / scale,
                    spectral_distance(t, states[0], states[0], opts).value)
    spectral_res = worst

    params = models.MoyalCostParams(2.0)
    sample = moyal_sample(models.fibonacci_sphere(20), params)
    basis = models.m2_algebra()
    worst = 0.0
    for _ in range(5):
        sts = [models.bloch_to_density(_ball_point(rng)) for _ in range(3)]
        w01 = wd_distance(sample, basis, sts[0], sts[1]).value
        w10 = wd_distance(sample, basis, sts[1], sts[0]).value
        w12 = wd_distance(sample, basis, sts[1], sts[2]).value
        w02 = wd_distance(sample, basis, sts[0], sts[2]).value
        w00 = wd_distance(sample, basis, sts[0], sts[0]).value
        scale = max(1.0, w02)
        worst = max(worst, abs(w01 - w10) / scale, (w02 - w01 - w12) / scale, w00)
    wd_res = worst

    cost_res = 0.0
    for space in (transport.cycle_space(20), transport.interval_space(20),
                  transport.two_sheet_space(transport.cycle_space(15), 0.3)):
        r = transport.metric_residuals(space.cost)
        cost_res = max(cost_res, r["diagonal"], r["triangle"])
        if not space.metric:
            cost_res = np.inf

    return [
        Check("12-spectral-metric-axioms",
              "symmetry, triangle, identity for the finite-sector state distance",
              "the state distance is a metric", 0.0, spectral_res, 2e-4,
              spectral_res <= 2e-4),
        Check("12-constrained-sup-metric-axioms",
              "symmetry, triangle, identity for the sampled-constraint supremum",
              "the constrained supremum is a metric", 0.0, wd_res, 1e-6, wd_res <= 1e-6),
        Check("12-cost-space-metric-axioms",
              "cycle, interval and two-sheet constructors emit genuine metrics",
              "metric-flagged costs satisfy the axioms", 0.0, cost_res, 1e-9,
              cost_res <= 1e-9),
    ]


ALL_CHECKS = [
    check_two_point,
    check_m2_diagonal,
    check_duality,
    check_cycle_interval,
    check_bound_and_monotonicity,
    check_chord_equality,
    check_lambda_bounds,
    check_moyal,
    check_two_sheet,
    check_measure_quotient,
    check_oracle,
    check_metric_axioms,
]


def run_verification(seed: int = 0) -> VerificationReport:
    report = VerificationReport()
    for fn in ALL_CHECKS:
        t0 = time.perf_counter()
        produced = fn(seed)
        elapsed = time.perf_counter() - t0
        for c in produced:
            c.seconds = elapsed / len(produced)
            report.checks.append(c)
    return report


def refinement_curve(seed: int = 0):
    """Constrained-supremum value against nested sample sizes, for plotting."""
    rng = np.random.default_rng(seed)
    params = models.MoyalCostParams(2.0)
    phi_b, psi_b = _ball_point(rng), _ball_point(rng)
    phi, psi = models.bloch_to_density(phi_b), models.bloch_to_density(psi_b)
    direct = models.moyal_ball_cost(phi_b, psi_b, params)
    basis = models.m2_algebra()
    sizes, values = [], []
    pts = np.zeros((0, 3))
    for shell in range(5):
        pts = np.vstack([pts, models.fibonacci_sphere(12, shell=shell)])
        sample = moyal_sample(pts, params)
        sizes.append(len(pts))
        values.append(wd_distance(sample, basis, phi, psi).value)
    return sizes, values, direct
