import json

import numpy as np
import pytest

from nckant import models, wd
from nckant.errors import InfeasibleError, NotApplicableError, ValidationError
from nckant.models import MoyalCostParams, bloch_to_density, fibonacci_sphere
from nckant.spectral import SolverOptions, spectral_distance
from nckant.triple import density_state
from nckant.wd import (chord_equality_check, lambda_rescale, lipd_constraints,
                       moyal_sample, pure_sample_cost_matrix, quotient_transport,
                       sample_from_json, sample_to_json, sphere_sample_points,
                       wd_distance)


@pytest.fixture
def two_point_sample():
    t = models.two_point_triple(2.0)
    return t, pure_sample_cost_matrix(
        t, [models.two_point_state(1.0), models.two_point_state(0.0)])


@pytest.fixture
def moyal_chord_sample():
    pts = np.vstack([fibonacci_sphere(24), [[1, 0, 0], [-1, 0, 0]]])
    return moyal_sample(pts, MoyalCostParams(2.0))


class TestCostMatrix:
    def test_two_point_costs(self, two_point_sample):
        _, sample = two_point_sample
        assert np.allclose(sample.costs, [[0.0, 0.5], [0.5, 0.0]])

    def test_m2_diagonal_infinite_offdiagonal(self):
        t = models.m2_diagonal_triple(1.0, 3.0)
        states = [bloch_to_density(p) for p in fibonacci_sphere(6)]
        sample = pure_sample_cost_matrix(t, states)
        off = sample.costs[np.triu_indices(6, 1)]
        assert np.all(np.isinf(off))  # a generic sphere sample has no equal-z pair
        assert np.allclose(np.diag(sample.costs), 0.0)
        assert np.array_equal(sample.costs, sample.costs.T)

    def test_analytic_matches_solver(self):
        t = models.m2_diagonal_triple(1.0, 3.0)
        ring = sphere_sample_points("equator:5")
        states = [bloch_to_density(p) for p in ring]
        fast = pure_sample_cost_matrix(t, states, analytic=True)
        opts = SolverOptions(tol=1e-6)
        slow = pure_sample_cost_matrix(t, states, opts, analytic=False)
        assert np.max(np.abs(fast.costs - slow.costs)) <= 1e-4

    def test_non_pure_state_rejected(self):
        t = models.m2_diagonal_triple(1.0, 3.0)
        with pytest.raises(ValidationError):
            pure_sample_cost_matrix(t, [density_state(np.eye(2) / 2)])

    def test_moyal_sample_needs_sphere_points(self):
        with pytest.raises(ValidationError):
            moyal_sample([[0.5, 0, 0]], MoyalCostParams(2.0))


class TestWdDistance:
    def test_same_state_is_zero(self, moyal_chord_sample):
        phi = bloch_to_density((0.2, 0.1, -0.3))
        res = wd_distance(moyal_chord_sample, models.m2_algebra(), phi, phi)
        assert res.finite and res.value == pytest.approx(0.0, abs=1e-12)

    def test_moyal_chord_value(self, moyal_chord_sample):
        # the (w1, w2) constraint is binding: 0.5 * cost(w1, w2) = 1
        phi = bloch_to_density((0.5, 0, 0))
        psi = bloch_to_density((-0.5, 0, 0))
        res = wd_distance(moyal_chord_sample, models.m2_algebra(), phi, psi)
        assert res.value == pytest.approx(1.0, abs=1e-9)

    def test_differing_z_unbounded(self):
        t = models.m2_diagonal_triple(1.0, 3.0)
        states = [bloch_to_density(p) for p in fibonacci_sphere(10)]
        sample = pure_sample_cost_matrix(t, states)
        res = wd_distance(sample, t, bloch_to_density((0, 0, 0.5)),
                          bloch_to_density((0.3, 0, -0.2)))
        assert not res.finite and res.value == np.inf

    def test_witness_satisfies_constraints(self, moyal_chord_sample):
        rng = np.random.default_rng(0)
        v = rng.standard_normal(3); v = v / np.linalg.norm(v) * 0.6
        w = rng.standard_normal(3); w = w / np.linalg.norm(w) * 0.4
        res = wd_distance(moyal_chord_sample, models.m2_algebra(),
                          bloch_to_density(v), bloch_to_density(w))
        cons = lipd_constraints(moyal_chord_sample, models.m2_algebra())
        assert float(np.max(np.abs(cons.matrix @ res.witness) - cons.bound)) <= 1e-8

    def test_upper_bounds_direct_distance(self, two_point_sample):
        t, sample = two_point_sample
        for lam, lam_t in ((0.9, 0.2), (1.0, 0.0), (0.6, 0.5)):
            phi = models.two_point_state(lam)
            psi = models.two_point_state(lam_t)
            direct = spectral_distance(t, phi, psi).value
            res = wd_distance(sample, t, phi, psi)
            assert direct <= res.value + 2e-4
            assert res.value == pytest.approx(abs(lam - lam_t) * 0.5, abs=1e-10)

    def test_sample_monotonicity_nested(self):
        params = MoyalCostParams(2.0)
        base = fibonacci_sphere(16)
        refined = np.vstack([base, fibonacci_sphere(16, shell=1)])
        s1 = moyal_sample(base, params)
        s2 = moyal_sample(refined, params)
        rng = np.random.default_rng(1)
        for _ in range(5):
            v = rng.standard_normal(3); v = v / np.linalg.norm(v) * rng.uniform(0, 1)
            w = rng.standard_normal(3); w = w / np.linalg.norm(w) * rng.uniform(0, 1)
            phi, psi = bloch_to_density(v), bloch_to_density(w)
            w1 = wd_distance(s1, models.m2_algebra(), phi, psi).value
            w2 = wd_distance(s2, models.m2_algebra(), phi, psi).value
            assert w2 <= w1 + 1e-9

    def test_ball_elements_satisfy_sampled_constraints(self):
        # elements of the commutator-norm unit ball never violate pair bounds
        rng = np.random.default_rng(2)
        t = models.m2_diagonal_triple(1.0, 3.0)
        pts = np.vstack([sphere_sample_points("equator:8"), fibonacci_sphere(10)])
        sample = pure_sample_cost_matrix(t, [bloch_to_density(p) for p in pts])
        cons = lipd_constraints(sample, t)
        from nckant.triple import commutator_norm
        for _ in range(20):
            c = rng.standard_normal(4)
            nrm = commutator_norm(t, c)
            if nrm < 1e-9:
                continue
            c /= nrm
            assert float(np.max(np.abs(cons.matrix @ c) - cons.bound)) <= 1e-8

    def test_empty_sample_rejected(self):
        sample = wd.PureStateSample(label="x", states=[], costs=np.zeros((0, 0)))
        with pytest.raises(ValidationError):
            wd_distance(sample, models.m2_algebra(),
                        bloch_to_density((0, 0, 0)), bloch_to_density((0.1, 0, 0)))


class TestLambdaRescale:
    def test_two_point_example(self):
        t = models.two_point_triple(1.0)
        sample = pure_sample_cost_matrix(
            t, [models.two_point_state(1.0), models.two_point_state(0.0)])
        lam, pair = lambda_rescale(sample, t, [2.0, 0.0])
        assert lam == pytest.approx(0.5, abs=1e-12)
        assert pair == (0, 1)
        from nckant.triple import commutator_norm
        assert 1.0 / commutator_norm(t, [2.0, 0.0]) == pytest.approx(lam)

    def test_identity_not_applicable(self):
        t = models.two_point_triple(1.0)
        sample = pure_sample_cost_matrix(
            t, [models.two_point_state(1.0), models.two_point_state(0.0)])
        with pytest.raises(NotApplicableError):
            lambda_rescale(sample, t, [1.0, 1.0])

    def test_rescaled_element_is_feasible(self):
        rng = np.random.default_rng(3)
        t = models.m2_diagonal_triple(1.0, 3.0)
        pts = sphere_sample_points("equator:10")
        sample = pure_sample_cost_matrix(t, [bloch_to_density(p) for p in pts])
        cons = lipd_constraints(sample, t)
        found = 0
        while found < 10:
            c = rng.uniform(-3, 3, 4)
            try:
                lam, _ = lambda_rescale(sample, t, c)
            except NotApplicableError:
                continue
            found += 1
            assert lam < 1.0
            assert float(np.max(np.abs(cons.matrix @ (lam * c)) - cons.bound)) <= 1e-10


class TestQuotientTransport:
    def test_equal_barycenters_zero(self, moyal_chord_sample):
        assert quotient_transport(moyal_chord_sample, (0.1, 0.2, 0.3), (0.1, 0.2, 0.3)) \
            == pytest.approx(0.0, abs=1e-10)

    def test_antipodal_poles_forced_point_masses(self):
        pts = np.vstack([fibonacci_sphere(20), [[0, 0, 1], [0, 0, -1]]])
        sample = moyal_sample(pts, MoyalCostParams(2.0))
        val = quotient_transport(sample, (0, 0, 1), (0, 0, -1))
        assert val == pytest.approx(
            models.moyal_ball_cost((0, 0, 1), (0, 0, -1), MoyalCostParams(2.0)), abs=1e-9)

    def test_chord_barycenters(self, moyal_chord_sample):
        val = quotient_transport(moyal_chord_sample, (0.5, 0, 0), (-0.5, 0, 0))
        assert val == pytest.approx(1.0, abs=1e-9)
        # never below the constrained supremum's lower bound, the state distance
        assert val >= models.moyal_ball_cost((0.5, 0, 0), (-0.5, 0, 0),
                                             MoyalCostParams(2.0)) - 1e-9

    def test_outside_hull_infeasible(self):
        sample = moyal_sample(np.array([[1.0, 0, 0], [-1.0, 0, 0]]), MoyalCostParams(2.0))
        with pytest.raises(InfeasibleError):
            quotient_transport(sample, (0, 0, 1), (0, 0, 0))


class TestChordEquality:
    def test_equal_parameters_all_zero(self, moyal_chord_sample):
        s = moyal_chord_sample
        rep = chord_equality_check(s, s.states[-2], s.states[-1], 0.4, 0.4)
        assert rep.max_spread <= 1e-12

    def test_two_point_full_chord(self, two_point_sample):
        t, sample = two_point_sample
        rep = chord_equality_check(sample, sample.states[0], sample.states[1],
                                   1.0, 0.0, triple=t)
        for v in (rep.direct, rep.scaled_endpoint, rep.constrained):
            assert v == pytest.approx(0.5, rel=1e-4)
        assert rep.within(2e-4)

    def test_m2_equator_chord(self):
        # equal-z endpoints (1,0,0), (0,1,0); lam 0.9 vs 0.1 gives
        # 0.8 * sqrt(2)/|D1 - D2| in the standard Bloch convention
        t = models.m2_diagonal_triple(1.0, 3.0)
        w1, w2 = bloch_to_density((1, 0, 0)), bloch_to_density((0, 1, 0))
        pts = np.vstack([fibonacci_sphere(20), [[1, 0, 0], [0, 1, 0]]])
        sample = pure_sample_cost_matrix(t, [bloch_to_density(p) for p in pts])
        rep = chord_equality_check(sample, w1, w2, 0.9, 0.1, triple=t)
        expected = 0.8 * np.sqrt(2.0) / 2.0
        for v in (rep.direct, rep.scaled_endpoint, rep.constrained):
            assert v == pytest.approx(expected, rel=2e-4)
        assert rep.within(2e-4)

    def test_state_missing_from_sample(self, moyal_chord_sample):
        with pytest.raises(ValidationError):
            chord_equality_check(moyal_chord_sample, bloch_to_density((0, 1, 0)),
                                 moyal_chord_sample.states[0], 0.5, 0.1)

    def test_parameters_validated(self, moyal_chord_sample):
        s = moyal_chord_sample
        with pytest.raises(ValidationError):
            chord_equality_check(s, s.states[-2], s.states[-1], 1.2, 0.0)


class TestSampleGrammarAndJson:
    def test_grammar_tokens(self):
        pts = sphere_sample_points("fib:10+poles+p:1,0,0")
        assert pts.shape == (13, 3)
        eq = sphere_sample_points("equator:6")
        assert np.allclose(eq[:, 2], 0.0)
        with pytest.raises(ValidationError):
            sphere_sample_points("ring:5")
        with pytest.raises(ValidationError):
            sphere_sample_points("")

    def test_json_round_trip(self):
        t = models.m2_diagonal_triple(1.0, 3.0)
        pts = np.vstack([sphere_sample_points("equator:3"), fibonacci_sphere(4)])
        sample = pure_sample_cost_matrix(t, [bloch_to_density(p) for p in pts])
        blob = json.dumps(sample_to_json(sample))
        back = sample_from_json(json.loads(blob))
        assert back.size == sample.size
        assert np.array_equal(back.costs, sample.costs)  # inf entries included
        assert np.array_equal(back.points, sample.points)

    def test_moyal_json_keeps_theta(self):
        sample = moyal_sample(fibonacci_sphere(4), MoyalCostParams(1.5))
        back = sample_from_json(sample_to_json(sample))
        assert back.theta == 1.5
