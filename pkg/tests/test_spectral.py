import numpy as np
import pytest

from nckant import models
from nckant.errors import DegenerateTripleError, ValidationError
from nckant.spectral import (ExtendedDistance, SolverOptions, distance_to_json,
                             spectral_distance, spectral_distance_oracle)
from nckant.triple import commutator_norm, density_state, make_triple


def random_hermitian(rng, n):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (a + a.conj().T) / 2


class TestTwoPoint:
    @pytest.mark.parametrize("m", [0.5, 1.0, 2.0, 1 + 1j])
    def test_inverse_modulus(self, m):
        t = models.two_point_triple(m)
        res = spectral_distance(t, models.two_point_state(1.0), models.two_point_state(0.0))
        assert res.finite and res.converged
        assert res.value == pytest.approx(1.0 / abs(m), rel=1e-4)

    def test_equal_states_return_zero_immediately(self):
        t = models.two_point_triple(2.0)
        s = models.two_point_state(0.3)
        res = spectral_distance(t, s, s)
        assert res.value == 0.0 and res.iterations == 0

    def test_zero_dirac_is_infinite(self):
        t = models.two_point_triple(0.0)
        res = spectral_distance(t, models.two_point_state(1.0), models.two_point_state(0.0))
        assert not res.finite


class TestM2Diagonal:
    def test_equal_z_matches_closed_form(self):
        # Euclidean Bloch distance over |D1 - D2| (standard Bloch convention)
        t = models.m2_diagonal_triple(1.0, 3.0)
        res = spectral_distance(t, models.bloch_to_density((0.5, 0, 0)),
                                models.bloch_to_density((0, 0.5, 0)))
        assert res.value == pytest.approx(np.hypot(0.5, 0.5) / 2.0, rel=1e-4)

    def test_differing_z_is_infinite(self):
        t = models.m2_diagonal_triple(1.0, 3.0)
        res = spectral_distance(t, models.bloch_to_density((0, 0, 1)),
                                models.bloch_to_density((0, 0, -1)))
        assert not res.finite and res.witness is None

    def test_small_z_gap_still_infinite(self):
        # finiteness comes from the kernel pairing alone, not value blow-up
        t = models.m2_diagonal_triple(1.0, 3.0)
        res = spectral_distance(t, models.bloch_to_density((0.1, 0, 1e-5)),
                                models.bloch_to_density((0.1, 0, -1e-5)))
        assert not res.finite

    def test_scalar_dirac(self):
        t = make_triple(models.m2_algebra(), np.eye(2))
        res = spectral_distance(t, models.bloch_to_density((1, 0, 0)),
                                models.bloch_to_density((0, 1, 0)))
        assert not res.finite
        s = models.bloch_to_density((0.2, 0, 0))
        assert spectral_distance(t, s, s).value == 0.0


class TestWitness:
    def test_witness_is_feasible_and_certifies_value(self):
        t = models.m2_diagonal_triple(1.0, 3.0)
        rho = models.bloch_to_density((0.4, 0.3, 0.2))
        sigma = models.bloch_to_density((-0.1, 0.5, 0.2))
        res = spectral_distance(t, rho, sigma)
        assert commutator_norm(t, res.witness) <= 1.0 + 1e-6
        evaluated = float(np.trace(
            (rho.matrix - sigma.matrix)
            @ sum(c * b for c, b in zip(res.witness, t.algebra_basis))).real)
        assert evaluated >= res.value - res.gap_estimate - 1e-12

    def test_honest_gap_when_budget_exhausted(self):
        rng = np.random.default_rng(5)
        t = make_triple(models.m2_algebra(), random_hermitian(rng, 2))
        from nckant.verify import _random_finite_states
        rho, sigma = _random_finite_states(np.random.default_rng(7), t)
        res = spectral_distance(t, rho, sigma,
                                SolverOptions(tol=1e-9, max_iter=4, restarts=2, seed=0))
        assert not res.converged
        assert res.gap_estimate > 1e-9
        full = spectral_distance(t, rho, sigma, SolverOptions(tol=1e-9, seed=0))
        assert full.value <= res.value + res.gap_estimate + 1e-12


class TestProperties:
    def test_symmetry(self):
        t = models.m2_diagonal_triple(1.0, 3.0)
        opts = SolverOptions()
        a = models.bloch_to_density((0.4, -0.2, 0.1))
        b = models.bloch_to_density((-0.3, 0.3, 0.1))
        d1 = spectral_distance(t, a, b, opts).value
        d2 = spectral_distance(t, b, a, opts).value
        assert abs(d1 - d2) <= 2 * opts.tol * max(1.0, d1)

    def test_triangle_inequality(self):
        rng = np.random.default_rng(11)
        t = models.m2_diagonal_triple(1.0, 3.0)
        opts = SolverOptions()
        for _ in range(5):
            z = rng.uniform(-0.7, 0.7)
            pts = []
            for _ in range(3):
                r = rng.uniform(0, np.sqrt(1 - z * z))
                ang = rng.uniform(0, 2 * np.pi)
                pts.append(models.bloch_to_density((r * np.cos(ang), r * np.sin(ang), z)))
            d02 = spectral_distance(t, pts[0], pts[2], opts).value
            d01 = spectral_distance(t, pts[0], pts[1], opts).value
            d12 = spectral_distance(t, pts[1], pts[2], opts).value
            assert d02 <= d01 + d12 + 2 * opts.tol * max(1.0, d02)

    def test_scale_covariance(self):
        # replacing D by lam * D divides every finite distance by lam
        lam = 2.5
        t1 = models.m2_diagonal_triple(1.0, 3.0)
        t2 = models.m2_diagonal_triple(lam * 1.0, lam * 3.0)
        a = models.bloch_to_density((0.5, 0.1, -0.2))
        b = models.bloch_to_density((-0.2, 0.4, -0.2))
        d1 = spectral_distance(t1, a, b).value
        d2 = spectral_distance(t2, a, b).value
        assert d2 == pytest.approx(d1 / lam, rel=1e-3)


class TestOracle:
    def test_two_point_near_exhaustive(self):
        t = models.two_point_triple(2.0)
        val = spectral_distance_oracle(t, models.two_point_state(1.0),
                                       models.two_point_state(0.0), 1000, seed=0)
        assert val >= 0.5 - 1e-3

    def test_oracle_is_lower_bound(self):
        rng = np.random.default_rng(13)
        t = models.m2_diagonal_triple(1.0, 3.0)
        opts = SolverOptions()
        for trial in range(5):
            z = rng.uniform(-0.5, 0.5)
            r1, r2 = rng.uniform(0, np.sqrt(1 - z * z), 2)
            a1, a2 = rng.uniform(0, 2 * np.pi, 2)
            p = models.bloch_to_density((r1 * np.cos(a1), r1 * np.sin(a1), z))
            q = models.bloch_to_density((r2 * np.cos(a2), r2 * np.sin(a2), z))
            solver = spectral_distance(t, p, q, opts).value
            oracle = spectral_distance_oracle(t, p, q, 2000, seed=trial)
            assert oracle <= solver + opts.tol * max(1.0, solver)

    def test_m2_oracle_close_to_closed_form(self):
        t = models.m2_diagonal_triple(1.0, 3.0)
        p = models.bloch_to_density((0.5, 0, 0))
        q = models.bloch_to_density((0, 0.5, 0))
        val = spectral_distance_oracle(t, p, q, 100000, seed=1)
        assert val == pytest.approx(np.hypot(0.5, 0.5) / 2.0, abs=1e-2)

    def test_infinite_pair_rejected(self):
        t = models.m2_diagonal_triple(1.0, 3.0)
        with pytest.raises(ValidationError):
            spectral_distance_oracle(t, models.bloch_to_density((0, 0, 1)),
                                     models.bloch_to_density((0, 0, -1)), 100)

    def test_degenerate_triple_rejected(self):
        t = make_triple(models.m2_algebra(), np.eye(2))
        s = models.bloch_to_density((0.2, 0, 0))
        with pytest.raises(DegenerateTripleError):
            spectral_distance_oracle(t, s, s, 100)


class TestOptionsAndJson:
    def test_bad_options_rejected(self):
        with pytest.raises(ValidationError):
            SolverOptions(tol=0.0).validate()
        with pytest.raises(ValidationError):
            SolverOptions(restarts=0).validate()

    def test_result_json_schema(self):
        t = models.two_point_triple(2.0)
        res = spectral_distance(t, models.two_point_state(1.0), models.two_point_state(0.0))
        obj = distance_to_json(res)
        assert set(obj) == {"finite", "value", "gap", "iterations", "witness"}
        assert obj["finite"] is True and obj["value"] == pytest.approx(0.5, rel=1e-4)

    def test_infinite_result_json(self):
        obj = distance_to_json(ExtendedDistance(False, np.inf, None, 0.0, 0, True))
        assert obj["finite"] is False and obj["value"] is None and obj["witness"] is None
