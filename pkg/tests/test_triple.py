import numpy as np
import pytest

from nckant import models
from nckant.errors import ValidationError
from nckant.linalg import hs_inner, operator_norm, commutator
from nckant.triple import (FiniteSpectralTriple, commutant_kernel, commutator_norm,
                           density_state, in_lipschitz_ball, make_triple,
                           product_triple, represent, state_evaluate,
                           state_from_json, state_to_json, triple_from_json,
                           triple_to_json, validate_triple)


@pytest.fixture
def two_point():
    return models.two_point_triple(2.0)


@pytest.fixture
def m2():
    return models.m2_diagonal_triple(1.0, 3.0)


class TestValidation:
    def test_two_point_passes(self):
        report = validate_triple(models.two_point_triple(1.0))
        assert report.passed

    def test_grading_checks_pass(self):
        report = validate_triple(models.two_point_triple(1.0, with_grading=True))
        assert report.passed
        names = [c.name for c in report.checks]
        assert "grading_anticommutes_dirac" in names

    def test_non_hermitian_dirac_flagged(self):
        basis = [np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex)]
        bad = FiniteSpectralTriple(2, basis, np.array([[0, 1e-3], [0, 0]], dtype=complex))
        report = validate_triple(bad)
        failed = {c.name for c in report.checks if not c.passed}
        assert "dirac_hermitian" in failed

    def test_dependent_basis_rejected(self):
        basis = [np.eye(2, dtype=complex), 2.0 * np.eye(2, dtype=complex)]
        with pytest.raises(ValidationError):
            make_triple(basis, np.eye(2))


class TestCommutatorNorm:
    def test_two_point_example(self, two_point):
        # ||[D, a]|| = |m (z1 - z2)| with m = 2
        assert commutator_norm(two_point, [1.0, 0.0]) == pytest.approx(2.0)

    def test_identity_commutes(self, two_point):
        assert commutator_norm(two_point, [1.0, 1.0]) <= 1e-14

    def test_m2_pauli_x(self, m2):
        # oracle: 2x2 eigencomputation of i [diag(1,3), sigma_x]
        mat = 1j * commutator(m2.dirac, models.PAULI_X)
        assert commutator_norm(m2, [0, 1, 0, 0]) == pytest.approx(
            np.max(np.abs(np.linalg.eigvalsh(mat)))) == pytest.approx(2.0)

    def test_homogeneity(self, m2):
        rng = np.random.default_rng(0)
        c = rng.standard_normal(4)
        base = commutator_norm(m2, c)
        for lam in (-2.5, 0.25, 7.0):
            assert commutator_norm(m2, lam * c) == pytest.approx(abs(lam) * base, rel=1e-12)

    def test_wrong_length_rejected(self, m2):
        with pytest.raises(ValidationError):
            commutator_norm(m2, [1.0, 2.0])


class TestCommutantKernel:
    def test_two_point_kernel_is_identity_direction(self, two_point):
        kern = commutant_kernel(two_point)
        assert kern.dim == 1
        # the only conserved direction is the identity (1, 1)/sqrt(2)
        v = kern.elements[0]
        assert abs(abs(v[0]) - abs(v[1])) <= 1e-12
        assert commutator_norm(two_point, v) <= 1e-8

    def test_m2_distinct_diagonal(self, m2):
        kern = commutant_kernel(m2)
        assert kern.dim == 2
        for v in kern.elements:
            assert commutator_norm(m2, v) <= 1e-8

    def test_scalar_dirac_kernel_is_everything(self):
        t = make_triple(models.m2_algebra(), np.eye(2))
        assert commutant_kernel(t).dim == 4

    def test_kernel_elements_hs_orthonormal(self, m2):
        kern = commutant_kernel(m2)
        mats = [represent(m2, v) for v in kern.elements]
        for i, a in enumerate(mats):
            for j, b in enumerate(mats):
                assert hs_inner(a, b).real == pytest.approx(1.0 if i == j else 0.0, abs=1e-10)

    def test_kernel_shift_leaves_norm_unchanged(self, m2):
        rng = np.random.default_rng(1)
        kern = commutant_kernel(m2)
        c = rng.standard_normal(4)
        base = commutator_norm(m2, c)
        for v in kern.elements:
            assert commutator_norm(m2, c + 3.7 * v) == pytest.approx(base, abs=1e-8)


class TestLipschitzBall:
    def test_norm_exactly_one_is_inside(self):
        t = models.two_point_triple(1.0)
        assert in_lipschitz_ball(t, [1.0, 0.0], tol=0.0)

    def test_norm_two_is_outside(self):
        t = models.two_point_triple(1.0)
        assert not in_lipschitz_ball(t, [2.0, 0.0], tol=1e-9)

    def test_zero_element_inside(self, m2):
        assert in_lipschitz_ball(m2, np.zeros(4))

    def test_negative_tol_rejected(self, m2):
        with pytest.raises(ValidationError):
            in_lipschitz_ball(m2, np.zeros(4), tol=-1e-3)


class TestProductTriple:
    def test_structure(self):
        base = models.two_point_triple(1.0, with_grading=True)
        fiber = models.two_point_triple(0.7)
        prod = product_triple(base, fiber)
        assert prod.hilbert_dim == 4
        assert prod.basis_size == 4
        assert validate_triple(prod).passed
        expected = np.kron(base.dirac, np.eye(2)) + np.kron(base.grading, fiber.dirac)
        assert np.max(np.abs(prod.dirac - expected)) <= 1e-12

    def test_lifted_element_keeps_commutator_norm(self):
        base = models.two_point_triple(1.3, with_grading=True)
        fiber = models.two_point_triple(0.4)
        prod = product_triple(base, fiber)
        rng = np.random.default_rng(2)
        for _ in range(5):
            c = rng.standard_normal(2)
            # a (x) I with I = f0 + f1 in the fiber basis
            lifted = np.array([c[0], c[0], c[1], c[1]])
            assert commutator_norm(prod, lifted) == pytest.approx(
                commutator_norm(base, c), abs=1e-10)

    def test_base_without_grading_rejected(self):
        with pytest.raises(ValidationError):
            product_triple(models.two_point_triple(1.0), models.two_point_triple(1.0))


class TestStateEvaluate:
    def test_delta_one(self, two_point):
        s = density_state(np.diag([1.0, 0.0]))
        assert state_evaluate(s, two_point, [5.0, 7.0]) == pytest.approx(5.0)

    def test_bloch_south_pole(self, two_point):
        s = models.bloch_to_density((0, 0, -1))
        assert state_evaluate(s, two_point, [5.0, 7.0]) == pytest.approx(7.0)

    def test_maximally_mixed_traceless(self, m2):
        s = density_state(np.eye(2) / 2)
        assert state_evaluate(s, m2, [0.0, 0.3, -0.2, 0.9]) == pytest.approx(0.0, abs=1e-14)

    def test_linearity(self, m2):
        rng = np.random.default_rng(3)
        s = models.bloch_to_density((0.2, -0.4, 0.1))
        a, b = rng.standard_normal(4), rng.standard_normal(4)
        lhs = state_evaluate(s, m2, 2.0 * a - 0.5 * b)
        rhs = 2.0 * state_evaluate(s, m2, a) - 0.5 * state_evaluate(s, m2, b)
        assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_dimension_mismatch(self, m2):
        s = density_state(np.eye(4) / 4)
        with pytest.raises(ValidationError):
            state_evaluate(s, m2, np.zeros(4))


class TestDensityState:
    def test_purity_flag(self):
        assert density_state(np.diag([1.0, 0.0])).pure
        assert not density_state(np.eye(2) / 2).pure

    def test_trace_enforced(self):
        with pytest.raises(ValidationError):
            density_state(np.diag([0.9, 0.0]))

    def test_positivity_enforced(self):
        with pytest.raises(ValidationError):
            density_state(np.diag([1.5, -0.5]))


class TestJson:
    def test_triple_round_trip(self):
        t = models.two_point_triple(1 + 2j, with_grading=True)
        back = triple_from_json(triple_to_json(t))
        assert back.label == t.label
        assert np.array_equal(back.dirac, t.dirac)
        assert np.array_equal(back.grading, t.grading)
        for a, b in zip(back.algebra_basis, t.algebra_basis):
            assert np.array_equal(a, b)

    def test_state_round_trip(self):
        s = models.bloch_to_density((0.3, 0.2, -0.4))
        back = state_from_json(state_to_json(s))
        assert np.array_equal(back.matrix, s.matrix)

    def test_grading_none_round_trip(self):
        t = models.m2_diagonal_triple(1.0, 3.0)
        obj = triple_to_json(t)
        assert obj["grading"] is None
        assert triple_from_json(obj).grading is None
