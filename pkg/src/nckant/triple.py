"""Finite spectral triples, density states, and the commutator map a -> [D, a].

A triple bundles a basis of the self-adjoint part of a represented matrix
algebra, a Hermitian Dirac operator, and an optional grading.  Elements are
real coefficient vectors over the basis.  The kernel of the commutator map
(the commutant) is computed once per triple by singular value decomposition;
a state difference that pairs nontrivially with the kernel is what makes a
distance infinite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import ValidationError

# Relative singular-value threshold below which a direction counts as kernel.
KERNEL_SV_RTOL = 1e-9
GRADING_ATOL = 1e-10


@dataclass
class FiniteSpectralTriple:
    """Algebra basis + Dirac operator (+ optional grading) on C^n."""

    hilbert_dim: int
    algebra_basis: list
    dirac: np.ndarray
    grading: np.ndarray | None = None
    label: str = ""

    @property
    def basis_size(self) -> int:
        return len(self.algebra_basis)


def make_triple(algebra_basis, dirac, grading=None, label: str = "") -> FiniteSpectralTriple:
    """Build a triple from raw matrices, validating and symmetrizing inputs."""
    basis = [linalg.require_hermitian(b) for b in algebra_basis]
    if not basis:
        raise ValidationError("algebra basis must contain at least one element")
    n = basis[0].shape[0]
    for b in basis:
        if b.shape != (n, n):
            raise ValidationError("algebra basis elements must share one dimension")
    d = linalg.require_hermitian(dirac)
    if d.shape != (n, n):
        raise ValidationError(f"Dirac operator shape {d.shape} does not match basis dimension {n}")
    g = None
    if grading is not None:
        g = linalg.require_hermitian(grading)
        if g.shape != (n, n):
            raise ValidationError("grading dimension mismatch")
    t = FiniteSpectralTriple(hilbert_dim=n, algebra_basis=basis, dirac=d, grading=g, label=label)
    report = validate_triple(t)
    if not report.passed:
        raise ValidationError("invalid triple: " + "; ".join(report.failures()))
    return t


@dataclass
class TripleCheck:
    name: str
    passed: bool
    residual: float


@dataclass
class ValidationReport:
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list:
        return [f"{c.name} (residual {c.residual:.3e})" for c in self.checks if not c.passed]


def validate_triple(t: FiniteSpectralTriple) -> ValidationReport:
    """Check every type invariant; failures are reported, not raised."""
    checks = []
    n = t.hilbert_dim

    res = max(linalg.hermiticity_residual(b) for b in t.algebra_basis)
    checks.append(TripleCheck("basis_hermitian", res <= linalg.HERMITICITY_ATOL, res))

    gram = np.array([[linalg.hs_inner(a, b).real for b in t.algebra_basis]
                     for a in t.algebra_basis])
    ev = np.linalg.eigvalsh(gram)
    indep = float(ev[0]) > 1e-10 * max(float(ev[-1]), 1.0)
    checks.append(TripleCheck("basis_independent", indep, float(ev[0])))

    res = linalg.hermiticity_residual(t.dirac)
    checks.append(TripleCheck("dirac_hermitian", res <= linalg.HERMITICITY_ATOL, res))

    if t.grading is not None:
        g = t.grading
        res = float(np.max(np.abs(g @ g - np.eye(n))))
        checks.append(TripleCheck("grading_squares_to_identity", res <= GRADING_ATOL, res))
        res = float(np.max(np.abs(g @ t.dirac + t.dirac @ g)))
        checks.append(TripleCheck("grading_anticommutes_dirac", res <= GRADING_ATOL, res))
        res = max(float(np.max(np.abs(linalg.commutator(g, b)))) for b in t.algebra_basis)
        checks.append(TripleCheck("grading_commutes_algebra", res <= GRADING_ATOL, res))

    return ValidationReport(checks)


# ---------------------------------------------------------------------------
# Density states
# ---------------------------------------------------------------------------

STATE_TRACE_ATOL = 1e-10
STATE_EIG_ATOL = 1e-10
PURITY_ATOL = 1e-9


@dataclass
class DensityState:
    """Trace-one positive Hermitian matrix; ``pure`` means trace(rho^2) = 1."""

    matrix: np.ndarray
    purity: float = field(default=0.0)
    pure: bool = field(default=False)


def density_state(matrix) -> DensityState:
    m = linalg.require_hermitian(matrix)
    tr = float(np.trace(m).real)
    if abs(tr - 1.0) > STATE_TRACE_ATOL:
        raise ValidationError(f"density matrix trace {tr!r} != 1")
    ev = np.linalg.eigvalsh(m)
    if ev[0] < -STATE_EIG_ATOL:
        raise ValidationError(f"density matrix has negative eigenvalue {ev[0]:.3e}")
    purity = float(np.trace(m @ m).real)
    return DensityState(matrix=m, purity=purity, pure=purity >= 1.0 - PURITY_ATOL)


# ---------------------------------------------------------------------------
# Elements and the commutator map
# ---------------------------------------------------------------------------

def represent(t: FiniteSpectralTriple, coeffs) -> np.ndarray:
    """pi(a) = sum_i c_i b_i for a real coefficient vector c."""
    c = np.asarray(coeffs, dtype=float)
    if c.shape != (t.basis_size,):
        raise ValidationError(f"expected {t.basis_size} coefficients, got shape {c.shape}")
    if not np.all(np.isfinite(c)):
        raise ValidationError("coefficients contain NaN or infinity")
    out = np.zeros((t.hilbert_dim, t.hilbert_dim), dtype=complex)
    for ci, bi in zip(c, t.algebra_basis):
        out += ci * bi
    return out


def commutator_norm(t: FiniteSpectralTriple, coeffs) -> float:
    """Operator norm of [D, pi(a)]."""
    a = represent(t, coeffs)
    return linalg.operator_norm(linalg.commutator(t.dirac, a))


def in_lipschitz_ball(t: FiniteSpectralTriple, coeffs, tol: float = 0.0) -> bool:
    """True iff ||[D, pi(a)]|| <= 1 + tol."""
    if tol < 0:
        raise ValidationError("tolerance must be nonnegative")
    return commutator_norm(t, coeffs) <= 1.0 + tol


@dataclass
class TripleFrame:
    """Orthonormalized working frame for a triple (solver plumbing).

    ``onb`` stacks a Hilbert-Schmidt-orthonormal basis of the algebra;
    ``back`` maps orthonormal coordinates to coefficients over the original
    basis; ``comm_matrix`` is the real matricization of c -> i[D, pi(c)].
    """

    onb: np.ndarray           # (k, n, n)
    back: np.ndarray          # (k, k)
    comm_matrix: np.ndarray   # (n^2, k)
    singular_values: np.ndarray
    kernel: np.ndarray        # (k, k0), orthonormal columns
    complement: np.ndarray    # (k, k')


def build_frame(t: FiniteSpectralTriple) -> TripleFrame:
    basis = np.stack(t.algebra_basis)
    k = basis.shape[0]
    gram = np.real(np.einsum("iab,jab->ij", basis.conj(), basis))
    chol = np.linalg.cholesky(gram)
    inv = np.linalg.inv(chol)
    onb = np.einsum("ji,iab->jab", inv, basis)
    comm = 1j * (t.dirac[None] @ onb - onb @ t.dirac[None])
    m = np.column_stack([linalg.herm_vec(h) for h in comm])
    _, s, vt = np.linalg.svd(m, full_matrices=True)
    s = np.concatenate([s, np.zeros(k - len(s))])
    thresh = KERNEL_SV_RTOL * max(float(s[0]) if len(s) else 0.0, 1.0)
    mask = s < thresh
    return TripleFrame(
        onb=onb,
        back=inv.T,
        comm_matrix=m,
        singular_values=s,
        kernel=vt[mask].T,
        complement=vt[~mask].T,
    )


@dataclass
class CommutantBasis:
    """Orthonormal basis of {a in algebra : [D, pi(a)] = 0}, as coefficient
    vectors over the triple's original basis."""

    elements: list
    singular_values: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.elements)


def commutant_kernel(t: FiniteSpectralTriple) -> CommutantBasis:
    frame = build_frame(t)
    elements = [frame.back @ frame.kernel[:, j] for j in range(frame.kernel.shape[1])]
    return CommutantBasis(elements=elements, singular_values=frame.singular_values)


def product_triple(base: FiniteSpectralTriple, fiber: FiniteSpectralTriple) -> FiniteSpectralTriple:
    """Product construction: D' = D_base (x) I + grading (x) D_fiber."""
    if base.grading is None:
        raise ValidationError("product construction needs a grading on the base triple")
    nb, nf = base.hilbert_dim, fiber.hilbert_dim
    basis = [np.kron(bb, bf) for bb in base.algebra_basis for bf in fiber.algebra_basis]
    dirac = np.kron(base.dirac, np.eye(nf)) + np.kron(base.grading, fiber.dirac)
    label = f"{base.label}*{fiber.label}"
    return make_triple(basis, dirac, grading=None, label=label)


def state_evaluate(state: DensityState, t: FiniteSpectralTriple, coeffs) -> float:
    """phi(a) = trace(s pi(a)); the result is real for Hermitian inputs."""
    if state.matrix.shape[0] != t.hilbert_dim:
        raise ValidationError("state dimension does not match the triple")
    val = complex(np.trace(state.matrix @ represent(t, coeffs)))
    return float(val.real)


# ---------------------------------------------------------------------------
# JSON encoding
#   triple: {"label", "hilbert_dim", "algebra_basis": [...], "dirac", "grading"}
#   state:  {"matrix": {...}}
# ---------------------------------------------------------------------------

def triple_to_json(t: FiniteSpectralTriple) -> dict:
    return {
        "label": t.label,
        "hilbert_dim": t.hilbert_dim,
        "algebra_basis": [linalg.matrix_to_json(b) for b in t.algebra_basis],
        "dirac": linalg.matrix_to_json(t.dirac),
        "grading": linalg.matrix_to_json(t.grading) if t.grading is not None else None,
    }


def triple_from_json(obj) -> FiniteSpectralTriple:
    try:
        basis = [linalg.matrix_from_json(b) for b in obj["algebra_basis"]]
        dirac = linalg.matrix_from_json(obj["dirac"])
        grading = obj.get("grading")
        label = obj.get("label", "")
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed triple JSON: {exc}") from exc
    g = linalg.matrix_from_json(grading) if grading is not None else None
    return make_triple(basis, dirac, grading=g, label=label)


def state_to_json(state: DensityState) -> dict:
    return {"matrix": linalg.matrix_to_json(state.matrix)}


def state_from_json(obj) -> DensityState:
    if "matrix" not in obj:
        raise ValidationError("state JSON must contain a 'matrix' entry")
    return density_state(linalg.matrix_from_json(obj["matrix"]))
