"""Catalogue models: constructors and closed-form distances.

Covers the two-point algebra C^2, the qubit algebra M_2(C) with a diagonal
Dirac operator, the ball cost inherited from a truncated Moyal plane, the
Bloch parameterization of qubit states, and the two-sheet cost formula.

Bloch convention.  States are parameterized by points p of the closed unit
ball through s = (I + p.sigma)/2, i.e. the density matrix
[[(1+z)/2, (x-iy)/2], [(x+iy)/2, (1-z)/2]]; pure states are exactly |p| = 1,
and the unit spinor (xi1, xi2) maps to x = 2 Re(conj(xi1) xi2),
y = 2 Im(conj(xi1) xi2), z = |xi1|^2 - |xi2|^2.  Every closed form below is
stated in these coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import ValidationError
from .spectral import ExtendedDistance
from .triple import DensityState, FiniteSpectralTriple, density_state, make_triple

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

BALL_ATOL = 1e-12
PURE_ATOL = 1e-9


# ---------------------------------------------------------------------------
# Triples
# ---------------------------------------------------------------------------

def two_point_triple(m: complex, with_grading: bool = False) -> FiniteSpectralTriple:
    """Two-point space: diagonal algebra C^2 with off-diagonal Dirac."""
    m = complex(m)
    dirac = np.array([[0.0, m], [np.conj(m), 0.0]])
    basis = [np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex)]
    grading = np.diag([1.0, -1.0]).astype(complex) if with_grading else None
    return make_triple(basis, dirac, grading=grading, label=f"two-point(m={m:g})")


def two_point_distance(m: complex) -> float:
    """Closed-form distance between the two pure states: 1/|m| (inf at m=0)."""
    a = abs(complex(m))
    return np.inf if a == 0.0 else 1.0 / a


def two_point_state(lam: float) -> DensityState:
    """Convex combination lam * delta_1 + (1 - lam) * delta_2."""
    if not 0.0 <= lam <= 1.0:
        raise ValidationError("mixture weight must lie in [0, 1]")
    return density_state(np.diag([lam, 1.0 - lam]).astype(complex))


def m2_diagonal_triple(d1: float, d2: float) -> FiniteSpectralTriple:
    """Full matrix algebra M_2(C) acting on C^2 with Dirac diag(d1, d2)."""
    basis = [PAULI_I, PAULI_X, PAULI_Y, PAULI_Z]
    dirac = np.diag([float(d1), float(d2)]).astype(complex)
    return make_triple(basis, dirac, label=f"m2-diagonal({d1:g},{d2:g})")


def m2_algebra() -> list:
    """Hermitian basis of M_2(C): identity plus the three Pauli matrices."""
    return [PAULI_I, PAULI_X, PAULI_Y, PAULI_Z]


# ---------------------------------------------------------------------------
# Bloch geometry
# ---------------------------------------------------------------------------

def bloch_point(p) -> np.ndarray:
    v = np.asarray(p, dtype=float)
    if v.shape != (3,) or not np.all(np.isfinite(v)):
        raise ValidationError("a Bloch point is a finite 3-vector")
    if float(v @ v) > 1.0 + BALL_ATOL:
        raise ValidationError(f"Bloch point lies outside the closed unit ball: |p|^2 = {float(v @ v)!r}")
    return v


def is_pure_bloch(p) -> bool:
    v = bloch_point(p)
    return abs(float(np.linalg.norm(v)) - 1.0) <= PURE_ATOL


def spinor_to_bloch(xi) -> np.ndarray:
    """Bloch point of the pure state defined by a unit spinor (phase invariant)."""
    v = np.asarray(xi, dtype=complex)
    if v.shape != (2,):
        raise ValidationError("a spinor has two complex components")
    nrm = float(np.sum(np.abs(v) ** 2))
    if abs(nrm - 1.0) > BALL_ATOL:
        raise ValidationError(f"spinor norm^2 is {nrm!r}, expected 1")
    cross = np.conj(v[0]) * v[1]
    return np.array([2.0 * cross.real, 2.0 * cross.imag,
                     float(abs(v[0]) ** 2 - abs(v[1]) ** 2)])


def bloch_to_density(p) -> DensityState:
    """[[ (1+z)/2, (x-iy)/2 ], [ (x+iy)/2, (1-z)/2 ]]."""
    x, y, z = bloch_point(p)
    m = np.array([[(1.0 + z) / 2.0, (x - 1j * y) / 2.0],
                  [(x + 1j * y) / 2.0, (1.0 - z) / 2.0]])
    return density_state(m)


def density_to_bloch(state: DensityState) -> np.ndarray:
    """Pauli expectation values (trace against sigma_x, sigma_y, sigma_z)."""
    if state.matrix.shape != (2, 2):
        raise ValidationError("Bloch coordinates need a qubit state")
    m = state.matrix
    return np.array([float(np.trace(m @ PAULI_X).real),
                     float(np.trace(m @ PAULI_Y).real),
                     float(np.trace(m @ PAULI_Z).real)])


@dataclass
class SphereMeasure:
    """Finitely supported probability measure on the pure-state sphere."""

    points: np.ndarray   # (K, 3), all unit norm
    weights: np.ndarray  # (K,), nonnegative, sum 1


def sphere_measure(points, weights) -> SphereMeasure:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != 3:
        raise ValidationError("sphere points must be 3-vectors")
    for p in pts:
        if not is_pure_bloch(p):
            raise ValidationError(f"measure support contains a non-pure point {p}")
    w = np.asarray(weights, dtype=float)
    if w.shape != (len(pts),):
        raise ValidationError("weights length does not match support size")
    if np.any(w < -1e-12) or abs(float(w.sum()) - 1.0) > 1e-10:
        raise ValidationError("weights must be a probability vector")
    return SphereMeasure(points=pts, weights=np.maximum(w, 0.0))


def state_from_measure(measure: SphereMeasure):
    """The density matrix a sphere measure induces, plus its barycenter.

    Distinct measures with one barycenter give one state; that collapse is
    the whole point of quotienting measures to states.
    """
    bary = measure.weights @ measure.points
    return bloch_to_density(bary), bary


def fibonacci_sphere(n: int, shell: int = 0) -> np.ndarray:
    """Deterministic, nearly uniform n-point sphere sample.

    ``shell`` offsets the azimuth so that samples of different shells are
    disjoint; nested refinements are unions of shells.
    """
    if n < 1:
        raise ValidationError("sample size must be positive")
    golden = np.pi * (3.0 - np.sqrt(5.0))
    k = np.arange(n)
    z = 1.0 - (2.0 * k + 1.0) / n
    r = np.sqrt(np.maximum(1.0 - z * z, 0.0))
    azim = k * golden + shell * (0.5 * golden + 0.2)
    return np.column_stack([r * np.cos(azim), r * np.sin(azim), z])


# ---------------------------------------------------------------------------
# Closed-form distances and costs
# ---------------------------------------------------------------------------

def m2_diagonal_distance(d1: float, d2: float, p, q) -> ExtendedDistance:
    """Distance between qubit states for the diagonal Dirac diag(d1, d2).

    Finite exactly on equal-z pairs, where it equals the Euclidean distance
    of the Bloch points divided by |d1 - d2|.  The witness is the optimal
    algebra element in the (I, sx, sy, sz) basis.
    """
    if d1 == d2:
        raise ValidationError("the closed form needs distinct Dirac eigenvalues")
    pv, qv = bloch_point(p), bloch_point(q)
    if abs(pv[2] - qv[2]) > 1e-12:
        return ExtendedDistance(False, np.inf, None, 0.0, 0, True)
    delta = pv - qv
    dxy = float(np.hypot(delta[0], delta[1]))
    gap = abs(float(d1) - float(d2))
    if dxy == 0.0:
        return ExtendedDistance(True, 0.0, np.zeros(4), 0.0, 0, True)
    witness = np.array([0.0, delta[0], delta[1], 0.0]) / (dxy * gap)
    return ExtendedDistance(True, dxy / gap, witness, 0.0, 0, True)


@dataclass
class MoyalCostParams:
    theta: float

    def __post_init__(self):
        if not self.theta > 0:
            raise ValidationError("theta must be positive")


def moyal_ball_cost(p, q, params: MoyalCostParams) -> float:
    """Ball cost sqrt(theta/2) * {cos(a) * d  if a <= pi/4;  d / (2 sin a)  else},
    with d the Euclidean distance and ``a`` the angle between the segment
    [p, q] and the horizontal plane.  The two branches agree at a = pi/4."""
    pv, qv = bloch_point(p), bloch_point(q)
    v = pv - qv
    dec = float(np.linalg.norm(v))
    if dec == 0.0:
        return 0.0
    sin_a = min(abs(v[2]) / dec, 1.0)
    alpha = float(np.arcsin(sin_a))
    prefactor = np.sqrt(params.theta / 2.0)
    if alpha <= np.pi / 4.0:
        return float(prefactor * np.cos(alpha) * dec)
    return float(prefactor * dec / (2.0 * np.sin(alpha)))


def two_sheet_cost(base_distance: float, inv_m: float) -> float:
    """Cross-sheet cost sqrt(base^2 + inv_m^2); nonzero even at base = 0."""
    if base_distance < 0 or inv_m < 0:
        raise ValidationError("distances must be nonnegative")
    return float(np.hypot(base_distance, inv_m))


# ---------------------------------------------------------------------------
# Catalogue detection (lets cost matrices over pure samples use closed forms)
# ---------------------------------------------------------------------------

def is_two_point_triple(t: FiniteSpectralTriple) -> bool:
    if t.hilbert_dim != 2 or t.basis_size != 2:
        return False
    offdiag = max(float(np.max(np.abs(b - np.diag(np.diag(b))))) for b in t.algebra_basis)
    span_ok = abs(np.linalg.det(np.column_stack(
        [np.diag(b).real for b in t.algebra_basis]))) > 1e-12
    d = t.dirac
    return offdiag <= 1e-12 and span_ok and abs(d[0, 0]) <= 1e-12 and abs(d[1, 1]) <= 1e-12


def is_m2_diagonal_triple(t: FiniteSpectralTriple) -> bool:
    if t.hilbert_dim != 2 or t.basis_size != 4:
        return False
    if abs(t.dirac[0, 1]) > 1e-12 or abs(t.dirac[0, 0] - t.dirac[1, 1]) <= 1e-12:
        return False
    gram = np.array([[linalg.hs_inner(a, b).real for b in t.algebra_basis]
                     for a in t.algebra_basis])
    return np.linalg.matrix_rank(gram, tol=1e-10) == 4


def catalogue_pure_distance(t: FiniteSpectralTriple, a: DensityState, b: DensityState):
    """Closed-form pure-state distance when the triple is a catalogue model,
    else None."""
    if is_two_point_triple(t):
        m = t.dirac[0, 1]
        if float(np.max(np.abs(a.matrix - b.matrix))) <= 1e-14:
            return 0.0
        return two_point_distance(m)
    if is_m2_diagonal_triple(t):
        res = m2_diagonal_distance(t.dirac[0, 0].real, t.dirac[1, 1].real,
                                   density_to_bloch(a), density_to_bloch(b))
        return res.value if res.finite else np.inf
    return None


# ---------------------------------------------------------------------------
# State loading (resolves both {"matrix": ...} and {"bloch": [x, y, z]})
# ---------------------------------------------------------------------------

def load_state(obj) -> DensityState:
    from .triple import state_from_json
    if "bloch" in obj:
        return bloch_to_density(obj["bloch"])
    return state_from_json(obj)
