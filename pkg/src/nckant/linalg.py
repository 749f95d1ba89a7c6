"""Dense complex linear algebra for small matrices (dimension <= ~64).

All operations work on plain numpy arrays of ``complex`` dtype.  Hermitian
inputs are validated against a 1e-9 symmetry tolerance and then symmetrized
to (H + H')/2, so matrices that round-tripped through decimal JSON are
accepted without fuss.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError

# Tolerance on ||M - M'||_max for an input to count as Hermitian.
HERMITICITY_ATOL = 1e-9


def as_matrix(m) -> np.ndarray:
    """Coerce to a 2-d complex array and reject non-finite entries."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValidationError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValidationError("matrix contains NaN or infinite entries")
    return a


def hermiticity_residual(m) -> float:
    """Max-abs deviation of M from its conjugate transpose."""
    a = np.asarray(m, dtype=complex)
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


def require_hermitian(m, tol: float = HERMITICITY_ATOL) -> np.ndarray:
    """Validate hermiticity within ``tol`` and return the symmetrized matrix."""
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise ValidationError(f"Hermitian matrix must be square, got {a.shape}")
    res = hermiticity_residual(a)
    if res > tol:
        raise ValidationError(f"matrix is not Hermitian: residual {res:.3e} > {tol:.1e}")
    return (a + a.conj().T) / 2.0


def eigh(h, tol: float = HERMITICITY_ATOL):
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues, eigenvectors) with eigenvalues ascending and the
    eigenvectors as columns of a unitary matrix, so that
    H = V diag(w) V'.
    """
    a = require_hermitian(h, tol)
    w, v = np.linalg.eigh(a)
    return w, v


def operator_norm(m) -> float:
    """Largest singular value; for Hermitian input, the largest |eigenvalue|."""
    a = as_matrix(m)
    if a.size == 0:
        return 0.0
    if a.shape[0] == a.shape[1] and hermiticity_residual(a) <= HERMITICITY_ATOL:
        return float(np.max(np.abs(np.linalg.eigvalsh((a + a.conj().T) / 2.0))))
    return float(np.linalg.norm(a, 2))


def commutator(a, b) -> np.ndarray:
    """AB - BA for square matrices of matching dimension."""
    x = as_matrix(a)
    y = as_matrix(b)
    if x.shape != y.shape or x.shape[0] != x.shape[1]:
        raise ValidationError(f"commutator needs equal square shapes, got {x.shape} and {y.shape}")
    return x @ y - y @ x


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product trace(A' B)."""
    x = as_matrix(a)
    y = as_matrix(b)
    if x.shape != y.shape:
        raise ValidationError(f"shape mismatch {x.shape} vs {y.shape}")
    return complex(np.trace(x.conj().T @ y))


def hs_norm(a) -> float:
    return float(np.linalg.norm(np.asarray(a, dtype=complex)))


def trace_norm(h) -> float:
    """Sum of |eigenvalues| of a Hermitian matrix."""
    if h.shape == (2, 2):
        return _trace_norm_2x2(h)
    return float(np.sum(np.abs(np.linalg.eigvalsh(h))))


def project_spectral_ball(h) -> np.ndarray:
    """Project a Hermitian matrix onto {||.||_op <= 1} by clamping eigenvalues."""
    if h.shape == (2, 2):
        return _project_2x2(h)
    w, v = np.linalg.eigh(h)
    w = np.clip(w, -1.0, 1.0)
    return (v * w) @ v.conj().T


def _eig_2x2(h):
    # closed form: mean +/- radius
    mid = 0.5 * (h[0, 0].real + h[1, 1].real)
    rad = np.hypot(0.5 * (h[0, 0].real - h[1, 1].real), abs(h[0, 1]))
    return mid, rad


def _trace_norm_2x2(h) -> float:
    mid, rad = _eig_2x2(h)
    return abs(mid - rad) + abs(mid + rad)


def _project_2x2(h) -> np.ndarray:
    mid, rad = _eig_2x2(h)
    lo = min(max(mid - rad, -1.0), 1.0)
    hi = min(max(mid + rad, -1.0), 1.0)
    if rad < 1e-300:
        return np.array([[hi, 0.0], [0.0, hi]], dtype=complex)
    c = 0.5 * (lo + hi)
    s = 0.5 * (hi - lo) / rad
    out = np.empty((2, 2), dtype=complex)
    out[0, 0] = c + s * (h[0, 0].real - mid)
    out[1, 1] = c + s * (h[1, 1].real - mid)
    out[0, 1] = s * h[0, 1]
    out[1, 0] = s * h[1, 0]
    return out


# ---------------------------------------------------------------------------
# Real isometric vectorization of Hermitian matrices.  The map preserves the
# Hilbert-Schmidt inner product, which keeps kernel thresholds meaningful.
# ---------------------------------------------------------------------------

def herm_vec(h) -> np.ndarray:
    """Isometric embedding of an n x n Hermitian matrix into R^(n^2)."""
    n = h.shape[0]
    iu = np.triu_indices(n, 1)
    return np.concatenate([
        np.real(np.diag(h)),
        np.sqrt(2.0) * np.real(h[iu]),
        np.sqrt(2.0) * np.imag(h[iu]),
    ])


def herm_unvec(v, n: int) -> np.ndarray:
    """Inverse of :func:`herm_vec`."""
    iu = np.triu_indices(n, 1)
    m = n * (n - 1) // 2
    h = np.zeros((n, n), dtype=complex)
    h[np.diag_indices(n)] = v[:n]
    upper = (v[n:n + m] + 1j * v[n + m:]) / np.sqrt(2.0)
    h[iu] = upper
    h[(iu[1], iu[0])] = np.conj(upper)
    return h


def herm_unvec_batch(vs, n: int) -> np.ndarray:
    """Vectorized :func:`herm_unvec` for an (N, n^2) array of coordinates."""
    vs = np.asarray(vs, dtype=float)
    iu = np.triu_indices(n, 1)
    m = n * (n - 1) // 2
    out = np.zeros((vs.shape[0], n, n), dtype=complex)
    out[:, np.arange(n), np.arange(n)] = vs[:, :n]
    upper = (vs[:, n:n + m] + 1j * vs[:, n + m:]) / np.sqrt(2.0)
    out[:, iu[0], iu[1]] = upper
    out[:, iu[1], iu[0]] = np.conj(upper)
    return out


# ---------------------------------------------------------------------------
# JSON encoding shared by every module:
#   {"rows": n, "cols": m, "data": [[re, im], ...]}   (row-major)
# ---------------------------------------------------------------------------

def matrix_to_json(m) -> dict:
    a = as_matrix(m)
    data = [[float(x.real), float(x.imag)] for x in a.ravel(order="C")]
    return {"rows": int(a.shape[0]), "cols": int(a.shape[1]), "data": data}


def matrix_from_json(obj) -> np.ndarray:
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed matrix JSON: {exc}") from exc
    if len(data) != rows * cols:
        raise ValidationError(f"matrix JSON has {len(data)} entries, expected {rows * cols}")
    flat = np.array([complex(re, im) for re, im in data])
    return as_matrix(flat.reshape(rows, cols))
