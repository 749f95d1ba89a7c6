"""Spectral distance between density states of a finite spectral triple.

The distance is the supremum of trace(Delta * pi(a)) over self-adjoint
algebra elements with ||[D, pi(a)]|| <= 1, where Delta = rho - sigma.
Finiteness is decided exactly by pairing Delta against the commutant kernel.
The finite sector is solved by a primal-dual proximal iteration whose only
nontrivial step is the projection of a Hermitian matrix onto the operator
norm unit ball (eigenvalue clamping).  Termination is certified: a feasible
witness provides a lower bound, and every candidate Y with A*(Y) = g gives
the upper bound ||Y||_tr via the dual program, so the reported gap is honest.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DegenerateTripleError, ValidationError
from .triple import DensityState, FiniteSpectralTriple, TripleFrame, build_frame

# A state difference whose projection on the commutant kernel exceeds this
# pairs nontrivially with a conserved direction: the distance is infinite.
KERNEL_PAIRING_TOL = 1e-8


@dataclass
class SolverOptions:
    tol: float = 1e-4          # relative certified-gap tolerance
    max_iter: int = 50000      # total iteration budget across restarts
    restarts: int = 8
    seed: int = 0

    def validate(self) -> "SolverOptions":
        if self.tol <= 0:
            raise ValidationError("tol must be positive")
        if self.restarts < 1:
            raise ValidationError("restarts must be >= 1")
        if self.max_iter < 1:
            raise ValidationError("max_iter must be >= 1")
        return self


@dataclass
class ExtendedDistance:
    """Distance value with certificate data.

    ``value`` is the best certified lower bound (the witness evaluation);
    ``gap_estimate`` bounds the distance to the true supremum from above.
    ``witness`` holds coefficients over the triple's algebra basis.
    """

    finite: bool
    value: float
    witness: np.ndarray | None
    gap_estimate: float
    iterations: int
    converged: bool


def distance_to_json(result: ExtendedDistance) -> dict:
    return {
        "finite": bool(result.finite),
        "value": float(result.value) if result.finite else None,
        "gap": float(result.gap_estimate),
        "iterations": int(result.iterations),
        "witness": [float(x) for x in result.witness] if result.witness is not None else None,
    }


def _state_pairing(frame: TripleFrame, delta: np.ndarray) -> np.ndarray:
    """g_i = trace(Delta * onb_i), the objective in orthonormal coordinates."""
    return np.real(np.einsum("ab,iba->i", delta, frame.onb))


def spectral_distance(t: FiniteSpectralTriple, rho: DensityState, sigma: DensityState,
                      opts: SolverOptions | None = None) -> ExtendedDistance:
    """sup { trace((rho-sigma) pi(a)) : ||[D, pi(a)]|| <= 1 }, possibly infinite."""
    opts = (opts or SolverOptions()).validate()
    if rho.matrix.shape != (t.hilbert_dim, t.hilbert_dim) or sigma.matrix.shape != rho.matrix.shape:
        raise ValidationError("state dimensions do not match the triple")

    delta = rho.matrix - sigma.matrix
    if float(np.max(np.abs(delta))) <= 1e-14:
        return ExtendedDistance(True, 0.0, np.zeros(t.basis_size), 0.0, 0, True)

    frame = build_frame(t)
    g = _state_pairing(frame, delta)

    if frame.kernel.shape[1]:
        pairing = frame.kernel.T @ g
        if float(np.max(np.abs(pairing))) > KERNEL_PAIRING_TOL:
            return ExtendedDistance(False, np.inf, None, 0.0, 0, True)

    comp = frame.complement
    gr = comp.T @ g
    if comp.shape[1] == 0 or float(np.linalg.norm(gr)) <= 1e-14:
        return ExtendedDistance(True, 0.0, np.zeros(t.basis_size), 0.0, 0, True)

    mr = frame.comm_matrix @ comp
    n = t.hilbert_dim
    rng = np.random.default_rng(opts.seed)

    best_l, best_u = -np.inf, np.inf
    best_c = None
    total_iters = 0
    budget = opts.max_iter
    for restart in range(opts.restarts):
        l, u, c, iters = _pdhg(mr, gr, n, opts.tol, budget, rng, randomize=restart > 0)
        total_iters += iters
        budget -= iters
        if l > best_l:
            best_l, best_c = l, c
        best_u = min(best_u, u)
        if best_u - best_l <= opts.tol * max(1.0, abs(best_u)) or budget <= 0:
            break

    gap = max(best_u - best_l, 0.0)
    converged = gap <= opts.tol * max(1.0, abs(best_u))
    witness = frame.back @ (comp @ best_c)
    return ExtendedDistance(True, float(best_l), witness, float(gap), total_iters, converged)


def _pdhg(mr: np.ndarray, gr: np.ndarray, n: int, tol: float, max_iter: int,
          rng: np.random.Generator, randomize: bool = False, check_every: int = 10):
    """One primal-dual run.  Returns (lower, upper, best primal coeffs, iters)."""
    lop = float(np.linalg.norm(mr, 2))
    tau = sigma = 0.99 / lop
    mtm = mr.T @ mr
    mtm_chol = np.linalg.cholesky(mtm)

    if randomize:
        c = rng.standard_normal(mr.shape[1])
        y = 0.1 * linalg.herm_vec(_random_hermitian(rng, n))
    else:
        c = gr.copy()
        y = np.zeros(n * n)
    nrm = _feasibility_norm(mr, c, n)
    c = c / max(nrm, 1e-30)
    cbar = c.copy()

    best_l, best_u, best_c = -np.inf, np.inf, c.copy()
    it = 0
    while it < max_iter:
        it += 1
        v = y + sigma * (mr @ cbar)
        proj = linalg.project_spectral_ball(linalg.herm_unvec(v / sigma, n))
        y = v - sigma * linalg.herm_vec(proj)
        c_new = c + tau * (gr - mr.T @ y)
        cbar = 2.0 * c_new - c
        c = c_new
        if it % check_every == 0 or it == max_iter:
            nrm = _feasibility_norm(mr, c, n)
            scale = max(1.0, nrm)
            sign = 1.0 if gr @ c >= 0 else -1.0
            l = abs(gr @ c) / scale
            if l > best_l:
                best_l, best_c = l, sign * c / scale
            resid = gr - mr.T @ y
            z = np.linalg.solve(mtm_chol.T, np.linalg.solve(mtm_chol, resid))
            u = linalg.trace_norm(linalg.herm_unvec(y + mr @ z, n))
            best_u = min(best_u, u)
            if best_u - best_l <= tol * max(1.0, abs(best_u)):
                break
    return best_l, best_u, best_c, it


def _feasibility_norm(mr, c, n) -> float:
    h = linalg.herm_unvec(mr @ c, n)
    if n == 2:
        mid, rad = linalg._eig_2x2(h)
        return abs(mid) + rad
    return float(np.max(np.abs(np.linalg.eigvalsh(h))))


def _random_hermitian(rng, n) -> np.ndarray:
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (a + a.conj().T) / 2.0


def spectral_distance_oracle(t: FiniteSpectralTriple, rho: DensityState, sigma: DensityState,
                             directions: int, seed: int = 0) -> float:
    """Lower-bound oracle: best ratio trace(Delta pi(u)) / ||[D, pi(u)]|| over
    random unit directions with the kernel component removed.  Independent of
    the iterative solver; every returned value is a valid lower bound."""
    frame = build_frame(t)
    delta = rho.matrix - sigma.matrix
    g = _state_pairing(frame, delta)
    if frame.kernel.shape[1] and float(np.max(np.abs(frame.kernel.T @ g))) > KERNEL_PAIRING_TOL:
        raise ValidationError("state difference pairs with the commutant kernel; distance is infinite")
    comp = frame.complement
    if comp.shape[1] == 0:
        raise DegenerateTripleError("every algebra direction commutes with the Dirac operator")

    rng = np.random.default_rng(seed)
    dirs = rng.standard_normal((int(directions), comp.shape[1]))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    gr = comp.T @ g
    vals = np.abs(dirs @ gr)

    mr = frame.comm_matrix @ comp
    vecs = dirs @ mr.T
    n = t.hilbert_dim
    if n == 2:
        mid = 0.5 * (vecs[:, 0] + vecs[:, 1])
        rad = np.sqrt(0.25 * (vecs[:, 0] - vecs[:, 1]) ** 2
                      + 0.5 * (vecs[:, 2] ** 2 + vecs[:, 3] ** 2))
        norms = np.abs(mid) + rad
    else:
        batch = linalg.herm_unvec_batch(vecs, n)
        norms = np.max(np.abs(np.linalg.eigvalsh(batch)), axis=1)

    ok = norms > 1e-12 * max(float(np.max(norms)), 1.0)
    if not np.any(ok):
        raise DegenerateTripleError("all sampled directions have zero commutator norm")
    return float(np.max(vals[ok] / norms[ok]))
