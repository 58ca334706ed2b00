# ============================================================
# 🔍 Brute-force oracles
# Searches over the unitary orbit, independent of the closed
# forms they check.
# ============================================================

from itertools import combinations
from typing import NamedTuple

import numpy as np
from scipy import linalg as sla

from ..algebra.blocks import PositiveForm, check_same_algebra
from ..kernel import linalg as la
from ..kernel.linalg import DEFAULT_POLICY, TolerancePolicy
from ..standard.overlap import OverlapForm


class AlignmentResult(NamedTuple):
    value: float
    unitary: np.ndarray
    sweeps: int


def _procrustes_2x2(Y: np.ndarray) -> np.ndarray:
    """The unitary g maximizing Re tr(Y g) for a 1×1 or 2×2 block."""
    U, _, Vh = np.linalg.svd(Y)
    return la.dagger(Vh) @ la.dagger(U)


def _jacobi_sweeps(M: np.ndarray, W: np.ndarray, pairs: list[list[int]], max_sweeps: int,
                   tol: float, scale: float) -> tuple[np.ndarray, int, bool]:
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        X = M @ W
        for idx in pairs:
            g = _procrustes_2x2(X[np.ix_(idx, idx)])
            W[:, idx] = W[:, idx] @ g
            X[:, idx] = X[:, idx] @ g
        W, _ = sla.polar(W)
        X = M @ W
        if la.op_norm(X - la.dagger(X)) <= tol * scale:
            # Hermitian X with a negative eigenvalue is a saddle, not the maximum.
            return W, sweeps, bool(np.linalg.eigvalsh(la.hermitian_part(X))[0] >= -tol * scale)
    return W, sweeps, False


def maximize_unitary_alignment(M: np.ndarray, rng: np.random.Generator | int | None = None,
                               max_sweeps: int = 500, tol: float = 1e-13, restarts: int = 5) -> AlignmentResult:
    """max over unitaries W of Re tr(M W), by Jacobi sweeps from Haar starts.

    Each step rotates two columns of W by the exactly optimal 2×2 unitary, so the value never
    decreases. A start ends once X = M·W is Hermitian (the first-order condition); when X is
    also PSD the start reached the maximum, otherwise a fresh Haar start is tried and the best
    value over all starts is kept.
    """
    M = la.as_matrix(M, square=True)
    n = M.shape[0]
    rng = la.as_rng(rng)
    scale = la.op_norm(M)
    if scale == 0:
        return AlignmentResult(0.0, la.haar_unitary(n, rng), 0)

    pairs = [[0]] if n == 1 else [list(p) for p in combinations(range(n), 2)]
    best, total = None, 0
    for _ in range(1 + restarts):
        W, sweeps, at_maximum = _jacobi_sweeps(M, la.haar_unitary(n, rng), pairs, max_sweeps, tol, scale)
        total += sweeps
        value = float(np.trace(M @ W).real)
        if best is None or value > best.value:
            best = AlignmentResult(value, W, total)
        if at_maximum:
            break
    return best._replace(sweeps=total)


def brute_force_fidelity(nu: PositiveForm, rho: PositiveForm, rng: np.random.Generator | int | None = None,
                         policy: TolerancePolicy = DEFAULT_POLICY) -> float:
    """max over fibre vectors √c·W of Re⟨√c W, √a⟩, one independent search per block."""
    check_same_algebra(nu, rho)
    rng = la.as_rng(rng)
    total = 0.0
    for a, c in zip(nu.densities, rho.densities):
        M = la.sqrt_psd(a, policy) @ la.sqrt_psd(c, policy)
        total += maximize_unitary_alignment(M, rng).value
    return total


def sup_over_unitaries(h: OverlapForm, rng: np.random.Generator | int | None = None) -> float:
    """max over commutant unitaries u of Re h(u)."""
    rng = la.as_rng(rng)
    return float(sum(maximize_unitary_alignment(m, rng).value for m in h.m.blocks))
