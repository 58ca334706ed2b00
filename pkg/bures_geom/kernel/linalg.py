# ============================================================
# 🧮 Dense complex-matrix kernel
# Spectral calculus, polar data and supports under one rank policy.
# Every higher module goes through these functions.
# ============================================================

from typing import Literal

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, Field
from scipy import linalg as sla

from ..errors import NonFiniteInput, NonHermitianInput, NotPositive, ShapeError

ComplexMatrix = np.ndarray


class TolerancePolicy(BaseModel):
    """Rank and clipping thresholds shared by every rank-sensitive construction."""

    model_config = ConfigDict(frozen=True)

    rel_rank_cutoff: float = Field(default=1e-10, gt=0)
    abs_floor: float = Field(default=1e-14, gt=0)

    def cutoff(self, scale: float) -> float:
        """Singular values / eigenvalue magnitudes at or below this count as zero."""
        return max(self.rel_rank_cutoff * float(scale), self.abs_floor)


DEFAULT_POLICY = TolerancePolicy()


# ------------------------------------------------------------
# 🧱 Construction & validation
# ------------------------------------------------------------
def as_matrix(A: ArrayLike, *, square: bool = False) -> ComplexMatrix:
    """Validated complex128 2-D copy of A."""
    M = np.array(A, dtype=np.complex128)
    if M.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got shape {M.shape}")
    if square and M.shape[0] != M.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NonFiniteInput("matrix has NaN or Inf entries")
    return M


def dagger(A: ComplexMatrix) -> ComplexMatrix:
    return A.conj().T


def op_norm(A: ComplexMatrix) -> float:
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


def hermitian_part(A: ComplexMatrix) -> ComplexMatrix:
    return (A + dagger(A)) / 2


def is_hermitian(A: ComplexMatrix, policy: TolerancePolicy = DEFAULT_POLICY) -> bool:
    return op_norm(A - dagger(A)) <= policy.cutoff(op_norm(A))


# ------------------------------------------------------------
# 📊 Spectral calculus
# ------------------------------------------------------------
def eigh(H: ArrayLike, policy: TolerancePolicy = DEFAULT_POLICY) -> tuple[np.ndarray, ComplexMatrix]:
    """Eigenvalues ascending and a unitary eigenbasis of a Hermitian matrix."""
    H = as_matrix(H, square=True)
    if not is_hermitian(H, policy):
        raise NonHermitianInput(f"‖H − H*‖ = {op_norm(H - dagger(H)):.3e} exceeds tolerance")
    w, V = sla.eigh(hermitian_part(H))
    return w, V


def _raw_spectrum(A: ArrayLike, policy: TolerancePolicy) -> tuple[np.ndarray, ComplexMatrix]:
    w, V = eigh(A, policy)
    scale = float(np.max(np.abs(w))) if w.size else 0.0
    if w.size and w[0] < -policy.cutoff(scale):
        raise NotPositive(f"eigenvalue {w[0]:.3e} below −{policy.cutoff(scale):.3e}")
    return w, V


def _clipped_spectrum(A: ArrayLike, policy: TolerancePolicy) -> tuple[np.ndarray, ComplexMatrix]:
    w, V = _raw_spectrum(A, policy)
    return np.clip(w, 0.0, None), V


def project_psd(A: ArrayLike, policy: TolerancePolicy = DEFAULT_POLICY) -> ComplexMatrix:
    """A with roundoff-level negative eigenvalues removed; NotPositive beyond the window.

    A PSD input comes back as its Hermitian part, untouched by an eigen-reconstruction,
    so tiny positive eigenvalues survive exactly.
    """
    A = as_matrix(A, square=True)
    w, V = _raw_spectrum(A, policy)
    if w.size == 0 or w[0] >= 0:
        return hermitian_part(A)
    return (V * np.clip(w, 0.0, None)) @ dagger(V)


def sqrt_psd(A: ArrayLike, policy: TolerancePolicy = DEFAULT_POLICY) -> ComplexMatrix:
    """A^{1/2}; eigenvalues at or below the rank cutoff map to zero, not to O(√ε)."""
    return psd_power(A, 0.5, policy)


def psd_power(A: ArrayLike, alpha: float, policy: TolerancePolicy = DEFAULT_POLICY) -> ComplexMatrix:
    """A**alpha on the support of A (zero on its kernel, also for alpha < 0)."""
    w, V = _clipped_spectrum(A, policy)
    keep = w > policy.cutoff(w[-1] if w.size else 0.0)
    powered = np.zeros_like(w)
    powered[keep] = w[keep] ** alpha
    return (V * powered) @ dagger(V)


def power_it(A: ArrayLike, t: float, policy: TolerancePolicy = DEFAULT_POLICY, sign: int = 1) -> ComplexMatrix:
    """A^{±it} on the support of a PSD matrix A."""
    w, V = _clipped_spectrum(A, policy)
    keep = w > policy.cutoff(w[-1] if w.size else 0.0)
    phases = np.zeros(w.shape, dtype=np.complex128)
    phases[keep] = np.exp(1j * sign * t * np.log(w[keep]))
    return (V * phases) @ dagger(V)


def frechet_exp_adjoint(H: ArrayLike, A: ArrayLike, policy: TolerancePolicy = DEFAULT_POLICY) -> ComplexMatrix:
    """Hermitian G with tr(A · Dexp_H[E]) = tr(G E) for all E (divided differences of exp)."""
    w, U = eigh(H, policy)
    At = dagger(U) @ as_matrix(A, square=True) @ U
    diff = w[:, None] - w[None, :]
    close = np.abs(diff) <= 1e-12 * (1.0 + np.abs(w[:, None]))
    safe = np.where(close, 1.0, diff)
    gamma = np.where(close, np.exp(w[:, None]), np.exp(w[None, :]) * np.expm1(diff) / safe)
    return hermitian_part(U @ (gamma * At) @ dagger(U))


# ------------------------------------------------------------
# 📐 Singular values, polar data, supports
# ------------------------------------------------------------
def svd(A: ArrayLike) -> tuple[ComplexMatrix, np.ndarray, ComplexMatrix]:
    """Compact SVD A = U diag(s) Vh."""
    A = as_matrix(A)
    if A.size == 0:
        k = min(A.shape)
        return np.zeros((A.shape[0], k), complex), np.zeros(k), np.zeros((k, A.shape[1]), complex)
    return sla.svd(A, full_matrices=False, lapack_driver="gesvd")


def rank_from_singular_values(s: np.ndarray, policy: TolerancePolicy = DEFAULT_POLICY) -> int:
    if s.size == 0:
        return 0
    return int(np.count_nonzero(s > policy.cutoff(s[0])))


def numerical_rank(A: ArrayLike, policy: TolerancePolicy = DEFAULT_POLICY) -> int:
    return rank_from_singular_values(svd(A)[1], policy)


def nuclear_norm(A: ArrayLike) -> float:
    A = as_matrix(A)
    if A.size == 0:
        return 0.0
    return float(np.sum(sla.svdvals(A)))


def polar_left(A: ArrayLike, policy: TolerancePolicy = DEFAULT_POLICY) -> tuple[ComplexMatrix, ComplexMatrix]:
    """A = V·|A| with |A| = (A*A)^{1/2} and V*V = s(|A|); V is not padded to a unitary."""
    U, s, Vh = svd(A)
    r = rank_from_singular_values(s, policy)
    V = U[:, :r] @ Vh[:r]
    absA = (dagger(Vh[:r]) * s[:r]) @ Vh[:r]
    return V, absA


def support_proj(A: ArrayLike, side: Literal["left", "right"] = "left",
                 policy: TolerancePolicy = DEFAULT_POLICY) -> ComplexMatrix:
    """Range projection of AA* (left) or of A*A (right)."""
    U, s, Vh = svd(A)
    r = rank_from_singular_values(s, policy)
    if side == "left":
        return U[:, :r] @ dagger(U[:, :r])
    if side == "right":
        return dagger(Vh[:r]) @ Vh[:r]
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def pinv(A: ArrayLike, policy: TolerancePolicy = DEFAULT_POLICY) -> ComplexMatrix:
    U, s, Vh = svd(A)
    r = rank_from_singular_values(s, policy)
    return (dagger(Vh[:r]) / s[:r]) @ dagger(U[:, :r])


def range_basis(P: ArrayLike, policy: TolerancePolicy = DEFAULT_POLICY) -> ComplexMatrix:
    """Orthonormal columns spanning the range of a PSD matrix (e.g. a projection)."""
    w, V = eigh(P, policy)
    keep = w > policy.cutoff(np.max(np.abs(w)) if w.size else 0.0)
    return V[:, keep][:, ::-1]


def is_projection(P: ArrayLike, tol: float = 1e-9) -> bool:
    P = as_matrix(P, square=True)
    scale = max(1.0, op_norm(P))
    return op_norm(P - dagger(P)) <= tol * scale and op_norm(P @ P - P) <= tol * scale


def is_psd(A: ArrayLike, policy: TolerancePolicy = DEFAULT_POLICY) -> bool:
    A = as_matrix(A, square=True)
    if not is_hermitian(A, policy):
        return False
    w = sla.eigvalsh(hermitian_part(A))
    scale = float(np.max(np.abs(w))) if w.size else 0.0
    return bool(w.size == 0 or w[0] >= -policy.cutoff(scale))


def is_positive_definite(A: ArrayLike) -> bool:
    """Strictly positive definite in floating point, read off a Cholesky factorization."""
    try:
        sla.cho_factor(hermitian_part(as_matrix(A, square=True)))
    except sla.LinAlgError:
        return False
    return True


def cholesky_inverse(A: ArrayLike) -> ComplexMatrix:
    """A⁻¹ for a positive definite A through a Cholesky solve."""
    A = hermitian_part(as_matrix(A, square=True))
    factor = sla.cho_factor(A)
    return hermitian_part(sla.cho_solve(factor, np.eye(A.shape[0], dtype=np.complex128)))


# ------------------------------------------------------------
# 🎲 Random unitaries
# ------------------------------------------------------------
def as_rng(seed: int | np.random.Generator | None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def haar_unitary(n: int, rng: np.random.Generator) -> ComplexMatrix:
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Q, R = sla.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))
