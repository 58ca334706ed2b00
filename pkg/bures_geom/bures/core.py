# ============================================================
# 📏 Bures geometry of positive normal forms
# Fidelity, Bures distance, the variational formula, optimal
# implementing vectors, ρ⊥ / minimal pairs, the g-functional,
# commutation and skew information.
# ============================================================

from collections.abc import Iterable
from dataclasses import dataclass
from typing import Literal, NamedTuple

import numpy as np

from ..algebra.blocks import AlgElement, PositiveForm, check_same_algebra, evaluate
from ..errors import (
    InconsistentCriteria,
    InternalInconsistency,
    NotFaithful,
    NotPositive,
    SingularDensity,
)
from ..kernel import linalg as la
from ..kernel.linalg import DEFAULT_POLICY, TolerancePolicy
from ..standard.form import HSVector, StandardForm, cone_rep, hs_inner, left_act, modular, right_act
from ..standard.overlap import build_overlap

REPORT_TOL = 1e-10
ORTHOGONALITY_TOL = 1e-9
COMMUTATOR_RTOL = 1e-10
VECTOR_TOL = 1e-8
COMMUTATION_BAND = 1e3


# ------------------------------------------------------------
# 📋 Reports
# ------------------------------------------------------------
@dataclass(frozen=True)
class BuresReport:
    fidelity: float
    distance: float
    nu_norm: float
    rho_norm: float

    def check(self) -> "BuresReport":
        """Re-assert d² = ‖ν‖₁ + ‖ρ‖₁ − 2√P and 0 ≤ √P ≤ √(‖ν‖₁‖ρ‖₁)."""
        gap = abs(self.distance ** 2 - (self.nu_norm + self.rho_norm - 2 * self.fidelity))
        scale = max(1.0, self.nu_norm + self.rho_norm)
        if gap > REPORT_TOL * scale:
            raise InternalInconsistency(f"distance identity off by {gap:.3e}")
        if self.fidelity < -REPORT_TOL or self.fidelity > np.sqrt(self.nu_norm * self.rho_norm) + REPORT_TOL * scale:
            raise InternalInconsistency(f"fidelity {self.fidelity} outside [0, √(‖ν‖₁‖ρ‖₁)]")
        return self

    def as_dict(self) -> dict:
        return {
            "fidelity": self.fidelity,
            "transition_probability": self.fidelity ** 2,
            "distance": self.distance,
            "nu_norm": self.nu_norm,
            "rho_norm": self.rho_norm,
        }


@dataclass(frozen=True, eq=False)
class MinimalPairReport:
    nu_perp: PositiveForm
    rho_perp: PositiveForm
    nu_min: PositiveForm
    rho_min: PositiveForm

    def check(self, nu: PositiveForm, rho: PositiveForm,
              policy: TolerancePolicy = DEFAULT_POLICY) -> "MinimalPairReport":
        """Re-assert orthogonality of ρ⊥ ⟂ ν and ν⊥ ⟂ ρ."""
        for perp, other in ((self.rho_perp, nu), (self.nu_perp, rho)):
            overlap = max(la.op_norm(p @ q) for p, q in zip(perp.support(policy).blocks,
                                                            other.support(policy).blocks))
            if overlap > ORTHOGONALITY_TOL:
                raise InternalInconsistency(f"orthogonal part overlaps its partner (‖s s‖ = {overlap:.3e})")
        return self

    def as_dict(self) -> dict:
        return {
            "nu_perp_norm": self.nu_perp.norm_1,
            "rho_perp_norm": self.rho_perp.norm_1,
            "nu_min_norm": self.nu_min.norm_1,
            "rho_min_norm": self.rho_min.norm_1,
        }


class VariationalResult(NamedTuple):
    value: float
    argmin: AlgElement
    iterations: int


# ------------------------------------------------------------
# 🎯 Fidelity and distance
# ------------------------------------------------------------
def _roots(form: PositiveForm, policy: TolerancePolicy) -> list[np.ndarray]:
    return [la.sqrt_psd(a, policy) for a in form.densities]


def fidelity(nu: PositiveForm, rho: PositiveForm, policy: TolerancePolicy = DEFAULT_POLICY) -> float:
    """√P(ν, ρ) = Σ_i ‖√a_i √c_i‖₁."""
    check_same_algebra(nu, rho)
    return float(sum(la.nuclear_norm(sa @ sc) for sa, sc in zip(_roots(nu, policy), _roots(rho, policy))))


def bures_distance(nu: PositiveForm, rho: PositiveForm, policy: TolerancePolicy = DEFAULT_POLICY) -> BuresReport:
    f = fidelity(nu, rho, policy)
    n1, r1 = nu.norm_1, rho.norm_1
    return BuresReport(fidelity=f, distance=float(np.sqrt(max(0.0, n1 + r1 - 2 * f))),
                       nu_norm=n1, rho_norm=r1).check()


def bures_angle(nu: PositiveForm, rho: PositiveForm, policy: TolerancePolicy = DEFAULT_POLICY) -> float:
    """arccos(√P / √(‖ν‖₁‖ρ‖₁)); nan when either form vanishes."""
    norm = np.sqrt(nu.norm_1 * rho.norm_1)
    if norm == 0:
        return float("nan")
    return float(np.arccos(np.clip(fidelity(nu, rho, policy) / norm, 0.0, 1.0)))


# ------------------------------------------------------------
# 🔎 Variational formula √P = inf √(ν(x) ρ(x⁻¹))
# ------------------------------------------------------------
def _analytic_minimizer(nu: PositiveForm, rho: PositiveForm, policy: TolerancePolicy) -> VariationalResult:
    blocks, inverses = [], []
    for a, c in zip(nu.densities, rho.densities):
        if la.numerical_rank(a, policy) < a.shape[0]:
            raise SingularDensity("the analytic minimizer needs a full-rank ν")
        sa = la.sqrt_psd(a, policy)
        isa = la.psd_power(a, -0.5, policy)
        x = la.hermitian_part(isa @ la.sqrt_psd(sa @ c @ sa, policy) @ isa)
        blocks.append(x)
        inverses.append(la.pinv(x, policy))
    x = AlgElement(nu.algebra, blocks)
    nu_x = evaluate(nu, x).real
    rho_inv = evaluate(rho, AlgElement(nu.algebra, inverses)).real
    return VariationalResult(float(np.sqrt(max(0.0, nu_x * rho_inv))), x, 0)


def _exp_blocks(H: list[np.ndarray], sign: float) -> list[np.ndarray]:
    out = []
    for h in H:
        w, V = np.linalg.eigh(h)
        out.append((V * np.exp(sign * w)) @ la.dagger(V))
    return out


def _log_objective(nu: PositiveForm, rho: PositiveForm, H: list[np.ndarray]) -> tuple[float, float, float]:
    nu_x = sum(np.trace(a @ x).real for a, x in zip(nu.densities, _exp_blocks(H, 1.0)))
    rho_inv = sum(np.trace(c @ x).real for c, x in zip(rho.densities, _exp_blocks(H, -1.0)))
    return float(np.log(nu_x) + np.log(rho_inv)), nu_x, rho_inv


def _iterative_minimizer(nu: PositiveForm, rho: PositiveForm, policy: TolerancePolicy, *,
                         max_iter: int, rtol: float, init_step: float, shrink: float) -> VariationalResult:
    algebra = nu.algebra
    H = [np.zeros((n, n), complex) for n in algebra.block_dims]
    if nu.norm_1 <= 0 or rho.norm_1 <= 0:
        return VariationalResult(0.0, algebra.identity(), 0)

    f, nu_x, rho_inv = _log_objective(nu, rho, H)
    iterations = 0
    for iterations in range(1, max_iter + 1):
        grad = [la.frechet_exp_adjoint(h, a, policy) / nu_x - la.frechet_exp_adjoint(-h, c, policy) / rho_inv
                for h, a, c in zip(H, nu.densities, rho.densities)]
        g2 = sum(np.vdot(g, g).real for g in grad)
        step = init_step
        while True:
            trial = [h - step * g for h, g in zip(H, grad)]
            f_new, nu_new, rho_new = _log_objective(nu, rho, trial)
            if np.isfinite(f_new) and f_new <= f - 1e-4 * step * g2:
                break
            step *= shrink
            if step < 1e-30:
                f_new = f
                break
        if f_new >= f:
            break
        old_value, new_value = np.exp(f / 2), np.exp(f_new / 2)
        H, f, nu_x, rho_inv = trial, f_new, nu_new, rho_new
        if old_value - new_value <= rtol * old_value:
            break
    return VariationalResult(float(np.exp(f / 2)), AlgElement(algebra, _exp_blocks(H, 1.0)), iterations)


def variational_fidelity(nu: PositiveForm, rho: PositiveForm,
                         mode: Literal["analytic", "iterative"] = "analytic",
                         policy: TolerancePolicy = DEFAULT_POLICY, *,
                         max_iter: int = 10_000, rtol: float = 1e-12,
                         init_step: float = 0.5, shrink: float = 0.5) -> VariationalResult:
    """inf over invertible x ≥ 0 of √(ν(x)ρ(x⁻¹)), which equals √P(ν, ρ).

    analytic:  x* = a^{-1/2}(√a c √a)^{1/2}a^{-1/2} blockwise (ν full rank).
    iterative: gradient descent over x = exp(H) with Armijo backtracking.
    """
    check_same_algebra(nu, rho)
    if mode == "analytic":
        return _analytic_minimizer(nu, rho, policy)
    if mode == "iterative":
        return _iterative_minimizer(nu, rho, policy, max_iter=max_iter, rtol=rtol,
                                    init_step=init_step, shrink=shrink)
    raise ValueError(f"unknown mode {mode!r}")


# ------------------------------------------------------------
# ⊥ Largest orthogonal subordinate forms and minimal pairs
# ------------------------------------------------------------
def _perp_by_support(a: np.ndarray, c: np.ndarray, policy: TolerancePolicy) -> np.ndarray:
    sc = la.sqrt_psd(c, policy)
    # s(√c a √c) is the left support of √c√a; ranking it by singular values keeps it
    # the same rank as the polar part of the overlap with ν.
    kept = la.support_proj(sc @ la.sqrt_psd(a, policy), "left", policy)
    basis = la.range_basis(la.hermitian_part(la.support_proj(c, "left", policy) - kept), policy)
    return la.hermitian_part(sc @ basis @ la.dagger(basis) @ sc)


def _perp_by_schur(a: np.ndarray, c: np.ndarray, policy: TolerancePolicy) -> np.ndarray:
    if not la.is_positive_definite(c):
        raise NotFaithful("the Schur route needs a faithful ρ")
    q = np.eye(a.shape[0]) - la.support_proj(a, "left", policy)
    return la.hermitian_part(la.pinv(la.hermitian_part(q @ la.cholesky_inverse(c) @ q), policy))


def rho_perp(nu: PositiveForm, rho: PositiveForm, policy: TolerancePolicy = DEFAULT_POLICY,
             method: Literal["support", "schur"] = "support") -> PositiveForm:
    """ρ⊥: the largest σ ≤ ρ with σ ⟂ ν.

    support: density √c (s(c) − s(√c a √c)) √c.
    schur:   shorted form (q c⁻¹ q)⁺ with q = s(ν)^⊥, for faithful ρ; stays exact
             when c spans many orders of magnitude.
    """
    check_same_algebra(nu, rho)
    build = {"support": _perp_by_support, "schur": _perp_by_schur}[method]
    return PositiveForm(nu.algebra, [build(a, c, policy) for a, c in zip(nu.densities, rho.densities)], policy)


def nu_perp(nu: PositiveForm, rho: PositiveForm, policy: TolerancePolicy = DEFAULT_POLICY) -> PositiveForm:
    """ν⊥: the largest σ ≤ ν with σ ⟂ ρ."""
    return rho_perp(rho, nu, policy)


def minimal_pair(nu: PositiveForm, rho: PositiveForm, policy: TolerancePolicy = DEFAULT_POLICY) -> MinimalPairReport:
    n_perp, r_perp = nu_perp(nu, rho, policy), rho_perp(nu, rho, policy)
    return MinimalPairReport(
        nu_perp=n_perp,
        rho_perp=r_perp,
        nu_min=nu.subtract(n_perp, policy),
        rho_min=rho.subtract(r_perp, policy),
    ).check(nu, rho, policy)


# ------------------------------------------------------------
# 🧭 Optimal implementing vectors
# ------------------------------------------------------------
def _attaining_part(std: StandardForm, nu: PositiveForm, rho: PositiveForm,
                    seed_vector: HSVector | None) -> HSVector:
    """v*_{ψ,ξ_ν} ψ for ψ in the fibre of ρ (ξ_ρ by default)."""
    psi = cone_rep(std, rho) if seed_vector is None else seed_vector
    h = build_overlap(psi, cone_rep(std, nu), std.policy)
    return right_act(h.v.adjoint(), psi)


def optimal_vector(std: StandardForm, nu: PositiveForm, rho: PositiveForm,
                   seed_vector: HSVector | None = None) -> HSVector:
    """ψ_Ω^ν(ρ) = v*_{ψ,ξ_ν}ψ + ξ_{ρ⊥}; the fibre vector of ρ closest to ξ_ν."""
    check_same_algebra(std.omega, nu, rho)
    return _attaining_part(std, nu, rho, seed_vector) + cone_rep(std, rho_perp(nu, rho, std.policy))


def attaining_phase_family(std: StandardForm, nu: PositiveForm, rho: PositiveForm,
                           phases: Iterable[float]) -> list[HSVector]:
    """ψ_t = v*ξ_ρ + e^{it} ξ_{ρ⊥}; each attains d_B, and they differ iff ρ⊥ ≠ 0."""
    base = _attaining_part(std, nu, rho, None)
    perp = cone_rep(std, rho_perp(nu, rho, std.policy))
    return [base + np.exp(1j * t) * perp for t in phases]


def conjugated_form_vector(std: StandardForm, rho: PositiveForm, x: AlgElement) -> HSVector:
    """x ξ_ρ, which is ψ_Ω^ρ(ρ^x) for faithful ρ and x ≥ 0 (ρ^x has density x c x)."""
    check_same_algebra(std.omega, rho, x)
    if not rho.is_faithful(std.policy):
        raise NotFaithful("ρ must be faithful")
    if not x.is_positive(std.policy):
        raise NotPositive("x must be positive")
    return left_act(x, cone_rep(std, rho))


# ------------------------------------------------------------
# 🧾 The g-functional
# ------------------------------------------------------------
def g_functional(std: StandardForm, nu: PositiveForm, rho: PositiveForm,
                 side: Literal["nu", "rho"] = "nu") -> AlgElement:
    """Density G of the unique g with g(1) = √P and |g(y*x)|² ≤ (ν−ν⊥)(y*y)(ρ−ρ⊥)(x*x).

    side="nu":  g = ⟨(·) ψ_Ω^ν(ρ), ξ_ν⟩, G = ψ_Ω^ν(ρ) ξ_ν*
    side="rho": g = ⟨(·) ξ_ρ, ψ_Ω^ρ(ν)⟩, G = ξ_ρ ψ_Ω^ρ(ν)*
    """
    if side == "nu":
        left, right = optimal_vector(std, nu, rho), cone_rep(std, nu)
    elif side == "rho":
        left, right = cone_rep(std, rho), optimal_vector(std, rho, nu)
    else:
        raise ValueError(f"unknown side {side!r}")
    return AlgElement(nu.algebra, [p @ la.dagger(f) for p, f in zip(left.blocks, right.blocks)])


# ------------------------------------------------------------
# 🔁 Commutation and skew information
# ------------------------------------------------------------
def _commutator_ratio(nu: PositiveForm, rho: PositiveForm) -> float:
    worst = 0.0
    for a, c in zip(nu.densities, rho.densities):
        scale = la.op_norm(a) * la.op_norm(c)
        if scale > 0:
            worst = max(worst, la.op_norm(a @ c - c @ a) / (COMMUTATOR_RTOL * scale))
    return worst


def commutes(std: StandardForm, nu: PositiveForm, rho: PositiveForm) -> bool:
    """ρ commutes with ν: ψ_Ω^ν(ρ) = ξ_ρ.

    Three equivalent tests are scored as residual / tolerance: the optimal vector
    against ξ_ρ, the density commutators, and √(‖ξ_ν − ξ_ρ‖² − d_B²). The verdict is
    the vector test. InconsistentCriteria is raised only when one score sits far
    above its tolerance while another sits far below it.
    """
    check_same_algebra(std.omega, nu, rho)
    xi_nu, xi_rho = cone_rep(std, nu), cone_rep(std, rho)
    vector_scale = VECTOR_TOL * np.sqrt(max(1.0, nu.norm_1 + rho.norm_1))

    d_b = bures_distance(nu, rho, std.policy).distance
    gap = (xi_nu - xi_rho).norm() ** 2 - d_b ** 2
    ratios = {
        "vector": (optimal_vector(std, nu, rho) - xi_rho).norm() / vector_scale,
        "densities": _commutator_ratio(nu, rho),
        "distance": np.sqrt(max(gap, 0.0)) / vector_scale,
    }
    if max(ratios.values()) > COMMUTATION_BAND and min(ratios.values()) < 1.0 / COMMUTATION_BAND:
        detail = ", ".join(f"{k}={v:.3g}" for k, v in ratios.items())
        raise InconsistentCriteria(f"commutation tests disagree (residual/tolerance: {detail})")
    return bool(ratios["vector"] <= 1.0)


def skew_information(std: StandardForm, nu: PositiveForm, rho: PositiveForm) -> float:
    """j(ν|ρ) = ½‖J ψ_Ω^ρ(ν) − ψ_Ω^ρ(ν)‖²; zero exactly when ν commutes with ρ."""
    psi = optimal_vector(std, rho, nu)
    diff = modular(std).J(psi) - psi
    return float(0.5 * hs_inner(diff, diff).real)
