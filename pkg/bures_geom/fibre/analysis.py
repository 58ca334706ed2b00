# ============================================================
# 🧵 Relative fibre S(ν|ρ)
# Which implementing vectors of ν reach the fibre of ρ at the
# Bures distance, the rank criterion for it and the explicit
# extension w that realizes it.
# ============================================================

from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from ..algebra.blocks import AlgElement, PositiveForm, check_same_algebra
from ..bures.core import bures_distance, optimal_vector
from ..errors import BadIsometry, InternalInconsistency
from ..kernel import linalg as la
from ..standard.form import HSVector, StandardForm, cone_rep, right_act, support_right
from ..standard.overlap import build_overlap, is_positive

ISOMETRY_TOL = 1e-9
DISTANCE_RTOL = 1e-8


# ------------------------------------------------------------
# 📋 Reports
# ------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class MembershipReport:
    in_relative_fibre: bool
    direct_distance: float
    global_distance: float
    rank_gap: tuple[int, ...]
    synthetic: bool = False
    w: AlgElement | None = field(default=None, repr=False)

    def as_dict(self) -> dict:
        return {
            "in_relative_fibre": self.in_relative_fibre,
            "direct_distance": self.direct_distance,
            "global_distance": self.global_distance,
            "rank_gap": list(self.rank_gap),
            "synthetic": self.synthetic,
            "extension_built": self.w is not None,
        }


@dataclass(frozen=True)
class SurveySummary:
    samples: int
    in_fraction: float
    max_excess: float
    max_orbit_deficit: float
    disagreements: int = 0

    @property
    def criteria_agree(self) -> bool:
        return self.disagreements == 0

    def as_dict(self) -> dict:
        return {
            "samples": self.samples,
            "in_fraction": self.in_fraction,
            "max_excess": self.max_excess,
            "max_orbit_deficit": self.max_orbit_deficit,
            "disagreements": self.disagreements,
            "criteria_agree": self.criteria_agree,
        }


class _FibreContext(NamedTuple):
    """Data of (ν, ρ) shared by every vector tested against the pair."""

    xi_nu: HSVector
    psi0: HSVector
    s_h: tuple[np.ndarray, ...]
    p_psi: tuple[np.ndarray, ...]
    p_nu: tuple[np.ndarray, ...]
    distance: float
    scale: float


def _context(std: StandardForm, nu: PositiveForm, rho: PositiveForm) -> _FibreContext:
    policy = std.policy
    xi_nu = cone_rep(std, nu)
    psi0 = optimal_vector(std, nu, rho)
    h = build_overlap(psi0, xi_nu, policy)
    if not is_positive(h, policy):
        raise InternalInconsistency("overlap of the optimal vector with ξ_ν is not positive")
    return _FibreContext(
        xi_nu=xi_nu,
        psi0=psi0,
        s_h=h.s_h.blocks,
        p_psi=support_right(psi0, policy).blocks,
        p_nu=support_right(xi_nu, policy).blocks,
        distance=bures_distance(nu, rho, policy).distance,
        scale=max(1.0, nu.norm_1 + rho.norm_1),
    )


# ------------------------------------------------------------
# 📏 Distances to a fibre
# ------------------------------------------------------------
def distance_to_fibre(chi: HSVector, rho: PositiveForm, policy: la.TolerancePolicy = la.DEFAULT_POLICY) -> float:
    """inf over ψ in the fibre of ρ of ‖ψ − χ‖, via the nuclear norms of χ_i*√c_i."""
    check_same_algebra(chi, rho)
    overlap = sum(la.nuclear_norm(la.dagger(x) @ la.sqrt_psd(c, policy))
                  for x, c in zip(chi.blocks, rho.densities))
    return float(np.sqrt(max(0.0, chi.norm() ** 2 + rho.norm_1 - 2 * overlap)))


def orbit_deficit(xi_nu: HSVector, chi: HSVector) -> float:
    """‖ν‖₁ − max_U Re⟨ξ_ν U, χ⟩; zero when χ lies on the unitary orbit of ξ_ν."""
    check_same_algebra(xi_nu, chi)
    aligned = sum(la.nuclear_norm(la.dagger(x) @ c) for x, c in zip(xi_nu.blocks, chi.blocks))
    return float(xi_nu.norm() ** 2 - aligned)


def sample_partial_isometry(xi_nu: HSVector, rng: np.random.Generator | int | None = None,
                            policy: la.TolerancePolicy = la.DEFAULT_POLICY) -> AlgElement:
    """U = p′(ξ_ν)·W with W Haar; then UU* = p′(ξ_ν)."""
    rng = la.as_rng(rng)
    blocks = [p @ la.haar_unitary(p.shape[0], rng) for p in support_right(xi_nu, policy).blocks]
    return AlgElement(xi_nu.algebra, blocks)


# ------------------------------------------------------------
# ✅ Extension criterion
# ------------------------------------------------------------
def _check_isometry(U: AlgElement, ctx: _FibreContext) -> None:
    for u, p in zip(U.blocks, ctx.p_nu):
        residual = la.op_norm(u @ la.dagger(u) - p)
        if residual > ISOMETRY_TOL:
            raise BadIsometry(f"UU* differs from p′(ξ_ν) by {residual:.3e}")


def _extension(ctx: _FibreContext, U: AlgElement, policy: la.TolerancePolicy,
               overrides: Sequence[int] | None) -> tuple[tuple[int, ...], list[np.ndarray] | None]:
    """Rank gaps per block and, when every gap is ≤ 0, W = S·U + E·F* with WW* = p′(ψ₀)."""
    gaps, blocks = [], []
    for i, (u, s, p) in enumerate(zip(U.blocks, ctx.s_h, ctx.p_psi)):
        E = la.range_basis(la.hermitian_part(p - s), policy)
        complement = la.range_basis(la.hermitian_part(np.eye(u.shape[0]) - la.dagger(u) @ s @ u), policy)
        available = complement.shape[1] if overrides is None else min(int(overrides[i]), complement.shape[1])
        gaps.append(E.shape[1] - available)
        if gaps[-1] <= 0:
            blocks.append(s @ u + E @ la.dagger(complement[:, :E.shape[1]]))
    if any(g > 0 for g in gaps):
        return tuple(gaps), None
    return tuple(gaps), blocks


def _extension_holds(ctx: _FibreContext, U: AlgElement, W: list[np.ndarray]) -> bool:
    for w, u, s, p in zip(W, U.blocks, ctx.s_h, ctx.p_psi):
        if la.op_norm(w @ la.dagger(w) - p) > ISOMETRY_TOL or la.op_norm(s @ u - s @ w) > ISOMETRY_TOL:
            return False
    chi = right_act(U, ctx.xi_nu)
    reached = right_act(AlgElement(U.algebra, W), ctx.psi0)
    return abs((reached - chi).norm() ** 2 - ctx.distance ** 2) <= DISTANCE_RTOL * ctx.scale


def _membership(std: StandardForm, rho: PositiveForm, U: AlgElement, ctx: _FibreContext,
                overrides: Sequence[int] | None) -> MembershipReport:
    policy = std.policy
    _check_isometry(U, ctx)
    direct = distance_to_fibre(right_act(U, ctx.xi_nu), rho, policy)
    gaps, W = _extension(ctx, U, policy, overrides)
    by_rank = all(g <= 0 for g in gaps)

    if overrides is not None:
        return MembershipReport(by_rank, direct, ctx.distance, gaps, synthetic=True,
                                w=AlgElement(U.algebra, W) if W is not None else None)

    by_distance = direct ** 2 - ctx.distance ** 2 <= DISTANCE_RTOL * ctx.scale
    by_construction = W is not None and _extension_holds(ctx, U, W)
    if not by_distance == by_rank == by_construction:
        raise InternalInconsistency(
            f"membership criteria disagree: distance={by_distance}, rank={by_rank}, extension={by_construction}"
        )
    return MembershipReport(by_rank, direct, ctx.distance, gaps,
                            w=AlgElement(U.algebra, W) if W is not None else None)


def relfaser_check(std: StandardForm, nu: PositiveForm, rho: PositiveForm, U: AlgElement,
                   complement_rank_override: Sequence[int] | int | None = None) -> MembershipReport:
    """Is ξ_ν·U in S(ν|ρ)?

    U is a right-acting partial isometry with UU* = p′(ξ_ν), so ξ_ν·U runs over the fibre of ν.
    The verdict needs rank(p′(ψ₀) − s(h)) ≤ rank(1 − U*s(h)U) in every block, with h the
    overlap of ψ₀ and ξ_ν. A complement_rank_override replaces the right-hand ranks and
    marks the report synthetic; this drives the negative branch, which finite blocks never reach.
    """
    check_same_algebra(std.omega, nu, rho, U)
    overrides = complement_rank_override
    if isinstance(overrides, int):
        overrides = [overrides] * len(nu.algebra.block_dims)
    return _membership(std, rho, U, _context(std, nu, rho), overrides)


def relative_fibre_survey(std: StandardForm, nu: PositiveForm, rho: PositiveForm,
                          samples: int = 100, seed: int | None = None) -> SurveySummary:
    """Sample fibre vectors ξ_ν·U of ν and count those in S(ν|ρ).

    Distances and orbit deficits are recorded for every sample; a sample whose
    membership criteria disagree counts as a disagreement and not as a hit.
    """
    check_same_algebra(std.omega, nu, rho)
    ctx = _context(std, nu, rho)
    rng = la.as_rng(seed)
    hits, disagreements, excess, deficit = 0, 0, 0.0, 0.0
    for _ in range(samples):
        U = sample_partial_isometry(ctx.xi_nu, rng, std.policy)
        chi = right_act(U, ctx.xi_nu)
        excess = max(excess, distance_to_fibre(chi, rho, std.policy) - ctx.distance)
        deficit = max(deficit, orbit_deficit(ctx.xi_nu, chi))
        try:
            hits += _membership(std, rho, U, ctx, None).in_relative_fibre
        except InternalInconsistency:
            disagreements += 1
    return SurveySummary(
        samples=samples,
        in_fraction=hits / samples if samples else 1.0,
        max_excess=excess,
        max_orbit_deficit=deficit,
        disagreements=disagreements,
    )
