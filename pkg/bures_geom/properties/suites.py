# ============================================================
# 🧪 Property suites
# Each suite maps one random trial to a list of named residual
# checks; run_suite keeps the worst residual per property and
# the trial index that reproduces it.
# ============================================================

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from ..algebra.blocks import (
    AlgElement,
    PositiveForm,
    centralizer_contains,
    conjugate_form,
    evaluate,
    mvn_precedes,
)
from ..bures.core import (
    attaining_phase_family,
    bures_angle,
    bures_distance,
    commutes,
    conjugated_form_vector,
    fidelity,
    g_functional,
    minimal_pair,
    nu_perp,
    optimal_vector,
    rho_perp,
    skew_information,
    variational_fidelity,
)
from ..errors import BadIsometry, BuresError, DomainError, SingularDensity, UnknownSuite
from ..fibre.analysis import distance_to_fibre, relative_fibre_survey, relfaser_check
from ..kernel import linalg as la
from ..kernel.linalg import DEFAULT_POLICY, TolerancePolicy
from ..standard.form import (
    HSVector,
    StandardForm,
    cone_contains,
    cone_rep,
    cone_split,
    cone_unitary,
    fibre_contains,
    fibre_sample,
    hs_inner,
    left_act,
    modular,
    right_act,
    support_left,
    support_right,
    vector_form,
)
from ..standard.overlap import build_overlap, functional_norm, is_positive, positive_by_norm
from ..sweep.truncation import build_truncation_instance
from . import sampling as smp
from .oracles import brute_force_fidelity, maximize_unitary_alignment, sup_over_unitaries


class Check(NamedTuple):
    name: str
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tol


def _close(name: str, residual: float, tol: float) -> Check:
    return Check(name, float(residual), float(tol))


def _flag(name: str, ok: bool) -> Check:
    return Check(name, 0.0 if ok else 1.0, 0.0)


def _blocks_norm(xs, ys) -> float:
    return max(la.op_norm(x - y) for x, y in zip(xs, ys))


# ------------------------------------------------------------
# 📐 polar: kernel, algebra and overlap forms
# ------------------------------------------------------------
def _mvn_witness(p: AlgElement, q: AlgElement, policy: TolerancePolicy) -> bool:
    """Build w with w*w = p and ww* ≤ q from range bases, if the ranks allow it."""
    for pb, qb in zip(p.blocks, q.blocks):
        Bp, Bq = la.range_basis(pb, policy), la.range_basis(qb, policy)
        if Bp.shape[1] > Bq.shape[1]:
            return False
        w = Bq[:, : Bp.shape[1]] @ la.dagger(Bp)
        if la.op_norm(la.dagger(w) @ w - pb) > 1e-9 or not la.is_psd(qb - w @ la.dagger(w), policy):
            return False
    return True


def _polar_trial(rng: np.random.Generator, dims: Sequence[int], policy: TolerancePolicy) -> list[Check]:
    n = int(rng.choice(dims))
    r = n if rng.random() < 0.5 else int(rng.integers(1, n + 1))
    A = smp.ginibre(n, r, rng) @ smp.ginibre(r, n, rng)
    a_norm = max(1.0, la.op_norm(A))
    V, absA = la.polar_left(A, policy)
    P = la.pinv(A, policy)
    AP, PA = A @ P, P @ A
    H = la.hermitian_part(smp.ginibre(n, n, rng))
    w, U = la.eigh(H, policy)
    B = smp.ginibre(n, n, rng)
    S = la.sqrt_psd(B @ la.dagger(B), policy)

    checks = [
        _close("polar_reconstruction", la.op_norm(A - V @ absA), 1e-9 * a_norm),
        _close("polar_initial_projection", la.op_norm(la.dagger(V) @ V - la.support_proj(absA, "left", policy)), 1e-9),
        _close("nuclear_norm_trace", abs(la.nuclear_norm(A) - np.trace(absA).real), 1e-10 * max(1.0, la.nuclear_norm(A))),
        _close("support_left", la.op_norm(la.support_proj(A, "left", policy) @ A - A), 1e-10 * a_norm),
        _close("support_right", la.op_norm(A @ la.support_proj(A, "right", policy) - A), 1e-10 * a_norm),
        _close("pinv_moore_penrose", max(
            la.op_norm(AP @ A - A) / a_norm,
            la.op_norm(PA @ P - P) / max(1.0, la.op_norm(P)),
            la.op_norm(AP - la.dagger(AP)),
            la.op_norm(PA - la.dagger(PA)),
        ), 1e-9 * max(1.0, a_norm * la.op_norm(P))),
        _close("eigh_reconstruction", la.op_norm((U * w) @ la.dagger(U) - H), 1e-10 * max(1.0, la.op_norm(H))),
        _close("eigh_unitary", la.op_norm(la.dagger(U) @ U - np.eye(n)), 1e-10),
        _close("sqrt_squares_back", la.op_norm(S @ S - B @ la.dagger(B)), 1e-9 * max(1.0, la.op_norm(B) ** 2)),
    ]

    # algebra
    alg = smp.random_algebra(dims, rng)
    nu = smp.random_form(alg, rng)
    x, y = smp.random_element(alg, rng), smp.random_element(alg, rng)
    value = evaluate(nu, x.adjoint() @ x)
    nested = conjugate_form(conjugate_form(nu, x, policy), y, policy)
    direct = conjugate_form(nu, y @ x, policy)
    centers = [alg.center_projection(i) for i in range(len(alg.block_dims))]
    checks += [
        _flag("center_projections_are_projections", all(z.is_projection() for z in centers)),
        _close("center_projections_sum_to_identity",
               _blocks_norm(sum(centers[1:], centers[0]).blocks, alg.identity().blocks), 1e-15),
        _close("center_projections_central",
               max((z @ x - x @ z).op_norm() for z in centers), 1e-15 * max(1.0, x.op_norm())),
        _close("trace_form_positivity", max(0.0, -value.real) + abs(value.imag),
               1e-12 * max(1.0, x.op_norm() ** 2 * nu.norm_1)),
        _close("conjugation_composes", _blocks_norm(nested.densities, direct.densities),
               1e-10 * max(1.0, (x.op_norm() * y.op_norm()) ** 2)),
    ]

    def projections():
        return AlgElement(alg, [smp.random_projection(m, int(rng.integers(0, m + 1)), rng) for m in alg.block_dims])

    p, q, s = projections(), projections(), projections()
    pq, qs = mvn_precedes(p, q, policy), mvn_precedes(q, s, policy)
    checks += [
        _flag("mvn_reflexive", mvn_precedes(p, p, policy)),
        _flag("mvn_transitive", not (pq and qs) or mvn_precedes(p, s, policy)),
        _flag("mvn_matches_witness", pq == _mvn_witness(p, q, policy)),
    ]

    # overlap forms
    psi, phi = smp.random_vector(alg, rng), smp.random_vector(alg, rng, rank=int(rng.integers(1, 4)))
    h = build_overlap(psi, phi, policy)
    scale = max(1.0, functional_norm(h))
    zs = [smp.random_element(alg, rng) for _ in range(5)]
    swapped = build_overlap(phi, psi, policy)
    wu = smp.random_unitary(alg, rng)
    gauged = build_overlap(right_act(wu, psi), phi, policy)
    self_h, negated_h = build_overlap(psi, psi, policy), build_overlap(psi, -psi, policy)

    checks += [
        _close("overlap_polar_identity",
               max(abs(h(z) - h.abs_value(h.compose_v(z))) / max(1.0, z.op_norm()) for z in zs), 1e-9 * scale),
        _close("overlap_support_of_abs", _blocks_norm(
            h.s_h.blocks, [la.support_proj(d, "left", policy) for d in h.abs_density.blocks]), 1e-9),
        _close("overlap_swap_density", _blocks_norm(swapped.m.blocks, h.m.adjoint().blocks), 1e-12 * scale),
        _close("overlap_swap_isometry", _blocks_norm(swapped.v.blocks, h.v.adjoint().blocks), 1e-8),
        _flag("overlap_supports_equivalent", h.s_h.ranks(policy) == (h.v.adjoint() @ h.v).ranks(policy)),
        _close("functional_norm_vs_search", abs(functional_norm(h) - sup_over_unitaries(h, rng)), 1e-6 * scale),
        _close("functional_norm_bounds_unitaries",
               max(max(0.0, abs(h(smp.random_unitary(alg, rng))) - functional_norm(h)) for _ in range(5)),
               1e-10 * scale),
        _flag("self_overlap_positive", is_positive(self_h, policy)),
        _flag("negated_overlap_not_positive", not is_positive(negated_h, policy)),
        _flag("positivity_criteria_agree",
              positive_by_norm(self_h) == is_positive(self_h, policy)
              and positive_by_norm(negated_h) == is_positive(negated_h, policy)),
        _close("gauge_abs_invariant", _blocks_norm(gauged.abs_density.blocks, h.abs_density.blocks), 1e-9 * scale),
        _close("gauge_isometry_follows", _blocks_norm(gauged.v.blocks, (h.v @ wu).blocks), 1e-8),
        _close("attaining_support", _blocks_norm(
            support_right(right_act(h.v.adjoint(), psi), policy).blocks, h.s_h.blocks), 1e-8),
    ]
    return checks


# ------------------------------------------------------------
# 🌀 cone: modular operators, natural cone, cone change
# ------------------------------------------------------------
def _cone_trial(rng: np.random.Generator, dims: Sequence[int], policy: TolerancePolicy) -> list[Check]:
    alg = smp.random_algebra(dims, rng)
    psd = bool(rng.random() < 0.5)
    std = smp.random_standard_form(alg, rng, psd, policy)
    mod = modular(std)
    omega = std.omega
    kappa = max(la.op_norm(w) * la.op_norm(np.linalg.inv(w)) for w in omega.blocks)
    x, y = smp.random_element(alg, rng), smp.random_element(alg, rng)
    xi, eta = smp.random_vector(alg, rng), smp.random_vector(alg, rng)
    size = max(1.0, xi.norm())
    tol = 1e-9 * kappa ** 2 * max(1.0, omega.op_norm())

    def tomita_gap() -> float:
        lhs = mod.J(left_act(x, mod.J(left_act(y, xi))))
        rhs = left_act(y, mod.J(left_act(x, mod.J(xi))))
        return (lhs - rhs).norm()

    checks = [
        _close("S_defining_relation", (mod.S(left_act(x, omega)) - left_act(x.adjoint(), omega)).norm(),
               tol * max(1.0, x.op_norm())),
        _close("F_defining_relation", (mod.F(right_act(y, omega)) - right_act(y.adjoint(), omega)).norm(),
               tol * max(1.0, y.op_norm())),
        _close("delta_is_F_after_S", (mod.delta(xi) - mod.F(mod.S(xi))).norm(), tol * kappa ** 2 * size),
        _close("S_is_J_delta_half", (mod.S(xi) - mod.J(mod.delta_power(xi, 0.5))).norm(), tol * size),
        _close("modular_flow_fixes_omega", (mod.delta_it(omega, float(rng.normal())) - omega).norm(), tol),
        _close("J_involution", (mod.J(mod.J(xi)) - xi).norm(), 1e-9 * size),
        _close("J_antiunitary", abs(hs_inner(mod.J(xi), mod.J(eta)) - hs_inner(eta, xi)),
               1e-9 * size * max(1.0, eta.norm())),
        _close("tomita_commutant", tomita_gap(), 1e-9 * max(1.0, x.op_norm() * y.op_norm()) * size),
    ]

    nu, rho = smp.random_form(alg, rng), smp.random_form(alg, rng)
    xn, xr = cone_rep(std, nu), cone_rep(std, rho)
    gap = (xn - xr).norm()
    trace_gap = nu.trace_distance(rho)
    X = [la.hermitian_part(smp.ginibre(m, m, rng)) for m in alg.block_dims]
    fixed = HSVector(alg, [Xi @ u for Xi, u in zip(X, std.cone_unitaries)])
    plus, minus = cone_split(std, fixed)
    checks += [
        _flag("cone_rep_in_cone", cone_contains(std, xn)),
        _flag("cone_rep_in_fibre", fibre_contains(xn, nu)),
        _close("cone_rep_J_fixed", (mod.J(xn) - xn).norm(), 1e-9),
        _close("cone_self_dual", max(0.0, -hs_inner(xn, xr).real), 1e-10),
        _close("cone_estimate_lower", max(0.0, gap ** 2 - trace_gap), 1e-9),
        _close("cone_estimate_upper", max(0.0, trace_gap - gap * (xn + xr).norm()), 1e-9),
        _close("cone_split_reconstructs", (plus - minus - fixed).norm(), 1e-10 * max(1.0, fixed.norm())),
        _flag("cone_split_parts_in_cone", cone_contains(std, plus) and cone_contains(std, minus)),
        _close("cone_split_orthogonal", abs(hs_inner(plus, minus)), 1e-10 * max(1.0, fixed.norm() ** 2)),
    ]
    if psd:
        chi = smp.random_vector(alg, rng, rank=int(rng.integers(1, 4)))
        checks.append(_close("support_intertwining", _blocks_norm(
            support_left(chi, policy).blocks, support_right(mod.J(chi), policy).blocks), 1e-9))

    # cone change relative to a positive Ω
    base = smp.random_standard_form(alg, rng, psd=True, policy=policy)
    om_p = HSVector(alg, smp.random_omega_blocks(alg, rng, psd=False))
    om_q = HSVector(alg, smp.random_omega_blocks(alg, rng, psd=True))
    w = smp.random_unitary(alg, rng)
    u_p = cone_unitary(base, om_p)
    image = HSVector(alg, [smp.random_density(m, rng) @ u for m, u in zip(alg.block_dims, u_p.blocks)])
    rejects_general = False
    try:
        cone_unitary(std, om_p)
    except DomainError:
        rejects_general = True
    checks += [
        _close("cone_unitary_unitary", _blocks_norm((u_p @ u_p.adjoint()).blocks, alg.identity().blocks), 1e-9),
        _close("cone_unitary_trivial_for_positive", _blocks_norm(cone_unitary(base, om_q).blocks,
                                                                 alg.identity().blocks), 1e-9),
        _close("cone_unitary_chain_rule",
               _blocks_norm(cone_unitary(base, right_act(w, om_p)).blocks, (u_p @ w).blocks), 1e-9),
        _flag("cone_unitary_maps_cone", cone_contains(StandardForm(om_p, policy), image)),
        _flag("cone_unitary_needs_positive_omega", rejects_general != psd),
    ]
    return checks


# ------------------------------------------------------------
# 📏 bures: fidelity, distance, optimal vectors
# ------------------------------------------------------------
def _bures_trial(rng: np.random.Generator, dims: Sequence[int], policy: TolerancePolicy) -> list[Check]:
    alg = smp.random_algebra(dims, rng)
    nu, rho = smp.random_form(alg, rng), smp.random_form(alg, rng)
    std = smp.random_standard_form(alg, rng, policy=policy)
    report = bures_distance(nu, rho, policy)
    scale = max(1.0, nu.norm_1 + rho.norm_1)

    psi0 = optimal_vector(std, nu, rho)
    xi_nu = cone_rep(std, nu)
    seeded = optimal_vector(std, nu, rho, seed_vector=fibre_sample(rho, rng, policy))
    angle = bures_angle(nu, rho, policy)
    checks = [
        _close("distance_identity",
               abs(report.distance ** 2 - (report.nu_norm + report.rho_norm - 2 * report.fidelity)), 1e-10 * scale),
        _close("fidelity_symmetric", abs(report.fidelity - fidelity(rho, nu, policy)), 1e-10 * scale),
        _close("fidelity_vs_brute_force", abs(report.fidelity - brute_force_fidelity(nu, rho, rng, policy)), 1e-6),
        _flag("optimal_vector_in_fibre", fibre_contains(psi0, rho)),
        _close("optimal_vector_attains", abs((psi0 - xi_nu).norm() ** 2 - report.distance ** 2), 1e-8 * scale),
        _flag("optimal_overlap_positive", is_positive(build_overlap(psi0, xi_nu, policy), policy)),
        _close("optimal_vector_seed_independent", (seeded - psi0).norm(), 1e-8 * scale),
        _flag("angle_in_range", 0.0 <= angle <= np.pi / 2 + 1e-12),
    ]

    mu, sigma = smp.split_below(nu, rng), smp.split_below(rho, rng)
    f_parts = fidelity(mu, sigma, policy), fidelity(nu.subtract(mu, policy), rho.subtract(sigma, policy), policy)
    checks += [
        _close("fidelity_superadditive", max(0.0, sum(f_parts) - report.fidelity), 1e-9 * scale),
        _close("transition_superadditive", max(0.0, sum(f ** 2 for f in f_parts) - report.fidelity ** 2),
               1e-9 * scale ** 2),
    ]

    nu2, rho2 = smp.random_form(alg, rng), smp.random_form(alg, rng)
    lam = float(rng.random())
    mixed = bures_distance(lam * nu + (1 - lam) * nu2, lam * rho + (1 - lam) * rho2, policy)
    other = bures_distance(nu2, rho2, policy)
    checks += [
        _close("distance_squared_jointly_convex",
               max(0.0, mixed.distance ** 2 - lam * report.distance ** 2 - (1 - lam) * other.distance ** 2), 1e-9),
        _close("fidelity_jointly_concave",
               max(0.0, lam * report.fidelity + (1 - lam) * other.fidelity - mixed.fidelity), 1e-9),
    ]
    return checks


# ------------------------------------------------------------
# ⊥ perp: orthogonal parts, minimal pairs, g-functional
# ------------------------------------------------------------
def _perp_trial(rng: np.random.Generator, dims: Sequence[int], policy: TolerancePolicy) -> list[Check]:
    alg = smp.random_algebra(dims, rng)
    nu, rho = smp.random_form(alg, rng), smp.random_form(alg, rng)
    std = smp.random_standard_form(alg, rng, policy=policy)
    scale = max(1.0, nu.norm_1 + rho.norm_1)
    rp, np_ = rho_perp(nu, rho, policy), nu_perp(nu, rho, policy)
    pair = minimal_pair(nu, rho, policy)
    f = fidelity(nu, rho, policy)
    f_min = fidelity(pair.nu_min, pair.rho_min, policy)
    d2 = bures_distance(nu, rho, policy).distance ** 2
    d2_min = bures_distance(pair.nu_min, pair.rho_min, policy).distance ** 2
    d2_perp = bures_distance(np_, rp, policy).distance ** 2
    leftover = rho_perp(pair.nu_min, pair.rho_min, policy).norm_1 + nu_perp(pair.nu_min, pair.rho_min, policy).norm_1

    checks = [
        _close("rho_perp_orthogonal", max(la.op_norm(p @ q) for p, q in zip(
            rp.support(policy).blocks, nu.support(policy).blocks)), 1e-9),
        _flag("rho_perp_below_rho", rp.leq(rho, tol=1e-9 * scale)),
        _close("minimal_pair_keeps_transition", abs(f ** 2 - f_min ** 2), 1e-9 * scale ** 2),
        _close("minimal_pair_splits_distance", abs(d2 - d2_min - d2_perp), 1e-8 * scale),
        _close("minimal_pair_is_minimal", leftover, 1e-8 * scale),
    ]

    if pair.nu_min.norm_1 > 1e-6:
        decrement = 0.1 * smp.split_below(pair.nu_min, rng)
        if decrement.norm_1 > 1e-6:
            lowered = fidelity(pair.nu_min.subtract(decrement, policy), pair.rho_min, policy)
            checks.append(_flag("minimal_pair_unique", f_min - lowered > 1e-9))

    # Schur route and faithful ν
    faithful_rho = smp.random_form(alg, rng, faithful=True, floor=0.05)
    faithful_nu = smp.random_form(alg, rng, faithful=True, floor=0.05)
    by_support = rho_perp(nu, faithful_rho, policy, method="support")
    by_schur = rho_perp(nu, faithful_rho, policy, method="schur")
    checks += [
        _close("schur_matches_support", _blocks_norm(by_support.densities, by_schur.densities), 1e-9 * scale),
        _close("faithful_nu_has_no_perp", rho_perp(faithful_nu, rho, policy).norm_1, 1e-9),
    ]

    # s(ν) in the centralizer of ρ: ρ⊥ = s(ν)^⊥ ρ s(ν)^⊥
    a_blocks, c_blocks, expected = [], [], []
    for m in alg.block_dims:
        k = int(rng.integers(1, m + 1)) if m > 1 else 1
        p = smp.random_projection(m, k, rng)
        q = np.eye(m) - p
        c = p @ smp.random_density(m, rng) @ p + q @ smp.random_density(m, rng) @ q
        a_blocks.append(p @ smp.random_density(m, rng) @ p)
        c_blocks.append(c)
        expected.append(q @ c @ q)
    nu_c, rho_c = PositiveForm(alg, a_blocks, policy), PositiveForm(alg, c_blocks, policy)
    checks += [
        _close("centralizer_support_perp", _blocks_norm(rho_perp(nu_c, rho_c, policy).densities, expected), 1e-9),
        _flag("centralizer_support_commutes", centralizer_contains(rho_c, nu_c.support(policy), policy)),
    ]

    # maximality against σ ≤ ρ with σ ⟂ ν, scaled onto the boundary
    worst = 0.0
    for _ in range(10):
        sigma = []
        for a, c in zip(nu.densities, faithful_rho.densities):
            q = np.eye(a.shape[0]) - la.support_proj(a, "left", policy)
            G = smp.ginibre(a.shape[0], a.shape[0], rng)
            B = la.hermitian_part(q @ G @ la.dagger(G) @ q)
            ic = la.psd_power(c, -0.5, policy)
            top = np.linalg.eigvalsh(la.hermitian_part(ic @ B @ ic))[-1]
            sigma.append(B / top if top > 1e-12 else np.zeros_like(B))
        for s, r in zip(sigma, by_schur.densities):
            worst = max(worst, -np.linalg.eigvalsh(la.hermitian_part(r - s))[0])
    checks.append(_close("rho_perp_maximal", max(0.0, worst), 1e-8 * scale))

    # attaining vectors: unique without ρ⊥, a phase family with it
    xi_nu_f = cone_rep(std, faithful_nu)
    xi_rho = cone_rep(std, rho)
    psi0 = optimal_vector(std, faithful_nu, rho)
    found = HSVector(alg, [r @ maximize_unitary_alignment(la.dagger(x) @ r, rng).unitary
                           for x, r in zip(xi_nu_f.blocks, xi_rho.blocks)])
    checks.append(_close("attainer_unique_without_perp", (found - psi0).norm(), 1e-7 * scale))

    faithful_perp = rho_perp(nu, faithful_rho, policy)
    if faithful_perp.norm_1 > 1e-6:
        d = bures_distance(nu, faithful_rho, policy).distance
        xi_nu = cone_rep(std, nu)
        fam = attaining_phase_family(std, nu, faithful_rho, [0.0, np.pi])
        checks += [
            _close("phase_family_attains", max(abs((p - xi_nu).norm() ** 2 - d ** 2) for p in fam), 1e-8 * scale),
            _flag("phase_family_in_fibre", all(fibre_contains(p, faithful_rho) for p in fam)),
            _flag("phase_family_distinct", (fam[0] - fam[1]).norm() > 1e-6),
        ]

    # commuting pairs with faithful ρ: s(ν) commutes with the density of ρ
    nu_k, rho_k = smp.commuting_pair(alg, rng, faithful_rho=True)
    checks.append(_close("commuting_support_in_centralizer", max(
        la.op_norm(s @ c - c @ s) for s, c in zip(nu_k.support(policy).blocks, rho_k.densities)), 1e-9))

    # g-functional
    G = g_functional(std, nu, rho, side="nu")
    G_rho = g_functional(std, nu, rho, side="rho")
    worst_cs = 0.0
    for _ in range(20):
        x, y = smp.random_element(alg, rng), smp.random_element(alg, rng)
        g = sum(np.trace(Gi @ zi) for Gi, zi in zip(G.blocks, (y.adjoint() @ x).blocks))
        bound = (evaluate(pair.nu_min, y.adjoint() @ y).real * evaluate(pair.rho_min, x.adjoint() @ x).real)
        worst_cs = max(worst_cs, (abs(g) ** 2 - bound) / max(1.0, (x.op_norm() * y.op_norm()) ** 2))
    checks += [
        _close("g_unit_value", abs(sum(np.trace(b) for b in G.blocks) - f), 1e-9 * scale),
        _close("g_cauchy_schwarz", max(0.0, worst_cs), 1e-9 * scale ** 2),
        _close("g_two_sided", _blocks_norm(G.blocks, G_rho.blocks), 1e-9 * scale),
    ]
    return checks


# ------------------------------------------------------------
# 🔁 commute: commutation, skew information, conjugated forms
# ------------------------------------------------------------
def _commute_trial(rng: np.random.Generator, dims: Sequence[int], policy: TolerancePolicy) -> list[Check]:
    alg = smp.random_algebra(dims, rng)
    std = smp.random_standard_form(alg, rng, policy=policy)
    commuting = bool(rng.random() < 0.5)
    nu, rho = smp.commuting_pair(alg, rng) if commuting else (smp.random_form(alg, rng), smp.random_form(alg, rng))

    verdict = commutes(std, nu, rho)
    j = skew_information(std, nu, rho)
    others = [skew_information(smp.random_standard_form(alg, rng, policy=policy), nu, rho) for _ in range(2)]
    checks = [
        _flag("commutes_symmetric", verdict == commutes(std, rho, nu)),
        _close("skew_nonnegative", max(0.0, -j), 1e-12),
        _close("skew_bounded", max(0.0, j - 2 * nu.norm_1), 1e-12),
        _close("skew_omega_independent", max(abs(j - o) for o in others), 1e-8),
    ]
    if commuting:
        checks += [_flag("commuting_pair_detected", verdict), _close("skew_vanishes_when_commuting", abs(j), 1e-10)]

    rho_f = smp.random_form(alg, rng, faithful=True, floor=0.05)
    x = smp.random_positive_invertible(alg, rng, spread=0.5)
    spectral = AlgElement(alg, [c + 0.5 * np.eye(c.shape[0]) for c in rho_f.densities])
    checks.append(_close("conjugated_vector_is_optimal",
                         (conjugated_form_vector(std, rho_f, x)
                          - optimal_vector(std, rho_f, conjugate_form(rho_f, x, policy))).norm(),
                         1e-8 * max(1.0, x.op_norm() ** 2)))
    for name, elem in (("conjugation_by_random", x), ("conjugation_by_spectral", spectral)):
        conj = conjugate_form(rho_f, elem, policy)
        checks.append(_flag(name, commutes(std, conj, rho_f) == centralizer_contains(rho_f, elem, policy)))
    checks.append(_flag("spectral_conjugation_commutes", commutes(std, conjugate_form(rho_f, spectral, policy), rho_f)))
    return checks


# ------------------------------------------------------------
# 🧵 fibre: relative fibre and the extension criterion
# ------------------------------------------------------------
def _fibre_trial(rng: np.random.Generator, dims: Sequence[int], policy: TolerancePolicy) -> list[Check]:
    alg = smp.random_algebra(dims, rng)
    std = smp.random_standard_form(alg, rng, policy=policy)
    faithful = bool(rng.random() < 0.3)
    nu = smp.random_form(alg, rng, faithful=True, floor=0.05) if faithful else smp.random_form(alg, rng)
    rho = smp.random_form(alg, rng)
    scale = max(1.0, nu.norm_1 + rho.norm_1)
    d = bures_distance(nu, rho, policy).distance
    xi_nu = cone_rep(std, nu)
    chi = fibre_sample(nu, rng, policy)
    survey = relative_fibre_survey(std, nu, rho, samples=5, seed=int(rng.integers(2 ** 31)))
    at_support = relfaser_check(std, nu, rho, support_right(xi_nu, policy))

    rejects = False
    try:
        relfaser_check(std, nu, rho, 2.0 * alg.identity())
    except BadIsometry:
        rejects = True

    checks = [
        _close("fibre_distance_at_cone_rep", abs(distance_to_fibre(xi_nu, rho, policy) ** 2 - d ** 2), 1e-8 * scale),
        _close("fibre_distance_on_orbit", abs(distance_to_fibre(chi, rho, policy) ** 2 - d ** 2), 1e-8 * scale),
        _close("fibre_distance_to_own_form", distance_to_fibre(chi, vector_form(chi, policy), policy) ** 2,
               1e-8 * scale),
        _flag("survey_criteria_agree", survey.criteria_agree),
        _close("survey_all_in_relative_fibre", 1.0 - survey.in_fraction, 0.0),
        _close("survey_distance_excess", max(0.0, survey.max_excess), 1e-8),
        _close("survey_orbit_deficit", abs(survey.max_orbit_deficit), 1e-8 * scale),
        _flag("extension_at_support", at_support.in_relative_fibre and at_support.w is not None),
        _flag("bad_isometry_rejected", rejects),
    ]

    # synthetic negative on a truncation instance, where p′(ψ₀) − s(h) has rank one
    t_alg, t_nu, t_rho, _ = build_truncation_instance(4, 0.5, rng=rng, policy=policy)
    t_std = StandardForm.default(t_alg, policy)
    U = support_right(cone_rep(t_std, t_nu), policy)
    genuine = relfaser_check(t_std, t_nu, t_rho, U)
    starved = relfaser_check(t_std, t_nu, t_rho, U, complement_rank_override=0)
    checks += [
        _flag("truncation_instance_in_fibre", genuine.in_relative_fibre),
        _flag("synthetic_negative", starved.synthetic and not starved.in_relative_fibre and max(starved.rank_gap) > 0),
    ]
    return checks


# ------------------------------------------------------------
# 🔎 variational: the infimum formula
# ------------------------------------------------------------
def _variational_trial(rng: np.random.Generator, dims: Sequence[int], policy: TolerancePolicy) -> list[Check]:
    alg = smp.random_algebra(dims, rng)
    nu = smp.random_form(alg, rng, faithful=True, floor=0.1)
    rho = smp.random_form(alg, rng, faithful=True, floor=0.1)
    rho_any = smp.random_form(alg, rng)
    scale = max(1.0, nu.norm_1 + rho.norm_1)
    f = fidelity(nu, rho, policy)

    analytic = variational_fidelity(nu, rho, "analytic", policy)
    singular_target = variational_fidelity(nu, rho_any, "analytic", policy)
    iterative = variational_fidelity(nu, rho, "iterative", policy)
    worst = 0.0
    for _ in range(20):
        x = smp.random_positive_invertible(alg, rng, spread=float(rng.uniform(0.2, 2.0)))
        x_inv = AlgElement(alg, [la.cholesky_inverse(b) for b in x.blocks])
        worst = max(worst, f ** 2 - evaluate(nu, x).real * evaluate(rho, x_inv).real)

    rejects = False
    deficient = smp.random_form(alg, rng, rank_deficient=True)
    if not deficient.is_faithful(policy):
        try:
            variational_fidelity(deficient, rho, "analytic", policy)
        except SingularDensity:
            rejects = True
    else:
        rejects = True

    return [
        _close("analytic_matches_fidelity", abs(analytic.value - f), 1e-9 * scale),
        _close("analytic_with_singular_target", abs(singular_target.value - fidelity(nu, rho_any, policy)),
               1e-9 * scale),
        _flag("analytic_argmin_positive", analytic.argmin.is_positive(policy)),
        _close("variational_inequality", max(0.0, worst), 1e-10 * scale ** 2),
        _close("iterative_reaches_fidelity", abs(iterative.value - f), 1e-6),
        _flag("analytic_needs_faithful_nu", rejects),
    ]


# ============================================================
# 🗺️ Suite map and runner
# ============================================================
Trial = Callable[[np.random.Generator, Sequence[int], TolerancePolicy], list[Check]]

SUITE_MAP: dict[str, Trial] = {
    "polar": _polar_trial,
    "cone": _cone_trial,
    "bures": _bures_trial,
    "perp": _perp_trial,
    "commute": _commute_trial,
    "fibre": _fibre_trial,
    "variational": _variational_trial,
}


@dataclass
class PropertyResult:
    name: str
    worst_residual: float = 0.0
    tolerance: float = 0.0
    worst_trial: int | None = None
    failures: int = 0
    _ratio: float = field(default=-1.0, repr=False)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, check: Check, trial: int) -> None:
        if not check.passed:
            self.failures += 1
        ratio = check.residual / check.tol if check.tol > 0 else (np.inf if check.residual > 0 else 0.0)
        if ratio > self._ratio:
            self._ratio = ratio
            self.worst_residual, self.tolerance, self.worst_trial = check.residual, check.tol, trial

    def as_dict(self) -> dict:
        return {
            "worst_residual": self.worst_residual,
            "tolerance": self.tolerance,
            "worst_trial": self.worst_trial,
            "failures": self.failures,
            "passed": self.passed,
        }


@dataclass
class SuiteResult:
    suite: str
    trials: int
    seed: int
    dims: tuple[int, ...]
    properties: dict[str, PropertyResult] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.properties.values())

    @property
    def worst_residual(self) -> float:
        return max((p.worst_residual for p in self.properties.values()), default=0.0)

    def as_dict(self) -> dict:
        out = {
            "suite": self.suite,
            "trials": self.trials,
            "seed": self.seed,
            "dims": list(self.dims),
            "passed": self.passed,
            "properties": {name: p.as_dict() for name, p in sorted(self.properties.items())},
        }
        if self.trials == 0:
            out["note"] = "0 trials"
        return out


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """The generator of one trial; (seed, trial) reproduces any reported worst case."""
    return np.random.default_rng([seed, trial])


def run_suite(name: str, trials: int, dims: Sequence[int], seed: int,
              policy: TolerancePolicy = DEFAULT_POLICY) -> SuiteResult:
    if name not in SUITE_MAP:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {', '.join(SUITE_MAP)}")
    if trials < 0:
        raise DomainError("trials must be ≥ 0")
    if not dims or any(int(d) < 1 for d in dims):
        raise DomainError(f"dims must be positive, got {list(dims)}")

    trial_fn = SUITE_MAP[name]
    result = SuiteResult(name, trials, seed, tuple(int(d) for d in dims))
    for t in range(trials):
        try:
            checks = trial_fn(trial_rng(seed, t), result.dims, policy)
        except BuresError as e:
            checks = [_flag(f"raised_{type(e).__name__}", False)]
        for check in checks:
            result.properties.setdefault(check.name, PropertyResult(check.name)).record(check, t)
    return result
