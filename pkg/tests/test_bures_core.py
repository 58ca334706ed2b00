import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bures_geom.algebra.blocks import AlgElement, Algebra, PositiveForm, conjugate_form, evaluate
from bures_geom.bures.core import (
    BuresReport,
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
from bures_geom.errors import InternalInconsistency, NotFaithful, NotPositive, SingularDensity
from bures_geom.kernel import linalg as la
from bures_geom.properties import sampling as smp
from bures_geom.properties.oracles import brute_force_fidelity
from bures_geom.standard.form import StandardForm, cone_rep, fibre_contains, fibre_sample
from bures_geom.standard.overlap import build_overlap, is_positive

seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.lists(st.integers(1, 4), min_size=1, max_size=2)

QUBIT = Algebra([2])


def form(*diag):
    return PositiveForm(QUBIT, [np.diag(diag)])


# ------------------------------------------------------------
# closed values on the qubit
# ------------------------------------------------------------
def test_qubit_pair(qubit):
    _, nu, rho = qubit
    report = bures_distance(nu, rho)
    assert report.fidelity == pytest.approx(1 / np.sqrt(2), abs=1e-12)
    assert report.distance == pytest.approx(np.sqrt(2 - np.sqrt(2)), abs=1e-12)
    assert report.as_dict()["transition_probability"] == pytest.approx(0.5)
    assert bures_angle(nu, rho) == pytest.approx(np.pi / 4)


def test_identical_and_orthogonal_forms():
    nu, sigma = form(1.0, 0.0), form(0.0, 1.0)
    assert bures_distance(nu, nu).distance == pytest.approx(0.0, abs=1e-7)
    assert bures_distance(nu, sigma).distance == pytest.approx(np.sqrt(2))
    assert bures_angle(nu, sigma) == pytest.approx(np.pi / 2)
    assert np.isnan(bures_angle(nu, PositiveForm.zero(QUBIT)))


def test_report_check_flags_a_broken_identity():
    with pytest.raises(InternalInconsistency):
        BuresReport(fidelity=0.9, distance=1.0, nu_norm=1.0, rho_norm=1.0).check()


def test_qubit_orthogonal_parts(qubit):
    _, nu, rho = qubit
    expected = np.diag([0.0, 0.5])
    assert np.allclose(rho_perp(nu, rho).densities[0], expected)
    assert np.allclose(rho_perp(nu, rho, method="schur").densities[0], expected)
    assert nu_perp(nu, rho).norm_1 == pytest.approx(0.0, abs=1e-12)
    pair = minimal_pair(nu, rho)
    assert np.allclose(pair.rho_min.densities[0], np.diag([0.5, 0.0]))
    assert pair.as_dict()["rho_perp_norm"] == pytest.approx(0.5)


def test_orthogonal_forms_are_their_own_perp():
    nu, sigma = form(1.0, 0.0), form(0.0, 1.0)
    assert np.allclose(rho_perp(nu, sigma).densities[0], sigma.densities[0])


def test_schur_route_needs_faithful_rho():
    with pytest.raises(NotFaithful):
        rho_perp(form(1.0, 0.0), form(0.0, 1.0), method="schur")


# ------------------------------------------------------------
# fidelity and distance on random pairs
# ------------------------------------------------------------
@given(seed=seeds, block_dims=dims)
def test_fidelity_matches_unitary_search(seed, block_dims):
    rng = np.random.default_rng(seed)
    alg = Algebra(block_dims)
    nu, rho = smp.random_form(alg, rng), smp.random_form(alg, rng)
    assert fidelity(nu, rho) == pytest.approx(brute_force_fidelity(nu, rho, rng), abs=1e-6)
    assert fidelity(nu, rho) == pytest.approx(fidelity(rho, nu), abs=1e-10)


@given(seed=seeds, block_dims=dims)
def test_optimal_vector_attains_the_distance(seed, block_dims):
    rng = np.random.default_rng(seed)
    alg = Algebra(block_dims)
    std = smp.random_standard_form(alg, rng)
    nu, rho = smp.random_form(alg, rng), smp.random_form(alg, rng)
    psi0 = optimal_vector(std, nu, rho)
    xi_nu = cone_rep(std, nu)
    d = bures_distance(nu, rho).distance
    assert fibre_contains(psi0, rho)
    assert (psi0 - xi_nu).norm() ** 2 == pytest.approx(d ** 2, abs=1e-8)
    assert is_positive(build_overlap(psi0, xi_nu))
    seeded = optimal_vector(std, nu, rho, seed_vector=fibre_sample(rho, rng))
    assert (seeded - psi0).norm() <= 1e-8


@given(seed=seeds, block_dims=dims)
def test_minimal_pair_identities(seed, block_dims):
    rng = np.random.default_rng(seed)
    alg = Algebra(block_dims)
    nu, rho = smp.random_form(alg, rng), smp.random_form(alg, rng)
    pair = minimal_pair(nu, rho)
    f, f_min = fidelity(nu, rho), fidelity(pair.nu_min, pair.rho_min)
    assert f_min ** 2 == pytest.approx(f ** 2, abs=1e-9)
    d2 = bures_distance(nu, rho).distance ** 2
    d2_min = bures_distance(pair.nu_min, pair.rho_min).distance ** 2
    d2_perp = bures_distance(pair.nu_perp, pair.rho_perp).distance ** 2
    assert d2 == pytest.approx(d2_min + d2_perp, abs=1e-8)
    assert pair.rho_perp.leq(rho, tol=1e-9)


def test_schur_and_support_routes_agree(rng):
    alg = Algebra([3, 2])
    for _ in range(5):
        nu = smp.random_form(alg, rng, rank_deficient=True)
        rho = smp.random_form(alg, rng, faithful=True, floor=0.05)
        for a, b in zip(rho_perp(nu, rho).densities, rho_perp(nu, rho, method="schur").densities):
            assert la.op_norm(a - b) <= 1e-9


def test_faithful_nu_leaves_no_perp(rng):
    alg = Algebra([3])
    nu = smp.random_form(alg, rng, faithful=True, floor=0.05)
    rho = smp.random_form(alg, rng)
    assert rho_perp(nu, rho).norm_1 <= 1e-9


def test_phase_family_attains_and_differs(rng):
    alg = Algebra([3])
    std = StandardForm.default(alg)
    nu = PositiveForm(alg, [np.diag([0.6, 0.4, 0.0])])
    rho = smp.random_form(alg, rng, faithful=True, floor=0.05)
    d = bures_distance(nu, rho).distance
    xi_nu = cone_rep(std, nu)
    family = attaining_phase_family(std, nu, rho, [0.0, np.pi / 2, np.pi])
    for psi in family:
        assert fibre_contains(psi, rho)
        assert (psi - xi_nu).norm() ** 2 == pytest.approx(d ** 2, abs=1e-8)
    assert (family[0] - family[2]).norm() > 1e-3


def test_superadditivity_and_joint_concavity(rng):
    alg = Algebra([2, 2])
    nu, rho = smp.random_form(alg, rng), smp.random_form(alg, rng)
    mu, sigma = smp.split_below(nu, rng), smp.split_below(rho, rng)
    f = fidelity(nu, rho)
    assert fidelity(mu, sigma) + fidelity(nu.subtract(mu), rho.subtract(sigma)) <= f + 1e-9
    nu2, rho2 = smp.random_form(alg, rng), smp.random_form(alg, rng)
    mixed = fidelity(0.3 * nu + 0.7 * nu2, 0.3 * rho + 0.7 * rho2)
    assert mixed >= 0.3 * f + 0.7 * fidelity(nu2, rho2) - 1e-9


# ------------------------------------------------------------
# variational formula
# ------------------------------------------------------------
def test_variational_modes():
    alg = Algebra([2])
    nu = PositiveForm(alg, [np.diag([0.7, 0.3])])
    rho = PositiveForm(alg, [[[0.4, 0.1], [0.1, 0.6]]])
    f = fidelity(nu, rho)
    analytic = variational_fidelity(nu, rho, "analytic")
    assert analytic.value == pytest.approx(f, abs=1e-9)
    assert analytic.argmin.is_positive()
    iterative = variational_fidelity(nu, rho, "iterative")
    assert iterative.value == pytest.approx(f, abs=1e-6)
    assert iterative.value >= f - 1e-9
    assert iterative.iterations > 0


def test_variational_with_singular_rho(qubit):
    _, nu, rho = qubit
    assert variational_fidelity(rho, nu, "analytic").value == pytest.approx(1 / np.sqrt(2), abs=1e-9)


def test_variational_inequality(rng):
    alg = Algebra([3])
    nu, rho = smp.random_form(alg, rng), smp.random_form(alg, rng)
    f = fidelity(nu, rho)
    for _ in range(50):
        x = smp.random_positive_invertible(alg, rng)
        x_inv = AlgElement(alg, [la.cholesky_inverse(b) for b in x.blocks])
        assert evaluate(nu, x).real * evaluate(rho, x_inv).real >= f ** 2 - 1e-10


def test_variational_rejects_singular_nu_and_unknown_mode(qubit):
    _, nu, rho = qubit
    with pytest.raises(SingularDensity):
        variational_fidelity(nu, rho, "analytic")
    with pytest.raises(ValueError):
        variational_fidelity(rho, rho, "newton")


# ------------------------------------------------------------
# g-functional, commutation, skew information
# ------------------------------------------------------------
def test_g_functional_on_qubit(qubit):
    alg, nu, rho = qubit
    std = StandardForm.default(alg)
    G = g_functional(std, nu, rho)
    assert np.trace(G.blocks[0]).real == pytest.approx(1 / np.sqrt(2), abs=1e-12)
    assert G.allclose(g_functional(std, nu, rho, side="rho"), atol=1e-9)


def test_g_functional_sides_agree(rng):
    alg = Algebra([3, 2])
    std = smp.random_standard_form(alg, rng)
    nu, rho = smp.random_form(alg, rng), smp.random_form(alg, rng)
    G = g_functional(std, nu, rho)
    assert G.allclose(g_functional(std, nu, rho, side="rho"), atol=1e-9)
    assert sum(np.trace(b) for b in G.blocks).real == pytest.approx(fidelity(nu, rho), abs=1e-9)


def test_commutation(qubit, rng):
    alg, nu, rho = qubit
    std = StandardForm.default(alg)
    assert commutes(std, nu, rho)
    assert skew_information(std, nu, rho) == pytest.approx(0.0, abs=1e-10)
    tilted = PositiveForm(alg, [[[0.5, 0.25], [0.25, 0.5]]])
    assert not commutes(std, nu, tilted)
    assert not commutes(std, tilted, nu)
    assert skew_information(std, nu, tilted) > 1e-6


@given(seed=seeds, block_dims=dims)
def test_commuting_pairs_and_skew_independence_of_omega(seed, block_dims):
    rng = np.random.default_rng(seed)
    alg = Algebra(block_dims)
    nu, rho = smp.commuting_pair(alg, rng)
    std = smp.random_standard_form(alg, rng)
    assert commutes(std, nu, rho) and commutes(std, rho, nu)
    assert skew_information(std, nu, rho) <= 1e-10
    nu, rho = smp.random_form(alg, rng), smp.random_form(alg, rng)
    j = skew_information(std, nu, rho)
    assert 0.0 <= j <= 2 * nu.norm_1 + 1e-12
    other = smp.random_standard_form(alg, rng)
    assert skew_information(other, nu, rho) == pytest.approx(j, abs=1e-8)


def test_conjugated_form_vector(rng):
    alg = Algebra([3])
    std = smp.random_standard_form(alg, rng)
    rho = smp.random_form(alg, rng, faithful=True, floor=0.05)
    x = smp.random_positive_invertible(alg, rng, spread=0.5)
    psi = conjugated_form_vector(std, rho, x)
    assert (psi - optimal_vector(std, rho, conjugate_form(rho, x))).norm() <= 1e-8
    with pytest.raises(NotFaithful):
        conjugated_form_vector(std, smp.random_form(alg, rng, rank_deficient=True), x)
    with pytest.raises(NotPositive):
        conjugated_form_vector(std, rho, -1.0 * x)


# ------------------------------------------------------------
# exactly singular densities in a rotated basis
# ------------------------------------------------------------
def rotated(alg, spectrum, rng):
    U = la.haar_unitary(len(spectrum), rng)
    return PositiveForm(alg, [U @ np.diag(spectrum) @ la.dagger(U)])


@pytest.mark.parametrize("singular", ["nu", "rho", "both"])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_optimal_vector_with_rotated_singular_densities(singular, n, rng):
    alg = Algebra([n])
    std = smp.random_standard_form(alg, rng)
    spectrum = [0.7, 0.3] + [0.0] * (n - 2) if n > 2 else [1.0, 0.0]
    nu = rotated(alg, spectrum, rng) if singular != "rho" else smp.random_form(alg, rng, faithful=True, floor=0.05)
    rho = rotated(alg, spectrum, rng) if singular != "nu" else smp.random_form(alg, rng, faithful=True, floor=0.05)
    psi0 = optimal_vector(std, nu, rho)
    d = bures_distance(nu, rho).distance
    assert fibre_contains(psi0, rho)
    assert (psi0 - cone_rep(std, nu)).norm() ** 2 == pytest.approx(d ** 2, abs=1e-8)
    assert fidelity(minimal_pair(nu, rho).nu_min, minimal_pair(nu, rho).rho_min) == pytest.approx(
        fidelity(nu, rho), abs=1e-9)


def test_rotated_orthogonal_pair(rng):
    U = la.haar_unitary(2, rng)
    nu = PositiveForm(QUBIT, [U @ np.diag([1.0, 0.0]) @ la.dagger(U)])
    rho = PositiveForm(QUBIT, [U @ np.diag([0.0, 1.0]) @ la.dagger(U)])
    assert fidelity(nu, rho) <= 1e-12
    assert bures_distance(nu, rho).distance == pytest.approx(np.sqrt(2), abs=1e-12)
    assert np.allclose(rho_perp(nu, rho).densities[0], rho.densities[0], atol=1e-12)


def test_variational_with_rotated_singular_rho(rng):
    alg = Algebra([3])
    nu = smp.random_form(alg, rng, faithful=True, floor=0.05)
    rho = rotated(alg, [0.6, 0.4, 0.0], rng)
    assert variational_fidelity(nu, rho, "analytic").value == pytest.approx(fidelity(nu, rho), abs=1e-9)


@pytest.mark.parametrize("eps", [1e-9, 1e-7, 1e-6, 1e-5, 1e-4])
def test_commutation_verdict_near_commuting_pairs(eps):
    std = StandardForm.default(QUBIT)
    nu = form(0.7, 0.3)
    rho = PositiveForm(QUBIT, [[[0.4, eps], [eps, 0.6]]])
    verdict = commutes(std, nu, rho)
    if eps >= 1e-6:
        assert not verdict
    if eps <= 1e-9:
        assert verdict
