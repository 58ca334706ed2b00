import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bures_geom.errors import NonFiniteInput, NonHermitianInput, NotPositive, ShapeError
from bures_geom.kernel import linalg as la
from bures_geom.properties.sampling import ginibre

seeds = st.integers(min_value=0, max_value=2**32 - 1)
sizes = st.integers(min_value=1, max_value=6)


def low_rank(n, r, rng):
    return ginibre(n, r, rng) @ ginibre(r, n, rng)


@given(seed=seeds, n=sizes, data=st.data())
def test_polar_reconstructs_and_v_star_v_is_support(seed, n, data):
    rng = np.random.default_rng(seed)
    A = low_rank(n, data.draw(st.integers(1, n)), rng)
    V, absA = la.polar_left(A)
    scale = max(1.0, la.op_norm(A))
    assert la.op_norm(V @ absA - A) <= 1e-9 * scale
    assert la.op_norm(la.dagger(V) @ V - la.support_proj(absA)) <= 1e-9
    assert la.nuclear_norm(A) == pytest.approx(np.trace(absA).real, rel=1e-10, abs=1e-12)


@given(seed=seeds, n=sizes, data=st.data())
def test_supports_fix_the_matrix(seed, n, data):
    rng = np.random.default_rng(seed)
    A = low_rank(n, data.draw(st.integers(1, n)), rng)
    scale = max(1.0, la.op_norm(A))
    assert la.op_norm(la.support_proj(A, "left") @ A - A) <= 1e-10 * scale
    assert la.op_norm(A @ la.support_proj(A, "right") - A) <= 1e-10 * scale


@given(seed=seeds, n=sizes, data=st.data())
def test_pinv_moore_penrose(seed, n, data):
    rng = np.random.default_rng(seed)
    A = low_rank(n, data.draw(st.integers(1, n)), rng)
    P = la.pinv(A)
    k = max(1.0, la.op_norm(A) * la.op_norm(P))
    assert la.op_norm(A @ P @ A - A) <= 1e-9 * k * max(1.0, la.op_norm(A))
    assert la.op_norm(A @ P - la.dagger(A @ P)) <= 1e-9 * k
    assert la.op_norm(P @ A - la.dagger(P @ A)) <= 1e-9 * k


@given(seed=seeds, n=sizes)
def test_sqrt_and_powers(seed, n):
    rng = np.random.default_rng(seed)
    G = ginibre(n, n, rng)
    A = G @ la.dagger(G) + 0.1 * np.eye(n)
    S = la.sqrt_psd(A)
    assert la.op_norm(S @ S - A) <= 1e-9 * la.op_norm(A)
    assert la.op_norm(la.psd_power(A, -0.5) @ S - np.eye(n)) <= 1e-8


def test_psd_power_vanishes_off_support():
    A = np.diag([4.0, 0.0])
    assert np.allclose(la.psd_power(A, -1.0), np.diag([0.25, 0.0]))


def test_power_it_signs_invert(rng):
    G = ginibre(3, 3, rng)
    A = G @ la.dagger(G)
    U = la.power_it(A, 0.7)
    assert la.op_norm(U @ la.power_it(A, 0.7, sign=-1) - np.eye(3)) <= 1e-10


def test_project_psd_clips_roundoff_and_rejects_real_negatives():
    assert la.is_psd(la.project_psd(np.diag([1.0, -1e-14])))
    with pytest.raises(NotPositive):
        la.project_psd(np.diag([1.0, -0.5]))


def test_project_psd_keeps_psd_input_unchanged():
    A = np.diag([1.0, 1e-20])
    assert la.project_psd(A)[1, 1] == 1e-20


def test_validation_errors():
    with pytest.raises(ShapeError):
        la.as_matrix(np.ones(3))
    with pytest.raises(ShapeError):
        la.as_matrix(np.ones((2, 3)), square=True)
    with pytest.raises(NonFiniteInput):
        la.as_matrix([[np.nan]])
    with pytest.raises(NonHermitianInput):
        la.eigh([[0.0, 1.0], [0.0, 0.0]])


def test_rank_policy_cutoff():
    s = np.array([1.0, 1e-5, 1e-12])
    assert la.rank_from_singular_values(s) == 2
    assert la.rank_from_singular_values(s, la.TolerancePolicy(rel_rank_cutoff=1e-4)) == 1
    assert la.numerical_rank(np.zeros((3, 3))) == 0


def test_frechet_exp_adjoint_matches_finite_difference(rng):
    H = la.hermitian_part(ginibre(3, 3, rng))
    A = la.hermitian_part(ginibre(3, 3, rng))
    E = la.hermitian_part(ginibre(3, 3, rng))
    G = la.frechet_exp_adjoint(H, A)
    from scipy.linalg import expm

    t = 1e-6
    numeric = (np.trace(A @ expm(H + t * E)) - np.trace(A @ expm(H - t * E))).real / (2 * t)
    assert np.trace(G @ E).real == pytest.approx(numeric, rel=1e-6, abs=1e-8)


@pytest.mark.parametrize("n", [1, 2, 5])
def test_haar_unitary_is_unitary(n, rng):
    U = la.haar_unitary(n, rng)
    assert la.op_norm(la.dagger(U) @ U - np.eye(n)) <= 1e-12


def test_cholesky_inverse_and_definiteness():
    A = np.array([[2.0, 0.5], [0.5, 1.0]])
    assert np.allclose(la.cholesky_inverse(A) @ A, np.eye(2))
    assert la.is_positive_definite(A)
    assert not la.is_positive_definite(np.diag([1.0, 0.0]))


def test_sqrt_drops_roundoff_eigenvalues(rng):
    U = la.haar_unitary(3, rng)
    A = U @ np.diag([1.0, 1e-17, 0.0]) @ la.dagger(U)
    S = la.sqrt_psd(A)
    assert la.numerical_rank(S) == 1
    assert la.op_norm(S @ S - A) <= 1e-12
