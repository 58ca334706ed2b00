import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bures_geom.algebra.blocks import Algebra
from bures_geom.bures.core import bures_distance
from bures_geom.errors import BadIsometry, InternalInconsistency
from bures_geom.fibre import analysis
from bures_geom.fibre.analysis import (
    distance_to_fibre,
    orbit_deficit,
    relative_fibre_survey,
    relfaser_check,
    sample_partial_isometry,
)
from bures_geom.io.schema import load_form
from bures_geom.properties import sampling as smp
from bures_geom.standard.form import StandardForm, cone_rep, fibre_sample, right_act, support_right, vector_form
from bures_geom.sweep.truncation import build_truncation_instance

seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.lists(st.integers(1, 3), min_size=1, max_size=2)


@given(seed=seeds, block_dims=dims)
def test_distance_to_fibre_is_constant_on_the_fibre(seed, block_dims):
    rng = np.random.default_rng(seed)
    alg = Algebra(block_dims)
    std = smp.random_standard_form(alg, rng)
    nu, rho = smp.random_form(alg, rng), smp.random_form(alg, rng)
    d = bures_distance(nu, rho).distance
    assert distance_to_fibre(cone_rep(std, nu), rho) ** 2 == pytest.approx(d ** 2, abs=1e-8)
    chi = fibre_sample(nu, rng)
    assert distance_to_fibre(chi, rho) ** 2 == pytest.approx(d ** 2, abs=1e-8)
    assert distance_to_fibre(chi, vector_form(chi)) ** 2 <= 1e-8


@given(seed=seeds, block_dims=dims)
def test_every_fibre_vector_is_in_the_relative_fibre(seed, block_dims):
    rng = np.random.default_rng(seed)
    alg = Algebra(block_dims)
    std = smp.random_standard_form(alg, rng)
    nu, rho = smp.random_form(alg, rng), smp.random_form(alg, rng)
    survey = relative_fibre_survey(std, nu, rho, samples=5, seed=seed)
    assert survey.criteria_agree
    assert survey.in_fraction == 1.0
    assert survey.disagreements == 0
    assert survey.max_excess < 1e-8
    assert abs(survey.max_orbit_deficit) <= 1e-8


def test_sampled_isometry_has_the_right_range(rng):
    alg = Algebra([3])
    nu = smp.random_form(alg, rng, rank_deficient=True)
    xi_nu = cone_rep(StandardForm.default(alg), nu)
    U = sample_partial_isometry(xi_nu, rng)
    assert (U @ U.adjoint()).allclose(support_right(xi_nu))
    assert orbit_deficit(xi_nu, right_act(U, xi_nu)) == pytest.approx(0.0, abs=1e-10)


def test_relfaser_at_the_support_builds_the_extension(rng):
    alg = Algebra([2, 3])
    std = smp.random_standard_form(alg, rng)
    nu, rho = smp.random_form(alg, rng), smp.random_form(alg, rng)
    U = support_right(cone_rep(std, nu))
    report = relfaser_check(std, nu, rho, U)
    assert report.in_relative_fibre
    assert not report.synthetic
    assert report.w is not None
    assert all(g <= 0 for g in report.rank_gap)
    assert report.as_dict()["extension_built"]


def test_relfaser_rejects_a_non_isometry(rng):
    alg = Algebra([2])
    std = StandardForm.default(alg)
    nu, rho = smp.random_form(alg, rng), smp.random_form(alg, rng)
    with pytest.raises(BadIsometry):
        relfaser_check(std, nu, rho, 2.0 * alg.identity())


def test_starved_complement_is_a_synthetic_negative():
    alg, nu, rho, _ = build_truncation_instance(4, 0.5)
    std = StandardForm.default(alg)
    U = support_right(cone_rep(std, nu))
    assert relfaser_check(std, nu, rho, U).in_relative_fibre
    starved = relfaser_check(std, nu, rho, U, complement_rank_override=0)
    assert starved.synthetic
    assert not starved.in_relative_fibre
    assert starved.rank_gap == (1,)
    assert starved.w is None
    roomy = relfaser_check(std, nu, rho, U, complement_rank_override=[4])
    assert roomy.synthetic and roomy.in_relative_fibre


def test_orthogonal_pair_has_full_distance(qubit, samples):
    alg, nu, _ = qubit
    sigma = load_form(samples / "orthogonal_qubit.json", alg)
    chi = cone_rep(StandardForm.default(alg), nu)
    assert distance_to_fibre(chi, sigma) == pytest.approx(np.sqrt(2))


def test_survey_counts_disagreeing_samples_and_keeps_their_distances(rng, monkeypatch):
    alg = Algebra([2])
    std = StandardForm.default(alg)
    nu, rho = smp.random_form(alg, rng), smp.random_form(alg, rng)

    def disagree(*args, **kwargs):
        raise InternalInconsistency("criteria disagree")

    monkeypatch.setattr(analysis, "_membership", disagree)
    survey = relative_fibre_survey(std, nu, rho, samples=4, seed=1)
    assert survey.disagreements == 4
    assert not survey.criteria_agree
    assert survey.in_fraction == 0.0
    assert abs(survey.max_excess) < 1e-8
    assert abs(survey.max_orbit_deficit) <= 1e-8
    assert survey.as_dict()["disagreements"] == 4
