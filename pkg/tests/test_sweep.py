import numpy as np
import pytest

from bures_geom.errors import DomainError, InternalInconsistency
from bures_geom.sweep.truncation import (
    CSV_COLUMNS,
    SweepRow,
    TruncationSweep,
    build_truncation_instance,
    gamma_oracle,
    rows_to_csv,
    sweep_row,
    sweep_rows,
)


def test_oracle_value_at_ten():
    assert gamma_oracle(10, 0.5) == pytest.approx(0.5 / 1023, rel=1e-12)


@pytest.mark.parametrize("psi_mode", ["uniform", "random_phase"])
@pytest.mark.parametrize("a_mode", ["projection", "random"])
def test_row_matches_oracle(a_mode, psi_mode):
    row = sweep_row(10, 0.5, a_mode, psi_mode, seed=7)
    assert row.gamma == pytest.approx(0.5 / 1023, rel=1e-9)
    assert row.fidelity > 0


def test_instance_shapes():
    alg, nu, rho, psi = build_truncation_instance(5, 0.3)
    assert alg.block_dims == (5,)
    assert nu.norm_1 == pytest.approx(1.0)
    assert abs(np.vdot(psi, nu.densities[0] @ psi)) <= 1e-12
    assert rho.is_faithful()


def test_rows_decrease_and_stay_below_the_bound():
    beta = 0.5
    rows = sweep_rows(beta, 30, workers=3)
    assert [r.n for r in rows] == list(range(2, 31))
    for prev, row in zip(rows, rows[1:]):
        assert row.gamma < prev.gamma
    for row in rows:
        bound = beta ** row.n * (1 - beta) / (1 - beta ** row.n)
        assert row.gamma <= bound * (1 + 1e-9)


def test_gamma_vanishes_numerically():
    rows = {r.n: r for r in sweep_rows(0.5, 60)}
    assert rows[55].gamma < 1e-15
    assert rows[60].gamma < 1e-17


def test_sequential_and_threaded_runs_agree():
    serial = TruncationSweep(0.5, 12, workers=1).run()
    threaded = TruncationSweep(0.5, 12, workers=4).run()
    assert rows_to_csv(serial) == rows_to_csv(threaded)


def test_csv_header_and_precision():
    text = rows_to_csv(sweep_rows(0.5, 4, workers=1))
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 4
    assert text.endswith("\n")


@pytest.mark.parametrize("beta, n_max", [(0.0, 10), (1.0, 10), (1.5, 10), (0.5, 1), (0.5, 10_000), (1e-3, 200)])
def test_domain_guards(beta, n_max):
    with pytest.raises(DomainError):
        sweep_rows(beta, n_max)


def test_row_check_catches_a_wrong_gamma():
    with pytest.raises(InternalInconsistency):
        SweepRow(n=10, beta=0.5, gamma=1e-3, gamma_oracle=gamma_oracle(10, 0.5), fidelity=0.0, distance=0.0).check()
