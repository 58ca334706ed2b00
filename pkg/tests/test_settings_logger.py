import pandas as pd
import pytest
from pydantic import ValidationError

from bures_geom.settings import Settings
from bures_geom.utils.run_logger import HEADERS, RunLogger


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("BURES_SEED", "7")
    monkeypatch.setenv("BURES_SWEEP_WORKERS", "1")
    s = Settings()
    assert s.SEED == 7 and s.SWEEP_WORKERS == 1
    policy = s.tolerance(rel_rank_cutoff=1e-6)
    assert policy.rel_rank_cutoff == 1e-6
    assert policy.abs_floor == s.TOL_ABS


def test_invalid_tolerance_is_rejected(monkeypatch):
    monkeypatch.setenv("BURES_TOL_RANK", "-1")
    with pytest.raises(ValidationError):
        Settings()


def test_logger_creates_and_appends(tmp_path):
    logger = RunLogger(tmp_path / "log.csv")
    logger.log({"command": "report", "seed": 1, "status": "ok"})
    logger.log({"command": "report", "seed": 2, "status": "failed", "unknown_column": "dropped"})
    df = pd.read_csv(logger.path)
    assert list(df.columns) == HEADERS
    assert len(df) == 2
    assert logger.summary() == {"report": {"runs": 2, "ok_rate": 0.5}}


def test_logger_repairs_a_bad_header(tmp_path):
    path = tmp_path / "log.csv"
    path.write_text("a,b\n1,2\n", encoding="utf-8")
    logger = RunLogger(path)
    with open(path, encoding="utf-8") as f:
        assert f.readline().strip().split(",") == HEADERS
    logger.log({"command": "sweep", "status": "ok"})
    assert logger.summary()["sweep"]["runs"] == 1


def test_echo_is_quiet_unless_verbose_or_red(tmp_path, capsys):
    quiet = RunLogger(tmp_path / "q.csv")
    quiet.echo("[Sweep] hidden")
    quiet.echo("[Sweep] shown", "red")
    err = capsys.readouterr().err
    assert "hidden" not in err and "shown" in err
    RunLogger(tmp_path / "v.csv", verbose=True).echo("[Sweep] visible", "green")
    assert "visible" in capsys.readouterr().err


def test_empty_log_summary(tmp_path):
    assert RunLogger(tmp_path / "e.csv").summary() == {}
