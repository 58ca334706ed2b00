# ============================================================
# ⚙️ Settings
# One BaseSettings object for the whole workbench; values can be
# overridden through BURES_* environment variables or a .env file.
# ============================================================

from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from .kernel.linalg import TolerancePolicy

# ------------------------------------------------------------
# 🌐 Paths Setup
# ------------------------------------------------------------
ROOT = Path(__file__).resolve().parents[1]
DATA_DIR = ROOT / "data"
RUN_LOG = DATA_DIR / "run_log.csv"
SAMPLES_DIR = DATA_DIR / "samples"


class Settings(BaseSettings):
    APP_NAME: str = "Bures Geometry Workbench"
    DEBUG: bool = False

    TOL_RANK: float = Field(default=1e-10, gt=0)
    TOL_ABS: float = Field(default=1e-14, gt=0)
    SEED: int = 20240601

    SWEEP_WORKERS: int = Field(default=4, ge=1)
    SWEEP_MAX_N: int = Field(default=512, ge=2)

    RUN_LOG_PATH: Path = RUN_LOG
    SAMPLES_DIR: Path = SAMPLES_DIR

    model_config = SettingsConfigDict(
        env_prefix="BURES_",
        env_file=Path(__file__).resolve().parent / ".env",
        extra="ignore",
    )

    def tolerance(self, rel_rank_cutoff: float | None = None, abs_floor: float | None = None) -> TolerancePolicy:
        """Tolerance policy from the settings, with optional per-call overrides."""
        return TolerancePolicy(
            rel_rank_cutoff=rel_rank_cutoff if rel_rank_cutoff is not None else self.TOL_RANK,
            abs_floor=abs_floor if abs_floor is not None else self.TOL_ABS,
        )


settings = Settings()
