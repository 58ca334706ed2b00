# ============================================================
# 📉 Truncation Sweep
# ρ = Σ_k β^k |ψ_k|² p_k against ν supported on p_ψ^⊥, truncated
# to dimension n; ‖ρ⊥‖₁ = 1/(ψ*c⁻¹ψ) falls like β^n, so the limit
# form has no orthogonal part.
# ============================================================

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Literal

import numpy as np
import pandas as pd

from ..algebra.blocks import Algebra, PositiveForm
from ..bures.core import bures_distance, rho_perp
from ..errors import DomainError, InternalInconsistency
from ..kernel import linalg as la
from ..kernel.linalg import DEFAULT_POLICY, TolerancePolicy
from ..settings import settings
from ..utils.run_logger import RunLogger

AMode = Literal["projection", "random"]
PsiMode = Literal["uniform", "random_phase"]

ORACLE_RTOL = 1e-9
CSV_COLUMNS = ["n", "beta", "gamma", "gamma_oracle", "fidelity", "distance"]


@dataclass(frozen=True)
class SweepRow:
    n: int
    beta: float
    gamma: float
    gamma_oracle: float
    fidelity: float
    distance: float

    def check(self) -> "SweepRow":
        if abs(self.gamma - self.gamma_oracle) > ORACLE_RTOL * max(1.0, self.gamma_oracle):
            raise InternalInconsistency(
                f"n={self.n}: ‖ρ⊥‖₁ = {self.gamma:.17g} but the Schur oracle gives {self.gamma_oracle:.17g}"
            )
        return self


def gamma_oracle(n: int, beta: float) -> float:
    """(1−β)/(β^{−n} − 1), written to stay finite for large n."""
    return float((1 - beta) * beta ** n / -np.expm1(n * np.log(beta)))


def _check_domain(beta: float, n_max: int) -> None:
    if not 0 < beta < 1:
        raise DomainError(f"beta must lie in (0, 1), got {beta}")
    if n_max < 2:
        raise DomainError(f"n_max must be ≥ 2, got {n_max}")
    if n_max > settings.SWEEP_MAX_N:
        raise DomainError(f"n_max {n_max} exceeds SWEEP_MAX_N = {settings.SWEEP_MAX_N}")
    if beta ** n_max < n_max * 1e-290:
        raise DomainError(f"β^n_max = {beta ** n_max:.3e} leaves the double range")


# ------------------------------------------------------------
# 🏗️ Instances
# ------------------------------------------------------------
def _psi(n: int, psi_mode: PsiMode, rng: np.random.Generator) -> np.ndarray:
    if psi_mode == "uniform":
        return np.full(n, 1 / np.sqrt(n), dtype=np.complex128)
    if psi_mode == "random_phase":
        return np.exp(2j * np.pi * rng.random(n)) / np.sqrt(n)
    raise DomainError(f"unknown psi mode {psi_mode!r}")


def build_truncation_instance(n: int, beta: float, a_mode: AMode = "projection",
                              psi_mode: PsiMode = "uniform", rng: np.random.Generator | int | None = None,
                              policy: TolerancePolicy = DEFAULT_POLICY):
    """(algebra, ν, ρ, ψ) at dimension n; ν has support p_ψ^⊥, ρ is faithful."""
    rng = la.as_rng(rng)
    psi = _psi(n, psi_mode, rng)
    k = np.arange(1, n + 1)
    c = np.diag(beta ** k * np.abs(psi) ** 2).astype(np.complex128)

    q = np.eye(n) - np.outer(psi, psi.conj())
    if a_mode == "projection":
        a = q / (n - 1)
    elif a_mode == "random":
        G = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
        a = q @ (G @ la.dagger(G) / n + np.eye(n)) @ q
        a = a / np.trace(a).real
    else:
        raise DomainError(f"unknown a mode {a_mode!r}")

    algebra = Algebra([n])
    return algebra, PositiveForm(algebra, [a], policy), PositiveForm(algebra, [c], policy), psi


def sweep_row(n: int, beta: float, a_mode: AMode = "projection", psi_mode: PsiMode = "uniform",
              seed: int | None = None, policy: TolerancePolicy = DEFAULT_POLICY) -> SweepRow:
    rng = np.random.default_rng([seed if seed is not None else settings.SEED, n])
    _, nu, rho, _ = build_truncation_instance(n, beta, a_mode, psi_mode, rng, policy)
    report = bures_distance(nu, rho, policy)
    return SweepRow(
        n=n,
        beta=beta,
        gamma=rho_perp(nu, rho, policy, method="schur").norm_1,
        gamma_oracle=gamma_oracle(n, beta),
        fidelity=report.fidelity,
        distance=report.distance,
    ).check()


# ============================================================
# ⚙️ Sweep Runner
# ============================================================
class TruncationSweep:
    """Evaluates rows n = 2..n_max on a worker pool; rows land in an append-only list."""

    def __init__(self, beta: float, n_max: int, a_mode: AMode = "projection", psi_mode: PsiMode = "uniform",
                 seed: int | None = None, workers: int | None = None, policy: TolerancePolicy = DEFAULT_POLICY,
                 logger: RunLogger | None = None):
        _check_domain(beta, n_max)
        self.beta = beta
        self.n_max = n_max
        self.a_mode = a_mode
        self.psi_mode = psi_mode
        self.seed = seed if seed is not None else settings.SEED
        self.workers = workers or settings.SWEEP_WORKERS
        self.policy = policy
        self.logger = logger
        self.lock = threading.Lock()
        self._rows: list[SweepRow] = []

    def _echo(self, msg: str, color: str = "white"):
        if self.logger is not None:
            self.logger.echo(msg, color)

    def _run_row(self, n: int) -> None:
        row = sweep_row(n, self.beta, self.a_mode, self.psi_mode, self.seed, self.policy)
        with self.lock:
            self._rows.append(row)
        self._echo(f"[Sweep] 🧩 n={n} γ={row.gamma:.6e} oracle={row.gamma_oracle:.6e}")

    # ============================================================
    # ▶️ Run
    # ============================================================
    def run(self) -> list[SweepRow]:
        self._echo(f"[Sweep] 🚀 β={self.beta} n=2..{self.n_max} ({self.a_mode}, {self.psi_mode}, "
                   f"{self.workers} workers)", "blue")
        sizes = range(2, self.n_max + 1)
        if self.workers == 1:
            for n in sizes:
                self._run_row(n)
        else:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                list(pool.map(self._run_row, sizes))

        rows = sorted(self._rows, key=lambda r: r.n)
        for prev, row in zip(rows, rows[1:]):
            if not row.gamma < prev.gamma:
                raise InternalInconsistency(f"‖ρ⊥‖₁ did not decrease from n={prev.n} to n={row.n}")
        self._echo(f"[Sweep] ✅ {len(rows)} rows", "green")
        return rows


def sweep_rows(beta: float, n_max: int, a_mode: AMode = "projection", psi_mode: PsiMode = "uniform",
               seed: int | None = None, workers: int | None = None,
               policy: TolerancePolicy = DEFAULT_POLICY, logger: RunLogger | None = None) -> list[SweepRow]:
    return TruncationSweep(beta, n_max, a_mode, psi_mode, seed, workers, policy, logger).run()


def rows_frame(rows: list[SweepRow]) -> pd.DataFrame:
    return pd.DataFrame([asdict(r) for r in rows], columns=CSV_COLUMNS)


def rows_to_csv(rows: list[SweepRow]) -> str:
    return rows_frame(rows).to_csv(index=False, float_format="%.17g", lineterminator="\n")
