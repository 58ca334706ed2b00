# ============================================================
# 🖥️ Bures Geometry Workbench: command line
# report | sweep | properties | membership | log
# JSON/CSV results go to stdout (or --out); progress and
# errors go to stderr through the run logger.
# ============================================================

import argparse
import json
import math
from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import ValidationError

from . import __version__
from .bures.core import (
    bures_angle,
    bures_distance,
    commutes,
    g_functional,
    minimal_pair,
    skew_information,
)
from .errors import BuresError, ParseError
from .fibre.analysis import relative_fibre_survey, relfaser_check
from .io.schema import dump_blockwise, dump_form, load_algebra, load_form, load_vector
from .kernel.linalg import TolerancePolicy
from .properties.suites import SUITE_MAP, run_suite
from .settings import settings
from .standard.form import StandardForm, cone_rep, support_right
from .sweep.truncation import rows_frame, rows_to_csv, sweep_rows
from .utils.files import tail_lines, write_text
from .utils.run_logger import RunLogger


# ------------------------------------------------------------
# 🧰 Helpers
# ------------------------------------------------------------
def _jsonable(o):
    if isinstance(o, np.generic):
        return o.item()
    raise TypeError(f"{type(o).__name__} is not JSON serializable")


def _finite_or_none(x: float) -> float | None:
    return None if math.isnan(x) else x


def _dump_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, default=_jsonable) + "\n"


def _dump_csv(records: list[dict]) -> str:
    frame = pd.json_normalize(records)
    return frame.to_csv(index=False, float_format="%.17g", lineterminator="\n")


def _policy(args) -> TolerancePolicy:
    try:
        return settings.tolerance(args.tol_rank, args.tol_abs)
    except ValidationError as e:
        raise ParseError(f"invalid tolerance flags: {e.errors()[0]['msg']}") from None


def _seed(args) -> int:
    return args.seed if args.seed is not None else settings.SEED


def _dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(d) for d in text.split(",") if d.strip())
    except ValueError:
        raise ParseError(f"--dims expects comma-separated integers, got {text!r}") from None
    if not dims:
        raise ParseError("--dims is empty")
    return dims


def _standard_form(args, algebra, policy: TolerancePolicy) -> StandardForm:
    if args.omega is None:
        return StandardForm.default(algebra, policy)
    return StandardForm(load_vector(args.omega, algebra), policy)


def _load_pair(args, policy: TolerancePolicy):
    algebra = load_algebra(args.algebra)
    return algebra, load_form(args.nu, algebra, policy), load_form(args.rho, algebra, policy)


# ============================================================
# 📊 Commands
# Each returns (text, status, worst_residual).
# ============================================================
def cmd_report(args, logger: RunLogger):
    policy = _policy(args)
    algebra, nu, rho = _load_pair(args, policy)
    std = _standard_form(args, algebra, policy)
    logger.echo(f"[Report] 🔎 {algebra} ν={args.nu} ρ={args.rho}", "blue")

    report = bures_distance(nu, rho, policy)
    pair = minimal_pair(nu, rho, policy)
    payload = {
        "algebra": list(algebra.block_dims),
        "bures": report.as_dict(),
        "bures_angle": _finite_or_none(bures_angle(nu, rho, policy)),
        "minimal_pair": {
            **pair.as_dict(),
            "nu_min": dump_form(pair.nu_min),
            "rho_min": dump_form(pair.rho_min),
        },
        "commutes": commutes(std, nu, rho),
        "skew_information": {
            "nu_given_rho": skew_information(std, nu, rho),
            "rho_given_nu": skew_information(std, rho, nu),
        },
        "g_functional": dump_blockwise(g_functional(std, nu, rho)),
    }
    if args.format == "csv":
        flat = {k: v for k, v in payload.items() if k not in ("minimal_pair", "g_functional", "algebra")}
        flat["minimal_pair"] = pair.as_dict()
        return _dump_csv([flat]), "ok", ""
    return _dump_json(payload), "ok", ""


def cmd_sweep(args, logger: RunLogger):
    policy = _policy(args)
    rows = sweep_rows(args.beta, args.n_max, args.a_mode, args.psi, _seed(args),
                      workers=args.workers, policy=policy, logger=logger)
    if args.format == "csv":
        return rows_to_csv(rows), "ok", ""
    return _dump_json({"rows": rows_frame(rows).to_dict(orient="records")}), "ok", ""


def cmd_properties(args, logger: RunLogger):
    policy = _policy(args)
    dims = _dims(args.dims)
    logger.echo(f"[Properties] 🧪 suite={args.suite} trials={args.trials} dims={list(dims)}", "blue")
    result = run_suite(args.suite, args.trials, dims, _seed(args), policy)
    status = "ok" if result.passed else "failed"
    for name, prop in sorted(result.properties.items()):
        if not prop.passed:
            logger.echo(f"[Properties] ❌ {name}: {prop.worst_residual:.3e} > {prop.tolerance:.3e} "
                        f"(trial {prop.worst_trial})", "red")
    if args.format == "csv":
        records = [{"property": name, **p.as_dict()} for name, p in sorted(result.properties.items())]
        return _dump_csv(records), status, result.worst_residual
    return _dump_json(result.as_dict()), status, result.worst_residual


def cmd_membership(args, logger: RunLogger):
    policy = _policy(args)
    algebra, nu, rho = _load_pair(args, policy)
    std = _standard_form(args, algebra, policy)
    seed = _seed(args)
    logger.echo(f"[Membership] 🧵 {args.samples} samples, seed {seed}", "blue")

    survey = relative_fibre_survey(std, nu, rho, samples=args.samples, seed=seed)
    at_support = relfaser_check(std, nu, rho, support_right(cone_rep(std, nu), policy))
    status = "ok" if survey.criteria_agree else "failed"
    payload = {"survey": survey.as_dict(), "at_support": at_support.as_dict()}
    if args.format == "csv":
        return _dump_csv([payload]), status, ""
    return _dump_json(payload), status, ""


def cmd_log(args, logger: RunLogger):
    if args.summary:
        return _dump_json(logger.summary()), "ok", ""
    return "".join(tail_lines(logger.path, args.n)), "ok", ""


COMMANDS = {
    "report": cmd_report,
    "sweep": cmd_sweep,
    "properties": cmd_properties,
    "membership": cmd_membership,
    "log": cmd_log,
}


# ============================================================
# 🧭 Parser
# ============================================================
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bures_geom", description=settings.APP_NAME)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--tol-rank", type=float, default=None, help="relative rank cutoff")
    parser.add_argument("--tol-abs", type=float, default=None, help="absolute singular-value floor")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--out", type=Path, default=None, help="write results here instead of stdout")
    parser.add_argument("--format", choices=["json", "csv"], default="json")
    parser.add_argument("--run-log", type=Path, default=None, help="run log CSV (default from settings)")
    parser.add_argument("-v", "--verbose", action="store_true", help="echo progress on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def pair_args(p):
        p.add_argument("algebra", type=Path)
        p.add_argument("nu", type=Path)
        p.add_argument("rho", type=Path)
        p.add_argument("--omega", type=Path, default=None, help="hs_vector file for Ω")

    pair_args(sub.add_parser("report", help="Bures report, minimal pair, commutation, skew information"))

    p = sub.add_parser("sweep", help="ρ⊥ along the dimension-truncation family")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--a-mode", choices=["projection", "random"], default="projection")
    p.add_argument("--psi", choices=["uniform", "random_phase"], default="uniform")
    p.add_argument("--workers", type=int, default=None)

    p = sub.add_parser("properties", help="run a property suite")
    p.add_argument("--suite", required=True, help=", ".join(SUITE_MAP))
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--dims", default="2,3")

    p = sub.add_parser("membership", help="survey of the relative fibre")
    pair_args(p)
    p.add_argument("--samples", type=int, default=100)

    p = sub.add_parser("log", help="tail of the run log")
    p.add_argument("-n", type=int, default=20)
    p.add_argument("--summary", action="store_true", help="per-command counts and pass rates")
    return parser


# ============================================================
# ▶️ Entry point
# ============================================================
def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logger = RunLogger(args.run_log or settings.RUN_LOG_PATH, verbose=args.verbose or settings.DEBUG)
    seed = _seed(args)
    tag = args.command.capitalize()

    try:
        text, status, residual = COMMANDS[args.command](args, logger)
    except BuresError as e:
        logger.echo(f"[{tag}] ❌ {type(e).__name__}: {e}", "red")
        if args.command != "log":
            logger.log({"command": args.command, "seed": seed, "status": "error",
                        "detail": type(e).__name__})
        return e.exit_code

    write_text(text, args.out)
    if args.command != "log":
        logger.log({"command": args.command, "seed": seed, "status": status,
                    "detail": getattr(args, "suite", ""), "worst_residual": residual})
    return 0 if status == "ok" else 4


if __name__ == "__main__":
    raise SystemExit(main())
