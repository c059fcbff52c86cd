# =================================================================================================
# File:          config.py
# Project:       Operator SSA Verification
# License:       MIT
# Last Updated:  2026-10-16
#
# Purpose:
#   Tolerance thresholds and runtime knobs. Defaults live in the dataclasses; the environment
#   (optionally a .env file) overrides them; CLI flags override the environment.
#
# Section Map:
#   1) Imports
#   2) Tolerances: named thresholds shared by every numerical check
#   3) Runtime settings: worker count, log level, log file
#   4) Logging: one-time console + optional file handler setup
#
# Configuration Keys:
#   SSA_TOL_PSD, SSA_TOL_SUPPORT, SSA_TOL_MATCH, SSA_TOL_CONVEXITY, SSA_TOL_HERMITICITY,
#   SSA_WORKERS, SSA_LOG_FILE, LOG_LEVEL
# =================================================================================================

# --- Imports --------------------------------------------------------------------------------------
import os
import sys
import logging
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Mapping, Optional

from dotenv import load_dotenv

from .errors import InvalidConfigError

LOG_FORMAT = '[%(asctime)s] [%(levelname)s] - %(message)s'
LOG_DATEFMT = '%Y-%m-%d %H:%M:%S'

# Maps ToleranceConfig fields to their environment keys.
TOLERANCE_ENV_KEYS = {
    'psd_tol': 'SSA_TOL_PSD',
    'support_cutoff_rel': 'SSA_TOL_SUPPORT',
    'match_tol': 'SSA_TOL_MATCH',
    'convexity_tol': 'SSA_TOL_CONVEXITY',
    'hermiticity_tol': 'SSA_TOL_HERMITICITY',
}


# --- Tolerances -----------------------------------------------------------------------------------
@dataclass(frozen=True)
class ToleranceConfig:
    """Named absolute/relative thresholds.

    support_cutoff_rel  eigenvalues at or below this fraction of the largest count as kernel
    psd_tol             PSD slack, scaled by max(1, ||H||_F) through psd_threshold()
    match_tol           identity-match threshold (traces, commutators, leaks)
    convexity_tol       slack allowed on convexity / proof-step margins
    hermiticity_tol     largest hermitization defect accepted as roundoff
    """
    support_cutoff_rel: float = 1e-12
    psd_tol: float = 1e-9
    match_tol: float = 1e-9
    convexity_tol: float = 1e-9
    hermiticity_tol: float = 1e-8

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, (int, float)) or not value > 0:
                raise InvalidConfigError(f"Tolerance '{f.name}' must be strictly positive, got {value!r}.")

    def psd_threshold(self, norm: float = 0.0) -> float:
        """Lowest eigenvalue still accepted as PSD for an operator of Frobenius norm `norm`."""
        return -self.psd_tol * max(1.0, float(norm))

    def with_overrides(self, **overrides: Optional[float]) -> 'ToleranceConfig':
        given = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **given) if given else self

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> 'ToleranceConfig':
        environ = os.environ if environ is None else environ
        values: dict[str, Any] = {}
        for name, key in TOLERANCE_ENV_KEYS.items():
            raw = environ.get(key)
            if raw is None or raw == '':
                continue
            try:
                values[name] = float(raw)
            except ValueError as e:
                raise InvalidConfigError(f"{key}={raw!r} is not a number.") from e
        return cls(**values)


# --- Runtime settings -----------------------------------------------------------------------------
@dataclass(frozen=True)
class RuntimeSettings:
    workers: int = 1
    log_level: str = 'INFO'
    log_file: Optional[Path] = None

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> 'RuntimeSettings':
        environ = os.environ if environ is None else environ
        try:
            workers = int(environ.get('SSA_WORKERS', 1))
        except ValueError as e:
            raise InvalidConfigError(f"SSA_WORKERS={environ.get('SSA_WORKERS')!r} is not an integer.") from e
        if workers < 1:
            raise InvalidConfigError(f"SSA_WORKERS must be >= 1, got {workers}.")
        log_file = environ.get('SSA_LOG_FILE')
        return cls(
            workers=workers,
            log_level=environ.get('LOG_LEVEL', 'INFO').upper(),
            log_file=Path(log_file) if log_file else None,
        )


def load_environment(dotenv_path: Optional[Path] = None) -> None:
    """Read a .env file into os.environ (existing variables win)."""
    load_dotenv(dotenv_path=dotenv_path or Path.cwd() / '.env')


# --- Logging --------------------------------------------------------------------------------------
# Human: stdout carries the JSONL record stream when --out is absent, so console logs go to stderr.
def configure_logging(level: str = 'INFO', log_file: Optional[Path] = None) -> None:
    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file is not None:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(level=level, format=LOG_FORMAT, datefmt=LOG_DATEFMT, handlers=handlers, force=True)
