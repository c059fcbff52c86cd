# =================================================================================================
# File:          cli.py
# Project:       Operator SSA Verification
# License:       MIT
# Last Updated:  2026-10-16
#
# Purpose:
#   Batch verification campaigns over seeded random states: operator SSA, joint convexity, the
#   twirl identity, projector sweeps, the non-Hermiticity witness, fixture checks and an extremal
#   (smallest-eigenvalue) search. Emits one JSON record per trial and a summary table.
#
# Inputs:
#   - CLI flags (see build_parser); ENV: SSA_TOL_*, SSA_WORKERS, LOG_LEVEL, SSA_LOG_FILE (optional,
#     optionally from a .env file)
#   - Optional --state-in state file
# Outputs:
#   - JSONL records to --out (or stdout); summary table and logs on stderr; --state-out state file
#
# Operational Profile:
#   - Idempotency: {deterministic: true}  # per-trial seeds derive from (master_seed, trial_index)
#   - Exit codes: 0 all pass | 1 failures, anomalies or unexpected error | 2 invalid configuration
#
# Section Map:
#   1) Imports & constants
#   2) Domain types: CampaignConfig, TrialReport
#   3) Campaign runner: trial dispatch, per-command trial bodies, record stream
#   4) Extremal search
#   5) Argument parsing & entry point
# =================================================================================================

# --- Imports & constants --------------------------------------------------------------------------
import argparse
import logging
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, TextIO, Tuple

import numpy as np
from tqdm import tqdm

from . import reporting
from .config import RuntimeSettings, ToleranceConfig, configure_logging, load_environment
from .errors import InvalidConfigError, OperatorSSAError
from .modular import (
    conditional_mutual_information,
    convexity_chain_check,
    maximally_mixed_on,
    proof_step_check,
    restricted_trace_witness,
    ssa_operator,
    twirl,
)
from .perspective import joint_convexity_trial, operator_convex, quasi_entropy, quasi_entropy_direct
from .states import (
    SEED_LIMIT,
    StateSpec,
    derive_seed,
    generate,
    haar_isometry,
    haar_unitary,
    induced_mixed,
    random_projector,
    read_state,
    weyl_basis,
    write_state,
)
from .tensor_core import MAX_TOTAL_DIMENSION, DensityMatrix, DimList, embed, min_eigenvalue

logger = logging.getLogger(__name__)

COMMANDS = (
    'verify-ssa', 'verify-convexity', 'verify-twirl', 'sweep-projectors',
    'witness-nonhermitian', 'search-extremal', 'fixtures',
)
TRIPARTITE_COMMANDS = ('verify-ssa', 'sweep-projectors', 'witness-nonhermitian', 'search-extremal', 'fixtures')

DEFAULT_KINDS = {
    'verify-ssa': ('induced-mixed:1', 'induced-mixed:half', 'induced-mixed:full', 'classical-diagonal'),
    'verify-twirl': ('induced-mixed:full',),
    'sweep-projectors': ('induced-mixed:full', 'induced-mixed:half'),
    'witness-nonhermitian': ('induced-mixed:full',),
}
DEFAULT_FUNCTIONS = ('xlogx', 'neglog', 'square', 'power(1.5)')

# Witness genericity calibration: defect threshold and the share of trials that must exceed it.
GENERICITY_THRESHOLD = 1e-6
GENERICITY_FRACTION = 0.9
# Identities that hold up to roundoff get their own verdict thresholds, tighter than match_tol.
TWIRL_RESIDUAL_TOL = 1e-11
BASIS_DEFECT_TOL = 1e-12
SATURATION_NORM_TOL = 1e-10
WITNESS_HERMITIAN_TOL = 1e-10
QUASI_ENTROPY_GAP_TOL = 1e-11
RELATIVE_ENTROPY_TOL = 1e-10
SELF_ENTROPY_TOL = 1e-12
# Extremal search: accepted range of the best smallest eigenvalue over all restarts.
EXTREMAL_FLOOR = -1e-8
EXTREMAL_CEILING = 1e-3
# Ancilla dimensions cycled over restarts; 1 searches pure states, 'full' full-rank ones.
EXTREMAL_ANCILLAS = (1, 1, 2, 'full')
INITIAL_STEP, MIN_STEP, MAX_STEP = 0.2, 1e-4, 1.0
# Superoperator cross-checks build n²×n² matrices; skip them above this base dimension.
SUPEROP_CHECK_MAX_N = 32


# --- Domain types ---------------------------------------------------------------------------------
@dataclass(frozen=True)
class CampaignConfig:
    command: str
    dims: DimList
    trials: int = 100
    master_seed: int = 0
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)
    output_path: Optional[Path] = None
    kinds: Tuple[str, ...] = ()
    functions: Tuple[str, ...] = DEFAULT_FUNCTIONS
    projectors: int = 10
    restarts: int = 20
    steps: int = 200
    state_in: Optional[Path] = None
    state_out: Optional[Path] = None
    workers: int = 1
    timing: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InvalidConfigError(f"Unknown command {self.command!r}; expected one of {COMMANDS}.")
        if self.trials < 1:
            raise InvalidConfigError(f"trials must be >= 1, got {self.trials}.")
        if not 0 <= self.master_seed < SEED_LIMIT:
            raise InvalidConfigError(f"seed must be a 64-bit unsigned integer, got {self.master_seed}.")
        if self.dims.total > MAX_TOTAL_DIMENSION:
            raise InvalidConfigError(f"dims {self.dims.dims} exceed the total dimension limit {MAX_TOTAL_DIMENSION}.")
        if self.command in TRIPARTITE_COMMANDS and len(self.dims) != 3:
            raise InvalidConfigError(f"{self.command} needs exactly three subsystems, got {self.dims.dims}.")
        if self.command == 'fixtures' and len(set(self.dims)) != 1:
            raise InvalidConfigError("fixtures need equal subsystem dimensions (GHZ closed forms).")
        if self.command == 'search-extremal' and (self.restarts < 1 or self.steps < 0):
            raise InvalidConfigError(f"search-extremal needs restarts >= 1 and steps >= 0, "
                                     f"got {self.restarts} and {self.steps}.")
        if self.projectors < 1:
            raise InvalidConfigError(f"projectors must be >= 1, got {self.projectors}.")
        if self.workers < 1:
            raise InvalidConfigError(f"workers must be >= 1, got {self.workers}.")
        if not self.functions:
            raise InvalidConfigError("At least one operator-convex function is required.")
        if self.state_in is not None:
            object.__setattr__(self, 'kinds', ('file',))
        elif not self.kinds:
            object.__setattr__(self, 'kinds', DEFAULT_KINDS.get(self.command, ('induced-mixed:full',)))

        # Human: parse every token now so bad kinds or functions fail before any trial runs.
        try:
            for token in self.kinds:
                self.state_spec(token, 0)
            for name in self.functions:
                operator_convex(name)
        except OperatorSSAError as e:
            raise InvalidConfigError(str(e)) from e

    def state_spec(self, token: str, seed: int) -> StateSpec:
        if self.state_in is not None:
            return StateSpec('file', self.dims, seed, path=self.state_in)
        return StateSpec.from_token(token, self.dims, seed)


@dataclass
class TrialReport:
    trial_index: int
    seed: int
    dims: DimList
    state_kind: str
    scalars: Dict[str, Any] = field(default_factory=dict)
    verdict: str = 'pass'
    error: Optional[str] = None
    elapsed: Optional[float] = None
    state: Optional[DensityMatrix] = field(default=None, repr=False)

    def check(self, ok: bool) -> None:
        if not ok:
            self.verdict = 'fail'

    def to_record(self) -> Dict[str, Any]:
        record: Dict[str, Any] = {
            'trial_index': self.trial_index,
            'seed': self.seed,
            'dims': list(self.dims),
            'state_kind': self.state_kind,
            'scalars': self.scalars,
            'verdict': self.verdict,
        }
        if self.error is not None:
            record['error'] = self.error
        if self.elapsed is not None:
            record['elapsed'] = self.elapsed
        return record


# --- Campaign runner ------------------------------------------------------------------------------
class CampaignRunner:
    """Runs one campaign: trials in parallel, records in trial-index order."""

    def __init__(self, config: CampaignConfig):
        self.config = config
        self.tol = config.tolerances
        self.dims = config.dims
        self.records: List[Dict[str, Any]] = []
        self.reports: List[TrialReport] = []
        self.campaign_failures: List[str] = []
        self.extra_summary: Dict[str, Any] = {}

    # -- dispatch --
    def _trial_body(self) -> Callable[[TrialReport], None]:
        return {
            'verify-ssa': self._verify_ssa,
            'verify-convexity': self._verify_convexity,
            'verify-twirl': self._verify_twirl,
            'sweep-projectors': self._sweep_projectors,
            'witness-nonhermitian': self._witness,
            'search-extremal': self._search_restart,
        }[self.config.command]

    def _trial_count(self) -> int:
        if self.config.command == 'search-extremal':
            return self.config.restarts
        if self.config.command == 'fixtures':
            return len(FIXTURES)
        return self.config.trials

    def _run_trial(self, index: int) -> TrialReport:
        seed = derive_seed(self.config.master_seed, index)
        if self.config.command == 'fixtures':
            kind, body = FIXTURES[index]
            report = TrialReport(index, seed, self.dims, kind)
        else:
            kinds = self.config.kinds
            report = TrialReport(index, seed, self.dims, kinds[index % len(kinds)])
            body = self._trial_body()
        started = time.perf_counter()
        try:
            if self.config.command == 'fixtures':
                body(self, report)
            else:
                body(report)
        except OperatorSSAError as e:
            # Numerical rejections are anomaly records, never silent skips.
            logger.warning(f"Trial {index} ({report.state_kind}) anomaly: {type(e).__name__}: {e}")
            report.scalars = {k: v for k, v in report.scalars.items() if _is_finite(v)}
            report.verdict = 'anomaly'
            report.error = f"{type(e).__name__}: {e}"
        if self.config.timing:
            report.elapsed = time.perf_counter() - started
        return report

    def _state(self, report: TrialReport) -> DensityMatrix:
        return generate(self.config.state_spec(report.state_kind, report.seed), self.tol)

    # -- verify-ssa --
    def _verify_ssa(self, report: TrialReport) -> None:
        rho = self._state(report)
        T = ssa_operator(rho, self.tol)
        lowest = min_eigenvalue(T)
        cmi = conditional_mutual_information(rho, self.tol)
        trace_gap = abs(float(np.trace(T.matrix).real) - cmi)

        # Local-basis covariance on C.
        u_c = haar_unitary(self.dims[2], derive_seed(report.seed, 1))
        u = embed(u_c, self.dims, (2,))
        rotated = DensityMatrix(u @ rho.matrix @ u.conj().T, self.dims)
        T_rot = ssa_operator(rotated, self.tol).matrix
        covariance_gap = float(np.linalg.norm(T_rot - u_c @ T.matrix @ u_c.conj().T))

        report.scalars = {
            'min_eigenvalue': lowest,
            'frobenius_norm': T.frobenius_norm(),
            'cmi': cmi,
            'trace_gap': trace_gap,
            'hermiticity_defect': T.defect,
            'covariance_gap': covariance_gap,
        }
        report.check(lowest >= self.tol.psd_threshold(T.frobenius_norm()))
        report.check(trace_gap <= self.tol.match_tol)
        report.check(cmi >= -self.tol.psd_tol)
        report.check(T.defect <= self.tol.hermiticity_tol)
        report.check(covariance_gap <= self.tol.match_tol)

    # -- verify-convexity --
    def _verify_convexity(self, report: TrialReport) -> None:
        functions = self.config.functions
        f = operator_convex(functions[report.trial_index % len(functions)])
        report.state_kind = f"induced-mixed:full/{f.label}"
        n = self.dims.total
        rng = np.random.default_rng(report.seed)
        rho1, sigma1, rho2, sigma2 = (induced_mixed(n, n, rng) for _ in range(4))
        c = float(rng.uniform())
        O = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        O /= np.linalg.norm(O)

        margin = joint_convexity_trial((rho1, sigma1), (rho2, sigma2), c, O, f, self.tol)
        report.scalars = {'c': c, 'convexity_margin': margin}
        report.check(margin >= -self.tol.convexity_tol)
        if f.name == 'xlogx' and n <= SUPEROP_CHECK_MAX_N:
            gap = abs(quasi_entropy(rho1, sigma1, O, self.tol) - quasi_entropy_direct(rho1, sigma1, O, self.tol))
            report.scalars['quasi_entropy_gap'] = gap
            report.check(gap <= QUASI_ENTROPY_GAP_TOL)

    # -- verify-twirl --
    def _verify_twirl(self, report: TrialReport) -> None:
        rho = self._state(report)
        residual = float(np.linalg.norm(twirl(rho, 0).matrix - maximally_mixed_on(rho.matrix, self.dims, 0)))
        basis = weyl_basis(self.dims[0])
        report.scalars = {
            'twirl_residual': residual,
            'orthogonality_defect': basis.orthogonality_defect(),
            'unitarity_defect': basis.unitarity_defect(),
        }
        report.check(residual <= TWIRL_RESIDUAL_TOL)
        report.check(basis.orthogonality_defect() <= BASIS_DEFECT_TOL)
        report.check(basis.unitarity_defect() <= BASIS_DEFECT_TOL)

    # -- sweep-projectors --
    def _sweep_projectors(self, report: TrialReport) -> None:
        rho = self._state(report)
        d_c = self.dims[2]
        rng = np.random.default_rng(derive_seed(report.seed, 1))
        worst_margin = worst_chain = math.inf
        lhs_gap = residual = chain_gap = invariance_gap = 0.0
        checked = 0
        for rank in range(1, d_c + 1):
            for _ in range(self.config.projectors):
                P = random_projector(d_c, rank, rng)
                step = proof_step_check(rho, P, self.tol)
                chain = convexity_chain_check(rho, P, self.tol)
                worst_margin = min(worst_margin, step.margin)
                worst_chain = min(worst_chain, chain.convexity_margin)
                lhs_gap = max(lhs_gap, step.lhs_gap)
                residual = max(residual, step.imaginary_residual)
                invariance_gap = max(invariance_gap, chain.invariance_gap)
                chain_gap = max(chain_gap, abs((chain.original - chain.twirled) - step.margin))
                checked += 1

        report.scalars = {
            'projectors_checked': checked,
            'worst_margin': worst_margin,
            'lhs_gap': lhs_gap,
            'imaginary_residual': residual,
            'worst_chain_convexity_margin': worst_chain,
            'chain_invariance_gap': invariance_gap,
            'chain_gap': chain_gap,
        }
        report.check(worst_margin >= -self.tol.convexity_tol)
        report.check(worst_chain >= -self.tol.convexity_tol)
        for gap in (lhs_gap, residual, invariance_gap, chain_gap):
            report.check(gap <= self.tol.match_tol)

    # -- witness-nonhermitian --
    def _witness(self, report: TrialReport) -> None:
        rho = self._state(report)
        defects = {traced: restricted_trace_witness(rho, traced, self.tol).defect for traced in ('A', 'B', 'AB')}
        report.scalars = {
            'defect_traced_A': defects['A'],
            'defect_traced_B': defects['B'],
            'defect_traced_AB': defects['AB'],
        }
        report.check(defects['AB'] <= WITNESS_HERMITIAN_TOL)

    def _check_genericity(self) -> None:
        counted = [r for r in self.reports if r.verdict != 'anomaly']
        if not counted:
            self.campaign_failures.append("No witness trial completed.")
            return
        for traced in ('A', 'B'):
            share = sum(r.scalars[f'defect_traced_{traced}'] > GENERICITY_THRESHOLD for r in counted) / len(counted)
            self.extra_summary[f'nonhermitian_share_{traced}'] = round(share, 4)
            if share < GENERICITY_FRACTION:
                self.campaign_failures.append(
                    f"Only {share:.1%} of trials have a Tr_{traced} defect above {GENERICITY_THRESHOLD:g}.")

    # -- search-extremal --
    def _search_restart(self, report: TrialReport) -> None:
        ancilla = ancilla_dimension(self.dims, report.trial_index)
        report.state_kind = f"induced-mixed:{ancilla}"
        best_value, best_state, initial, accepted = search_restart(
            self.dims, self.config.steps, report.seed, self.tol, ancilla)
        report.scalars = {
            'initial_min_eigenvalue': initial,
            'best_min_eigenvalue': best_value,
            'accepted_steps': accepted,
        }
        report.state = best_state
        report.check(best_value >= EXTREMAL_FLOOR)

    def _finish_extremal(self) -> None:
        candidates = [r for r in self.reports if r.state is not None]
        if not candidates:
            self.campaign_failures.append("Every extremal restart was rejected.")
            return
        best = min(candidates, key=lambda r: (r.scalars['best_min_eigenvalue'], r.trial_index))
        self.extra_summary['best_min_eigenvalue'] = f"{best.scalars['best_min_eigenvalue']:.6e}"
        self.extra_summary['best_restart'] = best.trial_index
        if best.scalars['best_min_eigenvalue'] > EXTREMAL_CEILING:
            self.campaign_failures.append(
                f"Best smallest eigenvalue {best.scalars['best_min_eigenvalue']:.3e} is above "
                f"{EXTREMAL_CEILING:g}; raise --restarts or --steps.")
        if self.config.state_out is not None:
            write_state(self.config.state_out, best.state)
            logger.info(f"💾 Wrote argmin state of restart {best.trial_index} to {self.config.state_out}")

    # -- stream --
    def _emit(self, stream: TextIO, report: TrialReport) -> None:
        record = report.to_record()
        stream.write(reporting.dumps(record) + "\n")
        self.records.append(record)
        self.reports.append(report)

    def run(self) -> int:
        config = self.config
        count = self._trial_count()
        logger.info(f"🚀 {config.command}: {count} trials at dims {config.dims.dims}, "
                    f"seed {config.master_seed}, {config.workers} worker(s)")

        stream, close = _open_stream(config.output_path)
        try:
            with ThreadPoolExecutor(max_workers=config.workers) as pool:
                results = pool.map(self._run_trial, range(count))
                for report in tqdm(results, total=count, desc=config.command, unit="trial",
                                   file=sys.stderr, disable=count < 2):
                    self._emit(stream, report)
        finally:
            if close:
                stream.close()

        if config.command == 'witness-nonhermitian':
            self._check_genericity()
        if config.command == 'search-extremal':
            self._finish_extremal()
        return self._summarize()

    def _summarize(self) -> int:
        summary, worst = reporting.summarize(self.records)
        summary['campaign_failures'] = len(self.campaign_failures)
        summary.update(self.extra_summary)
        print(reporting.render_summary(summary, worst), file=sys.stderr)
        for message in self.campaign_failures:
            logger.error(f"Campaign check failed: {message}")

        clean = summary['failures'] == 0 and summary['anomalies'] == 0 and not self.campaign_failures
        if clean:
            logger.info(f"🎉 {self.config.command} complete: {summary['trials']} trials, all passed")
        else:
            logger.error(f"❌ {self.config.command} finished with {summary['failures']} failure(s), "
                         f"{summary['anomalies']} anomaly(ies), {len(self.campaign_failures)} campaign failure(s)")
        return 0 if clean else 1


def _is_finite(value: Any) -> bool:
    return not isinstance(value, float) or math.isfinite(value)


def _open_stream(path: Optional[Path]) -> Tuple[TextIO, bool]:
    if path is None:
        return sys.stdout, False
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        return path.open('w', encoding='utf-8'), True
    except OSError as e:
        raise InvalidConfigError(f"Cannot write report to '{path}': {e}") from e


# --- Fixtures -------------------------------------------------------------------------------------
def _fixture_ghz(runner: CampaignRunner, report: TrialReport) -> None:
    tol, dims = runner.tol, runner.dims
    d = dims[0]
    rho = generate(StateSpec('ghz', dims, report.seed), tol)
    T = ssa_operator(rho, tol)
    cmi = conditional_mutual_information(rho, tol)
    expected = math.log(d) / d * np.eye(d)
    deviation = float(np.max(np.abs(T.matrix - expected)))
    report.scalars = {'cmi': cmi, 'cmi_gap': abs(cmi - math.log(d)), 'operator_deviation': deviation}
    report.check(abs(cmi - math.log(d)) <= tol.match_tol)
    report.check(deviation <= tol.match_tol)


def _saturation(kind: str) -> Callable[[CampaignRunner, TrialReport], None]:
    def body(runner: CampaignRunner, report: TrialReport) -> None:
        rho = generate(StateSpec(kind, runner.dims, report.seed), runner.tol)
        T = ssa_operator(rho, runner.tol)
        report.scalars = {'frobenius_norm': T.frobenius_norm(), 'cmi': conditional_mutual_information(rho, runner.tol)}
        report.check(T.frobenius_norm() <= SATURATION_NORM_TOL)
        report.check(abs(report.scalars['cmi']) <= runner.tol.match_tol)
    return body


def _fixture_product_witness(runner: CampaignRunner, report: TrialReport) -> None:
    rho = generate(StateSpec('product-A-B-C', runner.dims, report.seed), runner.tol)
    defects = {t: restricted_trace_witness(rho, t, runner.tol).defect for t in ('A', 'B', 'AB')}
    report.scalars = {f'defect_traced_{t}': v for t, v in defects.items()}
    report.check(max(defects.values()) <= runner.tol.match_tol)


def _fixture_relative_entropy(runner: CampaignRunner, report: TrialReport) -> None:
    d = runner.dims.total
    pure = np.zeros((d, d), dtype=complex)
    pure[0, 0] = 1.0
    mixed = np.eye(d) / d
    identity = np.eye(d)
    paths = {'direct': quasi_entropy_direct}
    if d <= SUPEROP_CHECK_MAX_N:
        paths['superop'] = quasi_entropy

    for name, path in paths.items():
        gap = abs(path(pure, mixed, identity, runner.tol) - math.log(d))
        self_entropy = path(mixed, mixed, identity, runner.tol)
        report.scalars[f'pure_vs_mixed_gap_{name}'] = gap
        report.scalars[f'self_relative_entropy_{name}'] = self_entropy
        report.check(gap <= RELATIVE_ENTROPY_TOL)
        report.check(abs(self_entropy) <= SELF_ENTROPY_TOL)


FIXTURES: Sequence[Tuple[str, Callable[[CampaignRunner, TrialReport], None]]] = (
    ('ghz', _fixture_ghz),
    ('product-AB-C', _saturation('product-AB-C')),
    ('product-A-BC', _saturation('product-A-BC')),
    ('maximally-mixed', _saturation('maximally-mixed')),
    ('product-A-B-C', _fixture_product_witness),
    ('relative-entropy', _fixture_relative_entropy),
)


# --- Extremal search ------------------------------------------------------------------------------
def ancilla_dimension(dims: DimList, restart_index: int) -> int:
    ancilla = EXTREMAL_ANCILLAS[restart_index % len(EXTREMAL_ANCILLAS)]
    return dims.total if ancilla == 'full' else int(ancilla)


def _objective(psi: np.ndarray, dims: DimList, tol: ToleranceConfig) -> Tuple[float, DensityMatrix]:
    amplitudes = psi.reshape(dims.total, -1)
    matrix = amplitudes @ amplitudes.conj().T
    rho = DensityMatrix.validated(matrix / np.trace(matrix).real, dims, tol)
    return min_eigenvalue(ssa_operator(rho, tol)), rho


def _candidate(psi: np.ndarray, direction: np.ndarray, step: float, dims: DimList,
               tol: ToleranceConfig) -> Optional[Tuple[float, np.ndarray, DensityMatrix]]:
    moved = psi + step * direction
    moved /= np.linalg.norm(moved)
    try:
        value, rho = _objective(moved, dims, tol)
    except OperatorSSAError as e:
        logger.debug(f"Rejected extremal candidate: {e}")
        return None
    return value, moved, rho


def search_restart(dims: DimList, steps: int, seed: int, tol: ToleranceConfig,
                   ancilla: Optional[int] = None) -> Tuple[float, DensityMatrix, float, int]:
    """One restart of perturbation descent on min_eigenvalue(T_C).

    The state is the reduction of a unit vector on system ⊗ ancilla (ancilla dimension defaults
    to the system's total dimension; 1 gives pure states). Each step draws a random direction
    tangent to the unit sphere, tries both signs at the current step size and keeps the first
    improvement, doubling the step while that keeps improving. The step size grows after a
    success and shrinks after a miss, between MIN_STEP and MAX_STEP.
    Returns (best value, best state, initial value, accepted steps).
    """
    rng = np.random.default_rng(seed)
    size = dims.total * (dims.total if ancilla is None else ancilla)
    psi = haar_isometry(size, 1, rng)[:, 0]
    best, state = _objective(psi, dims, tol)
    initial, accepted, scale = best, 0, INITIAL_STEP

    for _ in range(steps):
        direction = rng.standard_normal(size) + 1j * rng.standard_normal(size)
        direction -= np.vdot(psi, direction) * psi
        direction /= np.linalg.norm(direction)

        found = None
        for step in (scale, -scale):
            trial = _candidate(psi, direction, step, dims, tol)
            if trial is None or trial[0] >= best:
                continue
            while abs(2 * step) <= MAX_STEP:
                longer = _candidate(psi, direction, 2 * step, dims, tol)
                if longer is None or longer[0] >= trial[0]:
                    break
                trial, step = longer, 2 * step
            found = (trial, abs(step))
            break

        if found is None:
            scale = max(scale * 0.8, MIN_STEP)
            continue
        (best, psi, state), taken = found
        accepted += 1
        scale = min(taken * 1.5, MAX_STEP)
    return best, state, initial, accepted


# --- Argument parsing & entry point ---------------------------------------------------------------
def _csv(text: str) -> Tuple[str, ...]:
    return tuple(tok.strip() for tok in text.split(',') if tok.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='operator_ssa',
        description="Randomized verification campaigns for the operator extension of strong subadditivity.")
    parser.add_argument("--command", required=True, choices=COMMANDS, help="Campaign to run.")
    parser.add_argument("--dims", default="2,2,2", help="Comma-separated subsystem dimensions (default 2,2,2).")
    parser.add_argument("--trials", type=int, default=100, help="Number of randomized trials.")
    parser.add_argument("--seed", type=int, default=0, help="Master seed (64-bit unsigned).")
    parser.add_argument("--kinds", type=_csv, default=(), help="State kinds cycled over trials, e.g. 'induced-mixed:half,ghz'.")
    parser.add_argument("--functions", type=_csv, default=DEFAULT_FUNCTIONS,
                        help="Operator-convex functions cycled over verify-convexity trials.")
    parser.add_argument("--projectors", type=int, default=10, help="Random projectors per rank (sweep-projectors).")
    parser.add_argument("--restarts", type=int, default=20, help="Random restarts (search-extremal).")
    parser.add_argument("--steps", type=int, default=200, help="Perturbation steps per restart (search-extremal).")
    parser.add_argument("--state-in", type=Path, help="Run trials on the state stored in this file.")
    parser.add_argument("--state-out", type=Path, help="Write the extremal argmin state to this file.")
    parser.add_argument("--out", type=Path, help="JSONL report path (default: stdout).")
    parser.add_argument("--tol-psd", type=float, help="Override psd_tol.")
    parser.add_argument("--tol-support", type=float, help="Override support_cutoff_rel.")
    parser.add_argument("--tol-match", type=float, help="Override match_tol.")
    parser.add_argument("--tol-convexity", type=float, help="Override convexity_tol.")
    parser.add_argument("--tol-hermiticity", type=float, help="Override hermiticity_tol.")
    parser.add_argument("--workers", type=int, help="Concurrent trials (default SSA_WORKERS or 1).")
    parser.add_argument("--timing", action="store_true", help="Add elapsed seconds to each record.")
    parser.add_argument("--log-level", help="Logging level (default LOG_LEVEL or INFO).")
    return parser


def config_from_args(args: argparse.Namespace, environ=None) -> Tuple[CampaignConfig, RuntimeSettings]:
    """Layer dataclass defaults, environment and flags into a validated config."""
    try:
        settings = RuntimeSettings.from_env(environ)
        tolerances = ToleranceConfig.from_env(environ).with_overrides(
            psd_tol=args.tol_psd,
            support_cutoff_rel=args.tol_support,
            match_tol=args.tol_match,
            convexity_tol=args.tol_convexity,
            hermiticity_tol=args.tol_hermiticity,
        )
        config = CampaignConfig(
            command=args.command,
            dims=DimList.parse(args.dims),
            trials=args.trials,
            master_seed=args.seed,
            tolerances=tolerances,
            output_path=args.out,
            kinds=tuple(args.kinds),
            functions=tuple(args.functions),
            projectors=args.projectors,
            restarts=args.restarts,
            steps=args.steps,
            state_in=args.state_in,
            state_out=args.state_out,
            workers=args.workers if args.workers is not None else settings.workers,
            timing=args.timing,
        )
        if config.state_in is not None:
            stored = read_state(config.state_in, tolerances)
            if stored.dims != config.dims:
                raise InvalidConfigError(f"--state-in dims {stored.dims.dims} differ from --dims {config.dims.dims}.")
    except OperatorSSAError as e:
        raise InvalidConfigError(str(e)) from e
    return config, settings


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    load_environment()
    try:
        config, settings = config_from_args(args)
    except InvalidConfigError as e:
        configure_logging((args.log_level or 'INFO').upper())
        logger.error(f"Invalid configuration: {e}")
        return 2
    configure_logging((args.log_level or settings.log_level).upper(), settings.log_file)

    try:
        return CampaignRunner(config).run()
    except InvalidConfigError as e:
        logger.error(f"Invalid configuration: {e}")
        return 2
