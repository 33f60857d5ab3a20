"""Runtime monitors, time-step stability sweeps and convergence-order estimation.

The monitors turn the schemes' dissipation and boundedness guarantees into
assertable checks over a recorded step series: the first-order scheme
dissipates the plain energy for tau <= 2, the two-step scheme dissipates
the modified energy for tau <= 1/2, and iterates stay bounded by pi for
tau <= 1 when the initial data is. Monotonicity is checked with a relative
slack (default 1e-10) because the guarantees are exact only in exact
arithmetic.
"""

from __future__ import annotations

import dataclasses
import enum
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import ExperimentConfig, initial_field
from .grid import Field
from .models import ModelSpec
from .schemes import SchemeKind, SchemeState, StepRecord, bdf2_step, imex1_step, initial_state, kickstart_bdf2, run

__all__ = [
    "MonitorKind",
    "MonitorReport",
    "SweepResult",
    "energy_monitor",
    "max_principle_monitor",
    "stability_sweep",
    "convergence_order",
    "fit_order",
]

THREADS_ENV_VAR = "PSG_THREADS"


class MonitorKind(enum.Enum):
    ENERGY_DISSIPATION = "energy"
    MODIFIED_ENERGY_DISSIPATION = "modified_energy"
    MAX_PRINCIPLE = "max_principle"


@dataclass(frozen=True)
class MonitorReport:
    """Outcome of one monitor over a record series.

    first_violation_step is the step_index of the record at which the
    monitored inequality first failed; worst_excess is the largest positive
    amount by which it failed (0.0 when clean).
    """

    kind: MonitorKind
    violated: bool
    first_violation_step: int | None
    worst_excess: float

    def __post_init__(self) -> None:
        if self.violated != (self.first_violation_step is not None):
            raise ValueError("violated must hold exactly when first_violation_step is present")


def energy_monitor(
    records: Sequence[StepRecord],
    modified: bool = False,
    rel_slack: float = 1e-10,
) -> MonitorReport:
    """Flag the first step with E(next) > E(curr) + rel_slack*(1 + |E(curr)|).

    With modified=True the modified energy column is monitored instead; it
    may be absent on leading records (it does not exist before the first
    step) but must be present from then on.
    """
    if not records:
        raise ValueError("records must be nonempty")
    if modified:
        records = list(records)
        while records and records[0].modified_energy is None:
            records.pop(0)
        values = [r.modified_energy for r in records]
        if not values or any(v is None for v in values):
            raise ValueError("modified energies missing from the record series")
        kind = MonitorKind.MODIFIED_ENERGY_DISSIPATION
    else:
        values = [r.energy for r in records]
        kind = MonitorKind.ENERGY_DISSIPATION

    first: int | None = None
    worst = 0.0
    for prev_rec, next_rec, prev, nxt in zip(records, records[1:], values, values[1:]):
        excess = nxt - prev - rel_slack * (1.0 + abs(prev))
        if excess > 0.0:
            if first is None:
                first = next_rec.step_index
            worst = max(worst, excess)
    return MonitorReport(kind, first is not None, first, worst)


def max_principle_monitor(
    records: Sequence[StepRecord],
    bound: float = np.pi,
    slack: float = 1e-12,
) -> MonitorReport:
    """Flag the first record with linf > bound + slack."""
    if not records:
        raise ValueError("records must be nonempty")
    first: int | None = None
    worst = 0.0
    for rec in records:
        excess = rec.linf - (bound + slack)
        if excess > 0.0:
            if first is None:
                first = rec.step_index
            worst = max(worst, excess)
    return MonitorReport(MonitorKind.MAX_PRINCIPLE, first is not None, first, worst)


@dataclass(frozen=True)
class SweepResult:
    """Per-tau monitor outcomes of a stability sweep, input order preserved.

    reports[i] is (energy, modified_energy, max_principle) MonitorReports
    for tau_values[i], or None when that run failed; errors[i] then carries
    the failure message. final_energies[i] is NaN for failed runs.
    """

    tau_values: tuple[float, ...]
    reports: tuple[tuple[MonitorReport, ...] | None, ...]
    final_energies: tuple[float, ...]
    errors: tuple[str | None, ...]

    def largest_clean_tau(self) -> float | None:
        """Largest tested tau whose plain-energy series was monotone."""
        clean = [t for t, r in zip(self.tau_values, self.reports) if r is not None and not r[0].violated]
        return max(clean) if clean else None

    def smallest_violating_tau(self) -> float | None:
        """Smallest tested tau whose plain-energy series was not monotone."""
        bad = [t for t, r in zip(self.tau_values, self.reports) if r is not None and r[0].violated]
        return min(bad) if bad else None


def _default_workers(n_jobs: int) -> int:
    env = os.environ.get(THREADS_ENV_VAR)
    if env is not None:
        workers = int(env)
        if workers < 1:
            raise ValueError(f"{THREADS_ENV_VAR} must be a positive integer, got {env!r}")
        return min(workers, n_jobs)
    return min(os.cpu_count() or 1, n_jobs)


def stability_sweep(
    config: ExperimentConfig,
    tau_values: Sequence[float],
    max_workers: int | None = None,
) -> SweepResult:
    """Run the configured experiment once per tau and attach monitor reports.

    Runs are independent and executed on a thread pool (capped by the
    PSG_THREADS environment variable when max_workers is not given);
    results are deterministic and independent of scheduling. A failure for
    one tau is recorded and does not abort the other values.
    """
    taus = tuple(float(t) for t in tau_values)
    if not taus:
        raise ValueError("tau_values must be nonempty")
    if any(t <= 0 for t in taus):
        raise ValueError(f"tau_values must all be > 0, got {taus}")

    def one(tau: float) -> tuple[tuple[MonitorReport, ...], float]:
        cfg = dataclasses.replace(config, tau=tau)
        u0 = initial_field(cfg)
        records = run(u0, cfg.model, cfg.scheme, tau, cfg.step_count)
        reports = (
            energy_monitor(records),
            energy_monitor(records, modified=True),
            max_principle_monitor(records),
        )
        return reports, records[-1].energy

    workers = max_workers if max_workers is not None else _default_workers(len(taus))
    reports: list[tuple[MonitorReport, ...] | None] = [None] * len(taus)
    energies = [float("nan")] * len(taus)
    errors: list[str | None] = [None] * len(taus)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(one, tau) for tau in taus]
        for i, future in enumerate(futures):
            try:
                reports[i], energies[i] = future.result()
            except Exception as exc:  # recorded per tau, others keep running
                errors[i] = f"{type(exc).__name__}: {exc}"
    return SweepResult(taus, tuple(reports), tuple(energies), tuple(errors))


def fit_order(taus: Sequence[float], errors: Sequence[float]) -> float:
    """Least-squares slope of log(error) against log(tau)."""
    taus = np.asarray(taus, dtype=np.float64)
    errors = np.asarray(errors, dtype=np.float64)
    if len(taus) != len(errors) or len(taus) < 2:
        raise ValueError("need at least two (tau, error) pairs")
    if np.any(errors <= 0):
        raise ValueError("errors must all be positive to fit a slope")
    return float(np.polyfit(np.log(taus), np.log(errors), 1)[0])


def _steps_for(t_final: float, tau: float) -> int:
    steps = round(t_final / tau)
    if steps < 1 or abs(steps * tau - t_final) > 1e-9 * max(1.0, t_final):
        raise ValueError(f"t_final = {t_final} is not an integer multiple of tau = {tau}")
    return steps


def _final_field(u0: Field, model: ModelSpec, scheme: SchemeKind, tau: float, n_steps: int) -> Field:
    if scheme is SchemeKind.BDF2:
        state: SchemeState = kickstart_bdf2(u0, model, tau)
        stepper = bdf2_step
    else:
        state = initial_state(u0, model, scheme, tau)
        stepper = imex1_step
    while state.step_index < n_steps:
        state = stepper(state)
    return state.u_curr


def convergence_order(
    config: ExperimentConfig,
    scheme: SchemeKind,
    tau_base: float,
    levels: int,
    t_final: float,
) -> float:
    """Observed temporal order by self-convergence at time t_final.

    Runs tau_l = tau_base / 2^l for l = 0..levels-1 plus a reference at
    tau_base / 2^(levels+2), measures max-norm errors against the reference
    and returns the fitted slope. t_final must be commensurate with every
    tested tau.
    """
    if levels < 3:
        raise ValueError(f"levels must be >= 3, got {levels}")
    if tau_base <= 0:
        raise ValueError(f"tau_base must be > 0, got {tau_base}")
    taus = [tau_base / 2**level for level in range(levels)]
    tau_ref = tau_base / 2 ** (levels + 2)
    step_counts = [_steps_for(t_final, tau) for tau in taus]
    ref_steps = _steps_for(t_final, tau_ref)

    u0 = initial_field(config)
    model = config.model
    u_ref = _final_field(u0, model, scheme, tau_ref, ref_steps)
    errors = [
        float(np.max(np.abs(_final_field(u0, model, scheme, tau, steps).values - u_ref.values)))
        for tau, steps in zip(taus, step_counts)
    ]
    return fit_order(taus, errors)
