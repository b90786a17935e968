"""Deterministic discrete-time takeover episodes for round-trip testing.

An episode issues a takeover request (TOR), draws the driver's required
time to complete the takeover and avoidance maneuver from the same
component model used for budgeting (plus optional bounded uniform noise),
classifies the outcome against a deadline, and synthesizes a fixed-rate
drive log: a steering step when the driver's hands return to the wheel, a
smooth lane-change displacement profile, and an acceleration pulse during
the maneuver.

The kinematics are deliberately schematic.  The model operates on time
components, and the simulator exists to consistency-test the budgeting and
log-analysis paths, not to reproduce vehicle dynamics.  Noise is uniform
(bounded support) rather than Gaussian so coverage statements hold exactly
at band edges.  Episodes are independent: each owns a generator seeded per
a fixed mixing rule, so batch results do not depend on execution order.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .drivelog import DriveLog, SummaryStats, describe
from .errors import EmptyBatch
from .model import (
    DEFAULT_COEFFICIENTS,
    CoefficientSet,
    DriverProfile,
    ScenarioSpec,
    TakeoverContext,
    estimate_tortb,
    ndrtc_lookup,
)

SAMPLE_RATE_HZ = 20.0
LOG_LEAD_IN_S = 5.0  # automation phase kept before the TOR (fits the default analysis window)
LOG_TAIL_S = 1.0  # padding after the last event of interest
LANE_CHANGE_AMPLITUDE_M = 3.5  # one lane width
ACCEL_PULSE_PEAK = 1.0  # [m/s^2], half-sine during the maneuver
STEERING_STEP = 0.2  # fraction of full range at response onset

_MASK64 = (1 << 64) - 1


def mix_seed(base_seed: int, index: int) -> int:
    """Per-episode seed: SplitMix64 finalizer of ``base_seed + golden * (index+1)``.

    Spreads consecutive indices across the full 64-bit space so episode
    streams are independent; the rule is fixed, so a batch is reproducible
    from its base seed alone.
    """
    z = (base_seed + 0x9E3779B97F4A7C15 * (index + 1)) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


class Classification(Enum):
    """Episode outcome against the deadline."""

    SUCCESS = "success"  # finished at or before the deadline
    LATE = "late"  # overran the deadline by less than the maneuver itself
    COLLISION = "collision"  # overran by at least one full maneuver duration


@dataclass(frozen=True)
class EpisodeConfig:
    """Everything one episode needs; immutable and fully seeded."""

    driver: DriverProfile
    scenario: ScenarioSpec
    ctx: TakeoverContext
    coeffs: CoefficientSet = DEFAULT_COEFFICIENTS
    deadline_mode: str = "from_budget"  # "from_budget" | "explicit"
    explicit_deadline: float | None = None  # [s], only for "explicit"
    budget_driver: DriverProfile | None = None  # profile the deadline is budgeted for
    response_noise: float = 0.0  # [s] half-width of the uniform perturbation
    maneuver_duration: float = 2.0  # [s]
    seed: int = 0

    def __post_init__(self) -> None:
        if self.deadline_mode not in ("from_budget", "explicit"):
            raise ValueError("deadline_mode must be 'from_budget' or 'explicit'")
        if self.deadline_mode == "explicit":
            if self.explicit_deadline is None or self.explicit_deadline < 0:
                raise ValueError("explicit deadline_mode needs explicit_deadline >= 0")
        elif self.explicit_deadline is not None:
            raise ValueError("explicit_deadline is only valid with deadline_mode='explicit'")
        if self.response_noise < 0:
            raise ValueError("response_noise must be >= 0")
        if self.maneuver_duration <= 0:
            raise ValueError("maneuver_duration must be > 0")
        if not 0 <= self.seed <= _MASK64:
            raise ValueError("seed must fit in 64 bits")


@dataclass(frozen=True)
class EpisodeOutcome:
    """Result of one simulated takeover episode."""

    required_time: float  # [s] driver's time to complete takeover and maneuver
    deadline: float  # [s]
    classification: Classification
    margin: float  # [s], deadline - required_time
    log: DriveLog
    seed: int


def response_onset(cfg: EpisodeConfig) -> float:
    """Seconds from TOR to first steering input: stimulus response plus
    non-driving-task disengagement."""
    return cfg.driver.srt + ndrtc_lookup(cfg.ctx.ndrt_class, cfg.coeffs)


def required_takeover_time(cfg: EpisodeConfig, rng: np.random.Generator) -> float:
    """Simulated driver's required time [s], never negative.

    The budget component sequence is evaluated with the driver's actual
    parameters, then perturbed by a uniform draw in
    [-response_noise, +response_noise] from the supplied generator.
    """
    base = estimate_tortb(cfg.driver, cfg.scenario, cfg.ctx, cfg.coeffs).total
    required = base + rng.uniform(-cfg.response_noise, cfg.response_noise)
    return max(required, 0.0)


def _deadline(cfg: EpisodeConfig) -> float:
    if cfg.deadline_mode == "explicit":
        return float(cfg.explicit_deadline)  # validated not-None
    budget_driver = cfg.budget_driver if cfg.budget_driver is not None else cfg.driver
    return estimate_tortb(budget_driver, cfg.scenario, cfg.ctx, cfg.coeffs).total


def _classify(margin: float, maneuver_duration: float) -> Classification:
    if margin >= 0:
        return Classification.SUCCESS
    if margin <= -maneuver_duration:
        return Classification.COLLISION
    return Classification.LATE


def _synthesize_log(cfg: EpisodeConfig, required: float, deadline: float) -> DriveLog:
    dt = 1.0 / SAMPLE_RATE_HZ
    onset = response_onset(cfg)
    maneuver_start = max(onset, required - cfg.maneuver_duration)
    maneuver_end = maneuver_start + cfg.maneuver_duration
    horizon = max(maneuver_end, deadline) + LOG_TAIL_S
    n = int(np.ceil((LOG_LEAD_IN_S + horizon) / dt)) + 1
    t = np.arange(n, dtype=float) / SAMPLE_RATE_HZ
    tor_index = int(round(LOG_LEAD_IN_S * SAMPLE_RATE_HZ))
    tor_time = float(t[tor_index])
    rel = t - tor_time

    # 1e-9 absorbs timestamp rounding so the step lands on the first
    # sample at or after the onset.
    steering = np.where(rel >= onset - 1e-9, STEERING_STEP, 0.0)
    u = np.clip((rel - maneuver_start) / cfg.maneuver_duration, 0.0, 1.0)
    lateral = LANE_CHANGE_AMPLITUDE_M * u * u * (3.0 - 2.0 * u)
    acceleration = ACCEL_PULSE_PEAK * np.sin(np.pi * u)
    brake = np.zeros(n)

    return DriveLog(
        t=t,
        lateral_displacement=lateral,
        acceleration=acceleration,
        steering=steering,
        brake=brake,
        tor_time=tor_time,
        sample_rate=SAMPLE_RATE_HZ,
    )


def run_episode(cfg: EpisodeConfig) -> EpisodeOutcome:
    """Run one deterministic episode; identical config gives identical output."""
    rng = np.random.default_rng(cfg.seed)
    required = required_takeover_time(cfg, rng)
    deadline = _deadline(cfg)
    margin = deadline - required
    return EpisodeOutcome(
        required_time=required,
        deadline=deadline,
        classification=_classify(margin, cfg.maneuver_duration),
        margin=margin,
        log=_synthesize_log(cfg, required, deadline),
        seed=cfg.seed,
    )


@dataclass(frozen=True)
class BatchReport:
    """Outcomes plus aggregate counts and the margin distribution."""

    outcomes: tuple[EpisodeOutcome, ...]
    n_success: int
    n_late: int
    n_collision: int
    margin_stats: SummaryStats


def run_batch(configs: list[EpisodeConfig], base_seed: int) -> BatchReport:
    """Run every config with per-episode seeds derived via :func:`mix_seed`."""
    if not configs:
        raise EmptyBatch("no episode configs")
    outcomes = tuple(
        run_episode(replace(cfg, seed=mix_seed(base_seed, i)))
        for i, cfg in enumerate(configs)
    )
    counts = {cls: 0 for cls in Classification}
    for outcome in outcomes:
        counts[outcome.classification] += 1
    return BatchReport(
        outcomes=outcomes,
        n_success=counts[Classification.SUCCESS],
        n_late=counts[Classification.LATE],
        n_collision=counts[Classification.COLLISION],
        margin_stats=describe(o.margin for o in outcomes),
    )
