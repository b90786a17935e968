"""Solve unknown model coefficients from anchor scenarios.

The budget formula is linear in every coefficient, so an anchor scenario
with a known suitable budget pins exactly one unknown: subtract all known
terms and divide by the unknown's multiplier (agent count for the
per-agent coefficient, junction count for the per-junction coefficient,
-1 for the repeat-exposure deduction).  Anchors are solved in sequence,
feeding each solved value into later anchors either at full precision or
at the one-decimal publishing precision.

The repeat-exposure deduction can also be derived directly as the product
of an ordinal effect size and an upper-bound budget; that is a product,
not a linear-residual solve, so it lives in :func:`derive_oc`.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .errors import DependencyOrderError, NegativeCoefficient, UnidentifiableUnknown
from .model import (
    CoefficientSet,
    DriverProfile,
    ScenarioSpec,
    TakeoverContext,
    dec_lookup,
    estimate_tortb,
    ndrtc_lookup,
    oc_lookup,
    relative_speed,
    round_coefficient,
    rsc_lookup,
)


class UnknownCoefficient(Enum):
    """Which coefficient an anchor case solves for."""

    C_NOA = "c_noa"
    C_NOJ = "c_noj"
    OC = "oc"


class Chaining(Enum):
    """Which precision of a solved value feeds into later anchors."""

    USE_RAW = "raw"
    USE_ROUNDED = "rounded"


@dataclass(frozen=True)
class AnchorCase:
    """One scenario with a known suitable budget, pinning one unknown.

    The driver profile is the slowest/least-experienced bound the budget
    was validated for, so solved coefficients stay conservative.
    """

    scenario: ScenarioSpec
    driver: DriverProfile
    ctx: TakeoverContext
    known_tortb: float  # [s]
    unknown: UnknownCoefficient

    def __post_init__(self) -> None:
        if self.known_tortb <= 0:
            raise ValueError("known_tortb must be > 0")


@dataclass(frozen=True)
class SolvedCoefficient:
    """Raw and rounded value for one unknown, plus the rounding residual.

    ``residual`` is the known budget minus its reconstruction with every
    so-far-solved coefficient at its rounded value.
    """

    unknown: UnknownCoefficient
    raw: float  # [s]
    rounded: float  # [s]
    residual: float  # [s]


@dataclass(frozen=True)
class CalibrationResult:
    """Solved coefficients keyed by unknown, in solve order."""

    solved: dict[UnknownCoefficient, SolvedCoefficient]


def _multiplier(anchor: AnchorCase) -> float:
    """Multiplier of the anchor's unknown in its budget equation."""
    return _weight(anchor, anchor.unknown) * (
        -1.0 if anchor.unknown is UnknownCoefficient.OC else 1.0
    )


def _weight(anchor: AnchorCase, unknown: UnknownCoefficient) -> float:
    """How strongly ``unknown`` enters the anchor's equation (0 = absent)."""
    if unknown is UnknownCoefficient.C_NOA:
        return float(anchor.scenario.noa)
    if unknown is UnknownCoefficient.C_NOJ:
        return float(anchor.scenario.noj)
    return 1.0 if anchor.ctx.ordinal >= 2 else 0.0


def _known_sum(anchor: AnchorCase, coeffs: CoefficientSet) -> float:
    """Sum of all terms except the unknown's, left to right."""
    s = anchor.driver.srt + dec_lookup(anchor.driver.experience_km_per_week, coeffs)
    if anchor.unknown is not UnknownCoefficient.C_NOA:
        s += anchor.scenario.noa * coeffs.c_noa
    if anchor.unknown is not UnknownCoefficient.C_NOJ:
        s += anchor.scenario.noj * coeffs.c_noj
    s += rsc_lookup(
        relative_speed(anchor.scenario.ego_speed, anchor.scenario.hazard_speed), coeffs
    )
    s += ndrtc_lookup(anchor.ctx.ndrt_class, coeffs)
    if anchor.unknown is not UnknownCoefficient.OC:
        s -= oc_lookup(anchor.ctx.ordinal, coeffs)
    return s


def _apply(
    coeffs: CoefficientSet, unknown: UnknownCoefficient, value: float
) -> CoefficientSet:
    if unknown is UnknownCoefficient.C_NOA:
        return replace(coeffs, c_noa=value)
    if unknown is UnknownCoefficient.C_NOJ:
        return replace(coeffs, c_noj=value)
    return replace(coeffs, oc_repeat=value)


def solve_coefficient(
    anchor: AnchorCase, known: CoefficientSet
) -> tuple[float, float]:
    """Solve the anchor's unknown given every other coefficient.

    Returns ``(raw, rounded)`` in seconds; ``rounded`` is the raw value at
    one-decimal half-up precision.
    """
    mult = _multiplier(anchor)
    if mult == 0:
        raise UnidentifiableUnknown(
            f"anchor '{anchor.scenario.label or anchor.unknown.value}' gives "
            f"{anchor.unknown.value} a zero multiplier"
        )
    raw = (anchor.known_tortb - _known_sum(anchor, known)) / mult
    if raw < 0:
        raise NegativeCoefficient(
            f"solving {anchor.unknown.value} yields {raw:.6g} s; "
            "the anchor set is inconsistent"
        )
    return raw, round_coefficient(raw)


def calibrate_sequence(
    anchors: list[AnchorCase],
    seed_coeffs: CoefficientSet,
    chaining: Chaining = Chaining.USE_RAW,
) -> tuple[CalibrationResult, CoefficientSet]:
    """Solve the anchors in order, feeding solved values forward.

    ``chaining`` selects whether the raw or the rounded value of each
    solved coefficient is substituted into later anchors; raw chaining
    reproduces the published sequence (the junction coefficient was solved
    with the unrounded 1.85 agent coefficient).  Returns the per-unknown
    results and the seed set updated with the chained values.
    """
    unknowns = [a.unknown for a in anchors]
    if len(set(unknowns)) != len(unknowns):
        raise ValueError("each anchor must solve a distinct unknown")
    current = seed_coeffs
    rounded_chain = seed_coeffs
    solved: dict[UnknownCoefficient, SolvedCoefficient] = {}
    remaining = set(unknowns)
    for anchor in anchors:
        remaining.discard(anchor.unknown)
        for later in remaining:
            if _weight(anchor, later) != 0:
                raise DependencyOrderError(
                    f"anchor for {anchor.unknown.value} needs {later.value}, "
                    "which a later anchor solves"
                )
        raw, rounded = solve_coefficient(anchor, current)
        current = _apply(
            current, anchor.unknown, raw if chaining is Chaining.USE_RAW else rounded
        )
        rounded_chain = _apply(rounded_chain, anchor.unknown, rounded)
        reconstruction = estimate_tortb(
            anchor.driver, anchor.scenario, anchor.ctx, rounded_chain
        ).total
        solved[anchor.unknown] = SolvedCoefficient(
            unknown=anchor.unknown,
            raw=raw,
            rounded=rounded,
            residual=anchor.known_tortb - reconstruction,
        )
    return CalibrationResult(solved=solved), current


def derive_oc(
    ordinal_effect_size: float, upper_bound_tortb: float
) -> tuple[float, float]:
    """Repeat-exposure deduction as effect size times the upper-bound budget."""
    if not 0.0 <= ordinal_effect_size <= 1.0:
        raise ValueError("ordinal_effect_size must be within [0, 1]")
    if upper_bound_tortb <= 0:
        raise ValueError("upper_bound_tortb must be > 0")
    raw = ordinal_effect_size * upper_bound_tortb
    return raw, round_coefficient(raw)
