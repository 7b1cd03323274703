"""Semiclassical measurement-feedback phase estimators.

One engine covers full-QFT, approximate-QFT, and constant-precision
phase estimation: stages run least-significant bit first, each stage
applies inverse phase corrections controlled by the most recent
``window`` decided bits, measures after a Hadamard, and majority-votes
``reps`` repetitions.  Guard stages are extra low-order bits estimated
first and dropped from the reported result.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any

from numpy.random import Generator

from .bounds import const_precision_trials, round_up_to_odd
from .phase import (
    GUARD_BITS,
    BitString,
    Phase,
    corrected_residual,
    double_k,
    mod1_distance,
    phase_from_bits,
    post_h_prob_one,
)
from .sampling import majority, run_trials


class Feedback(enum.Enum):
    """Source of the correction bits: measured majorities or the true phase."""

    ESTIMATED = "estimated"
    ORACLE = "oracle"


@dataclass(frozen=True)
class EstimatorConfig:
    """Engine parameters: bits to report, correction window, repetitions, guards."""

    n: int
    window: int
    reps: int = 1
    guard: int = 0
    feedback: Feedback = Feedback.ESTIMATED

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("bit count must be positive")
        if self.window < 0:
            raise ValueError("window must be nonnegative")
        if self.guard < 0:
            raise ValueError("guard count must be nonnegative")
        if self.reps < 1 or self.reps % 2 == 0:
            raise ValueError("repetitions must be a positive odd integer")
        if self.reps > 1 and self.window < 2:
            # window w has degree w+1; degree 2 leaves a cos^2(pi/4) = 1/2
            # per-test floor and no majority margin at all.
            raise ValueError("degree too small for majority margin")


@dataclass(frozen=True)
class StageRecord:
    """Diagnostics for one stage: index, corrected residual, vote counts, decision."""

    stage: int
    residual: Phase
    trials: int
    ones: int
    bit: int


@dataclass(frozen=True)
class EstimationResult:
    """Estimated bits with the per-stage log and the Hadamard-test count."""

    bits: BitString
    estimate: Phase
    stage_log: tuple[Any, ...]
    total_tests: int
    warnings: tuple[str, ...] = ()


def semiclassical_estimate(phi: Phase, cfg: EstimatorConfig, rng: Generator) -> EstimationResult:
    """Run the measurement-feedback engine against the eigenphase ``phi``.

    Stage i (i = n+guard down to 1) works on 2**(i-1) * phi: corrections
    from the decided bits at positions i+1 .. i+window (ORACLE feedback
    substitutes the true bits of phi) are subtracted, the post-Hadamard
    one-probability of the residual drives ``reps`` Bernoulli trials,
    and the majority becomes bit x_i.  Guard bits are dropped from the
    reported string.
    """
    total_stages = cfg.n + cfg.guard
    if total_stages + cfg.window > phi.width - GUARD_BITS:
        raise ValueError(
            f"configuration needs {total_stages + cfg.window} significant bits; "
            f"width {phi.width} allows {phi.width - GUARD_BITS}"
        )
    decided: dict[int, int] = {}
    log: list[StageRecord] = []
    for i in range(total_stages, 0, -1):
        phi_i = double_k(phi, i - 1)
        if cfg.feedback is Feedback.ORACLE:
            prior = [phi.bit(i + offset) for offset in range(1, cfg.window + 1)]
        else:
            available = min(cfg.window, total_stages - i)
            prior = [decided[i + offset] for offset in range(1, available + 1)]
        residual = corrected_residual(phi_i, prior)
        stats = run_trials(post_h_prob_one(residual), cfg.reps, rng)
        bit = majority(stats)
        decided[i] = bit
        log.append(StageRecord(stage=i, residual=residual, trials=stats.t, ones=stats.h, bit=bit))
    bits = BitString(tuple(decided[i] for i in range(1, cfg.n + 1)))
    return EstimationResult(
        bits=bits,
        estimate=phase_from_bits(bits, phi.width),
        stage_log=tuple(log),
        total_tests=cfg.reps * total_stages,
    )


def full_qft_estimate(phi: Phase, n: int, rng: Generator) -> EstimationResult:
    """Textbook QPE: every decided bit feeds corrections (window n-1), one shot per bit."""
    cfg = EstimatorConfig(n=n, window=n - 1, reps=1, guard=0, feedback=Feedback.ESTIMATED)
    return semiclassical_estimate(phi, cfg, rng)


def aqft_estimate(phi: Phase, n: int, degree: int, rng: Generator) -> EstimationResult:
    """Approximate-QFT QPE of the given degree: window degree-1, one shot per bit."""
    if degree < 2:
        raise ValueError("degree must be at least 2")
    cfg = EstimatorConfig(n=n, window=degree - 1, reps=1, guard=0, feedback=Feedback.ESTIMATED)
    return semiclassical_estimate(phi, cfg, rng)


def constant_precision_estimate(
    phi: Phase,
    n: int,
    degree: int,
    eps: float,
    rng: Generator,
    reps: int | None = None,
    guard: int | None = None,
) -> EstimationResult:
    """Constant-precision QPE: fixed-degree corrections, majority-voted repetitions.

    The per-bit failure budget is eps/n and the repetition count comes
    from the majority Chernoff inversion (bumped to odd).  Two guard
    stages keep the reported bits' residuals inside the degree window;
    ``reps``/``guard`` exist as explicit overrides.
    """
    if degree < 3:
        raise ValueError("degree too small for majority margin")
    if not 0.0 < eps < 1.0:
        raise ValueError("failure budget must lie in (0, 1)")
    if reps is None:
        reps = round_up_to_odd(const_precision_trials(eps / n, degree))
    cfg = EstimatorConfig(
        n=n,
        window=degree - 1,
        reps=reps,
        guard=2 if guard is None else guard,
        feedback=Feedback.ESTIMATED,
    )
    return semiclassical_estimate(phi, cfg, rng)


def is_success(result: EstimationResult, phi: Phase, n: int) -> bool:
    """Whether the estimate is within 2**-n of phi on the circle (inclusive).

    Inclusive at the boundary: for phi between two n-bit grid points,
    both neighbours count as success.
    """
    if not 1 <= n <= phi.width:
        raise ValueError("n must lie in 1..width")
    est = phase_from_bits(result.bits, phi.width)
    span = 1 << phi.width
    d = (est.raw - phi.raw) % span
    return min(d, span - d) <= (1 << (phi.width - n))


def estimation_error(result: EstimationResult, phi: Phase) -> float:
    """Mod-1 distance between the estimated bits and the true phase."""
    return mod1_distance(phase_from_bits(result.bits, phi.width), phi)
