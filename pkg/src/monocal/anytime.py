"""Anytime solver: per-group bisection on minimizers via a derivative oracle.

For losses whose group minimizers are costly to compute exactly, every group
keeps a bracket [lower, upper] around its minimizer. Each round probes the
bracket midpoint, evaluates the negative derivative of the group's summed
loss there, joins adjacent groups whose derivative signs cross downward
while their brackets coincide, and then halves every bracket on the probed
side. Stopping is the caller's choice: after any round the bracket midpoints
are a valid answer with error at most half the widest bracket.

Groups start bound-synchronized, so brackets only ever diverge between
groups whose fitted values are already correctly ordered; a pair that must
eventually join keeps identical brackets until its signs cross and the join
fires. With no finite initial bounds, probing follows a doubling pattern
(0, +-1, then geometric growth) until a sign flip produces a finite bracket.

Joining on a downward sign crossing is exactly the monotonicity-violation
test of the merge solvers, evaluated through derivatives: the left minimizer
sits at or above the probe while the right sits at or below it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

from .core import Block, Problem, Staircase, blocks_to_staircase
from .errors import EmptyProblem, InvalidConfig, NoWidth, OracleFailure, Unbounded
from .losses import DerivativeOracle

__all__ = [
    "AnytimeGroup",
    "AnytimeConfig",
    "AnytimeResult",
    "probe_point",
    "anytime_init",
    "iterate",
    "anytime_run",
]


@dataclass(frozen=True, slots=True)
class AnytimeGroup:
    """Bisection state for one contiguous sample group.

    ``probe`` is the point where ``neg_deriv`` was last evaluated (None
    before the first round). A group settles when a probe hits its minimizer
    exactly (zero derivative collapses both bounds onto the probe).
    """

    first: int
    last: int
    upper: float
    lower: float
    probe: float | None = None
    neg_deriv: float | None = None

    @property
    def settled(self) -> bool:
        return self.upper == self.lower

    @property
    def width(self) -> float:
        return self.upper - self.lower


@dataclass(frozen=True)
class AnytimeConfig:
    """Initial bracket, target width, and round cap.

    Infinite bounds (the default) engage the doubling probe pattern until
    each group finds a finite bracket on its own.
    """

    init_upper: float = math.inf
    init_lower: float = -math.inf
    delta: float = 1e-6
    max_iters: int = 256

    def __post_init__(self) -> None:
        if not self.delta > 0:
            raise InvalidConfig(f"delta must be positive, got {self.delta!r}")
        if not self.init_upper > self.init_lower:
            raise InvalidConfig(
                f"need init_upper > init_lower, got "
                f"({self.init_upper!r}, {self.init_lower!r})"
            )
        if self.max_iters < 0:
            raise InvalidConfig(f"max_iters must be >= 0, got {self.max_iters!r}")


@dataclass(frozen=True)
class AnytimeResult:
    """Staircase read off the final brackets, plus convergence diagnostics.

    Fitted values are bracket midpoints, so each is within ``width_bound / 2``
    of the exact minimizer. ``groups`` exposes the per-block brackets.
    """

    staircase: Staircase
    width_bound: float
    iters: int
    groups: tuple[AnytimeGroup, ...]


def probe_point(upper: float, lower: float) -> float:
    """Next evaluation point for a bracket: midpoint, or the doubling pattern.

    Finite brackets probe their midpoint. Half-infinite brackets probe 0
    first, then +-1, then double away from zero until a sign flip closes the
    bracket; a fully infinite bracket starts at 0.
    """
    if not upper > lower:
        raise NoWidth(f"bracket has no width: ({upper!r}, {lower!r})")
    if upper == math.inf:
        if lower == -math.inf:
            return 0.0
        if lower < 0.0:
            return 0.0
        if lower < 1.0:
            return 1.0
        return 2.0 * lower
    if lower == -math.inf:
        if upper > 0.0:
            return 0.0
        if upper > -1.0:
            return -1.0
        return 2.0 * upper
    return 0.5 * upper + 0.5 * lower


def anytime_init(problem: Problem, config: AnytimeConfig) -> list[AnytimeGroup]:
    """One group per sample, all sharing the configured bounds."""
    if not problem.samples:
        raise EmptyProblem("cannot calibrate zero samples")
    return [
        AnytimeGroup(i, i, config.init_upper, config.init_lower)
        for i in range(len(problem.samples))
    ]


def _joinable(left: AnytimeGroup, right: AnytimeGroup) -> bool:
    return (
        left.upper == right.upper
        and left.lower == right.lower
        and left.neg_deriv >= 0.0 >= right.neg_deriv
    )


def iterate(groups: Sequence[AnytimeGroup], oracle: DerivativeOracle) -> list[AnytimeGroup]:
    """One full round: probe every unsettled group, join sign crossings, halve.

    Pure transformation; the input list is not modified. Probes within a
    round are independent of one another.
    """
    probed: list[AnytimeGroup] = []
    for g in groups:
        if g.settled:
            probed.append(g)
            continue
        c = probe_point(g.upper, g.lower)
        d = oracle.neg_derivative_at(g.first, g.last, c)
        if math.isnan(d):
            raise OracleFailure(
                f"derivative oracle returned NaN at z={c!r} "
                f"for samples [{g.first}, {g.last}]"
            )
        probed.append(replace(g, probe=c, neg_deriv=d))

    # Join scan with re-testing, so chains of three or more groups collapse
    # within the round.
    joined: list[AnytimeGroup] = []
    for g in probed:
        joined.append(g)
        while len(joined) >= 2 and _joinable(joined[-2], joined[-1]):
            right = joined.pop()
            left = joined.pop()
            joined.append(
                replace(left, last=right.last, neg_deriv=left.neg_deriv + right.neg_deriv)
            )

    out: list[AnytimeGroup] = []
    for g in joined:
        if g.settled:
            out.append(g)
            continue
        upper, lower = g.upper, g.lower
        if g.neg_deriv >= 0.0:
            lower = g.probe
        if g.neg_deriv <= 0.0:
            upper = g.probe
        out.append(replace(g, upper=upper, lower=lower))
    return out


def anytime_run(problem: Problem, config: AnytimeConfig) -> AnytimeResult:
    """Iterate rounds until every bracket is at most ``delta`` wide.

    Stops early at ``max_iters``; if any bracket is still infinite at that
    point the loss has no finite minimizer to find and the run fails.
    """
    groups = anytime_init(problem, config)
    oracle = DerivativeOracle(problem.samples, problem.family)
    iters = 0
    while iters < config.max_iters and any(g.width > config.delta for g in groups):
        groups = iterate(groups, oracle)
        iters += 1
    if any(math.isinf(g.width) for g in groups):
        raise Unbounded(
            f"no finite bracket after {iters} rounds; "
            "the loss appears to have no finite minimizer"
        )
    scores = [s.score for s in problem.samples]
    blocks = [
        Block(g.first, g.last, 0.5 * g.upper + 0.5 * g.lower, g.width) for g in groups
    ]
    return AnytimeResult(
        staircase=blocks_to_staircase(blocks, scores),
        width_bound=max(g.width for g in groups),
        iters=iters,
        groups=tuple(groups),
    )
