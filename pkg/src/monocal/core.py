"""Shared domain types: samples, blocks, the staircase transform, input normalization.

A calibration problem is a score-sorted sequence of samples plus a loss
family. Solvers partition the samples into contiguous blocks with one fitted
value each; the resulting transform is a right-continuous nondecreasing step
function (`Staircase`) with strictly increasing step values.

Everything here is immutable after construction and safe to share across
threads; the operations are pure functions.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from itertools import pairwise
from typing import Any, Iterable, Sequence

from .errors import EmptyProblem, InvalidValue, InvalidWeight, NotMonotone

__all__ = [
    "Sample",
    "Problem",
    "Block",
    "Staircase",
    "normalize",
    "evaluate",
    "blocks_to_staircase",
    "blocks_loss",
]


@dataclass(frozen=True, slots=True)
class Sample:
    """One (score, loss) observation.

    ``score`` may be +-inf. For the built-in families ``target`` is the
    regression target (or the binary label for log loss, possibly fractional
    after equal-score merging) and ``weight`` the positive sample weight.
    Custom families may carry an opaque per-sample loss handle in ``payload``.
    """

    score: float
    target: float = 0.0
    weight: float = 1.0
    payload: Any = None


@dataclass(frozen=True)
class Problem:
    """Samples sorted ascending by score, equal scores pre-merged.

    ``loss_offset`` is the constant dropped when equal-score samples were
    merged into composites; adding it back makes any loss computed on the
    normalized samples equal the loss on the raw input.
    """

    samples: tuple[Sample, ...]
    family: Any
    loss_offset: float = 0.0


@dataclass(frozen=True, slots=True)
class Block:
    """Contiguous sample range [first, last] sharing one fitted value.

    ``minimizer`` is the argmin of the block's summed loss. ``aux`` is the
    family's auxiliary merge parameter (the weight sum for the built-in
    families); the anytime solver stores its bracket width here instead.
    """

    first: int
    last: int
    minimizer: float
    aux: float

    def __post_init__(self) -> None:
        if self.first > self.last:
            raise InvalidValue(f"block range [{self.first}, {self.last}] is empty")


@dataclass(frozen=True)
class Staircase:
    """Right-continuous nondecreasing step function.

    ``values`` are strictly increasing; ``breakpoints`` are strictly
    increasing and one shorter than ``values``. At a breakpoint the step to
    the right applies.
    """

    breakpoints: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.values:
            raise EmptyProblem("a staircase needs at least one value")
        if len(self.breakpoints) != len(self.values) - 1:
            raise InvalidValue(
                f"{len(self.breakpoints)} breakpoints do not fit "
                f"{len(self.values)} values"
            )
        for a, b in pairwise(self.values):
            if not a < b:
                raise InvalidValue(f"step values must strictly increase ({a!r} !< {b!r})")
        for a, b in pairwise(self.breakpoints):
            if not a < b:
                raise InvalidValue(f"breakpoints must strictly increase ({a!r} !< {b!r})")

    @property
    def step_count(self) -> int:
        return len(self.values)

    def value_at(self, x: float) -> float:
        return evaluate(self, x)

    def __call__(self, x: float) -> float:
        return evaluate(self, x)


def _check_sample(sample: Sample) -> None:
    if math.isnan(sample.score):
        raise InvalidValue("sample score is NaN")
    if math.isnan(sample.target) or math.isinf(sample.target):
        raise InvalidValue(f"sample target must be finite, got {sample.target!r}")
    if not sample.weight > 0 or math.isinf(sample.weight):
        raise InvalidWeight(f"sample weight must be positive and finite, got {sample.weight!r}")


def normalize(raw_samples: Iterable[Sample], family: Any) -> Problem:
    """Sort samples by score and merge equal scores into composite samples.

    Equal scores must map to the same calibrated value, so ties are folded
    into one composite per score via the family's tie rule; the additive
    constant this drops from the objective is kept in ``Problem.loss_offset``.
    Idempotent: normalizing a normalized problem's samples changes nothing.
    """
    samples = sorted(raw_samples, key=lambda s: s.score)
    if not samples:
        raise EmptyProblem("cannot calibrate zero samples")
    for s in samples:
        _check_sample(s)
    combine = getattr(family, "combine_ties", None)
    merged: list[Sample] = [samples[0]]
    offset = 0.0
    for s in samples[1:]:
        if s.score == merged[-1].score:
            if combine is None:
                raise InvalidValue(
                    f"family {getattr(family, 'name', family)!r} cannot merge "
                    f"equal scores (score {s.score!r} repeats)"
                )
            merged[-1], dropped = combine(merged[-1], s)
            offset += dropped
        else:
            merged.append(s)
    return Problem(tuple(merged), family, offset)


def evaluate(staircase: Staircase, x: float) -> float:
    """Value of the step function at ``x``; clamps beyond the outer steps."""
    if math.isnan(x):
        raise InvalidValue("cannot evaluate a staircase at NaN")
    return staircase.values[bisect_right(staircase.breakpoints, x)]


def _boundary(left_score: float, right_score: float) -> float:
    # Midpoint of the boundary scores; an infinite score falls back to its
    # finite neighbor, and (-inf, +inf) has no neighbor to fall back to.
    left_inf, right_inf = math.isinf(left_score), math.isinf(right_score)
    if left_inf and right_inf:
        return 0.0
    if left_inf:
        return right_score
    if right_inf:
        return left_score
    return 0.5 * left_score + 0.5 * right_score


def blocks_to_staircase(blocks: Sequence[Block], scores: Sequence[float]) -> Staircase:
    """Materialize solver blocks as a staircase over the given sample scores.

    Adjacent blocks with equal minimizers are collapsed first so the value
    sequence ends strictly increasing; each breakpoint is the midpoint of the
    scores astride the block boundary.
    """
    if not blocks:
        raise EmptyProblem("no blocks to materialize")
    for a, b in pairwise(blocks):
        if b.minimizer < a.minimizer:
            raise NotMonotone(
                f"block minimizers decrease ({a.minimizer!r} -> {b.minimizer!r}); "
                "solver output is inconsistent"
            )
    # Collapse equal-minimizer runs, keeping the covered index range.
    spans: list[tuple[int, int, float]] = []
    for blk in blocks:
        if spans and blk.minimizer == spans[-1][2]:
            spans[-1] = (spans[-1][0], blk.last, spans[-1][2])
        else:
            spans.append((blk.first, blk.last, blk.minimizer))
    breakpoints = []
    for (_, last, _), (nxt_first, _, _) in pairwise(spans):
        breakpoints.append(_boundary(scores[last], scores[nxt_first]))
    for a, b in pairwise(breakpoints):
        if not a < b:
            raise InvalidValue(
                "cannot place distinct breakpoints: a finite score is "
                "surrounded by infinite scores on both sides"
            )
    return Staircase(tuple(breakpoints), tuple(v for _, _, v in spans))


def blocks_loss(problem: Problem, blocks: Sequence[Block]) -> float:
    """Total loss of a block partition, including the tie-merge offset."""
    family = problem.family
    samples = problem.samples
    terms = [problem.loss_offset]
    for blk in blocks:
        value = blk.minimizer
        terms.extend(family.loss(samples[i], value) for i in range(blk.first, blk.last + 1))
    return math.fsum(terms)
