"""Offline solvers: pass-based group merging and the single-sweep stack variant.

Both return the same partition: maximal runs of adjacent groups whose
minimizers fail to strictly increase are merged (the violation test is
``y_i >= y_{i+1}``, exact comparison, so equal minimizers merge too) until
the block minimizers strictly increase. ``fit_stack`` is the production
solver (one left-to-right sweep, linear time for O(1) merge rules);
``fit_direct`` is the pass-structured reference kept for differential
testing and pass-trace inspection.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .core import Block, Problem, blocks_loss

__all__ = ["FitReport", "fit_direct", "fit_stack", "direct_passes"]


@dataclass(frozen=True)
class FitReport:
    """Fit outcome: final blocks plus merge accounting.

    ``merge_count`` always equals N - S (samples minus stairs). ``passes``
    counts joining passes and is set by the direct solver only.
    """

    blocks: tuple[Block, ...]
    merge_count: int
    total_loss: float
    passes: int | None = None


def _single_sample_groups(problem: Problem) -> list[Block]:
    family = problem.family
    return [
        Block(i, i, family.minimizer_of(s), family.init_aux(s))
        for i, s in enumerate(problem.samples)
    ]


def _join_pass(groups: list[Block], family) -> tuple[list[Block], int]:
    """One simultaneous pass: join every maximal run of violating pairs."""
    out: list[Block] = []
    merges = 0
    i = 0
    n = len(groups)
    while i < n:
        j = i
        while j + 1 < n and groups[j].minimizer >= groups[j + 1].minimizer:
            j += 1
        if j == i:
            out.append(groups[i])
        else:
            y, lam = groups[i].minimizer, groups[i].aux
            for k in range(i + 1, j + 1):
                y, lam = family.merge(y, lam, groups[k].minimizer, groups[k].aux)
            out.append(Block(groups[i].first, groups[j].last, y, lam))
            merges += j - i
        i = j + 1
    return out, merges


def direct_passes(problem: Problem) -> Iterator[tuple[Block, ...]]:
    """Yield the group state after each joining pass of the direct solver."""
    groups = _single_sample_groups(problem)
    while True:
        groups, merges = _join_pass(groups, problem.family)
        if merges == 0:
            return
        yield tuple(groups)


def fit_direct(problem: Problem) -> FitReport:
    """Pass-based solver: rebuild the violation set and join until none remain."""
    groups = _single_sample_groups(problem)
    passes = 0
    total_merges = 0
    while True:
        groups, merges = _join_pass(groups, problem.family)
        if merges == 0:
            break
        passes += 1
        total_merges += merges
    return FitReport(
        blocks=tuple(groups),
        merge_count=total_merges,
        total_loss=blocks_loss(problem, groups),
        passes=passes,
    )


def fit_stack(problem: Problem) -> FitReport:
    """Single left-to-right sweep keeping a stack of merged blocks."""
    family = problem.family
    minimizer_of = family.minimizer_of
    init_aux = family.init_aux
    merge = family.merge

    firsts: list[int] = []
    ys: list[float] = []
    lams: list[float] = []
    merges = 0
    for idx, sample in enumerate(problem.samples):
        y = minimizer_of(sample)
        lam = init_aux(sample)
        first = idx
        while ys and ys[-1] >= y:
            y, lam = merge(ys[-1], lams[-1], y, lam)
            first = firsts[-1]
            firsts.pop()
            ys.pop()
            lams.pop()
            merges += 1
        firsts.append(first)
        ys.append(y)
        lams.append(lam)

    n = len(problem.samples)
    blocks = tuple(
        Block(firsts[i], (firsts[i + 1] - 1) if i + 1 < len(firsts) else n - 1, ys[i], lams[i])
        for i in range(len(firsts))
    )
    return FitReport(
        blocks=blocks,
        merge_count=merges,
        total_loss=blocks_loss(problem, blocks),
    )
