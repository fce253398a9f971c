"""Streaming solver for samples arriving in ascending score order.

Each arrival becomes a new top block, which is then merged leftward while it
violates monotonicity, so the stack is the optimal partition of everything
seen so far after every push (it matches the offline stack solver on each
prefix). Out-of-order arrivals are rejected: general unordered updates can
force a full refit per sample, so the honest contract is an explicit error
and the offline path.

Single-writer state: ``push`` mutates; reading a quiescent state from other
threads is safe.
"""

from __future__ import annotations

import math
from typing import Any

from .core import Block, Sample, Staircase, _check_sample, blocks_to_staircase
from .errors import EmptyProblem, InvalidConfig, OutOfOrder
from .losses import supports_merge

__all__ = ["OnlineState"]


class OnlineState:
    """Incrementally maintained optimal staircase for an ordered stream."""

    def __init__(self, family: Any) -> None:
        if not supports_merge(family):
            raise InvalidConfig(
                f"family {getattr(family, 'name', family)!r} has no merge rule; "
                "the streaming solver needs one"
            )
        self._family = family
        self._scores: list[float] = []
        self._firsts: list[int] = []
        self._ys: list[float] = []
        self._lams: list[float] = []
        self.cumulative_merges = 0

    @property
    def n_seen(self) -> int:
        return len(self._scores)

    @property
    def step_count(self) -> int:
        return len(self._ys)

    @property
    def last_score(self) -> float:
        return self._scores[-1] if self._scores else -math.inf

    def push(self, sample: Sample) -> None:
        """Absorb one arrival; merges leftward until monotone again."""
        _check_sample(sample)
        family = self._family
        if self._scores and sample.score < self._scores[-1]:
            raise OutOfOrder(
                f"score {sample.score!r} arrived after {self._scores[-1]!r}; "
                "sort the data and use an offline solver instead"
            )
        y = family.minimizer_of(sample)
        lam = family.init_aux(sample)
        first = len(self._scores)
        if self._scores and sample.score == self._scores[-1]:
            # Same score, same mapping: fold into the top block before any
            # violation checks.
            y, lam = family.merge(self._ys[-1], self._lams[-1], y, lam)
            first = self._firsts[-1]
            self._firsts.pop()
            self._ys.pop()
            self._lams.pop()
            self.cumulative_merges += 1
        self._scores.append(sample.score)
        while self._ys and self._ys[-1] >= y:
            y, lam = family.merge(self._ys[-1], self._lams[-1], y, lam)
            first = self._firsts[-1]
            self._firsts.pop()
            self._ys.pop()
            self._lams.pop()
            self.cumulative_merges += 1
        self._firsts.append(first)
        self._ys.append(y)
        self._lams.append(lam)

    def blocks(self) -> tuple[Block, ...]:
        n = len(self._scores)
        firsts = self._firsts
        return tuple(
            Block(firsts[i], (firsts[i + 1] - 1) if i + 1 < len(firsts) else n - 1,
                  self._ys[i], self._lams[i])
            for i in range(len(firsts))
        )

    def current(self) -> Staircase:
        """Materialize the optimal staircase for the samples seen so far."""
        if not self._ys:
            raise EmptyProblem("no samples pushed yet")
        return blocks_to_staircase(self.blocks(), self._scores)
