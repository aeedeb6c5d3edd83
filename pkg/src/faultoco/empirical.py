"""Streaming empirical distribution of inter-observation gaps.

The plug-in estimate of the conditional observation probability at elapsed
gap ``d`` is the empirical hazard

    p_hat(d) = 1 - (1 - F(d)) / (1 - F(d - 1)) = #{gaps == d} / #{gaps >= d}.

`GapHistogram` keeps sorted distinct gaps with counts plus a cursor and the
running tail count ``Z = #{gaps >= elapsed}``, so each waiting round costs
O(1) and no recount over past gaps is ever needed.
"""

from __future__ import annotations

import bisect
import csv


class GapHistogram:
    """Sorted gap records ``J`` with counts ``C``.

    Between observations the histogram is in a waiting state: ``elapsed``
    is the gap the next observation would have, ``cursor`` indexes the
    smallest recorded gap ``>= elapsed`` and ``Z`` is the number of recorded
    gaps ``>= elapsed``.

    With ``exclude_current`` the estimate uses only previously recorded gaps
    and falls back to the include-current value when that would be 0 or 0/0.
    """

    def __init__(self, exclude_current: bool = False):
        self.J: list[int] = []
        self.C: list[int] = []
        self.k = 0
        self.Z = 0
        self.cursor = 0
        self.elapsed = 1
        self.exclude_current = exclude_current

    def __repr__(self) -> str:
        return f"GapHistogram(k={self.k}, distinct={len(self.J)}, elapsed={self.elapsed}, Z={self.Z})"

    def advance_round(self) -> GapHistogram:
        """One more round passed without an observation."""
        self.elapsed += 1
        i = self.cursor
        if i < len(self.J) and self.elapsed > self.J[i]:
            self.Z -= self.C[i]
            self.cursor = i + 1
        return self

    def record_observation_and_estimate(self, gap: int) -> float:
        """Record an observation after ``gap`` rounds and return ``p_hat``.

        ``gap`` must be at least the current elapsed count; missing waiting
        rounds are advanced here.  Afterwards the histogram waits for the next
        gap.
        """
        gap = int(gap)
        if gap <= 0:
            raise ValueError(f"gap must be a positive integer, got {gap}")
        if gap < self.elapsed:
            raise ValueError(f"gap {gap} is shorter than the {self.elapsed} rounds already elapsed")
        # Same end state as calling advance_round until elapsed == gap, but
        # only walks the recorded gaps that are passed.
        J, C = self.J, self.C
        while self.cursor < len(J) and J[self.cursor] < gap:
            self.Z -= C[self.cursor]
            self.cursor += 1
        self.elapsed = gap

        i = self.cursor
        prev_eq = self.C[i] if i < len(self.J) and self.J[i] == gap else 0
        prev_ge = self.Z

        if prev_eq:
            self.C[i] += 1
        else:
            self.J.insert(i, gap)
            self.C.insert(i, 1)
        self.k += 1
        self.Z += 1

        if self.exclude_current and prev_eq > 0:
            p_hat = prev_eq / prev_ge
        else:
            p_hat = self.C[i] / self.Z

        self.elapsed = 1
        self.cursor = 0
        self.Z = self.k
        return p_hat

    def count_eq(self, d: int) -> int:
        i = bisect.bisect_left(self.J, d)
        return self.C[i] if i < len(self.J) and self.J[i] == d else 0

    def count_le(self, d: int) -> int:
        return sum(self.C[: bisect.bisect_right(self.J, d)])

    def empirical_cdf(self, d: int) -> float:
        """Fraction of recorded gaps ``<= d`` (0 when nothing is recorded)."""
        if self.k == 0:
            return 0.0
        return self.count_le(d) / self.k

    def items(self) -> list[tuple[int, int]]:
        return list(zip(self.J, self.C))

    def dump_csv(self, path_or_file) -> None:
        """Write ``gap,count`` rows."""
        if hasattr(path_or_file, "write"):
            self._write(path_or_file)
        else:
            with open(path_or_file, "w", newline="") as fh:
                self._write(fh)

    def _write(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["gap", "count"])
        w.writerows(self.items())


def empirical_cdf(hist: GapHistogram, d: int) -> float:
    return hist.empirical_cdf(d)

