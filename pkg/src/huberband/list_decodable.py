"""Confidence sets that stay meaningful when most of the sample is contamination.

A candidate set ``H`` collects the points with at least 0.5% of the sample within distance 2.
A greedy packing of ``H`` with pairwise gaps above 4 gives a short list of location estimates,
one of which lies within 4 of the true location with high probability even for contamination
up to 99%.  Intersecting the union of ``[theta_hat - 4, theta_hat + 4]`` with a wide-margin
one-sided interval yields a confidence set made of a bounded number of intervals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .empirical import SortedSample
from .gaussian_arci import Interval, arci_over_range, t_max_for

NEIGHBOURHOOD = 2.0
MIN_FRACTION_DENOMINATOR = 200  # a candidate needs count / n >= 1 / 200
PACKING_GAP = 4.0 + 2.0 ** -40  # realises the strict "> 4" separation
HALF_WIDTH = 4.0
LIST_T_MIN = 4.0
LIST_MARGIN = 8.0
MAX_LIST = 200


def _merge(intervals) -> tuple:
    """Sort and merge closed intervals that overlap or touch."""
    out: list[list[float]] = []
    for a, b in sorted(intervals):
        if out and a <= out[-1][1]:
            out[-1][1] = max(out[-1][1], b)
        else:
            out.append([a, b])
    return tuple((float(a), float(b)) for a, b in out)


@dataclass(frozen=True)
class CandidateSet:
    """Disjoint sorted closed intervals ``[a_i, b_i]``."""

    intervals: tuple

    def contains(self, x: float) -> bool:
        return any(a <= x <= b for a, b in self.intervals)

    @property
    def empty(self) -> bool:
        return not self.intervals


def neighbour_counts(sample: SortedSample, x) -> np.ndarray:
    """``#{i : X_i - 2 <= x <= X_i + 2}`` for each ``x`` (brute force).

    The neighbourhood ends are the rounded values ``X_i -+ 2``, the same breakpoints the sweep in
    :func:`candidate_set` uses, so both agree at every floating point.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))[:, None]
    v = sample.values[None, :]
    return np.count_nonzero((v - NEIGHBOURHOOD <= x) & (x <= v + NEIGHBOURHOOD), axis=1)


def candidate_set(sample: SortedSample) -> CandidateSet:
    """Exact ``H = {x : #{|X_i - x| <= 2} / n >= 0.005}`` by a sweep over ``X_i -+ 2``."""
    x = sample.values
    n = sample.n
    starts = x - NEIGHBOURHOOD
    ends = x + NEIGHBOURHOOD
    # Closed neighbourhoods: at a shared coordinate, arrivals are counted before departures.
    pos = np.concatenate([starts, ends])
    kind = np.concatenate([np.zeros(n, dtype=np.int8), np.ones(n, dtype=np.int8)])
    order = np.lexsort((kind, pos))
    count = 0
    opened = None
    out = []
    for i in order:
        p = float(pos[i])
        if kind[i] == 0:
            count += 1
            if opened is None and count * MIN_FRACTION_DENOMINATOR >= n:
                opened = p
        else:
            count -= 1
            if opened is not None and count * MIN_FRACTION_DENOMINATOR < n:
                out.append((opened, p))
                opened = None
    return CandidateSet(_merge(out))


def build_list(H: CandidateSet) -> list[float]:
    """Greedy left-to-right packing of ``H`` with consecutive gaps ``4 + 2^-40``."""
    chosen: list[float] = []
    for a, b in H.intervals:
        cand = a if not chosen else max(a, chosen[-1] + PACKING_GAP)
        while cand <= b:
            chosen.append(float(cand))
            cand = cand + PACKING_GAP
    return chosen


def list_decode(sample: SortedSample) -> list[float]:
    return build_list(candidate_set(sample))


@dataclass(frozen=True)
class ConfidenceSet:
    """A union of disjoint closed intervals, sorted left to right."""

    intervals: tuple
    candidates: tuple = ()
    base: Interval | None = None
    diagnostics: tuple = ()

    @property
    def volume(self) -> float:
        return float(sum(u - l for l, u in self.intervals))

    @property
    def K(self) -> int:
        return len(self.intervals)

    @property
    def empty(self) -> bool:
        return not self.intervals

    def contains(self, theta: float) -> bool:
        return any(l <= theta <= u for l, u in self.intervals)

    def to_dict(self) -> dict:
        return {
            "components": [[l, u] for l, u in self.intervals],
            "volume": self.volume,
            "list": list(self.candidates),
            "empty": self.empty,
            "diagnostics": list(self.diagnostics),
        }


def intersect_union(base: Interval, pieces) -> tuple:
    """``[base.lower, base.upper]`` intersected with a union of closed intervals."""
    if base.empty:
        return ()
    out = []
    for a, b in _merge(pieces):
        lo, hi = max(a, base.lower), min(b, base.upper)
        if lo <= hi:
            out.append((lo, hi))
    return tuple(out)


def wide_interval(sample: SortedSample, alpha: float) -> Interval:
    """Intersection over ``4 <= t <= t_max`` of ``[theta_L(t) - 8/t, theta_R(t) + 8/t]``."""
    return arci_over_range(sample, LIST_T_MIN, t_max_for(sample.n, alpha), 1.0, LIST_MARGIN)


def confidence_set(sample: SortedSample, alpha: float, modified: bool = False) -> ConfidenceSet:
    """List-based confidence set for unit-scale data; with ``modified`` the bare wide interval is
    returned whenever it is shorter than 8."""
    base = wide_interval(sample, alpha)
    notes = list(base.diagnostics)
    if modified and not base.empty and base.length < 2.0 * HALF_WIDTH:
        return ConfidenceSet(((base.lower, base.upper),), (), base, tuple(notes))
    L = list_decode(sample)
    pieces = [(c - HALF_WIDTH, c + HALF_WIDTH) for c in L]
    comps = intersect_union(base, pieces)
    if not comps:
        notes.append("empty confidence set")
    if len(L) > MAX_LIST:
        raise AssertionError("list longer than the packing bound allows")
    return ConfidenceSet(comps, tuple(L), base, tuple(notes))


__all__ = [
    "CandidateSet", "ConfidenceSet", "candidate_set", "build_list", "list_decode", "neighbour_counts",
    "confidence_set", "wide_interval", "intersect_union", "PACKING_GAP", "MAX_LIST",
]
