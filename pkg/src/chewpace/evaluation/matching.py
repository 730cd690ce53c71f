from __future__ import annotations

from bisect import bisect_left, bisect_right
from collections.abc import Sequence
from dataclasses import dataclass

from .annotations import AnnotationInterval

DEFAULT_TOLERANCE_MS = 150.0
# Absorbs float error so a separation of exactly the tolerance still matches.
_EPS_S = 1e-9


@dataclass(frozen=True)
class Matching:
    pairs: tuple[tuple[int, int], ...]
    n_predicted: int
    n_truth: int
    tolerance_ms: float = DEFAULT_TOLERANCE_MS

    @property
    def true_positives(self) -> int:
        return len(self.pairs)

    @property
    def false_positives(self) -> int:
        return self.n_predicted - len(self.pairs)

    @property
    def false_negatives(self) -> int:
        return self.n_truth - len(self.pairs)

    @property
    def unmatched_predicted(self) -> tuple[int, ...]:
        matched = {p for p, _ in self.pairs}
        return tuple(i for i in range(self.n_predicted) if i not in matched)

    @property
    def unmatched_truth(self) -> tuple[int, ...]:
        matched = {t for _, t in self.pairs}
        return tuple(i for i in range(self.n_truth) if i not in matched)


def match_events(
    predicted: Sequence[float],
    truth: Sequence[AnnotationInterval] | Sequence[float],
    tolerance_ms: float = DEFAULT_TOLERANCE_MS,
) -> Matching:
    """Greedy one-to-one matching of predicted chew times to truth centers.

    Predictions are visited in time order; each takes the nearest unmatched
    truth center within ``tolerance_ms`` (earlier center on ties). Pair
    indices refer to the time-sorted sequences.
    """
    pred = sorted(float(t) for t in predicted)
    centers = sorted(
        item.center_s if isinstance(item, AnnotationInterval) else float(item)
        for item in truth
    )
    tol = tolerance_ms / 1000.0 + _EPS_S
    taken = [False] * len(centers)
    pairs: list[tuple[int, int]] = []

    for p_idx, p in enumerate(pred):
        lo = bisect_left(centers, p - tol)
        hi = bisect_right(centers, p + tol)
        best: int | None = None
        best_dist = 0.0
        for t_idx in range(lo, hi):
            if taken[t_idx]:
                continue
            dist = abs(centers[t_idx] - p)
            if best is None or dist < best_dist:
                best, best_dist = t_idx, dist
        if best is not None:
            taken[best] = True
            pairs.append((p_idx, best))

    return Matching(
        pairs=tuple(pairs),
        n_predicted=len(pred),
        n_truth=len(centers),
        tolerance_ms=tolerance_ms,
    )
