"""Selective inference over sets of hypotheses (Benjamini-Bogomolov).

Sets are screened locally, and the sets that survive screening are
corrected at a level reduced by the fraction of sets selected.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from . import fdr
from .errors import DomainError
from .fdr import FdrOutcome, Method, PValueSet

logger = logging.getLogger(__name__)

Screening = Callable[[PValueSet, float], bool]


@dataclass(frozen=True, eq=False)
class Partition:
    """Assignment of every test to exactly one set.

    ``set_labels`` fixes the order of the sets and may name sets that own no
    test; those still count towards S.
    """

    labels: np.ndarray
    set_labels: Tuple[str, ...]

    @classmethod
    def from_labels(cls, labels, declared: Optional[Sequence[str]] = None):
        labels = np.asarray([str(label) for label in labels], dtype=object)
        seen = list(dict.fromkeys(labels.tolist()))
        if declared is None:
            set_labels = tuple(seen)
        else:
            set_labels = tuple(str(label) for label in declared)
            unknown = [label for label in seen if label not in set_labels]
            if unknown:
                raise DomainError(
                    "tests assigned to undeclared sets: {}".format(", ".join(unknown))
                )
        if len(set(set_labels)) != len(set_labels):
            raise DomainError("set labels must be unique")
        return cls(labels, set_labels)

    @property
    def S(self):
        return len(self.set_labels)

    @property
    def size(self):
        return int(self.labels.size)

    def members(self, label):
        return np.flatnonzero(self.labels == label)


@dataclass(frozen=True, eq=False)
class BbOutcome:
    R: int
    S: int
    selected: Tuple[str, ...]
    q_prime: float
    per_set: Dict[str, FdrOutcome] = field(default_factory=dict)
    rejected: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=bool))
    # second-stage adjusted values; NaN outside the selected sets
    adjusted: np.ndarray = field(default_factory=lambda: np.zeros(0))
    selected_mask: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=bool))

    @property
    def n_rejected(self):
        return int(np.count_nonzero(self.rejected))


def simes_test(p, alpha):
    """Simes global test: does any p_(i) sit on or below i * alpha / V?

    Evaluated through the BH adjusted values, so it is true exactly when BH
    at ``alpha`` rejects at least one hypothesis. An empty set is never
    rejected.
    """
    values = p.values if isinstance(p, PValueSet) else np.asarray(p, dtype=float)
    if values.size == 0:
        return False
    ps = PValueSet.coerce(p)
    return bool(fdr.bh_corrected(ps)[0] <= alpha)


def screen_with(method):
    """Screening that selects a set when ``method`` rejects anything in it."""
    method = Method.parse(method)

    def screening(p, alpha):
        return fdr.decide(p, method, alpha).n_rejected > 0

    return screening


def bb_procedure(
    p,
    partition: Partition,
    q: float = 0.05,
    screening_level: float = 0.05,
    second_stage=Method.BH,
    screening: Screening = simes_test,
) -> BbOutcome:
    values = np.asarray(p, dtype=float).ravel()
    q = fdr.check_level(q)
    screening_level = fdr.check_level(screening_level, "screening level")
    second_stage = Method.parse(second_stage)
    if partition.S == 0:
        raise DomainError("the partition declares no sets")
    if partition.size != values.size:
        raise DomainError(
            "partition covers {} tests but {} p-values were given".format(
                partition.size, values.size
            )
        )

    members = {label: partition.members(label) for label in partition.set_labels}
    selected = tuple(
        label
        for label, idx in members.items()
        if idx.size > 0 and screening(PValueSet.from_values(values[idx]), screening_level)
    )
    R = len(selected)
    rejected = np.zeros(values.size, dtype=bool)
    adjusted = np.full(values.size, np.nan)
    selected_mask = np.zeros(values.size, dtype=bool)

    if R == 0:
        logger.debug("no set survived screening at %g", screening_level)
        return BbOutcome(0, partition.S, (), 0.0, {}, rejected, adjusted, selected_mask)

    q_prime = q * R / partition.S
    logger.debug("selected %d of %d sets, q' = %g", R, partition.S, q_prime)
    per_set = {}
    for label in selected:
        idx = members[label]
        outcome = fdr.decide(values[idx], second_stage, q_prime)
        per_set[label] = outcome
        rejected[idx] = outcome.rejected
        adjusted[idx] = outcome.adjusted_p
        selected_mask[idx] = True
    return BbOutcome(
        R, partition.S, selected, q_prime, per_set, rejected, adjusted, selected_mask
    )
