"""Multiple-testing corrections.

Step-up false discovery rate procedures (BH, BY, BKY and its two-stage
variant) and the familywise baselines (Šidák, Bonferroni). Every decision
function returns an :class:`FdrOutcome` whose adjusted p-values agree with
its decisions: a test is rejected exactly when its adjusted p-value is at
most ``q``.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .errors import DomainError

logger = logging.getLogger(__name__)


class Method(Enum):
    BH = "bh"
    BY = "by"
    BKY = "bky"
    BKY2 = "bky2"
    SIDAK = "sidak"
    BONFERRONI = "bonferroni"
    UNCORRECTED = "uncorrected"

    @classmethod
    def parse(cls, name):
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).lower())
        except ValueError:
            raise DomainError("unknown correction method '{}'".format(name))


@dataclass(frozen=True, eq=False)
class PValueSet:
    """A non-empty vector of p-values together with its stable sort.

    ``order[k]`` is the original index of the k-th smallest value.
    """

    values: np.ndarray
    order: np.ndarray

    @classmethod
    def from_values(cls, values):
        arr = np.array(values, dtype=float).ravel()
        if arr.size == 0:
            raise DomainError("an empty p-value set cannot be corrected")
        if np.any(np.isnan(arr)) or np.any((arr < 0.0) | (arr > 1.0)):
            raise DomainError("p-values must lie in [0, 1]")
        return cls(arr, np.argsort(arr, kind="stable"))

    @classmethod
    def coerce(cls, p):
        if isinstance(p, cls):
            return p
        return cls.from_values(p)

    @property
    def size(self):
        return int(self.values.size)

    @property
    def sorted_values(self):
        return self.values[self.order]

    @property
    def ranks(self):
        return np.arange(1, self.size + 1, dtype=float)

    def unsort(self, in_sorted_order):
        out = np.empty_like(in_sorted_order)
        out[self.order] = in_sorted_order
        return out


@dataclass(frozen=True, eq=False)
class FdrOutcome:
    """Decisions of one correction run, in the original order of the tests.

    ``critical_p`` is the uncorrected p-value cutoff implied by the run: the
    largest rejected p-value for step-up procedures, the per-test level for
    the familywise and uncorrected ones, None when a step-up procedure
    rejects nothing.
    """

    rejected: np.ndarray
    adjusted_p: np.ndarray
    critical_p: Optional[float]
    q: float
    method: Method

    @property
    def n_rejected(self):
        return int(np.count_nonzero(self.rejected))

    @property
    def size(self):
        return int(self.rejected.size)


def check_level(q, name="q"):
    q = float(q)
    if not 0.0 < q < 1.0:
        raise DomainError("{} must lie strictly between 0 and 1, got {}".format(name, q))
    return q


def harmonic_number(n):
    return float(np.sum(1.0 / np.arange(1, n + 1, dtype=float)))


def bh_corrected(ps):
    """BH adjusted values in sorted order: running minimum from the top of p/(i/V)."""
    s = ps.sorted_values
    corrected = s / (ps.ranks / ps.size)
    return np.minimum.accumulate(corrected[::-1])[::-1]


def _from_adjusted(ps, adjusted_sorted, q, method):
    # adjusted values are non-decreasing in sorted order, so the rejections
    # are the leading ranks and the step-up cutoff is the last of them
    adjusted_sorted = np.minimum(adjusted_sorted, 1.0)
    k = int(np.count_nonzero(adjusted_sorted <= q))
    critical = float(ps.sorted_values[k - 1]) if k > 0 else None
    adjusted = ps.unsort(adjusted_sorted)
    return FdrOutcome(adjusted <= q, adjusted, critical, q, method)


def bh_decide(p, q):
    """Benjamini-Hochberg step-up at level ``q``."""
    ps = PValueSet.coerce(p)
    return _from_adjusted(ps, bh_corrected(ps), check_level(q), Method.BH)


def by_decide(p, q):
    """Benjamini-Yekutieli: BH with the slope deflated by the harmonic number of V."""
    ps = PValueSet.coerce(p)
    q = check_level(q)
    c = harmonic_number(ps.size)
    return _from_adjusted(ps, bh_corrected(ps) * c, q, Method.BY)


def _bky_slopes(V, q):
    i = np.arange(1, V + 1, dtype=float)
    return q / (V + 1 - i * (1 - q))


def _bky_outcome(ps, corrected, q, stop=None):
    # stop is the 0-based index of the first failing rank; without it the
    # decisions are read off the adjusted values
    adjusted_sorted = np.minimum(np.maximum.accumulate(corrected), 1.0)
    if stop is None:
        stop = int(np.count_nonzero(adjusted_sorted <= q))
    rejected_sorted = np.arange(ps.size) < stop
    critical = float(ps.sorted_values[stop - 1]) if stop > 0 else None
    return FdrOutcome(
        ps.unsort(rejected_sorted),
        ps.unsort(adjusted_sorted),
        critical,
        q,
        Method.BKY,
    )


def bky_decide(p, q):
    """Benjamini-Krieger-Yekutieli, evaluated literally in quadratic time.

    Rank i keeps being rejected while some j >= i has
    ``p_(j) <= j * q / (V + 1 - i * (1 - q))``; the scan stops at the first
    rank with no such j. Kept as the reference for :func:`bky_decide_fast`.
    """
    ps = PValueSet.coerce(p)
    q = check_level(q)
    s = ps.sorted_values
    V = ps.size
    ranks = ps.ranks
    slopes = _bky_slopes(V, q)

    stop = V
    for i in range(V):
        if not np.any(s[i:] <= ranks[i:] * slopes[i]):
            stop = i
            break

    corrected = np.empty(V)
    with np.errstate(divide="ignore", invalid="ignore"):
        for i in range(V):
            tail = s[i:]
            terms = tail * (V - i) / (ranks[i:] - ranks[i] * tail)
            corrected[i] = terms.min()
    return _bky_outcome(ps, corrected, q, stop)


def bky_decide_fast(p, q):
    """Benjamini-Krieger-Yekutieli in O(V log V).

    One suffix scan gives ``M_i = max_{j >= i} j / p_(j)``. Its arg-max is the
    most favourable j for the existence check at rank i, and that check
    holds exactly when the corrected value ``(V + 1 - i) / (M_i - i)`` is at
    most ``q``, so the decisions come from the adjusted values.
    """
    ps = PValueSet.coerce(p)
    q = check_level(q)
    ranks = ps.ranks

    with np.errstate(divide="ignore"):
        ratio = ranks / ps.sorted_values
    suffix_max = np.maximum.accumulate(ratio[::-1])[::-1]

    with np.errstate(divide="ignore"):
        corrected = (ps.size + 1 - ranks) / (suffix_max - ranks)
    return _bky_outcome(ps, corrected, q)


def bky_two_stage_decide(p, q):
    """Two-stage BKY: estimate the null count with BH at q/(1+q), then rerun BH.

    The adjusted values are specific to ``q``: they are BH adjusted values
    rescaled by the stage-one null estimate, so they only agree with the
    decisions at this level.
    """
    ps = PValueSet.coerce(p)
    q = check_level(q)
    V = ps.size
    q1 = q / (1 + q)
    bh_adjusted = bh_corrected(ps)
    first = int(np.count_nonzero(bh_adjusted <= q1))
    logger.debug("two-stage BKY: stage one rejected %d of %d", first, V)

    adjusted_sorted = bh_adjusted * (1 + q) * (V - first) / V
    if first == 0:
        # nothing passed stage one, so nothing may pass stage two
        adjusted_sorted = np.maximum(adjusted_sorted, np.nextafter(q, 1.0))
    return _from_adjusted(ps, adjusted_sorted, q, Method.BKY2)


def _fixed_level(adjusted, q, level, method):
    adjusted = np.minimum(adjusted, 1.0)
    return FdrOutcome(adjusted <= q, adjusted, level, q, method)


def sidak_level(alpha, V):
    alpha = check_level(alpha, "alpha")
    return -math.expm1(math.log1p(-alpha) / V)


def bonferroni_level(alpha, V):
    return check_level(alpha, "alpha") / V


def sidak_adjust(p, q=0.05):
    ps = PValueSet.coerce(p)
    q = check_level(q)
    with np.errstate(divide="ignore"):
        adjusted = -np.expm1(ps.size * np.log1p(-ps.values))
    return _fixed_level(adjusted, q, sidak_level(q, ps.size), Method.SIDAK)


def bonferroni_adjust(p, q=0.05):
    ps = PValueSet.coerce(p)
    q = check_level(q)
    adjusted = ps.values * ps.size
    return _fixed_level(
        adjusted, q, bonferroni_level(q, ps.size), Method.BONFERRONI
    )


def uncorrected_decide(p, q):
    ps = PValueSet.coerce(p)
    q = check_level(q)
    return _fixed_level(ps.values.copy(), q, q, Method.UNCORRECTED)


DECIDERS = {
    Method.BH: bh_decide,
    Method.BY: by_decide,
    Method.BKY: bky_decide_fast,
    Method.BKY2: bky_two_stage_decide,
    Method.SIDAK: sidak_adjust,
    Method.BONFERRONI: bonferroni_adjust,
    Method.UNCORRECTED: uncorrected_decide,
}


def decide(p, method, q):
    return DECIDERS[Method.parse(method)](p, q)
