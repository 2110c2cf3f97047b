"""Directional corrections for two-sided questions.

A two-tailed test answers two directional questions at once. The
strategies below differ in which p-values they hand to a correction method
and how the rejections are attributed to the positive and negative side.
"""
import logging
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

import numpy as np

from . import fdr, numerics
from .errors import DomainError
from .fdr import Method
from .pvalues import CONTINUOUS, TailConversionMode, TailKind, one_to_two_tailed
from .selective import BbOutcome, Partition, bb_procedure
from .utils.constants import (
    DEFAULT_Q,
    DEFAULT_SCREENING_LEVEL,
    NEG_INF,
    NEGATIVE_SET,
    POS_INF,
    POSITIVE_SET,
)

logger = logging.getLogger(__name__)


class StrategyKind(Enum):
    CANONICAL = "canonical"
    COMBINED = "combined"
    TWO_TAILED = "twotailed"
    SPLIT_TAILS = "splittails"
    CANONICAL_BB = "canonical-bb"
    SPLIT_TAILS_BB = "splittails-bb"

    @classmethod
    def parse(cls, name):
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).lower())
        except ValueError:
            raise DomainError("unknown strategy '{}'".format(name))


@dataclass(frozen=True, eq=False)
class DirectionalInput:
    """Statistics and their one-tailed p-values.

    ``p_one`` answers the positive question (large z). ``p_neg`` is
    ``1 - p_one`` and answers the negative one; when the p-values are derived
    from the statistics it is computed directly from the lower tail.
    """

    z: np.ndarray
    p_one: np.ndarray
    p_neg: np.ndarray
    dof: Optional[float] = None
    tail_mode: TailConversionMode = CONTINUOUS

    @classmethod
    def from_statistics(cls, z, dof=None, tail_mode=CONTINUOUS):
        z = _statistics(z)
        if dof is None:
            p_one, p_neg = numerics.normal_sf(z), numerics.normal_cdf(z)
        else:
            dof = numerics.check_dof(dof)
            p_one, p_neg = numerics.t_sf(z, dof), numerics.t_cdf(z, dof)
        return cls(z, np.asarray(p_one), np.asarray(p_neg), dof, tail_mode)

    @classmethod
    def from_pvalues(cls, z, p_one, dof=None, tail_mode=CONTINUOUS):
        z = _statistics(z)
        p_one = np.asarray(p_one, dtype=float).ravel()
        if p_one.shape != z.shape:
            raise DomainError(
                "{} statistics but {} p-values".format(z.size, p_one.size)
            )
        if np.any(np.isnan(p_one)) or np.any((p_one < 0) | (p_one > 1)):
            raise DomainError("p-values must lie in [0, 1]")
        if dof is not None:
            dof = numerics.check_dof(dof)
        return cls(z, p_one, 1.0 - p_one, dof, tail_mode)

    @property
    def size(self):
        return int(self.z.size)

    @property
    def p_two(self):
        if self.tail_mode.kind is TailKind.CONTINUOUS:
            # both tails are held directly, so the smaller one keeps its precision
            return np.minimum(2.0 * np.minimum(self.p_one, self.p_neg), 1.0)
        return np.asarray(one_to_two_tailed(self.p_one, self.tail_mode))


def _statistics(z):
    z = np.asarray(z, dtype=float).ravel()
    if z.size == 0:
        raise DomainError("no statistics given")
    if not np.all(np.isfinite(z)):
        raise DomainError("statistics must be finite")
    return z


@dataclass(frozen=True)
class Thresholds:
    """Statistic-space cutoffs.

    ``t_pos`` is the smallest positive statistic declared significant on the
    positive side (+inf when none is), ``t_neg`` the largest negative one
    (-inf when none is). The parametric pair is derived from the critical
    p-values through the t quantile and is only set when degrees of freedom
    are known.
    """

    t_pos: float = POS_INF
    t_neg: float = NEG_INF
    t_pos_parametric: Optional[float] = None
    t_neg_parametric: Optional[float] = None


@dataclass(frozen=True, eq=False)
class DirectionalOutcome:
    strategy: StrategyKind
    method: Method
    q: float
    q_effective: float
    z: np.ndarray
    adjusted_pos: np.ndarray
    adjusted_neg: np.ndarray
    rejected_pos: np.ndarray
    rejected_neg: np.ndarray
    # TwoTailed rejections of a zero statistic belong to neither side
    rejected_neutral: np.ndarray
    critical_pos: Optional[float]
    critical_neg: Optional[float]
    thresholds: Thresholds = Thresholds()
    adjusted_two: Optional[np.ndarray] = None
    selection: Optional[BbOutcome] = None

    @property
    def rejected_any(self):
        return self.rejected_pos | self.rejected_neg | self.rejected_neutral

    @property
    def both_directions(self):
        return self.rejected_pos & self.rejected_neg

    @property
    def t_pos(self):
        return self.thresholds.t_pos

    @property
    def t_neg(self):
        return self.thresholds.t_neg


def _nan_map(size):
    return np.full(size, np.nan)


def _canonical(inp, method, q, screening_level):
    pos = fdr.decide(inp.p_one, method, q)
    neg = fdr.decide(inp.p_neg, method, q)
    return dict(
        adjusted_pos=pos.adjusted_p,
        adjusted_neg=neg.adjusted_p,
        rejected_pos=pos.rejected,
        rejected_neg=neg.rejected,
        critical_pos=pos.critical_p,
        critical_neg=neg.critical_p,
    )


def _combined(inp, method, q, screening_level):
    V = inp.size
    out = fdr.decide(np.concatenate([inp.p_one, inp.p_neg]), method, q)
    return dict(
        adjusted_pos=out.adjusted_p[:V],
        adjusted_neg=out.adjusted_p[V:],
        rejected_pos=out.rejected[:V],
        rejected_neg=out.rejected[V:],
        critical_pos=out.critical_p,
        critical_neg=out.critical_p,
    )


def _half(critical):
    return None if critical is None else 0.5 * critical


def _two_tailed(inp, method, q, screening_level):
    z = inp.z
    out = fdr.decide(inp.p_two, method, q)
    return dict(
        adjusted_pos=np.where(z > 0, out.adjusted_p, np.nan),
        adjusted_neg=np.where(z < 0, out.adjusted_p, np.nan),
        adjusted_two=out.adjusted_p,
        rejected_pos=out.rejected & (z > 0),
        rejected_neg=out.rejected & (z < 0),
        rejected_neutral=out.rejected & (z == 0),
        critical_pos=_half(out.critical_p),
        critical_neg=_half(out.critical_p),
    )


def _split_tails(inp, method, q, screening_level):
    z = inp.z
    p_two = inp.p_two
    V = inp.size
    fields = dict(
        adjusted_pos=_nan_map(V),
        adjusted_neg=_nan_map(V),
        adjusted_two=np.ones(V),
        rejected_pos=np.zeros(V, dtype=bool),
        rejected_neg=np.zeros(V, dtype=bool),
        critical_pos=None,
        critical_neg=None,
    )
    for side, mask in (("pos", z > 0), ("neg", z < 0)):
        if not mask.any():
            continue
        out = fdr.decide(p_two[mask], method, q)
        fields["adjusted_" + side][mask] = out.adjusted_p
        fields["adjusted_two"][mask] = out.adjusted_p
        fields["rejected_" + side][mask] = out.rejected
        fields["critical_" + side] = _half(out.critical_p)
    return fields


def _set_critical(selection, label, scale=1.0):
    outcome = selection.per_set.get(label)
    if outcome is None or outcome.critical_p is None:
        return None
    return scale * outcome.critical_p


def _canonical_bb(inp, method, q, screening_level):
    V = inp.size
    partition = Partition.from_labels(
        [POSITIVE_SET] * V + [NEGATIVE_SET] * V, (POSITIVE_SET, NEGATIVE_SET)
    )
    selection = bb_procedure(
        np.concatenate([inp.p_one, inp.p_neg]),
        partition,
        q,
        screening_level,
        second_stage=method,
    )
    return dict(
        adjusted_pos=selection.adjusted[:V],
        adjusted_neg=selection.adjusted[V:],
        rejected_pos=selection.rejected[:V],
        rejected_neg=selection.rejected[V:],
        critical_pos=_set_critical(selection, POSITIVE_SET),
        critical_neg=_set_critical(selection, NEGATIVE_SET),
        q_effective=selection.q_prime,
        selection=selection,
    )


def _split_tails_bb(inp, method, q, screening_level):
    z = inp.z
    V = inp.size
    signed = z != 0
    labels = np.where(z[signed] > 0, POSITIVE_SET, NEGATIVE_SET)
    partition = Partition.from_labels(labels, (POSITIVE_SET, NEGATIVE_SET))
    selection = bb_procedure(
        inp.p_two[signed], partition, q, screening_level, second_stage=method
    )
    adjusted_two = np.ones(V)
    adjusted_two[signed] = selection.adjusted
    rejected = np.zeros(V, dtype=bool)
    rejected[signed] = selection.rejected
    return dict(
        adjusted_pos=np.where(z > 0, adjusted_two, np.nan),
        adjusted_neg=np.where(z < 0, adjusted_two, np.nan),
        adjusted_two=adjusted_two,
        rejected_pos=rejected & (z > 0),
        rejected_neg=rejected & (z < 0),
        critical_pos=_set_critical(selection, POSITIVE_SET, 0.5),
        critical_neg=_set_critical(selection, NEGATIVE_SET, 0.5),
        q_effective=selection.q_prime,
        selection=selection,
    )


_STRATEGIES = {
    StrategyKind.CANONICAL: _canonical,
    StrategyKind.COMBINED: _combined,
    StrategyKind.TWO_TAILED: _two_tailed,
    StrategyKind.SPLIT_TAILS: _split_tails,
    StrategyKind.CANONICAL_BB: _canonical_bb,
    StrategyKind.SPLIT_TAILS_BB: _split_tails_bb,
}


def apply_strategy(
    inp: DirectionalInput,
    strategy,
    method=Method.BH,
    q: float = DEFAULT_Q,
    screening_level: float = DEFAULT_SCREENING_LEVEL,
) -> DirectionalOutcome:
    strategy = StrategyKind.parse(strategy)
    method = Method.parse(method)
    q = fdr.check_level(q)
    fields = _STRATEGIES[strategy](inp, method, q, screening_level)
    fields.setdefault("rejected_neutral", np.zeros(inp.size, dtype=bool))
    fields.setdefault("q_effective", q)
    outcome = DirectionalOutcome(
        strategy=strategy, method=method, q=q, z=inp.z, **fields
    )
    if outcome.both_directions.any():
        logger.warning(
            "%d tests rejected in both directions", int(outcome.both_directions.sum())
        )
    return replace(outcome, thresholds=compute_thresholds(inp, outcome))


def compute_thresholds(inp: DirectionalInput, outcome: DirectionalOutcome) -> Thresholds:
    z = inp.z
    positive = outcome.rejected_pos & (z > 0)
    negative = outcome.rejected_neg & (z < 0)
    t_pos = float(z[positive].min()) if positive.any() else POS_INF
    t_neg = float(z[negative].max()) if negative.any() else NEG_INF
    if inp.dof is None:
        return Thresholds(t_pos, t_neg)

    t_pos_parametric = POS_INF
    t_neg_parametric = NEG_INF
    if outcome.critical_pos is not None:
        t_pos_parametric = numerics.t_inv_cdf(1.0 - outcome.critical_pos, inp.dof)
    if outcome.critical_neg is not None:
        t_neg_parametric = numerics.t_inv_cdf(outcome.critical_neg, inp.dof)
    return Thresholds(t_pos, t_neg, t_pos_parametric, t_neg_parametric)
