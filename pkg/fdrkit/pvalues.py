"""Conversions between one-tailed and two-tailed p-values."""
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .errors import DomainError
from .utils import as_scalar_or_array


class TailKind(Enum):
    CONTINUOUS = "continuous"
    DISCRETE = "discrete"


@dataclass(frozen=True)
class TailConversionMode:
    """How to fold a one-tailed p-value into a two-tailed one.

    Discrete mode is for permutation p-values computed from ``permutations``
    relabellings; it adds the mass 1/J of the observed statistic back to the
    complementary tail.
    """

    kind: TailKind = TailKind.CONTINUOUS
    permutations: Optional[int] = None

    def __post_init__(self):
        if self.kind is TailKind.DISCRETE:
            if self.permutations is None or int(self.permutations) < 1:
                raise DomainError("discrete mode needs a permutation count J >= 1")
        elif self.permutations is not None:
            raise DomainError("continuous mode takes no permutation count")

    @classmethod
    def continuous(cls):
        return cls()

    @classmethod
    def discrete(cls, permutations):
        return cls(TailKind.DISCRETE, permutations)

    @property
    def correction(self):
        if self.kind is TailKind.DISCRETE:
            return 1.0 / self.permutations
        return 0.0


CONTINUOUS = TailConversionMode.continuous()


def _probabilities(p):
    arr = np.asarray(p, dtype=float)
    if np.any(np.isnan(arr)) or np.any((arr < 0.0) | (arr > 1.0)):
        raise DomainError("p-values must lie in [0, 1]")
    return arr, arr.ndim == 0


def symmetric_two_tailed(p_one):
    arr, scalar = _probabilities(p_one)
    return as_scalar_or_array(1.0 - np.abs(2.0 * arr - 1.0), scalar)


def one_to_two_tailed(p_one, mode=CONTINUOUS):
    if mode.kind is TailKind.CONTINUOUS:
        return symmetric_two_tailed(p_one)
    arr, scalar = _probabilities(p_one)
    folded = 2.0 * np.minimum(arr, 1.0 - arr + mode.correction)
    return as_scalar_or_array(np.minimum(folded, 1.0), scalar)


def two_to_one_tailed(p_two, z):
    """Recover upper-tail p-values from two-tailed ones and statistic signs.

    Tests with a zero statistic get 0.5.
    """
    arr, scalar = _probabilities(p_two)
    sign = np.sign(np.asarray(z, dtype=float))
    if sign.shape != arr.shape:
        raise DomainError("p-values and statistics differ in shape")
    half = 0.5 * arr
    out = np.where(sign > 0, half, np.where(sign < 0, 1.0 - half, 0.5))
    return as_scalar_or_array(out, scalar)
