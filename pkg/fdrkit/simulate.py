"""Monte Carlo evaluation of directional error rates and power.

Each realisation draws V statistics with an optional shared Gaussian factor
(equicorrelation ``rho``) and shifts a fraction of them by +/- ``shift``.
Every (method, strategy) pair is applied to the same realisation, and the
false discovery proportion and power are tallied for the positive side, the
negative side and both sides together.

Realisation k always uses the k-th child of one seed sequence, so results do
not depend on how realisations are spread over worker processes.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .config import Settings
from .directional import DirectionalInput, StrategyKind, apply_strategy
from .errors import DomainError
from .fdr import Method, check_level
from .utils.constants import CI_Z

logger = logging.getLogger(__name__)


class View(Enum):
    BOTH = "both"
    POSITIVE = "positive"
    NEGATIVE = "negative"


VIEWS = (View.BOTH, View.POSITIVE, View.NEGATIVE)

# (tests, realisations)
FULL_SCALE = (2000, 2000)
DESK_SCALE = (500, 500)


def _count(fraction, V):
    # guard against 0.1 * 30 == 3.0000000000000004
    return int(math.ceil(round(fraction * V, 9)))


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    frac_pos: float
    frac_neg: float
    rho: float = 0.0
    V: int = FULL_SCALE[0]
    realizations: int = FULL_SCALE[1]
    q: float = 0.05
    seed: int = 0
    shift: float = 3.0
    screening_level: float = 0.05
    # separates the random streams of scenarios run under one seed
    stream: int = 0

    def __post_init__(self):
        if self.V < 1:
            raise DomainError("a scenario needs at least one test")
        if self.realizations < 1:
            raise DomainError("a scenario needs at least one realisation")
        for name in ("frac_pos", "frac_neg"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise DomainError("{} must lie in [0, 1], got {}".format(name, value))
        if self.n_pos + self.n_neg > self.V:
            raise DomainError("signal fractions exceed the number of tests")
        if not 0.0 <= self.rho < 1.0:
            raise DomainError("rho must lie in [0, 1), got {}".format(self.rho))
        check_level(self.q)
        check_level(self.screening_level, "screening level")

    @property
    def n_pos(self):
        return _count(self.frac_pos, self.V)

    @property
    def n_neg(self):
        return _count(self.frac_neg, self.V)

    def scaled(self, tests=None, realizations=None):
        return replace(
            self,
            V=self.V if tests is None else int(tests),
            realizations=self.realizations if realizations is None else int(realizations),
        )

    def has_effects(self, view):
        if view is View.POSITIVE:
            return self.n_pos > 0
        if view is View.NEGATIVE:
            return self.n_neg > 0
        return self.n_pos + self.n_neg > 0


def _scenarios():
    fractions = [(0.0, 0.0), (0.25, 0.0), (0.0, 0.25), (0.25, 0.25), (0.10, 0.40)]
    names = ["i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x"]
    scenarios = {}
    for k, name in enumerate(names):
        frac_pos, frac_neg = fractions[k % 5]
        scenarios[name] = ScenarioSpec(
            name=name,
            frac_pos=frac_pos,
            frac_neg=frac_neg,
            rho=0.0 if k < 5 else 0.25,
            stream=k + 1,
        )
    return scenarios


SCENARIOS: Dict[str, ScenarioSpec] = _scenarios()


@dataclass(frozen=True, eq=False)
class Realization:
    z: np.ndarray
    truth_pos: np.ndarray
    truth_neg: np.ndarray


def generate_realization(spec: ScenarioSpec, rng: np.random.Generator) -> Realization:
    V = spec.V
    shifts = np.zeros(V)
    shifts[: spec.n_pos] = spec.shift
    shifts[spec.n_pos : spec.n_pos + spec.n_neg] = -spec.shift
    shifts = rng.permutation(shifts)

    shared = rng.standard_normal()
    noise = rng.standard_normal(V)
    z = math.sqrt(spec.rho) * shared + math.sqrt(1.0 - spec.rho) * noise + shifts
    return Realization(z, shifts > 0, shifts < 0)


@dataclass(frozen=True)
class ViewCounts:
    true_discoveries: int
    false_discoveries: int
    true_effects: int

    @property
    def discoveries(self):
        return self.true_discoveries + self.false_discoveries

    @property
    def fdp(self):
        if self.discoveries == 0:
            return 0.0
        return self.false_discoveries / self.discoveries

    @property
    def power(self):
        if self.true_effects == 0:
            return float("nan")
        return self.true_discoveries / self.true_effects


def _view_counts(significant, truth):
    return ViewCounts(
        int(np.count_nonzero(significant & truth)),
        int(np.count_nonzero(significant & ~truth)),
        int(np.count_nonzero(truth)),
    )


@dataclass(frozen=True)
class RealizationTally:
    both: ViewCounts
    positive: ViewCounts
    negative: ViewCounts

    def view(self, view):
        return getattr(self, View(view).value)


def tally_realization(outcome, truth_pos, truth_neg) -> RealizationTally:
    """Count discoveries of one directional outcome against the ground truth.

    A side counts the significant tests whose statistic has that side's
    sign. The both-sides view ignores direction altogether.
    """
    z = outcome.z
    significant = outcome.rejected_any
    truth_pos = np.asarray(truth_pos, dtype=bool)
    truth_neg = np.asarray(truth_neg, dtype=bool)
    return RealizationTally(
        both=_view_counts(significant, truth_pos | truth_neg),
        positive=_view_counts(significant & (z > 0), truth_pos),
        negative=_view_counts(significant & (z < 0), truth_neg),
    )


def wald_interval(mean, n):
    if mean is None or math.isnan(mean):
        return None, None
    half = CI_Z * math.sqrt(max(mean * (1.0 - mean), 0.0) / n)
    return max(0.0, mean - half), min(1.0, mean + half)


@dataclass(frozen=True)
class ReportRow:
    scenario: str
    method: str
    strategy: str
    view: str
    realizations: int
    fdr: float
    fdr_low: float
    fdr_high: float
    power: Optional[float]
    power_low: Optional[float]
    power_high: Optional[float]


@dataclass(frozen=True, eq=False)
class ScenarioReport:
    spec: ScenarioSpec
    rows: List[ReportRow] = field(default_factory=list)

    def lookup(self, method, strategy, view):
        method = Method.parse(method).value
        strategy = StrategyKind.parse(strategy).value
        view = View(view).value
        for row in self.rows:
            if (row.method, row.strategy, row.view) == (method, strategy, view):
                return row
        raise KeyError((method, strategy, view))


def _run_chunk(spec, combos, seeds):
    """Per-realisation FDP and power, shaped (realisations, combos, views, 2)."""
    out = np.empty((len(seeds), len(combos), len(VIEWS), 2))
    for r, seed in enumerate(seeds):
        realization = generate_realization(spec, np.random.default_rng(seed))
        inp = DirectionalInput.from_statistics(realization.z)
        for c, (method, strategy) in enumerate(combos):
            outcome = apply_strategy(
                inp, strategy, method, spec.q, spec.screening_level
            )
            tally = tally_realization(
                outcome, realization.truth_pos, realization.truth_neg
            )
            for v, view in enumerate(VIEWS):
                counts = tally.view(view)
                out[r, c, v, 0] = counts.fdp
                out[r, c, v, 1] = counts.power
    return out


def _chunks(items, n):
    bounds = np.linspace(0, len(items), n + 1).astype(int)
    return [items[lo:hi] for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]


def resolve_workers(requested, realizations):
    """Worker count for a run, capped by FDRKIT_THREADS and the realisation count."""
    cap = Settings().threads
    workers = cap if requested is None else min(int(requested), cap)
    return max(1, min(workers, realizations))


def run_scenario(
    spec: ScenarioSpec,
    methods: Sequence = (Method.BH, Method.BKY),
    strategies: Sequence = tuple(StrategyKind),
    workers: Optional[int] = None,
) -> ScenarioReport:
    combos: List[Tuple[Method, StrategyKind]] = [
        (Method.parse(m), StrategyKind.parse(s)) for m in methods for s in strategies
    ]
    if not combos:
        raise DomainError("nothing to simulate: no method or no strategy given")
    workers = resolve_workers(workers, spec.realizations)

    seeds = np.random.SeedSequence([spec.seed, spec.stream]).spawn(spec.realizations)
    logger.info(
        "scenario %s: %d realisations of %d tests, %d combinations, %d workers",
        spec.name,
        spec.realizations,
        spec.V,
        len(combos),
        workers,
    )

    if workers == 1:
        results = _run_chunk(spec, combos, seeds)
    else:
        chunks = _chunks(seeds, workers * 4)
        with ProcessPoolExecutor(max_workers=workers) as executor:
            parts = list(
                executor.map(
                    _run_chunk,
                    [spec] * len(chunks),
                    [combos] * len(chunks),
                    chunks,
                )
            )
        results = np.concatenate(parts, axis=0)

    n = spec.realizations
    rows = []
    for c, (method, strategy) in enumerate(combos):
        for v, view in enumerate(VIEWS):
            fdr_mean = float(results[:, c, v, 0].mean())
            fdr_low, fdr_high = wald_interval(fdr_mean, n)
            power = power_low = power_high = None
            if spec.has_effects(view):
                power = float(results[:, c, v, 1].mean())
                power_low, power_high = wald_interval(power, n)
            rows.append(
                ReportRow(
                    spec.name,
                    method.value,
                    strategy.value,
                    view.value,
                    n,
                    fdr_mean,
                    fdr_low,
                    fdr_high,
                    power,
                    power_low,
                    power_high,
                )
            )
    logger.info("scenario %s done", spec.name)
    return ScenarioReport(spec, rows)


def run_scenarios(specs, methods, strategies, workers=None):
    return [run_scenario(spec, methods, strategies, workers) for spec in specs]
