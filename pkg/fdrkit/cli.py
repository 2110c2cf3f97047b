import functools
import logging
from dataclasses import replace

import click

from . import __version__, formats
from .directional import DirectionalInput, StrategyKind, apply_strategy
from .errors import FdrkitError
from .fdr import Method, decide
from .numerics import t_inv_cdf
from .pvalues import two_to_one_tailed
from .selective import Partition, bb_procedure
from .simulate import DESK_SCALE, FULL_SCALE, SCENARIOS, run_scenario
from .table import InputTable
from .utils.constants import (
    ADJUSTED_COLUMN,
    DEFAULT_PRECISION,
    DEFAULT_Q,
    DEFAULT_SCREENING_LEVEL,
    EXIT_DATA,
    EXIT_USAGE,
    P_COLUMN,
    REJECTED_COLUMN,
    SET_COLUMN,
    Z_COLUMN,
)

CORRECTION_METHODS = [m.value for m in Method if m is not Method.UNCORRECTED]
STRATEGIES = [s.value for s in StrategyKind]
SIMULATION_METHODS = [Method.BH.value, Method.BKY.value]
SCALES = {"desk": DESK_SCALE, "full": FULL_SCALE}
ALL = "all"


class DataError(click.ClickException):
    exit_code = EXIT_DATA

    def show(self, file=None):
        click.echo("✗ {}".format(self.format_message()), err=True)


class FdrkitGroup(click.Group):
    """Group that reports usage errors with exit status 1."""

    def parse_args(self, ctx, args):
        try:
            return super().parse_args(ctx, args)
        except click.UsageError as e:
            e.exit_code = EXIT_USAGE
            raise

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except click.UsageError as e:
            e.exit_code = EXIT_USAGE
            raise


def data_command(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except FdrkitError as e:
            raise DataError(str(e))

    return wrapper


def output_options(fn):
    fn = click.option(
        "--out",
        "-o",
        type=click.Path(dir_okay=False, writable=True),
        default=None,
        help="Output path (default: standard output).",
    )(fn)
    fn = click.option(
        "--precision",
        type=click.IntRange(min=1, max=17),
        default=DEFAULT_PRECISION,
        show_default=True,
        help="Significant digits for probabilities.",
    )(fn)
    fn = click.option(
        "--json", "as_json", is_flag=True, default=False, help="Emit a JSON summary."
    )(fn)
    return fn


def emit(summary, columns, as_json, precision, out, delimiter=","):
    if as_json:
        formatter = formats.Json(summary, columns)
    else:
        formatter = formats.Table(summary, columns, delimiter, precision)
    with click.open_file(out or "-", "w") as f:
        f.write(formatter.generate())


def status(message, ok=True):
    click.echo("{} {}".format("✓" if ok else "✗", message), err=True)


def passthrough(table):
    return {name: table.frame[name].tolist() for name in table.columns}


@click.group(cls=FdrkitGroup)
@click.version_option(__version__, prog_name="fdrkit")
@click.option("-v", "--verbose", count=True, help="-v for progress, -vv for debug.")
def cli(verbose):
    """False discovery rate corrections for directional two-tailed testing."""
    level = logging.WARNING
    if verbose == 1:
        level = logging.INFO
    elif verbose > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


@cli.command()
@click.argument("path", type=click.Path(dir_okay=False))
@click.option(
    "--method", type=click.Choice(CORRECTION_METHODS), default=Method.BH.value
)
@click.option("--q", "q", type=float, default=DEFAULT_Q, show_default=True)
@output_options
@data_command
def adjust(path, method, q, as_json, precision, out):
    """Correct the 'p' column of PATH."""
    table = InputTable.read(path)
    if table.has(ADJUSTED_COLUMN):
        raise DataError(
            "{} already has an '{}' column; refusing to correct twice".format(
                path, ADJUSTED_COLUMN
            )
        )
    outcome = decide(table.numeric(P_COLUMN), method, q)

    columns = passthrough(table)
    columns[ADJUSTED_COLUMN] = outcome.adjusted_p.tolist()
    columns[REJECTED_COLUMN] = outcome.rejected.tolist()
    summary = [
        ("method", method),
        ("q", q),
        ("tests", outcome.size),
        ("rejected", outcome.n_rejected),
        ("critical_p", outcome.critical_p),
    ]
    emit(summary, columns, as_json, precision, out, table.delimiter)
    status("{}: {} of {} tests rejected".format(method, outcome.n_rejected, outcome.size))


@cli.command()
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--strategy", type=click.Choice(STRATEGIES), required=True)
@click.option(
    "--method", type=click.Choice(CORRECTION_METHODS), default=Method.BH.value
)
@click.option("--q", "q", type=float, default=DEFAULT_Q, show_default=True)
@click.option(
    "--screening-level",
    type=float,
    default=DEFAULT_SCREENING_LEVEL,
    show_default=True,
    help="Simes screening level of the BB strategies.",
)
@click.option("--dof", type=float, default=None, help="Degrees of freedom of z.")
@click.option(
    "--uncorrected",
    is_flag=True,
    default=False,
    help="Threshold uncorrected p-values at q instead of correcting.",
)
@click.option(
    "--two-tailed-input",
    is_flag=True,
    default=False,
    help="The 'p' column holds two-tailed p-values.",
)
@output_options
@data_command
def strategy(
    path,
    strategy,
    method,
    q,
    screening_level,
    dof,
    uncorrected,
    two_tailed_input,
    as_json,
    precision,
    out,
):
    """Apply a directional strategy to the 'z' (and optional 'p') columns of PATH."""
    table = InputTable.read(path)
    z = table.numeric(Z_COLUMN)
    if table.has(P_COLUMN):
        p = table.numeric(P_COLUMN)
        if two_tailed_input:
            p = two_to_one_tailed(p, z)
        inp = DirectionalInput.from_pvalues(z, p, dof)
    else:
        inp = DirectionalInput.from_statistics(z, dof)
    if uncorrected:
        method = Method.UNCORRECTED.value

    outcome = apply_strategy(inp, strategy, method, q, screening_level)
    thresholds = outcome.thresholds

    columns = passthrough(table)
    columns["adjusted_pos"] = outcome.adjusted_pos.tolist()
    columns["adjusted_neg"] = outcome.adjusted_neg.tolist()
    if outcome.adjusted_two is not None:
        columns["adjusted_two"] = outcome.adjusted_two.tolist()
    columns["rejected_pos"] = outcome.rejected_pos.tolist()
    columns["rejected_neg"] = outcome.rejected_neg.tolist()

    summary = [
        ("strategy", strategy),
        ("method", method),
        ("q", q),
        ("q_effective", outcome.q_effective),
        ("tests", inp.size),
        ("rejected_pos", int(outcome.rejected_pos.sum())),
        ("rejected_neg", int(outcome.rejected_neg.sum())),
        ("conflicts", int(outcome.both_directions.sum())),
    ]
    if outcome.selection is not None:
        summary += [
            ("R", outcome.selection.R),
            ("S", outcome.selection.S),
            ("selected", list(outcome.selection.selected)),
        ]
    summary += [("t_pos", thresholds.t_pos), ("t_neg", thresholds.t_neg)]
    if dof is not None:
        summary += [
            ("t_pos_parametric", thresholds.t_pos_parametric),
            ("t_neg_parametric", thresholds.t_neg_parametric),
        ]
    emit(summary, columns, as_json, precision, out, table.delimiter)
    status(
        "{}/{}: {} positive, {} negative".format(
            strategy,
            method,
            int(outcome.rejected_pos.sum()),
            int(outcome.rejected_neg.sum()),
        )
    )


@cli.command()
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--q", "q", type=float, default=DEFAULT_Q, show_default=True)
@click.option(
    "--screening-level", type=float, default=DEFAULT_SCREENING_LEVEL, show_default=True
)
@click.option(
    "--second-stage",
    type=click.Choice([Method.BH.value, Method.BKY.value]),
    default=Method.BH.value,
)
@click.option("--set-column", default=SET_COLUMN, show_default=True)
@output_options
@data_command
def bb(path, q, screening_level, second_stage, set_column, as_json, precision, out):
    """Selective correction of the 'p' column of PATH grouped by its 'set' column."""
    table = InputTable.read(path)
    p = table.numeric(P_COLUMN)
    partition = Partition.from_labels(table.text(set_column))
    selection = bb_procedure(p, partition, q, screening_level, second_stage)

    columns = passthrough(table)
    columns["selected"] = selection.selected_mask.tolist()
    columns[ADJUSTED_COLUMN] = selection.adjusted.tolist()
    columns[REJECTED_COLUMN] = selection.rejected.tolist()
    summary = [
        ("R", selection.R),
        ("S", selection.S),
        ("q_prime", selection.q_prime),
        ("selected", list(selection.selected)),
        ("rejected", selection.n_rejected),
    ]
    emit(summary, columns, as_json, precision, out, table.delimiter)
    status(
        "{} of {} sets selected, {} tests rejected".format(
            selection.R, selection.S, selection.n_rejected
        )
    )


@cli.command()
@click.option(
    "--scenario",
    type=click.Choice(list(SCENARIOS) + [ALL], case_sensitive=False),
    default=ALL,
    show_default=True,
)
@click.option(
    "--method",
    type=click.Choice(SIMULATION_METHODS + [ALL]),
    default=ALL,
    show_default=True,
)
@click.option(
    "--strategy", type=click.Choice(STRATEGIES + [ALL]), default=ALL, show_default=True
)
@click.option(
    "--scale", type=click.Choice(list(SCALES)), default="full", show_default=True
)
@click.option("--tests", type=click.IntRange(min=1), default=None)
@click.option("--realizations", type=click.IntRange(min=1), default=None)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--q", "q", type=float, default=DEFAULT_Q, show_default=True)
@click.option(
    "--workers",
    type=click.IntRange(min=1),
    default=None,
    help="Worker processes, capped by FDRKIT_THREADS (default: that cap).",
)
@output_options
@data_command
def simulate(
    scenario,
    method,
    strategy,
    scale,
    tests,
    realizations,
    seed,
    q,
    workers,
    as_json,
    precision,
    out,
):
    """Estimate directional FDR and power on the synthetic scenarios."""
    names = list(SCENARIOS) if scenario.lower() == ALL else [scenario.lower()]
    methods = SIMULATION_METHODS if method == ALL else [method]
    strategies = STRATEGIES if strategy == ALL else [strategy]
    default_tests, default_realizations = SCALES[scale]
    tests = tests or default_tests
    realizations = realizations or default_realizations

    rows = []
    for name in names:
        spec = replace(SCENARIOS[name].scaled(tests, realizations), seed=seed, q=q)
        report = run_scenario(spec, methods, strategies, workers)
        rows.extend(report.rows)
        status("scenario {} done".format(name))

    fields = [
        "scenario",
        "method",
        "strategy",
        "view",
        "realizations",
        "fdr",
        "fdr_low",
        "fdr_high",
        "power",
        "power_low",
        "power_high",
    ]
    columns = {name: [getattr(row, name) for row in rows] for name in fields}
    summary = [
        ("seed", seed),
        ("tests", tests),
        ("realizations", realizations),
        ("q", q),
    ]
    emit(summary, columns, as_json, precision, out)


@cli.command()
@click.option("--alpha", type=float, default=DEFAULT_Q, show_default=True)
@click.option("--dof", type=float, required=True)
@click.option(
    "--one-tailed",
    is_flag=True,
    default=False,
    help="Spend alpha on each tail instead of splitting it.",
)
@output_options
@data_command
def threshold(alpha, dof, one_tailed, as_json, precision, out):
    """Uncorrected t thresholds for a given level and degrees of freedom."""
    if not 0.0 < alpha < 1.0:
        raise DataError("alpha must lie strictly between 0 and 1, got {}".format(alpha))
    tail = alpha if one_tailed else alpha / 2.0
    summary = [
        ("alpha", alpha),
        ("dof", dof),
        ("tails", 1 if one_tailed else 2),
        ("t_pos", t_inv_cdf(1.0 - tail, dof)),
        ("t_neg", t_inv_cdf(tail, dof)),
    ]
    emit(summary, {}, as_json, precision, out)


def main():
    cli(prog_name="fdrkit")


if __name__ == "__main__":
    main()
