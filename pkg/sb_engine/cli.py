"""Command-line interface: sb validate | witness | classify | decompose | check | lemmas | dot | gen | encode.

Exit codes: 0 success, 1 check failure, 2 usage or input error, 3 budget exhausted.
"""
import json
import logging
import sys
from typing import Optional

import click

from .core.chains import ChainWalker
from .core.config import budget_override, dot_window, log_level
from .core.decomposition import decompose
from .core.document import parse_instance, render_instance
from .core.errors import BudgetExhausted, EncodingError, MalformedElement, NotInCarrier, ParseError, SBError
from .core.generator import encode_countable, random_finite_instance
from .core.graph import render_dot
from .core.models import (
    Bias,
    ChainClassification,
    Cyclic,
    Instance,
    Mode,
    NonStopper,
    Polarity,
    PStopper,
    QStopper,
    TaggedElement,
    Unknown,
    Value,
)
from .core.witness import Witness, check_bijection, lemma_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

BIAS_CHOICE = click.Choice([b.value for b in Bias])


def _fail(message: str, code: int) -> None:
    click.echo(f"Error: {message}", err=True)
    sys.exit(code)


def _read(path: str) -> str:
    """Read a document file as UTF-8, failing with the usage exit code."""
    try:
        with open(path, "rb") as handle:
            data = handle.read()
    except OSError as e:
        _fail(f"{path}: {e.strerror}", EXIT_USAGE)
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        line = data.count(b"\n", 0, e.start) + 1
        column = e.start - (data.rfind(b"\n", 0, e.start) + 1) + 1
        _fail(f"{path}:{line}:{column}: not valid UTF-8 ({e.reason})", EXIT_USAGE)


def _load(path: str) -> Instance:
    """Parse a document file, applying the SB_BUDGET override."""
    text = _read(path)
    try:
        inst = parse_instance(text)
        override = budget_override()
    except ParseError as e:
        _fail(f"{path}:{e.line}:{e.column}: {e.reason}", EXIT_USAGE)
    except SBError as e:
        _fail(str(e), EXIT_USAGE)
    if override is not None and inst.mode is Mode.COUNTABLE:
        inst = inst.with_budget(override)
    return inst


def _load_valid(path: str) -> Instance:
    inst = _load(path)
    report = inst.report
    if not report.valid:
        logger.warning(f"{path} fails validation")
        for violation in report.violations:
            click.echo(f"- [{violation.kind.value}] {violation.message}", err=True)
        _fail(f"{path} is not a valid instance", EXIT_USAGE)
    return inst


def _value(inst: Instance, raw: str) -> Value:
    if inst.mode is Mode.FINITE:
        return raw
    try:
        value = int(raw)
    except ValueError:
        raise click.BadParameter(f"{raw!r} is not a natural number", param_hint="--value") from None
    if value < 0:
        raise click.BadParameter(f"{raw!r} is negative", param_hint="--value")
    return value


def _require_window(inst: Instance, window: Optional[int]) -> None:
    if inst.mode is Mode.COUNTABLE and window is None:
        raise click.UsageError("--window is required for countable instances")


def describe_classification(classification: ChainClassification) -> str:
    """One-line human description of a chain classification."""
    if isinstance(classification, (PStopper, QStopper)):
        return f"{classification.kind.value} (initial {classification.initial})"
    if isinstance(classification, Cyclic):
        return f"cyclic (period {classification.period})"
    if isinstance(classification, NonStopper):
        cert = classification.certificate
        return (
            f"non-stopper (from {cert.anchor} the walk left repeats every "
            f"{cert.period} steps, shifted by {cert.shift})"
        )
    return f"unknown (undecided after {classification.steps_spent} steps)"


@click.group(name="sb")
def cli():
    """Construct and verify Schroeder-Bernstein bijections from two injections."""
    try:
        level = log_level()
    except SBError as e:
        _fail(str(e), EXIT_USAGE)
    logging.basicConfig(level=level)


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "output_json", is_flag=True, help="Output the report as JSON")
def validate(file, output_json):
    """Check that f and g are total injections between the carriers."""
    inst = _load(file)
    report = inst.report
    if output_json:
        click.echo(report.model_dump_json(indent=2))
    elif report.valid:
        click.echo("valid")
    else:
        click.echo(f"invalid: {len(report.violations)} violation(s)")
        for violation in report.violations:
            click.echo(f"- [{violation.kind.value}] {violation.message}")
    sys.exit(EXIT_OK if report.valid else EXIT_CHECK_FAILED)


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--value", "raw_value", required=True, help="Element of P (or of Q with --inverse)")
@click.option("--inverse", "use_inverse", is_flag=True, help="Evaluate the inverse of h")
@click.option("--bias", type=BIAS_CHOICE, default=Bias.F.value, show_default=True)
@click.option("--json", "output_json", is_flag=True, help="Output raw JSON")
def witness(file, raw_value, use_inverse, bias, output_json):
    """Evaluate the witness h (or its inverse) at one value."""
    inst = _load_valid(file)
    value = _value(inst, raw_value)
    w = Witness(inst, Bias(bias))
    try:
        if use_inverse:
            result = {"q": value, "p": w.invert(value)}
            line = f"h^-1({value}) = {result['p']}"
        else:
            evaluated = w.evaluate(value)
            result = {"p": value, "q": evaluated.output, "branch": evaluated.branch.value}
            line = f"h({value}) = {evaluated.output} (branch: {evaluated.branch.value})"
    except NotInCarrier as e:
        _fail(str(e), EXIT_USAGE)
    except BudgetExhausted as e:
        _fail(str(e), EXIT_BUDGET)
    click.echo(json.dumps(result, indent=2) if output_json else line)


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--polarity", type=click.Choice([p.value for p in Polarity]), required=True)
@click.option("--value", "raw_value", required=True)
@click.option("--json", "output_json", is_flag=True, help="Output raw JSON")
def classify(file, polarity, raw_value, output_json):
    """Classify the chain of one tagged element."""
    inst = _load_valid(file)
    element = TaggedElement(Polarity(polarity), _value(inst, raw_value))
    try:
        classification = ChainWalker(inst).classify(element)
    except MalformedElement as e:
        _fail(str(e), EXIT_USAGE)
    if output_json:
        payload = {"element": str(element), "kind": classification.kind.value}
        if isinstance(classification, (PStopper, QStopper)):
            payload["initial"] = str(classification.initial)
        elif isinstance(classification, Cyclic):
            payload["period"] = classification.period
        elif isinstance(classification, NonStopper):
            cert = classification.certificate
            payload.update(anchor=str(cert.anchor), period=cert.period, shift=cert.shift)
        elif isinstance(classification, Unknown):
            payload["steps_spent"] = classification.steps_spent
        click.echo(json.dumps(payload, indent=2))
    else:
        click.echo(f"{element}: {describe_classification(classification)}")
    if isinstance(classification, Unknown):
        sys.exit(EXIT_BUDGET)


@cli.command(name="decompose")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--window", type=click.IntRange(min=1), help="Value bound for countable instances")
@click.option("--json", "output_json", is_flag=True, help="Output the report as JSON")
def decompose_command(file, window, output_json):
    """List the chains and count them by category."""
    inst = _load_valid(file)
    report = decompose(inst, window)
    if output_json:
        click.echo(report.model_dump_json(indent=2))
        return
    click.echo(f"checked: {report.checked_window}")
    for entry in report.chains:
        detail = ""
        if entry.initial is not None:
            detail = f" initial {entry.initial}"
        elif entry.period is not None:
            detail = f" period {entry.period}"
        click.echo(f"{entry.kind.value}{detail}: {' '.join(entry.members)}")
    click.echo("counts: " + ", ".join(f"{kind}={n}" for kind, n in report.counts.items()))


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--window", type=click.IntRange(min=1), help="Value bound for countable instances")
@click.option("--bias", type=BIAS_CHOICE, default=Bias.F.value, show_default=True)
@click.option("--json", "output_json", is_flag=True, help="Output the report as JSON")
def check(file, window, bias, output_json):
    """Verify that the witness is a bijection."""
    inst = _load_valid(file)
    _require_window(inst, window)
    report = check_bijection(inst, window, Bias(bias))
    if output_json:
        click.echo(report.model_dump_json(indent=2))
    else:
        click.echo(f"bijective: {'yes' if report.bijective else 'no'}")
        click.echo(f"checked: {report.checked_window}")
        click.echo(
            f"codomain: {report.codomain_ok}, injective: {report.injective_ok}, "
            f"surjective: {report.surjective_ok}"
        )
        for c in report.counterexamples:
            click.echo(f"- [{c.kind.value}] {c.detail}")
    if report.refuted:
        sys.exit(EXIT_CHECK_FAILED)
    if report.undecided:
        logger.warning("some elements could not be decided within the step budget")
        sys.exit(EXIT_BUDGET)


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--window", type=click.IntRange(min=1), help="Value bound for countable instances")
@click.option("--json", "output_json", is_flag=True, help="Output the report as JSON")
def lemmas(file, window, output_json):
    """Run the chain and witness lemmas over the checked elements."""
    inst = _load_valid(file)
    _require_window(inst, window)
    report = lemma_suite(inst, window)
    if output_json:
        click.echo(report.model_dump_json(indent=2))
    else:
        click.echo(f"checked: {report.checked_window}")
        for lemma in report.lemmas:
            status = "pass" if lemma.passed else "FAIL"
            click.echo(f"{status} {lemma.name}: {lemma.checked} checked, {lemma.undecided} undecided")
            for failure in lemma.failures:
                click.echo(f"  - {failure}")
    if not report.passed:
        sys.exit(EXIT_CHECK_FAILED)
    if any(lemma.undecided for lemma in report.lemmas):
        sys.exit(EXIT_BUDGET)


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", type=click.File("w"), required=True, help="DOT output file ('-' for stdout)")
@click.option("--window", type=click.IntRange(min=1), help="Value bound for countable instances")
def dot(file, output, window):
    """Render the chain step graph in Graphviz DOT format."""
    inst = _load_valid(file)
    if window is None:
        try:
            window = dot_window()
        except SBError as e:
            _fail(str(e), EXIT_USAGE)
    output.write(render_dot(inst, window))


@cli.command()
@click.option("--size", type=click.IntRange(min=1), required=True, help="|P| = |Q|")
@click.option("--seed", type=int, required=True, help="Random seed")
def gen(size, seed):
    """Emit a random finite instance built from a seeded permutation pair."""
    click.echo(render_instance(random_finite_instance(size, seed)), nl=False)


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
def encode(file):
    """Print the countable encoding of a finite instance."""
    inst = _load_valid(file)
    try:
        encoded = encode_countable(inst)
    except EncodingError as e:
        _fail(str(e), EXIT_USAGE)
    click.echo(render_instance(encoded.instance), nl=False)


def main():
    """CLI entry point."""
    cli()
