"""Command-line front end.

Exit codes are a stable contract: 0 pass, 1 golden or expectation mismatch,
2 validation error (bad file, bad config, bad netlist), 3 runtime
diagnostic (timing violation, event storm).
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .kernel import (
    DeliveryLimitError,
    SchedulingError,
    TimingError,
    ValidationError,
)
from .experiment import load_experiment, run_experiment, write_report
from .margins import load_sweep_spec, run_margin_sweep
from .scenario import bundled_scenario_names, load_scenario, run_scenario, validate_scenario
from .waveform import write_trace_csv, write_waveform

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_VALIDATION = 2
EXIT_RUNTIME = 3


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _guard(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (TimingError, SchedulingError, DeliveryLimitError) as err:
        _fail(EXIT_RUNTIME, str(err))
    except ValidationError as err:
        _fail(EXIT_VALIDATION, str(err))


@click.group()
@click.version_option(package_name="sfqneuron")
def main() -> None:
    """Pulse-level simulator for adjustable-threshold spiking neurons."""


@main.command()
@click.argument("scenario_ref")
@click.option("--golden", type=click.Path(path_type=Path), help="Golden trace CSV to compare against.")
@click.option("--waveform", type=click.Path(path_type=Path), help="Write the waveform here.")
@click.option("--format", "fmt", type=click.Choice(["vc", "csv"]), default="csv", show_default=True)
@click.option("--trace-out", type=click.Path(path_type=Path), help="Write the trace CSV here.")
def simulate(scenario_ref: str, golden: Path | None, waveform: Path | None, fmt: str, trace_out: Path | None) -> None:
    """Run a scenario file or a bundled scenario by name."""
    scenario = _guard(load_scenario, scenario_ref)
    result = _guard(run_scenario, scenario, None, golden)

    click.echo(f"scenario {result.name}: {len(result.trace)} events")
    if result.fires_per_cycle is not None:
        click.echo(f"fires per cycle: {result.fires_per_cycle}")
    if trace_out:
        write_trace_csv(result.trace, trace_out)
        click.echo(f"trace written to {trace_out}")
    if waveform:
        write_waveform(result.trace, waveform, fmt)
        click.echo(f"waveform written to {waveform}")

    if result.expect_ok is not None:
        click.echo(f"expectations: {'pass' if result.expect_ok else 'FAIL'}")
    if result.golden_ok is not None:
        click.echo(f"golden trace: {'match' if result.golden_ok else 'MISMATCH'}")
    sys.exit(EXIT_OK if result.passed else EXIT_MISMATCH)


@main.command()
@click.argument("file")
def validate(file: str) -> None:
    """Parse a scenario (path or bundled name) and check its circuit invariants."""
    scenario = _guard(load_scenario, file)
    diags = _guard(validate_scenario, scenario)
    if diags:
        for diag in diags:
            click.echo(str(diag), err=True)
        sys.exit(EXIT_VALIDATION)
    click.echo(f"{scenario.name}: ok")


@main.command()
@click.argument("spec")
@click.option("--report", type=click.Path(path_type=Path), help="Write the JSON report here.")
def sweep(spec: str, report: Path | None) -> None:
    """Run a timing-margin sweep over the scenarios in SPEC (path or bundled name)."""
    sweep_spec = _guard(load_sweep_spec, spec)
    result = _guard(run_margin_sweep, sweep_spec)
    text = json.dumps(result, indent=2) + "\n"
    if report:
        report.write_text(text)
        click.echo(f"report written to {report}")
    else:
        click.echo(text, nl=False)
    worst = result["worst_margin_pct"]
    click.echo(f"worst margin: {worst}% (25% line: {'pass' if result['all_pass_at_25'] else 'FAIL'}, "
               f"20% line: {'pass' if result['all_pass_at_20'] else 'FAIL'})")


@main.command()
@click.argument("config")
@click.option("--report", type=click.Path(path_type=Path), help="Write the JSON report here.")
def experiment(config: str, report: Path | None) -> None:
    """Run a threshold-search experiment from CONFIG (path or bundled name)."""
    data = _guard(load_experiment, config)
    result = _guard(run_experiment, data)
    text = json.dumps(result, indent=2) + "\n"
    if report:
        write_report(result, report)
        click.echo(f"report written to {report}")
    else:
        click.echo(text, nl=False)
    best = result["best"]
    click.echo(f"best thresholds {best['thresholds']} at accuracy {best['accuracy']:.3f}")


@main.command()
def scenarios() -> None:
    """List bundled scenario names."""
    for name in bundled_scenario_names():
        click.echo(name)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(host: str, port: int) -> None:
    """Serve the simulation API over HTTP."""
    import uvicorn

    uvicorn.run("sfqneuron.service.app:app", host=host, port=port)


if __name__ == "__main__":
    main()
