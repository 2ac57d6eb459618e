"""Timing-margin sweeps: perturb one cell parameter at a time and rerun.

A parameter's margin is the widest symmetric percentage band around nominal
over which every listed scenario still behaves like its reference run. The
pass predicate is pulse-count equivalence (per-wire counts plus the
per-cycle fire pattern), not timestamp equality, since perturbed delays move
pulses without changing what the circuit computes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .kernel import TimingError, ValidationError
from .neuron import timing_parameter_names
from .scenario import Scenario, ScenarioResult, load_scenario, run_scenario

#: The abstract-level and conclusion-level margin lines flagged in reports.
MARGIN_LINES = (25, 20)


@dataclass
class MarginSweepSpec:
    scenarios: list[str]
    parameters: list[str] = field(default_factory=lambda: list(timing_parameter_names()))
    range_pct: int = 30
    step_pct: int = 5

    def __post_init__(self) -> None:
        if not self.scenarios:
            raise ValidationError("sweep needs at least one scenario")
        if self.range_pct <= 0 or self.step_pct <= 0 or self.range_pct % self.step_pct:
            raise ValidationError("sweep range must be a positive multiple of the step")
        unknown = [p for p in self.parameters if p not in timing_parameter_names()]
        if unknown:
            raise ValidationError(f"unknown sweep parameters: {', '.join(unknown)}")

    def offsets(self) -> list[int]:
        steps = range(self.step_pct, self.range_pct + 1, self.step_pct)
        return [-p for p in reversed(steps)] + [p for p in steps]


def load_sweep_spec(ref: str | Path) -> MarginSweepSpec:
    from .scenario import SCHEMA_VERSION, _load_yaml, bundled_path

    path = Path(ref)
    if not path.exists() and not path.suffix:
        path = bundled_path(str(ref))
    data = _load_yaml(path)
    if data.get("schema") != SCHEMA_VERSION:
        raise ValidationError(f"{path}: schema must be {SCHEMA_VERSION}")
    return MarginSweepSpec(
        scenarios=[str(s) for s in data.get("scenarios", [])],
        parameters=[str(p) for p in data.get("parameters", timing_parameter_names())],
        range_pct=int(data.get("range_pct", 30)),
        step_pct=int(data.get("step_pct", 5)),
    )


def _equivalent(result: ScenarioResult, reference: ScenarioResult) -> bool:
    if result.trace.counts_by_wire() != reference.trace.counts_by_wire():
        return False
    return result.fires_per_cycle == reference.fires_per_cycle


def run_margin_sweep(spec: MarginSweepSpec) -> dict:
    """Sweep every parameter over the grid and report margins.

    The nominal run of each scenario is the reference; a nominal failure
    against the scenario's own expectations aborts the sweep, since margins
    around a broken operating point are meaningless.
    """
    scenarios: list[Scenario] = [load_scenario(ref) for ref in spec.scenarios]
    references: list[ScenarioResult] = []
    for scenario in scenarios:
        reference = run_scenario(scenario)
        if reference.passed is False:
            raise TimingError(f"nominal run of {scenario.name!r} fails its own checks")
        references.append(reference)

    offsets = spec.offsets()
    base_timings = scenarios[0].timings()
    parameters: dict[str, dict] = {}
    for name in spec.parameters:
        fail_low = None
        fail_high = None
        results: dict[str, bool] = {}
        for off in offsets:
            ok = True
            for scenario, reference in zip(scenarios, references):
                nominal = scenario.timings()
                try:
                    perturbed = run_scenario(scenario, timings=nominal.scaled(name, off))
                    ok = _equivalent(perturbed, reference)
                except TimingError:
                    ok = False
                if not ok:
                    break
            results[f"{off:+d}"] = ok
            if not ok:
                if off < 0:
                    fail_low = off if fail_low is None else max(fail_low, off)
                else:
                    fail_high = off if fail_high is None else min(fail_high, off)
        margin = spec.range_pct
        if fail_low is not None:
            margin = min(margin, -fail_low - spec.step_pct)
        if fail_high is not None:
            margin = min(margin, fail_high - spec.step_pct)
        margin = max(margin, 0)
        entry = {
            "nominal_fs": (
                base_timings.resolved_comp_delay()
                if name == "comp_delay"
                else getattr(base_timings, name)
            ),
            "margin_pct": margin,
            "offsets": results,
        }
        for line in MARGIN_LINES:
            entry[f"pass_at_{line}"] = margin >= line
        parameters[name] = entry

    worst = min(p["margin_pct"] for p in parameters.values()) if parameters else 0
    report = {
        "schema": 1,
        "scenarios": [s.name for s in scenarios],
        "range_pct": spec.range_pct,
        "step_pct": spec.step_pct,
        "parameters": parameters,
        "worst_margin_pct": worst,
    }
    for line in MARGIN_LINES:
        report[f"all_pass_at_{line}"] = all(p[f"pass_at_{line}"] for p in parameters.values())
    report["notes"] = [
        "margin lines reported at both 25% and 20%; see per-parameter flags",
    ]
    return report
