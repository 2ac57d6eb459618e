"""Scenario files: stimulus plus circuit description, run as one batch.

A scenario is a small YAML document with a versioned ``schema`` field. It
describes either a composed neuron driven cycle by cycle or a raw netlist
driven by explicit port stimulus, an optional golden trace to compare
against, and optional expectations (fires per cycle, pulse counts).
Times in files are picoseconds; everything internal is femtoseconds.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

import yaml

from .cells import CoincidenceAndCell, DelayCell, MergerCell, MndroCell, RtffCell, SplitterCell
from .kernel import Netlist, Simulator, Trace, ValidationError, ps, validate
from .neuron import (
    NEURON_INPUTS,
    CellTimings,
    NeuronConfig,
    build_arbiter,
    build_neuron,
    timing_parameter_names,
)
from .waveform import trace_to_csv

SCHEMA_VERSION = 1


class ScenarioParseError(ValidationError):
    """Syntactic problem in a scenario file, with line and column."""


def _load_yaml(path: Path) -> dict:
    try:
        data = yaml.safe_load(path.read_text())
    except yaml.MarkedYAMLError as err:
        mark = err.problem_mark
        where = f"{path}:{mark.line + 1}:{mark.column + 1}" if mark else str(path)
        raise ScenarioParseError(f"{where}: {err.problem or err}") from None
    except yaml.YAMLError as err:
        raise ScenarioParseError(f"{path}: {err}") from None
    if not isinstance(data, dict):
        raise ScenarioParseError(f"{path}: top level must be a mapping")
    return data


def _require_schema(data: dict, source: str) -> None:
    version = data.get("schema")
    if version != SCHEMA_VERSION:
        raise ValidationError(
            f"{source}: schema must be {SCHEMA_VERSION}, got {version!r}"
        )


def _timings_from(data: dict | None, source: str) -> CellTimings:
    if not data:
        return CellTimings()
    known = set(timing_parameter_names())
    kwargs = {}
    for key, value in data.items():
        name = key[:-3] if key.endswith("_ps") else key
        if name not in known:
            raise ValidationError(f"{source}: unknown timing parameter {key!r}")
        kwargs[name] = ps(value) if key.endswith("_ps") else int(value)
    return replace(CellTimings(), **kwargs)


@dataclass(frozen=True)
class CycleSpec:
    inputs: int
    adjust: int = 0


@dataclass
class Scenario:
    """A parsed scenario, ready to run (possibly with perturbed timings)."""

    name: str
    kind: str
    data: dict
    base_dir: Path | None = None
    golden_path: Path | None = None
    expect_fires: list[int] | None = None
    expect_counts: dict[str, int] | None = None

    def timings(self) -> CellTimings:
        section = self.data.get("neuron", self.data)
        return _timings_from(section.get("timings"), self.name)

    def neuron_config(self, timings: CellTimings | None = None) -> NeuronConfig:
        spec = self.data["neuron"]
        return NeuronConfig(
            t_max=int(spec.get("t_max", 4)),
            tau_capacity=int(spec.get("tau_capacity", 3)),
            clock_period=ps(spec.get("clock_period_ps", 500)),
            timings=timings if timings is not None else self.timings(),
            feedback_reload=bool(spec.get("feedback_reload", False)),
            min_pulse_spacing=ps(spec.get("min_pulse_spacing_ps", 12)),
        )

    def cycles(self) -> list[CycleSpec]:
        spec = self.data.get("cycles", {})
        inputs = spec.get("inputs", [])
        adjust = spec.get("adjust", [0] * len(inputs))
        if len(adjust) != len(inputs):
            raise ValidationError(f"{self.name}: cycles.adjust length must match cycles.inputs")
        return [CycleSpec(int(n), int(a)) for n, a in zip(inputs, adjust)]

    def stimulus(self) -> dict[str, list[int]]:
        raw = self.data.get("stimulus", {})
        out: dict[str, list[int]] = {}
        for port, times in raw.items():
            fs_times = [ps(t) for t in times]
            if any(t < 0 for t in fs_times):
                raise ValidationError(f"{self.name}: stimulus on {port!r} has negative times")
            out[str(port)] = sorted(fs_times)
        return out


def scenario_from_dict(data: dict, source: str = "<inline>", base_dir: Path | None = None) -> Scenario:
    _require_schema(data, source)
    name = str(data.get("name", Path(source).stem))
    has_neuron = "neuron" in data
    has_netlist = "netlist" in data
    if has_neuron == has_netlist:
        raise ValidationError(f"{source}: exactly one of 'neuron' or 'netlist' is required")
    kind = "neuron" if has_neuron else "netlist"

    golden_path = None
    if data.get("golden"):
        golden_path = (base_dir or Path(".")) / str(data["golden"])

    expect = data.get("expect") or {}
    expect_fires = expect.get("fires_per_cycle")
    if expect_fires is not None:
        expect_fires = [int(v) for v in expect_fires]
        if kind != "neuron":
            raise ValidationError(f"{source}: fires_per_cycle applies to neuron scenarios only")
    expect_counts = expect.get("counts")
    if expect_counts is not None:
        expect_counts = {str(w): int(n) for w, n in expect_counts.items()}

    scenario = Scenario(
        name=name,
        kind=kind,
        data=data,
        base_dir=base_dir,
        golden_path=golden_path,
        expect_fires=expect_fires,
        expect_counts=expect_counts,
    )
    # Surface config/stimulus problems at load time rather than mid-run.
    if kind == "neuron":
        scenario.neuron_config()
        scenario.cycles()
        for port in scenario.stimulus():
            if port not in NEURON_INPUTS:
                raise ValidationError(f"{source}: unknown neuron port {port!r}")
    else:
        build_netlist(scenario, scenario.timings())
    return scenario


def _bundled_yaml_names() -> list[str]:
    root = resources.files("sfqneuron") / "scenarios"
    return sorted(p.name[: -len(".yaml")] for p in root.iterdir() if p.name.endswith(".yaml"))


def bundled_scenario_names() -> list[str]:
    """Bundled files that are actual scenarios (not sweep or experiment specs)."""
    names = []
    for name in _bundled_yaml_names():
        data = _load_yaml(bundled_path(name))
        if "neuron" in data or "netlist" in data:
            names.append(name)
    return names


def bundled_path(name: str) -> Path:
    path = Path(str(resources.files("sfqneuron") / "scenarios" / f"{name}.yaml"))
    if not path.exists():
        raise ValidationError(
            f"no bundled file named {name!r} (have: {', '.join(_bundled_yaml_names())})"
        )
    return path


def load_scenario(ref: str | Path) -> Scenario:
    """Load a scenario from a path, or by bundled name when no file matches."""
    path = Path(ref)
    if not path.exists() and not path.suffix:
        path = bundled_path(str(ref))
    if not path.exists():
        raise ValidationError(f"scenario file {ref!r} not found")
    data = _load_yaml(path)
    return scenario_from_dict(data, source=str(path), base_dir=path.parent)


_CELL_PORTS = {
    "delay": ("in", "out"),
    "splitter": ("in", "out0", "out1"),
    "merger": ("a", "b", "out"),
    "and": ("a", "b", "out"),
    "rtff": ("in", "rst", "out"),
    "mndro": ("inc", "dec", "clk", "out"),
}


def build_netlist(scenario: Scenario, timings: CellTimings) -> Netlist:
    """Instantiate the raw-netlist form of a scenario.

    Cells omit their timing fields to inherit the scenario's cell timings,
    which is what lets the margin sweep rescale them.
    """
    spec = scenario.data["netlist"]
    net = Netlist()
    for wire in spec.get("inputs", []):
        net.add_input(str(wire))
    for wire in spec.get("outputs", []):
        net.add_output(str(wire))

    for entry in spec.get("cells", []):
        kind = entry.get("type")
        name = str(entry.get("name", ""))
        if not name:
            raise ValidationError(f"{scenario.name}: every cell needs a name")
        if kind == "arbiter":
            span = entry.get("span_ps")
            arb_timings = timings
            if entry.get("comp_delay_ps") is not None:
                arb_timings = replace(timings, comp_delay=ps(entry["comp_delay_ps"]))
            elif span is not None:
                from .neuron import arbiter_comp_delay

                arb_timings = replace(
                    timings, comp_delay=arbiter_comp_delay(timings, ps(span))
                )
            build_arbiter(
                net,
                arb_timings,
                str(entry["load"]),
                str(entry["input"]),
                str(entry["set"]),
                prefix=name,
            )
            continue
        if kind not in _CELL_PORTS:
            raise ValidationError(f"{scenario.name}: unknown cell type {kind!r}")
        cell = _make_cell(kind, name, entry, timings)
        wires = {p: str(entry[p]) for p in _CELL_PORTS[kind] if p in entry}
        net.add(cell, **wires)
    return net


def _make_cell(kind: str, name: str, entry: dict, t: CellTimings):
    def val(key: str, default: int) -> int:
        return ps(entry[key]) if key in entry else default

    if kind == "delay":
        return DelayCell(name, val("delay_ps", t.delay_cell))
    if kind == "splitter":
        return SplitterCell(name, val("delay_ps", t.splitter))
    if kind == "merger":
        return MergerCell(name, val("delay_ps", t.merger_delay), val("dead_time_ps", t.merger_dead_time))
    if kind == "and":
        return CoincidenceAndCell(name, val("delay_ps", t.and_delay), val("window_ps", t.and_window))
    if kind == "rtff":
        return RtffCell(name, val("delay_ps", t.rtff_delay))
    if kind == "mndro":
        return MndroCell(
            name,
            val("delay_ps", t.mndro_delay),
            val("interval_ps", t.mndro_interval),
            int(entry.get("capacity", 3)),
        )
    raise ValidationError(f"unknown cell type {kind!r}")


@dataclass
class ScenarioResult:
    name: str
    trace: Trace
    fires_per_cycle: list[int] | None
    expect_ok: bool | None
    golden_ok: bool | None

    @property
    def passed(self) -> bool:
        return self.expect_ok is not False and self.golden_ok is not False


def run_scenario(
    scenario: Scenario,
    timings: CellTimings | None = None,
    golden_override: Path | None = None,
) -> ScenarioResult:
    """Run one scenario deterministically and evaluate its checks."""
    effective = timings if timings is not None else scenario.timings()

    if scenario.kind == "neuron":
        neuron = build_neuron(scenario.neuron_config(effective))
        for port, times in scenario.stimulus().items():
            for t in times:
                neuron.sim.schedule(port, t)
        for cycle in scenario.cycles():
            neuron.run_cycle(cycle.inputs, adjust=cycle.adjust)
        trace = neuron.sim.trace
        fires = neuron.fires_per_cycle()
    else:
        net = build_netlist(scenario, effective)
        sim = Simulator(net)
        stimulus = scenario.stimulus()
        for port in stimulus:
            if port not in net.inputs:
                raise ValidationError(f"{scenario.name}: stimulus port {port!r} is not an input")
        horizon = ps(scenario.data.get("run_until_ps", 0))
        if not horizon:
            all_times = [t for times in stimulus.values() for t in times]
            horizon = (max(all_times) if all_times else 0) + ps(1000)
        for port, times in stimulus.items():
            for t in times:
                sim.schedule(port, t)
        sim.run_until(horizon)
        trace = sim.trace
        fires = None

    expect_ok: bool | None = None
    if scenario.expect_fires is not None:
        expect_ok = fires == scenario.expect_fires
    if scenario.expect_counts is not None:
        counts_ok = all(trace.count(w) == n for w, n in scenario.expect_counts.items())
        expect_ok = counts_ok if expect_ok is None else (expect_ok and counts_ok)

    golden_ok: bool | None = None
    golden = golden_override or scenario.golden_path
    if golden is not None:
        if not Path(golden).exists():
            raise ValidationError(f"{scenario.name}: golden trace {golden} not found")
        golden_ok = trace_to_csv(trace) == Path(golden).read_text()

    return ScenarioResult(
        name=scenario.name,
        trace=trace,
        fires_per_cycle=fires,
        expect_ok=expect_ok,
        golden_ok=golden_ok,
    )


def validate_scenario(scenario: Scenario) -> list:
    """Netlist diagnostics for the scenario's circuit (empty when sound)."""
    if scenario.kind == "neuron":
        neuron = build_neuron(scenario.neuron_config())
        return validate(neuron.net)
    return validate(build_netlist(scenario, scenario.timings()))
