"""Adjustable-threshold spiking neuron built from the pulse-cell library.

A neuron is three blocks wired together:

* threshold unit (TU): toggle-flip-flop counting structure with k stages
  and a maximum threshold of 2k; it emits one output pulse per 2k set
  pulses and is cleared by the shared reset,
* threshold adjustment unit (TAU): non-destructive storage whose increment
  and decrement pins move the load value; every reload clock re-emits the
  load as a pulse burst, biasing the TU below its hardware maximum,
* arbiter: a confluence buffer paired with a coincidence AND and a delayed
  recovery path so that load and input pulses merge without loss.

The effective threshold is ``t_max - load``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, fields, replace

from .cells import CoincidenceAndCell, DelayCell, MergerCell, MndroCell, RtffCell, rtff_step
from .kernel import Cell, Netlist, Simulator, TimingError, ValidationError, ps


@dataclass(frozen=True)
class CellTimings:
    """Cell timing parameters in femtoseconds. All are sweepable."""

    delay_cell: int = ps(5)
    splitter: int = ps(5)
    merger_delay: int = ps(7)
    merger_dead_time: int = ps(8)
    and_delay: int = ps(7)
    and_window: int = ps(8)
    rtff_delay: int = ps(6)
    mndro_delay: int = ps(13)
    mndro_interval: int = ps(12)
    #: None means derived: and_window + merger_delay + 1 ps, which clears the
    #: recovered pulse past the output merger's dead window.
    comp_delay: int | None = None

    def resolved_comp_delay(self) -> int:
        if self.comp_delay is not None:
            return self.comp_delay
        return self.and_window + self.merger_delay + ps(1)

    def scaled(self, name: str, pct: float) -> "CellTimings":
        """Return a copy with one named field scaled by (1 + pct/100)."""
        if name not in timing_parameter_names():
            raise ValidationError(f"unknown timing parameter {name!r}")
        base = self.resolved_comp_delay() if name == "comp_delay" else getattr(self, name)
        return replace(self, **{name: int(round(base * (1.0 + pct / 100.0)))})


def timing_parameter_names() -> tuple[str, ...]:
    return tuple(f.name for f in fields(CellTimings))


class TauState(enum.Enum):
    """Four-state load machine of the adjustment unit."""

    IDLE = 0
    LOAD1 = 1
    LOAD2 = 2
    LOAD3 = 3

    @property
    def load(self) -> int:
        return self.value

    @classmethod
    def from_load(cls, load: int) -> "TauState":
        if not 0 <= load <= 3:
            raise ValidationError(f"load {load} outside the 4-state machine")
        return cls(load)


def tau_transition(state: TauState, signal: str) -> tuple[TauState, int]:
    """One step of the adjustment-unit state machine.

    Increment advances toward LOAD3 and saturates there; decrement walks
    back and idles at IDLE; clock leaves the state alone and reports how
    many load pulses the reload emits (the state's load value).
    """
    if signal == "increment":
        return TauState.from_load(min(state.load + 1, 3)), 0
    if signal == "decrement":
        return TauState.from_load(max(state.load - 1, 0)), 0
    if signal == "clock":
        return state, state.load
    raise ValidationError(f"unknown adjustment signal {signal!r}")


class ThresholdUnit(Cell):
    """Pulse counter with k toggle stages and firing period 2k.

    Set pulses are steered to the stages round robin, so each pulse toggles
    exactly one stage; a stage emits on its second toggle. The last stage's
    emission is the unit output, which therefore fires on every 2k-th set
    pulse. Reset returns every stage to S1 and restarts the steering.
    """

    inputs = ("in", "rst")
    outputs = ("out",)

    def __init__(self, name: str, stage_count: int, delay: int):
        super().__init__(name)
        if stage_count < 1:
            raise ValidationError(f"threshold unit {name!r} needs at least one stage")
        self.delay = delay
        self.stages = [RtffCell(f"{name}.s{i}", delay) for i in range(stage_count)]
        self._next = 0
        self.pulses_since_reset = 0

    @property
    def max_threshold(self) -> int:
        return 2 * len(self.stages)

    def on_pulse(self, port: str, t: int) -> list[tuple[str, int]]:
        if port == "rst":
            for stage in self.stages:
                stage.state, _ = rtff_step(stage.state, "reset")
            self._next = 0
            self.pulses_since_reset = 0
            return []
        stage = self.stages[self._next]
        self._next = (self._next + 1) % len(self.stages)
        self.pulses_since_reset += 1
        stage.state, emitted = rtff_step(stage.state, "input")
        if emitted and stage is self.stages[-1]:
            return [("out", t + self.delay)]
        return []


@dataclass
class Arbiter:
    """Handles to the four cells forming one lossless merge block."""

    cbu: MergerCell
    coincidence: CoincidenceAndCell
    comp: DelayCell
    out: MergerCell


def build_arbiter(
    net: Netlist,
    timings: CellTimings,
    load_wire: str,
    input_wire: str,
    set_wire: str,
    prefix: str = "arb",
) -> Arbiter:
    """Wire a lossless merge block between two streams and one output.

    When load and input pulses coincide inside the buffer's dead window the
    buffer emits one pulse and the coincidence AND recovers the other; the
    recovery is delayed so it lands clear of the output merger's dead window.
    """
    cbu = MergerCell(f"{prefix}.cbu", timings.merger_delay, timings.merger_dead_time)
    coincidence = CoincidenceAndCell(f"{prefix}.and", timings.and_delay, timings.and_window)
    comp = DelayCell(f"{prefix}.comp", timings.resolved_comp_delay())
    out = MergerCell(f"{prefix}.out", timings.merger_delay, timings.merger_dead_time)
    net.add(cbu, a=load_wire, b=input_wire, out=f"{prefix}.merged")
    net.add(coincidence, a=load_wire, b=input_wire, out=f"{prefix}.pair")
    net.add(comp, **{"in": f"{prefix}.pair", "out": f"{prefix}.recovered"})
    net.add(out, a=f"{prefix}.merged", b=f"{prefix}.recovered", out=set_wire)
    return Arbiter(cbu, coincidence, comp, out)


def arbiter_comp_delay(timings: CellTimings, stimulus_span: int) -> int:
    """Recovery delay sized for a stimulus confined to ``stimulus_span``.

    Pushes every recovered pulse past the last buffered pulse plus the dead
    window, which is what makes the merge lossless for arbitrary cross-port
    timing inside the span.
    """
    floor = timings.resolved_comp_delay()
    sized = stimulus_span + timings.merger_delay + timings.merger_dead_time + 1 - timings.and_delay
    return max(floor, sized)


@dataclass(frozen=True)
class NeuronConfig:
    """Static neuron parameters.

    ``t_max`` is the hardware maximum threshold (even, at least 2); the
    threshold unit gets ``t_max // 2`` stages. Reachable thresholds are
    ``t_max - load`` for loads up to ``min(tau_capacity, t_max - 1)``.
    """

    t_max: int = 4
    tau_capacity: int = 3
    clock_period: int = ps(500)
    timings: CellTimings = field(default_factory=CellTimings)
    feedback_reload: bool = False
    min_pulse_spacing: int = ps(12)

    def __post_init__(self) -> None:
        if self.t_max < 2 or self.t_max % 2 != 0:
            raise ValidationError(f"t_max must be an even integer >= 2, got {self.t_max}")
        if self.tau_capacity < 1:
            raise ValidationError("tau_capacity must be >= 1")
        if self.clock_period <= 0:
            raise ValidationError("clock_period must be positive")

    @property
    def stage_count(self) -> int:
        return self.t_max // 2

    def max_load(self) -> int:
        return min(self.tau_capacity, self.t_max - 1)

    def reachable_thresholds(self) -> list[int]:
        return [self.t_max - load for load in range(self.max_load() + 1)]


def adjusted_threshold(config: NeuronConfig, tau: TauState | int) -> int:
    """Effective threshold for the given load: ``t_max - load``."""
    load = tau.load if isinstance(tau, TauState) else int(tau)
    if load < 0:
        raise ValidationError(f"load cannot be negative, got {load}")
    if load >= config.t_max:
        raise ValidationError(
            f"load {load} >= t_max {config.t_max}: threshold would not be positive"
        )
    return config.t_max - load


@dataclass(frozen=True)
class CycleSchedule:
    """Fixed within-period layout of one operating cycle.

    Offsets are relative to the cycle base time: reset first, then up to
    ``tau_capacity`` adjustment pulses, then the reload clock, then the
    input window. The layout is conservative (sized for a full adjustment
    burst and a full reload) so it is identical for every cycle.
    """

    period: int
    reset_at: int
    adjust_start: int
    adjust_spacing: int
    clock_at: int
    input_start: int
    input_end: int

    @classmethod
    def for_config(cls, config: NeuronConfig) -> "CycleSchedule":
        t = config.timings
        cap = min(config.tau_capacity, 3)
        adjust_start = ps(5)
        adjust_spacing = t.mndro_interval
        last_adjust = adjust_start + (cap - 1) * adjust_spacing
        clock_at = last_adjust + t.mndro_delay
        reload_done = (
            clock_at
            + t.mndro_delay
            + (cap - 1) * t.mndro_interval
            + 2 * t.merger_delay
        )
        input_start = reload_done + t.merger_dead_time + ps(4)
        input_end = config.clock_period - (2 * t.merger_delay + t.rtff_delay + ps(5))
        sched = cls(
            period=config.clock_period,
            reset_at=0,
            adjust_start=adjust_start,
            adjust_spacing=adjust_spacing,
            clock_at=clock_at,
            input_start=input_start,
            input_end=input_end,
        )
        sched.check(config)
        return sched

    def check(self, config: NeuronConfig) -> None:
        if self.input_end <= self.input_start:
            raise TimingError(
                f"clock period {self.period} fs leaves no input window "
                f"(reload ends near {self.input_start} fs)"
            )
        t = config.timings
        reload_done = (
            self.clock_at
            + t.mndro_delay
            + (min(config.tau_capacity, 3) - 1) * t.mndro_interval
            + 2 * t.merger_delay
        )
        if self.input_start < reload_done + t.merger_dead_time:
            raise TimingError(
                "input window opens inside the reload window "
                f"({self.input_start} < {reload_done + t.merger_dead_time} fs)"
            )

    def input_slots(self, count: int, min_spacing: int) -> list[int]:
        return evenly_spaced(count, self.input_start, self.input_end, min_spacing)


def evenly_spaced(count: int, start: int, end: int, min_spacing: int) -> list[int]:
    """Place ``count`` pulses evenly across [start, end); reject overfull windows."""
    if count == 0:
        return []
    width = end - start
    if width <= 0:
        raise TimingError(f"empty pulse window [{start}, {end})")
    if count == 1:
        return [start]
    spacing = width // count
    if spacing < min_spacing:
        raise TimingError(
            f"rate overflow: {count} pulses in {width} fs gives {spacing} fs spacing, "
            f"below the {min_spacing} fs minimum"
        )
    return [start + i * spacing for i in range(count)]


# Stable wire names of the composed neuron. The reset wire must sort before
# the set wire so that a same-instant reset is delivered first.
NEURON_INPUTS = ("clock", "decrement", "increment", "input", "reset")
NEURON_OUTPUT = "output"


class Neuron:
    """A built neuron netlist plus its live simulation state.

    ``run_cycle`` drives one full operating cycle (reset, optional
    adjustment pulses, reload, input burst) and returns the number of
    output pulses in that cycle. The TAU load persists across cycles.
    """

    def __init__(self, config: NeuronConfig):
        self.config = config
        self.net = Netlist()
        for wire in NEURON_INPUTS:
            self.net.add_input(wire)
        self.net.add_output(NEURON_OUTPUT)

        t = config.timings
        self.tau = MndroCell("tau", t.mndro_delay, t.mndro_interval, config.tau_capacity)
        if config.feedback_reload:
            fb = MergerCell("tau_clk_merge", t.merger_delay, t.merger_dead_time)
            self.net.add(fb, a="clock", b=NEURON_OUTPUT, out="tau_clk")
            tau_clock_wire = "tau_clk"
        else:
            tau_clock_wire = "clock"
        self.net.add(self.tau, inc="increment", dec="decrement", clk=tau_clock_wire, out="load")

        self.arbiter = build_arbiter(self.net, t, "load", "input", "set")

        self.tu = ThresholdUnit("tu", config.stage_count, t.rtff_delay)
        self.net.add(self.tu, **{"in": "set", "rst": "reset", "out": NEURON_OUTPUT})

        self.schedule = CycleSchedule.for_config(config)
        self.sim = Simulator(self.net)
        self.cycle_index = 0

    @property
    def load(self) -> int:
        return self.tau.stored

    def state(self) -> "NeuronState":
        return NeuronState(
            tau_load=self.tau.stored,
            tu_stages=[stage.state for stage in self.tu.stages],
            pending_count=self.tu.pulses_since_reset,
        )

    def run_cycle(self, input_count: int, adjust: int = 0) -> int:
        """Run one cycle with ``input_count`` input pulses.

        ``adjust`` issues that many increment pulses before the reload
        (negative values issue decrements), lowering or raising the
        effective threshold for this and later cycles.
        """
        sched = self.schedule
        base = self.cycle_index * sched.period
        # Validate the input burst before scheduling anything, so a rate
        # overflow leaves the simulation untouched.
        slots = sched.input_slots(input_count, self.config.min_pulse_spacing)
        self.sim.schedule("reset", base + sched.reset_at)
        adjust_wire = "increment" if adjust > 0 else "decrement"
        for i in range(abs(adjust)):
            self.sim.schedule(adjust_wire, base + sched.adjust_start + i * sched.adjust_spacing)
        self.sim.schedule("clock", base + sched.clock_at)
        for offset in slots:
            self.sim.schedule("input", base + offset)
        self.sim.run_until(base + sched.period)
        self.cycle_index += 1
        return self.sim.trace.count_in_window(NEURON_OUTPUT, base, base + sched.period)

    def fires_per_cycle(self) -> list[int]:
        period = self.schedule.period
        return [
            self.sim.trace.count_in_window(NEURON_OUTPUT, c * period, (c + 1) * period)
            for c in range(self.cycle_index)
        ]


@dataclass
class NeuronState:
    """Snapshot of the live state: load, stage states, pulses counted so far."""

    tau_load: int
    tu_stages: list
    pending_count: int

    @property
    def tau(self) -> TauState:
        return TauState.from_load(self.tau_load)


def build_neuron(config: NeuronConfig) -> Neuron:
    """Compose and validate the full neuron netlist for ``config``."""
    return Neuron(config)


def run_cycle(neuron: Neuron, input_count: int, adjust: int = 0) -> int:
    return neuron.run_cycle(input_count, adjust)


def adjustment_latency(config: NeuronConfig) -> int:
    """Simulated time from an adjustment pulse to the reloaded threshold.

    Measured for a single-step change from the idle state: the adjustment
    pulse settles in the storage cell, the reload clock fires, and the load
    pulse crosses the arbiter into the threshold unit. Read off the actual
    cells of a built netlist so timing overrides are reflected.
    """
    neuron = build_neuron(config)
    settle = neuron.tau.delay
    readout = neuron.tau.delay
    transit = neuron.arbiter.cbu.delay + neuron.arbiter.out.delay
    return settle + readout + transit
