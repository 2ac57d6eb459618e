"""Deterministic discrete-event engine for pulse-level circuit simulation.

All times are integer femtoseconds. Events are delivered in lexicographic
(time, wire, sequence) order, so a given netlist and stimulus always produce
the same trace, byte for byte.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Iterator

FS_PER_PS = 1000

#: Delivery cap that aborts runaway feedback loops instead of hanging.
DEFAULT_DELIVERY_CAP = 10_000_000


def ps(value: float) -> int:
    """Convert picoseconds to the integer femtosecond time base."""
    return int(round(value * FS_PER_PS))


class ValidationError(Exception):
    """A netlist, configuration, or input file violates its contract."""


class TimingError(Exception):
    """A stimulus schedule cannot be realized (overlap, rate overflow)."""


class SchedulingError(Exception):
    """An event was scheduled in the past. Indicates a cell-model bug."""


class DeliveryLimitError(Exception):
    """The event-storm guard tripped; the netlist likely has a hot loop."""


@dataclass(frozen=True)
class Diagnostic:
    code: str
    subject: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}({self.subject}): {self.message}"


class InvalidNetlistError(ValidationError):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("; ".join(str(d) for d in diagnostics))


class Cell:
    """Base class for behavioral cells.

    A cell owns its internal state and translates one delivered input pulse
    into zero or more delayed output pulses. Cells never see wall-clock
    order, only the kernel's deterministic delivery order.
    """

    inputs: tuple[str, ...] = ()
    outputs: tuple[str, ...] = ()

    def __init__(self, name: str):
        self.name = name

    def on_pulse(self, port: str, t: int) -> list[tuple[str, int]]:
        """Handle a pulse on ``port`` at time ``t``; return (port, time) emissions."""
        raise NotImplementedError

    def path_delays(self) -> Iterable[tuple[str, str, int]]:
        """(input, output, minimum delay) triples for cycle validation."""
        delay = getattr(self, "delay", None)
        if delay is None:
            return []
        return [(i, o, delay) for i in self.inputs for o in self.outputs]

    def __repr__(self) -> str:  # pragma: no cover - debug aid
        return f"<{type(self).__name__} {self.name}>"


class Netlist:
    """Cells plus single-driver, multi-reader wires.

    Every wire is driven by exactly one source (an external input port or
    one cell output) and may be read by any number of cell inputs or
    external output ports.
    """

    def __init__(self) -> None:
        self.cells: list[Cell] = []
        self.inputs: list[str] = []
        self.outputs: list[str] = []
        self.wiring: dict[str, dict[str, str]] = {}

    def add_input(self, wire: str) -> str:
        self.inputs.append(wire)
        return wire

    def add_output(self, wire: str) -> str:
        self.outputs.append(wire)
        return wire

    def add(self, cell: Cell, **wires: str) -> Cell:
        if cell.name in self.wiring:
            raise ValidationError(f"duplicate cell name {cell.name!r}")
        for port in wires:
            if port not in cell.inputs and port not in cell.outputs:
                raise ValidationError(f"cell {cell.name!r} has no port {port!r}")
        for port in cell.inputs:
            if port not in wires:
                raise ValidationError(f"cell {cell.name!r} input {port!r} unbound")
        self.cells.append(cell)
        self.wiring[cell.name] = dict(wires)
        return cell

    def wires(self) -> list[str]:
        seen: set[str] = set(self.inputs) | set(self.outputs)
        for binding in self.wiring.values():
            seen.update(binding.values())
        return sorted(seen)

    def readers(self) -> dict[str, list[tuple[Cell, str]]]:
        table: dict[str, list[tuple[Cell, str]]] = {}
        for cell in self.cells:
            binding = self.wiring[cell.name]
            for port in cell.inputs:
                table.setdefault(binding[port], []).append((cell, port))
        return table

    def drivers(self) -> dict[str, list[str]]:
        table: dict[str, list[str]] = {}
        for wire in self.inputs:
            table.setdefault(wire, []).append(f"input:{wire}")
        for cell in self.cells:
            binding = self.wiring[cell.name]
            for port in cell.outputs:
                wire = binding.get(port)
                if wire is not None:
                    table.setdefault(wire, []).append(f"{cell.name}.{port}")
        return table


def validate(netlist: Netlist) -> list[Diagnostic]:
    """Check the netlist invariants; an empty list means the netlist is sound."""
    diags: list[Diagnostic] = []
    drivers = netlist.drivers()
    read_wires = set(netlist.readers()) | set(netlist.outputs)

    for wire in sorted(read_wires):
        count = len(drivers.get(wire, []))
        if count == 0:
            diags.append(Diagnostic("undriven-wire", wire, f"wire {wire!r} is read but never driven"))
    for wire in sorted(drivers):
        if len(drivers[wire]) > 1:
            who = ", ".join(drivers[wire])
            diags.append(Diagnostic("multi-driver", wire, f"wire {wire!r} driven by {who}"))

    diags.extend(_zero_delay_cycles(netlist))
    return diags


def _zero_delay_cycles(netlist: Netlist) -> list[Diagnostic]:
    edges: dict[str, list[str]] = {}
    for cell in netlist.cells:
        binding = netlist.wiring[cell.name]
        for in_port, out_port, delay in cell.path_delays():
            out_wire = binding.get(out_port)
            if out_wire is None or delay > 0:
                continue
            edges.setdefault(binding[in_port], []).append(out_wire)

    diags: list[Diagnostic] = []
    # Colors: 0 unvisited, 1 on stack, 2 done. A back edge closes a cycle.
    color: dict[str, int] = {}
    stack: list[str] = []

    def visit(wire: str) -> list[str] | None:
        color[wire] = 1
        stack.append(wire)
        for nxt in edges.get(wire, ()):
            state = color.get(nxt, 0)
            if state == 1:
                return stack[stack.index(nxt):] + [nxt]
            if state == 0:
                cycle = visit(nxt)
                if cycle is not None:
                    return cycle
        stack.pop()
        color[wire] = 2
        return None

    for wire in sorted(edges):
        if color.get(wire, 0) == 0:
            cycle = visit(wire)
            if cycle is not None:
                path = " -> ".join(cycle)
                diags.append(Diagnostic("zero-delay-cycle", cycle[0], f"zero-delay feedback loop: {path}"))
                break
    return diags


class Trace:
    """Ordered record of every delivered pulse as (time_fs, wire) rows."""

    __slots__ = ("events",)

    def __init__(self, events: list[tuple[int, str]] | None = None):
        self.events: list[tuple[int, str]] = events if events is not None else []

    def append(self, time: int, wire: str) -> None:
        self.events.append((time, wire))

    def times(self, wire: str) -> list[int]:
        return [t for t, w in self.events if w == wire]

    def count(self, wire: str) -> int:
        return sum(1 for _, w in self.events if w == wire)

    def counts_by_wire(self) -> dict[str, int]:
        table: dict[str, int] = {}
        for _, wire in self.events:
            table[wire] = table.get(wire, 0) + 1
        return table

    def count_in_window(self, wire: str, start: int, end: int) -> int:
        return sum(1 for t, w in self.events if w == wire and start <= t < end)

    def __iter__(self) -> Iterator[tuple[int, str]]:
        return iter(self.events)

    def __len__(self) -> int:
        return len(self.events)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Trace) and self.events == other.events

    def __repr__(self) -> str:  # pragma: no cover - debug aid
        return f"Trace({len(self.events)} events)"


class Simulator:
    """Single-threaded event loop over one netlist instance.

    The simulator is resumable: ``run_until`` delivers everything up to and
    including its horizon and leaves later events queued. One instance must
    never be driven from two threads; run independent instances instead.
    """

    def __init__(self, netlist: Netlist, delivery_cap: int = DEFAULT_DELIVERY_CAP):
        diags = validate(netlist)
        if diags:
            raise InvalidNetlistError(diags)
        self.netlist = netlist
        self.now = 0
        self.trace = Trace()
        self.delivery_cap = delivery_cap
        self._delivered = 0
        self._seq = 0
        self._heap: list[tuple[int, str, int]] = []
        self._readers = netlist.readers()
        self._known_wires = set(netlist.wires())

    def schedule(self, wire: str, time: int) -> None:
        if wire not in self._known_wires:
            raise ValidationError(f"unknown wire {wire!r}")
        if time < self.now:
            raise SchedulingError(
                f"pulse on {wire!r} at {time} fs is in the past (now {self.now} fs)"
            )
        heapq.heappush(self._heap, (time, wire, self._seq))
        self._seq += 1

    def pending(self) -> int:
        return len(self._heap)

    def run_until(self, t_end: int) -> Trace:
        while self._heap and self._heap[0][0] <= t_end:
            time, wire, _ = heapq.heappop(self._heap)
            self.now = time
            self._delivered += 1
            if self._delivered > self.delivery_cap:
                raise DeliveryLimitError(
                    f"more than {self.delivery_cap} deliveries; "
                    f"last wire {wire!r} at {time} fs (check feedback wiring)"
                )
            self.trace.append(time, wire)
            for cell, port in self._readers.get(wire, ()):
                for out_port, out_time in cell.on_pulse(port, time):
                    out_wire = self.netlist.wiring[cell.name].get(out_port)
                    if out_wire is not None:
                        self.schedule(out_wire, out_time)
        self.now = max(self.now, t_end)
        return self.trace
