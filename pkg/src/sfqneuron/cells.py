"""Behavioral models of the pulse-logic cells the simulator composes.

Each cell is a small state machine: pulses in, delayed pulses out. None of
them model analog pulse shape; a pulse is a bare timestamp on a wire.
"""

from __future__ import annotations

import enum

from .kernel import Cell, ValidationError


class DelayCell(Cell):
    """Fixed positive delay, one output pulse per input pulse."""

    inputs = ("in",)
    outputs = ("out",)

    def __init__(self, name: str, delay: int):
        super().__init__(name)
        if delay <= 0:
            raise ValidationError(f"delay cell {name!r} needs a positive delay")
        self.delay = delay

    def on_pulse(self, port: str, t: int) -> list[tuple[str, int]]:
        return [("out", t + self.delay)]


class SplitterCell(Cell):
    """Fan-out of two: every input pulse appears once on each output."""

    inputs = ("in",)
    outputs = ("out0", "out1")

    def __init__(self, name: str, delay: int):
        super().__init__(name)
        self.delay = delay

    def on_pulse(self, port: str, t: int) -> list[tuple[str, int]]:
        return [("out0", t + self.delay), ("out1", t + self.delay)]


class MergerCell(Cell):
    """Confluence buffer: merges two streams but drops a pulse that lands
    within ``dead_time`` of the last accepted one, on any port combination."""

    inputs = ("a", "b")
    outputs = ("out",)

    def __init__(self, name: str, delay: int, dead_time: int):
        super().__init__(name)
        self.delay = delay
        self.dead_time = dead_time
        self._last_accepted: int | None = None

    def on_pulse(self, port: str, t: int) -> list[tuple[str, int]]:
        if self._last_accepted is not None and t - self._last_accepted <= self.dead_time:
            return []
        self._last_accepted = t
        return [("out", t + self.delay)]


class CoincidenceAndCell(Cell):
    """Asynchronous AND: fires once when both inputs pulse within ``window``
    of each other. A lone pulse arms its side for ``window`` and then
    expires; arming is consumed when the cell fires."""

    inputs = ("a", "b")
    outputs = ("out",)

    def __init__(self, name: str, delay: int, window: int):
        super().__init__(name)
        self.delay = delay
        self.window = window
        self._armed: dict[str, int | None] = {"a": None, "b": None}

    def on_pulse(self, port: str, t: int) -> list[tuple[str, int]]:
        other = "b" if port == "a" else "a"
        armed_at = self._armed[other]
        if armed_at is not None and t - armed_at <= self.window:
            self._armed["a"] = None
            self._armed["b"] = None
            return [("out", t + self.delay)]
        self._armed[port] = t
        return []


class RtffState(enum.Enum):
    S1 = "S1"
    S2 = "S2"


def rtff_step(state: RtffState, signal: str) -> tuple[RtffState, int]:
    """One transition of the resettable toggle flip-flop.

    ``signal`` is ``"input"`` or ``"reset"``. Returns the next state and the
    number of pulses emitted (0 or 1). The ground state is S1; the second
    input pulse emits and returns to S1; reset forces S1 without emitting.
    """
    if signal == "reset":
        return RtffState.S1, 0
    if signal != "input":
        raise ValidationError(f"unknown toggle signal {signal!r}")
    if state is RtffState.S1:
        return RtffState.S2, 0
    return RtffState.S1, 1


class RtffCell(Cell):
    """Resettable toggle flip-flop: emits one pulse per two input pulses."""

    inputs = ("in", "rst")
    outputs = ("out",)

    def __init__(self, name: str, delay: int):
        super().__init__(name)
        self.delay = delay
        self.state = RtffState.S1

    def on_pulse(self, port: str, t: int) -> list[tuple[str, int]]:
        signal = "reset" if port == "rst" else "input"
        self.state, emitted = rtff_step(self.state, signal)
        if emitted:
            return [("out", t + self.delay)]
        return []


class MndroCell(Cell):
    """Multi-pulse non-destructive storage.

    Holds up to ``capacity`` pulses. Increment and decrement saturate at the
    bounds. A clock pulse re-emits the stored count as a burst spaced by
    ``interval`` without disturbing the stored value.
    """

    inputs = ("inc", "dec", "clk")
    outputs = ("out",)

    def __init__(self, name: str, delay: int, interval: int, capacity: int = 3):
        super().__init__(name)
        if capacity < 1:
            raise ValidationError(f"storage cell {name!r} needs capacity >= 1")
        self.delay = delay
        self.interval = interval
        self.capacity = capacity
        self.stored = 0

    def path_delays(self):
        return [("clk", "out", self.delay)]

    def on_pulse(self, port: str, t: int) -> list[tuple[str, int]]:
        signal = {"inc": "increment", "dec": "decrement", "clk": "clock"}[port]
        _, emitted = mndro_apply(self, signal)
        return [("out", t + self.delay + j * self.interval) for j in range(emitted)]


def mndro_apply(cell: MndroCell, signal: str) -> tuple[int, int]:
    """Apply one control signal to a storage cell.

    Returns (stored count after the signal, pulses emitted). Reads are
    non-destructive: a clock emits the stored count and leaves it unchanged.
    """
    if signal == "increment":
        cell.stored = min(cell.stored + 1, cell.capacity)
        return cell.stored, 0
    if signal == "decrement":
        cell.stored = max(cell.stored - 1, 0)
        return cell.stored, 0
    if signal == "clock":
        return cell.stored, cell.stored
    raise ValidationError(f"unknown storage signal {signal!r}")
