"""Cell library behavior against its contract tables."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sfqneuron import (
    CoincidenceAndCell,
    DelayCell,
    MergerCell,
    MndroCell,
    Netlist,
    RtffCell,
    RtffState,
    Simulator,
    SplitterCell,
    ValidationError,
    mndro_apply,
    ps,
    rtff_step,
)

S1, S2 = RtffState.S1, RtffState.S2


@pytest.mark.parametrize(
    "state,signal,expected",
    [
        (S1, "input", (S2, 0)),
        (S2, "input", (S1, 1)),
        (S2, "reset", (S1, 0)),
        (S1, "reset", (S1, 0)),
    ],
)
def test_rtff_step_table(state, signal, expected):
    assert rtff_step(state, signal) == expected


def test_rtff_step_rejects_unknown_signal():
    with pytest.raises(ValidationError):
        rtff_step(S1, "bogus")


@pytest.mark.parametrize("n", range(0, 65))
def test_rtff_divides_frequency_by_two(n):
    cell = RtffCell("t", ps(6))
    emitted = sum(len(cell.on_pulse("in", i * ps(20))) for i in range(n))
    assert emitted == n // 2


def test_rtff_reset_restarts_the_count():
    cell = RtffCell("t", ps(6))
    cell.on_pulse("in", 0)
    assert cell.state is S2
    cell.on_pulse("rst", ps(1))
    assert cell.state is S1
    # After reset two more pulses are needed before it emits again.
    assert cell.on_pulse("in", ps(2)) == []
    assert cell.on_pulse("in", ps(3)) == [("out", ps(3) + ps(6))]


@pytest.mark.parametrize(
    "stored,signal,expected",
    [
        (0, "decrement", (0, 0)),
        (2, "clock", (2, 2)),
        (3, "increment", (3, 0)),
        (0, "increment", (1, 0)),
        (3, "decrement", (2, 0)),
        (0, "clock", (0, 0)),
    ],
)
def test_mndro_apply_table(stored, signal, expected):
    cell = MndroCell("m", ps(13), ps(12), capacity=3)
    cell.stored = stored
    assert mndro_apply(cell, signal) == expected


@pytest.mark.parametrize("stored", range(0, 4))
@pytest.mark.parametrize("reads", range(1, 6))
def test_mndro_read_is_idempotent(stored, reads):
    cell = MndroCell("m", ps(13), ps(12), capacity=3)
    cell.stored = stored
    for _ in range(reads):
        assert mndro_apply(cell, "clock") == (stored, stored)
    assert cell.stored == stored


def test_mndro_burst_spacing():
    cell = MndroCell("m", ps(13), ps(12), capacity=3)
    cell.stored = 3
    pulses = cell.on_pulse("clk", ps(100))
    assert pulses == [
        ("out", ps(113)),
        ("out", ps(125)),
        ("out", ps(137)),
    ]


def test_merger_separated_pulses_pass_through():
    cell = MergerCell("m", delay=ps(7), dead_time=ps(10))
    assert cell.on_pulse("a", 0) == [("out", ps(7))]
    assert cell.on_pulse("b", ps(100)) == [("out", ps(107))]


def test_merger_coincident_pulses_merge_to_one():
    cell = MergerCell("m", delay=ps(7), dead_time=ps(10))
    assert len(cell.on_pulse("a", 0)) == 1
    assert cell.on_pulse("b", ps(2)) == []


def test_and_fires_on_coincidence():
    cell = CoincidenceAndCell("c", delay=ps(7), window=ps(10))
    assert cell.on_pulse("a", 0) == []
    assert cell.on_pulse("b", ps(3)) == [("out", ps(10))]


def test_and_arming_expires():
    cell = CoincidenceAndCell("c", delay=ps(7), window=ps(10))
    cell.on_pulse("a", 0)
    assert cell.on_pulse("b", ps(15)) == []  # too late, re-arms b instead
    assert cell.on_pulse("a", ps(20)) == [("out", ps(27))]


def test_and_arming_consumed_on_fire():
    cell = CoincidenceAndCell("c", delay=ps(7), window=ps(10))
    cell.on_pulse("a", 0)
    assert len(cell.on_pulse("b", ps(1))) == 1
    # The consumed pulse cannot pair a second time.
    assert cell.on_pulse("b", ps(2)) == []


def test_splitter_duplicates_every_pulse():
    cell = SplitterCell("s", ps(5))
    assert cell.on_pulse("in", ps(10)) == [("out0", ps(15)), ("out1", ps(15))]


def test_delay_cell_requires_positive_delay():
    with pytest.raises(ValidationError):
        DelayCell("d", 0)


def primed_cells():
    rtff = RtffCell("t", ps(6))
    rtff.on_pulse("in", 0)  # move to S2 so the next pulse emits
    gate = CoincidenceAndCell("c", ps(7), ps(8))
    gate.on_pulse("a", ps(40))  # arm one side so the next pulse fires
    store = MndroCell("m", ps(13), ps(12))
    store.stored = 2
    return [
        (DelayCell("d", ps(5)), "in"),
        (SplitterCell("s", ps(5)), "in"),
        (MergerCell("m", ps(7), ps(8)), "a"),
        (rtff, "in"),
        (gate, "b"),
        (store, "clk"),
    ]


@pytest.mark.parametrize("cell,port", primed_cells())
def test_outputs_strictly_after_inputs(cell, port):
    t = ps(42)
    emissions = cell.on_pulse(port, t)
    assert emissions
    for _, out_time in emissions:
        assert out_time > t


@settings(max_examples=200, deadline=None)
@given(
    t_a=st.integers(min_value=0, max_value=ps(60)),
    t_b=st.integers(min_value=0, max_value=ps(60)),
)
def test_merger_and_gate_complementarity(t_a, t_b):
    # One pulse per port with the gate window equal to the merge dead time:
    # between them, nothing is lost and nothing is double counted.
    window = ps(8)
    net = Netlist()
    net.add_input("a")
    net.add_input("b")
    net.add_output("m_out")
    net.add_output("g_out")
    net.add(MergerCell("m", ps(7), window), a="a", b="b", out="m_out")
    net.add(CoincidenceAndCell("g", ps(7), window), a="a", b="b", out="g_out")
    sim = Simulator(net)
    sim.schedule("a", t_a)
    sim.schedule("b", t_b)
    trace = sim.run_until(ps(500))
    assert trace.count("m_out") + trace.count("g_out") == 2
