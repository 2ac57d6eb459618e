"""Event kernel: ordering, resumability, validation, determinism."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sfqneuron import (
    DelayCell,
    DeliveryLimitError,
    MergerCell,
    Netlist,
    NeuronConfig,
    SchedulingError,
    Simulator,
    ValidationError,
    build_neuron,
    ps,
    validate,
)


def delay_chain(n_cells: int, delay_fs: int = ps(5)) -> Netlist:
    net = Netlist()
    net.add_input("in")
    net.add_output("out")
    prev = "in"
    for i in range(n_cells):
        nxt = "out" if i == n_cells - 1 else f"n{i}"
        net.add(DelayCell(f"d{i}", delay_fs), **{"in": prev, "out": nxt})
        prev = nxt
    return net


def test_schedule_base_case():
    sim = Simulator(delay_chain(1))
    sim.schedule("in", 0)
    assert sim.pending() == 1


def test_same_time_delivered_in_wire_order():
    net = Netlist()
    net.add_input("b")
    net.add_input("a")
    net.add_output("a")
    net.add_output("b")
    sim = Simulator(net)
    sim.schedule("b", 100)
    sim.schedule("a", 100)
    trace = sim.run_until(200)
    assert trace.events == [(100, "a"), (100, "b")]


def test_earlier_time_wins_regardless_of_insertion_order():
    net = Netlist()
    net.add_input("w")
    net.add_output("w")
    sim = Simulator(net)
    sim.schedule("w", 5)
    sim.schedule("w", 3)
    assert [t for t, _ in sim.run_until(10)] == [3, 5]


def test_schedule_in_past_rejected():
    sim = Simulator(delay_chain(1))
    sim.run_until(100)
    with pytest.raises(SchedulingError):
        sim.schedule("in", 50)


def test_schedule_unknown_wire_rejected():
    sim = Simulator(delay_chain(1))
    with pytest.raises(ValidationError):
        sim.schedule("nope", 0)


def test_empty_netlist_empty_trace():
    sim = Simulator(Netlist())
    assert len(sim.run_until(ps(1000))) == 0


def test_delay_cell_shifts_pulse():
    sim = Simulator(delay_chain(1, ps(5)))
    sim.schedule("in", ps(10))
    trace = sim.run_until(ps(20))
    assert trace.times("out") == [ps(15)]


def test_run_until_is_resumable():
    sim = Simulator(delay_chain(1, ps(5)))
    sim.schedule("in", ps(10))
    trace = sim.run_until(ps(12))
    assert trace.times("out") == []
    trace = sim.run_until(ps(20))
    assert trace.times("out") == [ps(15)]


def test_multi_driver_diagnostic_names_the_wire():
    net = Netlist()
    net.add_input("x")
    net.add(DelayCell("d1", ps(5)), **{"in": "x", "out": "y"})
    net.add(DelayCell("d2", ps(5)), **{"in": "x", "out": "y"})
    net.add_output("y")
    diags = validate(net)
    assert any(d.code == "multi-driver" and d.subject == "y" for d in diags)


def test_undriven_wire_diagnostic():
    net = Netlist()
    net.add(DelayCell("d1", ps(5)), **{"in": "ghost", "out": "y"})
    diags = validate(net)
    assert any(d.code == "undriven-wire" and d.subject == "ghost" for d in diags)


def test_zero_delay_self_loop_diagnostic():
    net = Netlist()
    net.add_input("in")
    net.add(MergerCell("m", delay=0, dead_time=ps(8)), a="loop", b="in", out="loop")
    diags = validate(net)
    assert any(d.code == "zero-delay-cycle" for d in diags)


def test_positive_delay_loop_is_not_flagged():
    net = Netlist()
    net.add_input("in")
    net.add(MergerCell("m", delay=ps(7), dead_time=ps(8)), a="loop", b="in", out="loop")
    assert validate(net) == []


def test_composed_neuron_netlist_validates_clean():
    neuron = build_neuron(NeuronConfig())
    assert validate(neuron.net) == []


def test_invalid_netlist_rejected_by_simulator():
    net = Netlist()
    net.add_output("never_driven")
    with pytest.raises(ValidationError):
        Simulator(net)


def test_event_storm_guard_trips():
    net = Netlist()
    net.add_input("kick")
    # Positive-delay feedback with a dead time shorter than the delay loops forever.
    net.add(MergerCell("m", delay=ps(20), dead_time=ps(8)), a="loop", b="kick", out="loop")
    sim = Simulator(net, delivery_cap=100)
    sim.schedule("kick", 0)
    with pytest.raises(DeliveryLimitError):
        sim.run_until(ps(1_000_000))


def test_duplicate_cell_names_rejected():
    net = Netlist()
    net.add_input("in")
    net.add(DelayCell("d", ps(5)), **{"in": "in", "out": "a"})
    with pytest.raises(ValidationError):
        net.add(DelayCell("d", ps(5)), **{"in": "a", "out": "b"})


def test_unbound_input_port_rejected():
    net = Netlist()
    with pytest.raises(ValidationError):
        net.add(DelayCell("d", ps(5)), out="a")


@settings(max_examples=50, deadline=None)
@given(
    times=st.lists(st.integers(min_value=0, max_value=ps(900)), min_size=0, max_size=20),
    depth=st.integers(min_value=1, max_value=5),
)
def test_delay_chain_conserves_pulse_count(times, depth):
    net = delay_chain(depth)
    sim = Simulator(net)
    for t in times:
        sim.schedule("in", t)
    trace = sim.run_until(ps(2000))
    assert trace.count("out") == len(times)
    delivered = [t for t, _ in trace]
    assert delivered == sorted(delivered)  # causality


@settings(max_examples=30, deadline=None)
@given(times=st.lists(st.integers(min_value=0, max_value=ps(400)), min_size=0, max_size=12))
def test_identical_runs_identical_traces(times):
    def run():
        sim = Simulator(delay_chain(3))
        for t in times:
            sim.schedule("in", t)
        return sim.run_until(ps(1000)).events

    assert run() == run()
