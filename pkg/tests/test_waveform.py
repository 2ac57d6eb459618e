"""Trace serialization: CSV rows and value-change output."""

import pytest

from sfqneuron import Trace, ValidationError, ps
from sfqneuron.scenario import load_scenario, run_scenario
from sfqneuron.waveform import (
    read_trace_csv,
    trace_to_csv,
    trace_to_vcd,
    write_trace_csv,
    write_waveform,
)


def test_empty_trace_is_header_only():
    assert trace_to_csv(Trace()) == "time_fs,wire\n"


def test_single_pulse_row():
    trace = Trace([(ps(10), "out")])
    assert trace_to_csv(trace) == "time_fs,wire\n10000,out\n"


def test_csv_round_trip(tmp_path):
    trace = Trace([(5, "a"), (5, "b"), (70, "a")])
    path = tmp_path / "t.csv"
    write_trace_csv(trace, path)
    assert read_trace_csv(path) == trace


def test_read_rejects_wrong_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("nope\n1,a\n")
    with pytest.raises(ValidationError):
        read_trace_csv(path)


def test_read_rejects_bad_rows(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("time_fs,wire\nxyz,a\n")
    with pytest.raises(ValidationError, match="bad trace row"):
        read_trace_csv(path)


def test_vcd_empty_trace_is_header_only():
    text = trace_to_vcd(Trace())
    assert "$timescale 1 fs $end" in text
    assert "#" not in text.split("$end\n")[-1]


def test_vcd_pulse_is_one_fs_wide():
    text = trace_to_vcd(Trace([(ps(10), "out")]))
    assert "$var wire 1 ! out $end" in text
    assert "#10000\n1!\n#10001\n0!\n" in text


def test_vcd_lists_all_wires_sorted():
    text = trace_to_vcd(Trace([(2, "beta"), (1, "alpha")]))
    header = text.split("$enddefinitions")[0]
    assert header.index("alpha") < header.index("beta")


def test_vcd_simultaneous_changes_share_timestep():
    text = trace_to_vcd(Trace([(7, "a"), (7, "b")]))
    assert text.count("#7\n") == 1


def test_golden_event_count_matches_export(tmp_path):
    scenario = load_scenario("th4-th3-th4")
    result = run_scenario(scenario)
    path = tmp_path / "w.csv"
    write_waveform(result.trace, path, "csv")
    rows = path.read_text().splitlines()
    golden_rows = scenario.golden_path.read_text().splitlines()
    assert len(rows) == len(golden_rows)


def test_unknown_waveform_format_rejected(tmp_path):
    with pytest.raises(ValidationError):
        write_waveform(Trace(), tmp_path / "x", "wav")
