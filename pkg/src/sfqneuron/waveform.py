"""Trace serialization: CSV event lists and value-change (VCD) waveforms.

Both writers are deterministic: the same trace always produces the same
bytes, which is what golden-trace comparison relies on.
"""

from __future__ import annotations

import io
from pathlib import Path

from .kernel import Trace, ValidationError

CSV_HEADER = "time_fs,wire"


def trace_to_csv(trace: Trace) -> str:
    lines = [CSV_HEADER]
    lines.extend(f"{t},{wire}" for t, wire in trace)
    return "\n".join(lines) + "\n"


def write_trace_csv(trace: Trace, path: str | Path) -> None:
    Path(path).write_text(trace_to_csv(trace))


def read_trace_csv(path: str | Path) -> Trace:
    text = Path(path).read_text()
    lines = text.splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValidationError(f"{path}: not a trace file (missing {CSV_HEADER!r} header)")
    events = []
    for i, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        time_text, _, wire = line.partition(",")
        try:
            events.append((int(time_text), wire))
        except ValueError:
            raise ValidationError(f"{path}:{i}: bad trace row {line!r}") from None
    return Trace(events)


def _var_id(index: int) -> str:
    # Compact printable identifiers, as value-change files expect.
    symbols = "".join(chr(c) for c in range(33, 127))
    if index == 0:
        return symbols[0]
    out = []
    while index:
        index, digit = divmod(index, len(symbols))
        out.append(symbols[digit])
    return "".join(reversed(out))


def trace_to_vcd(trace: Trace, wires: list[str] | None = None) -> str:
    """Render pulses as 1 fs wide toggles, one variable per wire."""
    if wires is None:
        wires = sorted({wire for _, wire in trace})
    ids = {wire: _var_id(i) for i, wire in enumerate(wires)}

    out = io.StringIO()
    out.write("$timescale 1 fs $end\n")
    out.write("$scope module trace $end\n")
    for wire in wires:
        out.write(f"$var wire 1 {ids[wire]} {wire} $end\n")
    out.write("$upscope $end\n")
    out.write("$enddefinitions $end\n")
    out.write("$dumpvars\n")
    for wire in wires:
        out.write(f"0{ids[wire]}\n")
    out.write("$end\n")

    # Each pulse raises its wire for exactly one femtosecond.
    changes: dict[int, list[str]] = {}
    for t, wire in trace:
        if wire not in ids:
            continue
        changes.setdefault(t, []).append(f"1{ids[wire]}")
        changes.setdefault(t + 1, []).append(f"0{ids[wire]}")
    for t in sorted(changes):
        out.write(f"#{t}\n")
        for change in changes[t]:
            out.write(change + "\n")
    return out.getvalue()


def write_vcd(trace: Trace, path: str | Path, wires: list[str] | None = None) -> None:
    Path(path).write_text(trace_to_vcd(trace, wires))


def write_waveform(trace: Trace, path: str | Path, fmt: str) -> None:
    if fmt == "csv":
        write_trace_csv(trace, path)
    elif fmt == "vc":
        write_vcd(trace, path)
    else:
        raise ValidationError(f"unknown waveform format {fmt!r} (expected vc or csv)")
