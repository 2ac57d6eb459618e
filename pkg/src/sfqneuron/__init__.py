"""Pulse-level simulator for SFQ spiking neurons with adjustable thresholds."""

from .kernel import (
    DeliveryLimitError,
    Diagnostic,
    InvalidNetlistError,
    Netlist,
    SchedulingError,
    Simulator,
    TimingError,
    Trace,
    ValidationError,
    ps,
    validate,
)
from .cells import (
    CoincidenceAndCell,
    DelayCell,
    MergerCell,
    MndroCell,
    RtffCell,
    RtffState,
    SplitterCell,
    mndro_apply,
    rtff_step,
)
from .neuron import (
    Arbiter,
    CellTimings,
    CycleSchedule,
    Neuron,
    NeuronConfig,
    TauState,
    ThresholdUnit,
    adjusted_threshold,
    adjustment_latency,
    build_neuron,
    run_cycle,
    tau_transition,
)

__version__ = "0.1.0"
