"""Layers of neurons with integer-weighted pulse fan-in.

Weights are non-negative integers realized as pulse replication: a
presynaptic spike worth ``x`` events contributes ``w * x`` pulses to the
postsynaptic input window. The layer runner serializes each neuron's
contributions into evenly spaced slots so the merge stays lossless, then
runs every neuron as an independent pulse-level simulation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from random import Random

from .kernel import TimingError, ValidationError
from .neuron import CycleSchedule, NeuronConfig, build_neuron, evenly_spaced


@dataclass
class SynapseMatrix:
    """Post-major integer weights: ``weights[post][pre]``."""

    weights: list[list[int]]

    def __post_init__(self) -> None:
        if not self.weights:
            raise ValidationError("synapse matrix cannot be empty")
        width = len(self.weights[0])
        for row in self.weights:
            if len(row) != width:
                raise ValidationError("synapse matrix rows must have equal length")
            for w in row:
                if not isinstance(w, int) or w < 0:
                    raise ValidationError(f"weights must be non-negative integers, got {w!r}")

    @property
    def n_post(self) -> int:
        return len(self.weights)

    @property
    def n_pre(self) -> int:
        return len(self.weights[0])

    def drive(self, post: int, x: list[int]) -> int:
        return sum(w * v for w, v in zip(self.weights[post], x))


@dataclass
class LayerConfig:
    neuron_count: int
    neuron: NeuronConfig = field(default_factory=NeuronConfig)
    #: Group-wired layers share the increment/decrement pins, so a threshold
    #: change always applies to every member identically.
    group_wired: bool = True

    def __post_init__(self) -> None:
        if self.neuron_count < 1:
            raise ValidationError("a layer needs at least one neuron")


@dataclass
class LayerResult:
    counts: list[int]
    fired: list[bool]


class Layer:
    """One layer: shared neuron configuration, weights, per-neuron loads."""

    def __init__(self, config: LayerConfig, synapses: SynapseMatrix):
        if synapses.n_post != config.neuron_count:
            raise ValidationError(
                f"synapse matrix has {synapses.n_post} rows for {config.neuron_count} neurons"
            )
        self.config = config
        self.synapses = synapses
        self.loads = [0] * config.neuron_count

    @property
    def thresholds(self) -> list[int]:
        return [self.config.neuron.t_max - load for load in self.loads]

    def set_threshold(self, threshold: int) -> None:
        """Jump the whole layer to an absolute reachable threshold."""
        load = self.config.neuron.t_max - threshold
        if load < 0 or load > self.config.neuron.max_load():
            raise ValidationError(
                f"threshold {threshold} is outside the reachable set "
                f"{self.config.neuron.reachable_thresholds()}"
            )
        self.loads = [load] * self.config.neuron_count

    def forward(self, x: list[int]) -> LayerResult:
        return layer_forward(self, x)


def encode_input(
    x: list[int],
    window: tuple[int, int],
    min_spacing: int,
) -> list[list[int]]:
    """Turn integer event counts into per-line pulse times.

    Value ``v`` on line ``k`` becomes ``v`` pulses evenly spaced across the
    window. The total across lines must also fit the window at the minimum
    spacing, since the lines eventually merge into one neuron port.
    """
    for k, v in enumerate(x):
        if not isinstance(v, int) or v < 0:
            raise ValidationError(f"input value on line {k} must be a non-negative integer")
    start, end = window
    total = sum(x)
    if total > 1 and (end - start) // total < min_spacing:
        raise TimingError(
            f"rate overflow: {total} pulses do not fit the {end - start} fs window "
            f"at {min_spacing} fs spacing"
        )
    return [evenly_spaced(v, start, end, min_spacing) for v in x]


def input_window(config: NeuronConfig) -> tuple[int, int]:
    sched = CycleSchedule.for_config(config)
    return sched.input_start, sched.input_end


def layer_forward(layer: Layer, x: list[int]) -> LayerResult:
    """Pulse-level forward pass of one layer for one sample.

    Each neuron runs in its own fresh simulator: its load is re-established
    through increment pulses, the reload clock fires, and the weighted input
    pulses arrive in the input window. Returns raw output pulse counts and
    the fired indicator per neuron.
    """
    if len(x) != layer.synapses.n_pre:
        raise ValidationError(
            f"sample has {len(x)} values for fan-in {layer.synapses.n_pre}"
        )
    counts: list[int] = []
    for j in range(layer.config.neuron_count):
        neuron = build_neuron(layer.config.neuron)
        drive = layer.synapses.drive(j, x)
        counts.append(neuron.run_cycle(drive, adjust=layer.loads[j]))
    return LayerResult(counts=counts, fired=[c >= 1 for c in counts])


def adjust_layer_threshold(layer: Layer, delta: int) -> None:
    """Shift every member's threshold by ``-delta``.

    Positive ``delta`` issues increment pulses on the shared pins (a larger
    load lowers the threshold); negative issues decrements. The request is
    validated against the reachable set for every member before any load
    changes, so an out-of-range request leaves the layer untouched.
    """
    if delta == 0:
        return
    max_load = layer.config.neuron.max_load()
    new_loads = [load + delta for load in layer.loads]
    for j, load in enumerate(new_loads):
        if load < 0 or load > max_load:
            raise ValidationError(
                f"neuron {j}: load {load} outside 0..{max_load} "
                f"(threshold {layer.config.neuron.t_max - load} unreachable)"
            )
    layer.loads = new_loads


class Network:
    """Feed-forward stack of layers on a shared cycle clock.

    A layer's output pulse counts are re-encoded as the next layer's input
    event counts.
    """

    def __init__(self, layers: list[Layer]):
        if not layers:
            raise ValidationError("a network needs at least one layer")
        for up, down in zip(layers, layers[1:]):
            if down.synapses.n_pre != up.config.neuron_count:
                raise ValidationError(
                    f"layer fan-in {down.synapses.n_pre} does not match "
                    f"{up.config.neuron_count} upstream neurons"
                )
        self.layers = layers

    def forward(self, x: list[int]) -> list[LayerResult]:
        results = []
        current = x
        for layer in self.layers:
            result = layer.forward(current)
            results.append(result)
            current = result.counts
        return results

    def predict(self, x: list[int]) -> int:
        counts = self.forward(x)[-1].counts
        return counts.index(max(counts))

    def thresholds(self) -> list[list[int]]:
        return [layer.thresholds for layer in self.layers]

    def set_thresholds(self, per_layer: list[int]) -> None:
        if len(per_layer) != len(self.layers):
            raise ValidationError(
                f"candidate has {len(per_layer)} thresholds for {len(self.layers)} layers"
            )
        for layer, threshold in zip(self.layers, per_layer):
            layer.set_threshold(threshold)


@dataclass
class NetworkRunReport:
    """Outcome of evaluating one threshold assignment on a labeled set."""

    thresholds: list[int]
    accuracy: float
    fire_totals: list[list[int]]
    dead: list[tuple[int, int]]
    always_fire: list[tuple[int, int]]


def evaluate(network: Network, dataset: list[tuple[list[int], int]]) -> NetworkRunReport:
    if not dataset:
        raise ValidationError("dataset is empty")
    totals = [[0] * layer.config.neuron_count for layer in network.layers]
    fired_every = [[True] * layer.config.neuron_count for layer in network.layers]
    correct = 0
    for x, label in dataset:
        results = network.forward(x)
        for li, result in enumerate(results):
            for j, count in enumerate(result.counts):
                totals[li][j] += count
                if count == 0:
                    fired_every[li][j] = False
        prediction = results[-1].counts.index(max(results[-1].counts))
        if prediction == label:
            correct += 1
    dead = [
        (li, j)
        for li, row in enumerate(totals)
        for j, total in enumerate(row)
        if total == 0
    ]
    always = [
        (li, j)
        for li, row in enumerate(fired_every)
        for j, flag in enumerate(row)
        if flag
    ]
    return NetworkRunReport(
        thresholds=[t[0] for t in network.thresholds()],
        accuracy=correct / len(dataset),
        fire_totals=totals,
        dead=dead,
        always_fire=always,
    )


@dataclass
class SearchOutcome:
    best: list[int]
    best_accuracy: float
    reports: list[NetworkRunReport]


def threshold_search(
    network: Network,
    dataset: list[tuple[list[int], int]],
    candidates: list[list[int]],
) -> SearchOutcome:
    """Evaluate each per-layer threshold vector; first best wins ties."""
    if not candidates:
        raise ValidationError("candidate list is empty")
    reports = []
    best_idx = 0
    for i, candidate in enumerate(candidates):
        network.set_thresholds(candidate)
        report = evaluate(network, dataset)
        reports.append(report)
        if report.accuracy > reports[best_idx].accuracy:
            best_idx = i
    return SearchOutcome(
        best=list(candidates[best_idx]),
        best_accuracy=reports[best_idx].accuracy,
        reports=reports,
    )


@dataclass(frozen=True)
class DatasetSpec:
    """Synthetic labeled set: one integer rate vector per class plus noise."""

    seed: int
    class_means: tuple[tuple[int, ...], ...]
    samples_per_class: int
    noise: int = 0

    def __post_init__(self) -> None:
        if not self.class_means:
            raise ValidationError("dataset needs at least one class")
        width = len(self.class_means[0])
        for mean in self.class_means:
            if len(mean) != width:
                raise ValidationError("class mean vectors must have equal length")
        if self.samples_per_class < 1:
            raise ValidationError("samples_per_class must be >= 1")
        if self.noise < 0:
            raise ValidationError("noise must be >= 0")


def make_dataset(spec: DatasetSpec) -> list[tuple[list[int], int]]:
    """Deterministic labeled samples: mean vector plus bounded integer noise."""
    rng = Random(spec.seed)
    samples: list[tuple[list[int], int]] = []
    for label, mean in enumerate(spec.class_means):
        for _ in range(spec.samples_per_class):
            x = [max(0, v + rng.randint(-spec.noise, spec.noise)) for v in mean]
            samples.append((x, label))
    return samples
