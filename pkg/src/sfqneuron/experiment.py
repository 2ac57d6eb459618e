"""Network experiments: dataset generation, threshold search, reporting.

An experiment config names a synthetic dataset, a network (layers with
integer weights), and a list of per-layer threshold candidates. The run
evaluates every candidate, always including the all-max-threshold baseline,
and emits a deterministic JSON report.
"""

from __future__ import annotations

import json
from pathlib import Path

from .kernel import ValidationError, ps
from .neuron import NeuronConfig
from .network import (
    DatasetSpec,
    Layer,
    LayerConfig,
    Network,
    SynapseMatrix,
    evaluate,
    make_dataset,
    threshold_search,
)
from .scenario import SCHEMA_VERSION, _load_yaml, _timings_from


def load_experiment(ref: str | Path) -> dict:
    from .scenario import bundled_path

    path = Path(ref)
    if not path.exists() and not path.suffix:
        path = bundled_path(str(ref))
    data = _load_yaml(path)
    if data.get("schema") != SCHEMA_VERSION:
        raise ValidationError(f"{path}: schema must be {SCHEMA_VERSION}")
    for key in ("dataset", "network", "candidates"):
        if key not in data:
            raise ValidationError(f"{path}: missing {key!r} section")
    return data


def build_network(spec: dict, source: str = "experiment") -> Network:
    layers = []
    for i, entry in enumerate(spec.get("layers", [])):
        timings = _timings_from(entry.get("timings"), source)
        neuron = NeuronConfig(
            t_max=int(entry.get("t_max", 4)),
            tau_capacity=int(entry.get("tau_capacity", 3)),
            clock_period=ps(entry.get("clock_period_ps", 500)),
            timings=timings,
        )
        weights = entry.get("weights")
        if weights is None:
            raise ValidationError(f"{source}: layer {i} has no weights")
        synapses = SynapseMatrix([[int(w) for w in row] for row in weights])
        config = LayerConfig(
            neuron_count=synapses.n_post,
            neuron=neuron,
            group_wired=bool(entry.get("group_wired", True)),
        )
        layers.append(Layer(config, synapses))
    return Network(layers)


def dataset_from_spec(spec: dict) -> list[tuple[list[int], int]]:
    ds = DatasetSpec(
        seed=int(spec.get("seed", 0)),
        class_means=tuple(tuple(int(v) for v in mean) for mean in spec.get("classes", [])),
        samples_per_class=int(spec.get("samples_per_class", 1)),
        noise=int(spec.get("noise", 0)),
    )
    return make_dataset(ds)


def run_experiment(config: dict) -> dict:
    """Evaluate all threshold candidates and report the winner.

    The baseline (every layer at its hardware maximum) is always evaluated
    so the report can state whether the winning candidate strictly improves
    on it.
    """
    network = build_network(config["network"])
    dataset = dataset_from_spec(config["dataset"])
    candidates = [[int(t) for t in cand] for cand in config["candidates"]]

    outcome = threshold_search(network, dataset, candidates)

    baseline = [layer.config.neuron.t_max for layer in network.layers]
    if baseline in candidates:
        baseline_report = outcome.reports[candidates.index(baseline)]
    else:
        network.set_thresholds(baseline)
        baseline_report = evaluate(network, dataset)

    candidate_rows = []
    for cand, report in zip(candidates, outcome.reports):
        candidate_rows.append(
            {
                "thresholds": cand,
                "accuracy": report.accuracy,
                "fire_totals": report.fire_totals,
                "dead_neurons": [list(pair) for pair in report.dead],
                "always_fire": [list(pair) for pair in report.always_fire],
            }
        )

    return {
        "schema": 1,
        "dataset": {
            "seed": int(config["dataset"].get("seed", 0)),
            "classes": len(config["dataset"].get("classes", [])),
            "samples": len(dataset),
        },
        "baseline": {
            "thresholds": baseline,
            "accuracy": baseline_report.accuracy,
            "dead_neurons": [list(pair) for pair in baseline_report.dead],
        },
        "candidates": candidate_rows,
        "best": {
            "thresholds": outcome.best,
            "accuracy": outcome.best_accuracy,
            "improves_on_baseline": outcome.best_accuracy > baseline_report.accuracy,
        },
    }


def write_report(report: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(report, indent=2) + "\n")
